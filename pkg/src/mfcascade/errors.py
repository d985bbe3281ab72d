"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Argument lies outside the admissible domain of a cumulant function."""


class SupportError(ValueError):
    """Point lies outside the support of a Levy density."""


class UnsupportedParameter(ValueError):
    """No sampler variant applies to this parameter combination."""


class EmbeddingError(RuntimeError):
    """Circulant spectrum too negative; covariance not embeddable at this grid."""


class DegenerateData(RuntimeError):
    """Estimator input collapsed (e.g. all-zero box masses at some level)."""


class ConfigError(ValueError):
    """Invalid or unknown configuration key/value."""


class TruncationWarning(UserWarning):
    """Small-jump truncation discards a non-negligible share of variance."""
