"""Distribution registry for the seven marginal families.

Each family knows its cumulant function ``psi(zeta) = ln E exp(zeta*X(0))``
with its admissible open domain, the normalizer ``c_x = psi(1)`` that makes
the geometric process ``exp(X - c_x)`` have unit mean, low-order moments, the
Levy density of ``X(0)``, the Levy density of the background driving process
at unit time (with the rate factor taken out), and a stationary sampler.

All operations are pure functions of an immutable spec; samplers take an
explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import singledispatch
from typing import Callable, Union

import numpy as np
from scipy import integrate, special

from .errors import DomainError, SupportError, UnsupportedParameter

__all__ = [
    "Gaussian", "Gamma", "TemperedStable", "NormalTemperedStable",
    "VarianceGamma", "EulerGamma", "GeneralizedZ", "MarginalSpec",
    "LevyTriplet", "psi", "psi_domain", "c_x", "moment_q", "mean_var",
    "levy_density_x", "bdlp_density", "levy_support", "levy_triplet",
    "sample_marginal",
]

_TWO_PI = 2.0 * math.pi


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


# ---------------------------------------------------------------------------
# Family specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gaussian:
    """Centered Gaussian with variance ``sigma2`` (no jump part)."""
    sigma2: float

    def __post_init__(self):
        _require(self.sigma2 > 0, "Gaussian requires sigma2 > 0")


@dataclass(frozen=True)
class Gamma:
    """Gamma law with rate ``alpha`` and shape ``beta``."""
    alpha: float
    beta: float

    def __post_init__(self):
        _require(self.alpha > 0, "Gamma requires rate alpha > 0")
        _require(self.beta > 0, "Gamma requires shape beta > 0")


@dataclass(frozen=True)
class TemperedStable:
    """Exponentially tilted positive stable law TS(kappa, delta, gamma)."""
    kappa: float
    delta: float
    gamma: float

    def __post_init__(self):
        _require(0 < self.kappa < 1, "TemperedStable requires kappa in (0,1)")
        _require(self.delta > 0, "TemperedStable requires delta > 0")
        _require(self.gamma > 0, "TemperedStable requires gamma > 0")


@dataclass(frozen=True)
class NormalTemperedStable:
    """Normal variance-mean mixture over a TemperedStable subordinand."""
    kappa: float
    gamma: float
    beta: float
    mu: float
    delta: float

    def __post_init__(self):
        _require(0 < self.kappa < 1, "NormalTemperedStable requires kappa in (0,1)")
        _require(self.gamma > 0, "NormalTemperedStable requires gamma > 0")
        _require(self.beta >= 0, "NormalTemperedStable requires beta >= 0")
        _require(self.delta > 0, "NormalTemperedStable requires delta > 0")


@dataclass(frozen=True)
class VarianceGamma:
    """Difference-of-gammas law VG(kappa, alpha, beta, mu)."""
    kappa: float
    alpha: float
    beta: float
    mu: float

    def __post_init__(self):
        _require(self.kappa > 0, "VarianceGamma requires kappa > 0")
        _require(self.alpha > 0, "VarianceGamma requires alpha > 0")
        _require(abs(self.beta) < self.alpha,
                 "VarianceGamma requires |beta| < alpha")


@dataclass(frozen=True)
class EulerGamma:
    """Law of ``gamma_s * log(Y)`` powers, Y ~ Gamma(beta, alpha)."""
    gamma_s: float
    alpha: float
    beta: float
    delta: float

    def __post_init__(self):
        _require(self.gamma_s != 0, "EulerGamma requires gamma_s != 0")
        _require(self.alpha > 0, "EulerGamma requires alpha > 0")
        _require(self.beta > 0, "EulerGamma requires beta > 0")
        _require(self.delta > 0, "EulerGamma requires delta > 0")


@dataclass(frozen=True)
class GeneralizedZ:
    """Generalized z law (logistic-type, log Beta-ratio powers)."""
    alpha: float
    beta1: float
    beta2: float
    delta: float
    mu: float

    def __post_init__(self):
        _require(self.alpha > 0, "GeneralizedZ requires alpha > 0")
        _require(self.beta1 > 0, "GeneralizedZ requires beta1 > 0")
        _require(self.beta2 > 0, "GeneralizedZ requires beta2 > 0")
        _require(self.delta > 0, "GeneralizedZ requires delta > 0")


MarginalSpec = Union[Gaussian, Gamma, TemperedStable, NormalTemperedStable,
                     VarianceGamma, EulerGamma, GeneralizedZ]


@dataclass(frozen=True)
class LevyTriplet:
    """Levy-Khintchine triplet (drift, gaussian_var, jump density)."""
    drift: float
    gaussian_var: float
    levy_density: Callable[[float], float]
    support: str  # 'positive' | 'negative' | 'real' | 'none'


# ---------------------------------------------------------------------------
# Cumulant function psi and its domain
# ---------------------------------------------------------------------------

def psi_domain(spec: MarginalSpec) -> tuple[float, float]:
    """Open interval of zeta for which ``psi(spec, zeta)`` is finite."""
    if isinstance(spec, Gaussian):
        return (-math.inf, math.inf)
    if isinstance(spec, Gamma):
        return (-math.inf, spec.alpha)
    if isinstance(spec, TemperedStable):
        return (-math.inf, spec.gamma ** (1.0 / spec.kappa) / 2.0)
    if isinstance(spec, NormalTemperedStable):
        a_bar = math.sqrt(spec.beta ** 2 + spec.gamma ** (1.0 / spec.kappa))
        return (-a_bar - spec.beta, a_bar - spec.beta)
    if isinstance(spec, VarianceGamma):
        return (-spec.alpha - spec.beta, spec.alpha - spec.beta)
    if isinstance(spec, EulerGamma):
        edge = -spec.beta / spec.gamma_s
        return (-math.inf, edge) if spec.gamma_s < 0 else (edge, math.inf)
    if isinstance(spec, GeneralizedZ):
        return (-_TWO_PI * spec.beta1 / spec.alpha,
                _TWO_PI * spec.beta2 / spec.alpha)
    raise TypeError(f"unknown marginal spec {type(spec)!r}")


def _check_domain(spec: MarginalSpec, zeta) -> np.ndarray:
    z = np.asarray(zeta, dtype=float)
    lo, hi = psi_domain(spec)
    if np.any(z <= lo) or np.any(z >= hi):
        raise DomainError(
            f"zeta={zeta} outside psi domain ({lo}, {hi}) of {spec}")
    return z


@singledispatch
def psi(spec: MarginalSpec, zeta):
    """Log moment generating function ``ln E exp(zeta * X(0))``.

    Exact closed form per family; raises :class:`DomainError` outside the
    open admissible interval.  Accepts scalars or arrays.
    """
    raise TypeError(f"unknown marginal spec {type(spec)!r}")


def _as_input(z, out):
    return float(out) if np.isscalar(z) or np.ndim(z) == 0 else out


@psi.register
def _(spec: Gaussian, zeta):
    z = _check_domain(spec, zeta)
    return _as_input(zeta, 0.5 * spec.sigma2 * z * z)


@psi.register
def _(spec: Gamma, zeta):
    z = _check_domain(spec, zeta)
    return _as_input(zeta, -spec.beta * np.log1p(-z / spec.alpha))


@psi.register
def _(spec: TemperedStable, zeta):
    z = _check_domain(spec, zeta)
    g1k = spec.gamma ** (1.0 / spec.kappa)
    # delta*gamma*(1 - (1 - 2 zeta/gamma^(1/kappa))^kappa), exact 0 at 0
    val = -spec.delta * spec.gamma * np.expm1(
        spec.kappa * np.log1p(-2.0 * z / g1k))
    return _as_input(zeta, val)


@psi.register
def _(spec: NormalTemperedStable, zeta):
    z = _check_domain(spec, zeta)
    g1k = spec.gamma ** (1.0 / spec.kappa)
    a2 = spec.beta ** 2 + g1k
    val = spec.mu * z - spec.delta * spec.gamma * np.expm1(
        spec.kappa * np.log((a2 - (spec.beta + z) ** 2) / g1k))
    return _as_input(zeta, val)


@psi.register
def _(spec: VarianceGamma, zeta):
    z = _check_domain(spec, zeta)
    gamma2 = spec.alpha ** 2 - spec.beta ** 2
    val = spec.mu * z - spec.kappa * np.log(
        (spec.alpha ** 2 - (spec.beta + z) ** 2) / gamma2)
    return _as_input(zeta, val)


@psi.register
def _(spec: EulerGamma, zeta):
    z = _check_domain(spec, zeta)
    val = spec.delta * (special.gammaln(spec.beta + spec.gamma_s * z)
                        - special.gammaln(spec.beta)
                        - spec.gamma_s * z * math.log(spec.alpha))
    return _as_input(zeta, val)


@psi.register
def _(spec: GeneralizedZ, zeta):
    # Beta-ratio form: 2*delta*[lnG(b1+s) + lnG(b2-s) - lnG(b1) - lnG(b2)],
    # consistent with the characteristic function (the b1+b2 argument of the
    # Beta normalizer is invariant in s and cancels).
    z = _check_domain(spec, zeta)
    s = spec.alpha * z / _TWO_PI
    val = 2.0 * spec.delta * (special.gammaln(spec.beta1 + s)
                              + special.gammaln(spec.beta2 - s)
                              - special.gammaln(spec.beta1)
                              - special.gammaln(spec.beta2)) + spec.mu * z
    return _as_input(zeta, val)


def c_x(spec: MarginalSpec) -> float:
    """Normalizer ``psi(1)`` so that ``E exp(X - c_x) = 1``."""
    lo, hi = psi_domain(spec)
    if not lo < 1.0 < hi:
        raise DomainError(
            f"c_x undefined: 1 outside psi domain ({lo}, {hi}) of {spec}")
    return float(psi(spec, 1.0))


def moment_q(spec: MarginalSpec, q) -> float:
    """q-th moment of the unit-mean geometric variable exp(X - c_x)."""
    return np.exp(psi(spec, q) - np.asarray(q, dtype=float) * psi(spec, 1.0))


# ---------------------------------------------------------------------------
# Mean and variance of X(0)
# ---------------------------------------------------------------------------

def mean_var(spec: MarginalSpec) -> tuple[float, float]:
    """Mean and variance of the stationary marginal X(0).

    Closed forms where the family provides them; the log-gamma-power and
    generalized-z families use adaptive quadrature of their integral moment
    formulas (absolute tolerance 1e-10).
    """
    if isinstance(spec, Gaussian):
        return 0.0, spec.sigma2
    if isinstance(spec, Gamma):
        return spec.beta / spec.alpha, spec.beta / spec.alpha ** 2
    if isinstance(spec, TemperedStable):
        k, d, g = spec.kappa, spec.delta, spec.gamma
        return (2.0 * k * d * g ** ((k - 1.0) / k),
                4.0 * k * (1.0 - k) * d * g ** ((k - 2.0) / k))
    if isinstance(spec, NormalTemperedStable):
        k, g, b, d = spec.kappa, spec.gamma, spec.beta, spec.delta
        mean = spec.mu + 2.0 * k * b * d * g ** ((k - 1.0) / k)
        var = (2.0 * k * d * g ** ((k - 1.0) / k)
               + 4.0 * k * (1.0 - k) * b ** 2 * d * g ** ((k - 2.0) / k))
        return mean, var
    if isinstance(spec, VarianceGamma):
        gamma2 = spec.alpha ** 2 - spec.beta ** 2
        mean = spec.mu + 2.0 * spec.beta * spec.kappa / gamma2
        var = (2.0 * spec.kappa / gamma2) * (1.0 + 2.0 * spec.beta ** 2 / gamma2)
        return mean, var
    if isinstance(spec, EulerGamma):
        g, d, b = spec.gamma_s, spec.delta, spec.beta
        dig = integrate.quad(
            lambda x: math.exp(-x) / x - math.exp(-b * x) / (1.0 - math.exp(-x)),
            0.0, np.inf, epsabs=1e-10, limit=200)[0]
        trig = integrate.quad(
            lambda x: x * math.exp(-b * x) / (1.0 - math.exp(-x)),
            0.0, np.inf, epsabs=1e-10, limit=200)[0]
        return g * d * (dig - math.log(spec.alpha)), d * g ** 2 * trig
    if isinstance(spec, GeneralizedZ):
        a, b1, b2, d = spec.alpha, spec.beta1, spec.beta2, spec.delta
        mdiff = integrate.quad(
            lambda x: (math.exp(-b2 * x) - math.exp(-b1 * x)) / (1.0 - math.exp(-x)),
            0.0, np.inf, epsabs=1e-10, limit=200)[0]
        vint = integrate.quad(
            lambda x: x * (math.exp(-b2 * x) + math.exp(-b1 * x)) / (1.0 - math.exp(-x)),
            0.0, np.inf, epsabs=1e-10, limit=200)[0]
        return (a * d / math.pi * mdiff + spec.mu,
                2.0 * a ** 2 * d / _TWO_PI ** 2 * vint)
    raise TypeError(f"unknown marginal spec {type(spec)!r}")


# ---------------------------------------------------------------------------
# Levy densities of X(0) and of the BDLP at unit time
# ---------------------------------------------------------------------------

def levy_support(spec: MarginalSpec) -> str:
    """Support of the jump measure: 'positive', 'negative', 'real', 'none'."""
    if isinstance(spec, Gaussian):
        return "none"
    if isinstance(spec, (Gamma, TemperedStable)):
        return "positive"
    if isinstance(spec, EulerGamma):
        return "positive" if spec.gamma_s < 0 else "negative"
    return "real"


def _check_support(spec: MarginalSpec, u) -> np.ndarray:
    uu = np.asarray(u, dtype=float)
    if np.any(uu == 0.0):
        raise SupportError("Levy densities are defined for u != 0")
    side = levy_support(spec)
    if side == "positive" and np.any(uu < 0):
        raise SupportError(f"{type(spec).__name__} jumps are positive only")
    if side == "negative" and np.any(uu > 0):
        raise SupportError(f"{type(spec).__name__} jumps are negative only")
    return uu


def levy_density_x(spec: MarginalSpec, u):
    """Density of the Levy measure of X(0) at u (0 for the Gaussian)."""
    if isinstance(spec, Gaussian):
        return 0.0 if np.isscalar(u) else np.zeros_like(np.asarray(u, float))
    uu = _check_support(spec, u)
    if isinstance(spec, Gamma):
        val = spec.beta * np.exp(-spec.alpha * uu) / uu
    elif isinstance(spec, TemperedStable):
        k, d = spec.kappa, spec.delta
        g1k = spec.gamma ** (1.0 / k)
        val = (2.0 ** k * d * k / special.gamma(1.0 - k)
               * uu ** (-1.0 - k) * np.exp(-uu * g1k / 2.0))
    elif isinstance(spec, NormalTemperedStable):
        k, d, b = spec.kappa, spec.delta, spec.beta
        a_bar = math.sqrt(b ** 2 + spec.gamma ** (1.0 / k))
        nu = k + 0.5
        cb = (d / math.sqrt(_TWO_PI) * a_bar ** nu
              * k * 2.0 ** (k + 1.0) / special.gamma(1.0 - k))
        au = np.abs(uu)
        # scaled Bessel keeps the product finite in the far tails
        val = cb * au ** (-nu) * special.kve(nu, a_bar * au) \
            * np.exp(b * uu - a_bar * au)
    elif isinstance(spec, VarianceGamma):
        val = (spec.kappa / np.abs(uu)
               * np.exp(spec.beta * uu - spec.alpha * np.abs(uu)))
    elif isinstance(spec, EulerGamma):
        g, b, d = spec.gamma_s, spec.beta, spec.delta
        val = d * np.exp(b / g * uu) / (np.abs(uu) * (1.0 - np.exp(uu / g)))
    elif isinstance(spec, GeneralizedZ):
        c = _TWO_PI / spec.alpha
        bside = np.where(uu > 0, spec.beta2, spec.beta1)
        au = np.abs(uu)
        val = (2.0 * spec.delta * np.exp(-c * bside * au)
               / (au * (1.0 - np.exp(-c * au))))
    else:
        raise TypeError(f"unknown marginal spec {type(spec)!r}")
    return _as_input(u, val)


def bdlp_density(spec: MarginalSpec, u):
    """Levy density of the driving process at unit time, rate factored out.

    Closed form of ``-p(u) - u p'(u)`` where p is :func:`levy_density_x`.
    """
    if isinstance(spec, Gaussian):
        return 0.0 if np.isscalar(u) else np.zeros_like(np.asarray(u, float))
    uu = _check_support(spec, u)
    if isinstance(spec, Gamma):
        val = spec.alpha * spec.beta * np.exp(-spec.alpha * uu)
    elif isinstance(spec, TemperedStable):
        k, d = spec.kappa, spec.delta
        g1k = spec.gamma ** (1.0 / k)
        val = (2.0 ** k * d * k / special.gamma(1.0 - k)
               * (k / uu + g1k / 2.0) * uu ** (-k) * np.exp(-uu * g1k / 2.0))
    elif isinstance(spec, NormalTemperedStable):
        k, d, b = spec.kappa, spec.delta, spec.beta
        a_bar = math.sqrt(b ** 2 + spec.gamma ** (1.0 / k))
        nu = k + 0.5
        cb = (d / math.sqrt(_TWO_PI) * a_bar ** nu
              * k * 2.0 ** (k + 1.0) / special.gamma(1.0 - k))
        au = np.abs(uu)
        knu = special.kve(nu, a_bar * au)
        val = cb * np.exp(b * uu - a_bar * au) * au ** (-nu) * (
            2.0 * k * knu + a_bar * au * special.kve(nu - 1.0, a_bar * au)
            - b * uu * knu)
    elif isinstance(spec, VarianceGamma):
        val = (spec.kappa * (spec.alpha - spec.beta * np.sign(uu))
               * np.exp(spec.beta * uu - spec.alpha * np.abs(uu)))
    elif isinstance(spec, EulerGamma):
        g, b, d = spec.gamma_s, spec.beta, spec.delta
        e = np.exp(uu / g)
        val = (d * b / abs(g) * np.exp(b / g * uu)
               * (1.0 - e + e / b) / (1.0 - e) ** 2)
    elif isinstance(spec, GeneralizedZ):
        a, d = spec.alpha, spec.delta
        c = _TWO_PI / a
        pos = uu > 0
        e = np.exp(-c * np.abs(uu))
        bside = np.where(pos, spec.beta2, spec.beta1)
        val = (2.0 * d * c * np.exp(-c * bside * np.abs(uu))
               * (bside * (1.0 - e) + e) / (1.0 - e) ** 2)
    else:
        raise TypeError(f"unknown marginal spec {type(spec)!r}")
    return _as_input(u, val)


def levy_triplet(spec: MarginalSpec) -> LevyTriplet:
    """Levy-Khintchine triplet of X(0) with the [-1,1]-compensated drift."""
    side = levy_support(spec)
    if isinstance(spec, Gaussian):
        return LevyTriplet(0.0, spec.sigma2, lambda u: 0.0, side)
    mean = mean_var(spec)[0]
    # drift a = mean - integral of u over the jumps beyond [-1, 1]
    tail = 0.0
    if side in ("positive", "real"):
        tail += integrate.quad(lambda x: x * levy_density_x(spec, x),
                               1.0, np.inf, epsabs=1e-10, limit=200)[0]
    if side in ("negative", "real"):
        tail += integrate.quad(lambda x: x * levy_density_x(spec, x),
                               -np.inf, -1.0, epsabs=1e-10, limit=200)[0]
    return LevyTriplet(mean - tail, 0.0,
                       lambda u: levy_density_x(spec, u), side)


# ---------------------------------------------------------------------------
# Stationary samplers
# ---------------------------------------------------------------------------

# Predicted acceptance below this aborts instead of looping forever.
_MIN_ACCEPTANCE = 1e-3
# Series fallback: explicit gamma terms, then a Gaussian tail surrogate.
_LOGGAMMA_SERIES_TERMS = 512


def _sample_positive_stable(kappa: float, rng: np.random.Generator, n: int):
    """Positive stable draws with Laplace transform exp(-theta^kappa).

    Kanter's representation: S = (A(U)/E)^((1-kappa)/kappa) with U uniform
    on (0, pi) and E unit exponential.
    """
    u = rng.uniform(0.0, math.pi, size=n)
    e = rng.standard_exponential(n)
    a = (np.sin(kappa * u) ** (kappa / (1.0 - kappa))
         * np.sin((1.0 - kappa) * u)
         / np.sin(u) ** (1.0 / (1.0 - kappa)))
    return (a / e) ** ((1.0 - kappa) / kappa)


def _sample_tempered_stable(spec: TemperedStable, rng: np.random.Generator,
                            n: int) -> np.ndarray:
    k, d, g = spec.kappa, spec.delta, spec.gamma
    if k == 0.5:
        # inverse Gaussian: mean delta/gamma, shape delta^2, exact
        return rng.wald(d / g, d * d, size=n)
    rate = math.exp(-d * g)
    if rate < _MIN_ACCEPTANCE:
        raise UnsupportedParameter(
            f"tilted-stable rejection acceptance exp(-delta*gamma)={rate:.2e}"
            f" below {_MIN_ACCEPTANCE}; delta*gamma too large")
    g1k = g ** (1.0 / k)
    scale = 2.0 * d ** (1.0 / k)
    out = np.empty(n)
    filled = 0
    while filled < n:
        want = n - filled
        batch = max(64, int(1.2 * want / rate))
        s = scale * _sample_positive_stable(k, rng, batch)
        keep = s[rng.random(batch) < np.exp(-s * g1k / 2.0)]
        take = min(want, keep.size)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def _sample_loggamma_power(beta: float, shape: float,
                           rng: np.random.Generator, n: int) -> np.ndarray:
    """Draws of W with ln E exp(sW) = shape*(lnGamma(beta+s) - lnGamma(beta)).

    For integer ``shape`` this is an exact sum of log-gamma draws.  Otherwise
    it uses the series of centered negative-gamma terms
    ``W = shape*digamma(beta) + sum_k (shape - G_k)/(beta + k)`` truncated
    after a fixed number of terms, with the (near-Gaussian) remainder
    replaced by a normal draw of the exact residual variance.
    """
    if shape == int(shape):
        draws = rng.gamma(beta, 1.0, size=(int(shape), n))
        return np.log(draws).sum(axis=0)
    kk = np.arange(_LOGGAMMA_SERIES_TERMS, dtype=float)
    gam = rng.gamma(shape, 1.0, size=(_LOGGAMMA_SERIES_TERMS, n))
    series = ((shape - gam) / (beta + kk)[:, None]).sum(axis=0)
    tail_var = shape * special.polygamma(1, beta + _LOGGAMMA_SERIES_TERMS)
    tail = rng.normal(0.0, math.sqrt(tail_var), size=n)
    return shape * special.digamma(beta) + series + tail


def sample_marginal(spec: MarginalSpec, rng: np.random.Generator, size=None):
    """Draw from the stationary marginal law of X(0).

    Exact for the Gaussian, gamma, tempered stable (inverse-Gaussian branch
    at kappa=1/2, tilted-stable rejection otherwise), normal tempered stable
    (mixture over the TS draw), variance gamma (difference of two gammas),
    log-gamma powers with integer ``delta``, and generalized z with ``2*delta``
    integer (sums of log Beta-ratio draws).  Non-integer power parameters use
    the documented truncated-series approximation of the log-gamma factors.

    Raises :class:`UnsupportedParameter` when rejection acceptance would be
    pathologically low; never silently changes the target law.
    """
    n = 1 if size is None else int(size)
    if isinstance(spec, Gaussian):
        out = rng.normal(0.0, math.sqrt(spec.sigma2), size=n)
    elif isinstance(spec, Gamma):
        out = rng.gamma(spec.beta, 1.0 / spec.alpha, size=n)
    elif isinstance(spec, TemperedStable):
        out = _sample_tempered_stable(spec, rng, n)
    elif isinstance(spec, NormalTemperedStable):
        y = _sample_tempered_stable(
            TemperedStable(spec.kappa, spec.delta, spec.gamma), rng, n)
        out = spec.mu + spec.beta * y + np.sqrt(y) * rng.standard_normal(n)
    elif isinstance(spec, VarianceGamma):
        g1 = rng.gamma(spec.kappa, 1.0 / (spec.alpha - spec.beta), size=n)
        g2 = rng.gamma(spec.kappa, 1.0 / (spec.alpha + spec.beta), size=n)
        out = spec.mu + g1 - g2
    elif isinstance(spec, EulerGamma):
        w = _sample_loggamma_power(spec.beta, spec.delta, rng, n)
        out = spec.gamma_s * (w - spec.delta * math.log(spec.alpha))
    elif isinstance(spec, GeneralizedZ):
        w1 = _sample_loggamma_power(spec.beta1, 2.0 * spec.delta, rng, n)
        w2 = _sample_loggamma_power(spec.beta2, 2.0 * spec.delta, rng, n)
        out = spec.mu + spec.alpha / _TWO_PI * (w1 - w2)
    else:
        raise TypeError(f"unknown marginal spec {type(spec)!r}")
    return float(out[0]) if size is None else out
