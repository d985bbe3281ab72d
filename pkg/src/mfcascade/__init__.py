"""Multifractal products of geometric stationary processes.

Simulation of cascade processes built from geometric Ornstein-Uhlenbeck-type
mother processes, closed-form Renyi / moment-scaling functions for seven
marginal families, and Monte Carlo estimators that verify the scaling laws.
"""

from .errors import (ConfigError, DegenerateData, DomainError, EmbeddingError,
                     SupportError, TruncationWarning, UnsupportedParameter)
from .marginals import (EulerGamma, Gamma, Gaussian, GeneralizedZ,
                        LevyTriplet, MarginalSpec, NormalTemperedStable,
                        TemperedStable, VarianceGamma, bdlp_density, c_x,
                        levy_density_x, levy_support, levy_triplet, mean_var,
                        moment_q, psi, psi_domain, sample_marginal)
from .rng import substream

__version__ = "0.1.0"
