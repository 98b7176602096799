"""Simulation and limit-law evaluation for aggregated random-coefficient AR(1) panels."""

__version__ = "0.1.0"

from .exceptions import (ConfigError, FitError, InvalidLawError, NonIntegrable, NumericalFailure,
                         RcarError, TruncationError, UnsupportedRegime)
from .limit_laws import (CFGrid, QuadratureSpec, cf_Lambda, cf_V, cf_V1, cf_W, cf_Z, cov_Lambda2,
                         f_tau, kappa_lambda)
from .mixing import MixingLaw, kappa_alpha, sample_coefficient
from .panel_sim import AggregateSample, PanelSpec, aggregate, ma_weight, simulate_aggregates, simulate_path
from .poisson_sim import PoissonSimSpec, simulate_elementary_z, simulate_Z
from .regime import RegimeCase, RegimeReport, classify
from .seeding import substream
from .stable_core import Flavor, StableLaw, cf_levy, omega, sample_innovation, sample_stable
from .stats import SampleSet, cf_distance, empirical_cf, hill_index, invert_cf_cdf, loglog_slope, sample_autocov
