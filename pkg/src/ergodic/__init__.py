"""
에르고딕 추정량: Lyapunov 지수, 적분가능성 분류, 엔트로피, 국소 차원, 밀도, 급수
"""

from .checks import AcipEquivalence, RuelleResult, acip_equivalence_check, ruelle_check
from .density import (
    DensityEstimate,
    compare_exact,
    density_histogram,
    exact_bin_masses,
    histogram_estimate,
    min_density_on,
)
from .dimension import LocalDimensionEstimate, ball_fractions, dimension_formula_gap, geometric_radii, local_dimension
from .entropy import (
    WordCountEntropy,
    bernoulli_itinerary,
    bernoulli_sampler,
    binary_entropy,
    block_entropy_rate,
    entropy_word_count,
    orbit_itinerary,
    partition_symbols,
    sample_bernoulli_measure,
    word_count_rates,
)
from .integrability import IntegrabilityVerdict, Verdict, Weight, singular_integral_classify
from .lyapunov import LyapunovEstimate, birkhoff_lyapunov, initial_condition
from .series import SeriesResult, infinite_exponent_series

__all__ = [
    "AcipEquivalence",
    "DensityEstimate",
    "IntegrabilityVerdict",
    "LocalDimensionEstimate",
    "LyapunovEstimate",
    "RuelleResult",
    "SeriesResult",
    "Verdict",
    "Weight",
    "WordCountEntropy",
    "acip_equivalence_check",
    "ball_fractions",
    "bernoulli_itinerary",
    "bernoulli_sampler",
    "binary_entropy",
    "birkhoff_lyapunov",
    "block_entropy_rate",
    "compare_exact",
    "density_histogram",
    "dimension_formula_gap",
    "entropy_word_count",
    "exact_bin_masses",
    "geometric_radii",
    "histogram_estimate",
    "infinite_exponent_series",
    "initial_condition",
    "local_dimension",
    "min_density_on",
    "orbit_itinerary",
    "partition_symbols",
    "ruelle_check",
    "sample_bernoulli_measure",
    "singular_integral_classify",
    "word_count_rates",
]
