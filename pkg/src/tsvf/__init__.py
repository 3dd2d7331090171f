"""Pre- and post-selected quantum systems: ABL probabilities, weak values,
von Neumann pointer models and a seeded Monte Carlo ensemble engine."""
from .abl import (
    OutcomeDistribution,
    abl_degenerate,
    abl_generalized,
    abl_probability,
    born_probability,
    distribution,
    element_of_reality,
    total_probability_check,
)
from .hilbert import (
    Bra,
    HilbertSpace,
    Ket,
    Operator,
    SpectralDecomposition,
    bra,
    eigendecompose,
    ket,
    operator,
)
from .tsv import GeneralizedTSV, Term, TwoStateVector, reverse, reverse_generalized
from .weak import WeakValue, weak_value, weak_value_degenerate, weak_value_generalized

__version__ = "0.1.0"

__all__ = [
    "Bra",
    "GeneralizedTSV",
    "HilbertSpace",
    "Ket",
    "Operator",
    "OutcomeDistribution",
    "SpectralDecomposition",
    "Term",
    "TwoStateVector",
    "WeakValue",
    "abl_degenerate",
    "abl_generalized",
    "abl_probability",
    "born_probability",
    "bra",
    "distribution",
    "eigendecompose",
    "element_of_reality",
    "ket",
    "operator",
    "reverse",
    "reverse_generalized",
    "total_probability_check",
    "weak_value",
    "weak_value_degenerate",
    "weak_value_generalized",
]
