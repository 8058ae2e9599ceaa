"""Exact verification of Frobenius-lifting vanishing theorems on toric varieties over F_p."""
from .cohomology import cohomology_table, degree_complex, reduced_cohomology
from .divisors import TQDivisor, canonical_divisor, cartier_data, divisor, is_ample, round_up
from .errors import HypothesisError, InputError, ToricError, VerificationError
from .fan import Fan, catalog, named_fan, stellar_subdivision
from .harness import check_bott, check_hodge, check_injection, check_kv, check_strong_lift, run_suite
from .witt import WittElem

__all__ = [
    "Fan", "TQDivisor", "WittElem", "catalog", "named_fan", "stellar_subdivision", "divisor",
    "canonical_divisor", "cartier_data", "is_ample", "round_up", "cohomology_table",
    "degree_complex", "reduced_cohomology", "check_bott", "check_kv", "check_injection",
    "check_hodge", "check_strong_lift", "run_suite", "ToricError", "InputError",
    "HypothesisError", "VerificationError",
]
