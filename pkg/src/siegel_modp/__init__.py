"""Exact genus-2 Siegel modular form expansions and congruences mod p."""

from .congruence import (
    certify_congruent,
    filtration_evidence,
    jacobi_gate,
    membership_solve,
    monomial_basis,
    sturm_gate,
    theorem2_driver,
)
from .constructors import (
    build,
    chi20,
    igusa_generator,
    maass_lift,
    sharpness_example,
    theta_series,
    yoshida_level11,
    yoshida_level19,
)
from .expansion import SiegelExpansion, WittPair
from .genus1 import JacobiSlice, QSeries
from .scalars import ModScalar, PrimeModulus, bernoulli, divisors, v_p

__version__ = "0.1.0"
