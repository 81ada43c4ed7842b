"""frobgen: exact differential-operator witnesses over prime fields.

For a nonzero polynomial f over F_p the library constructs, with machine
verification at every step, a divided-power differential operator Q with
Q(1/f) = 1/f^p, and from it operators reaching 1/f^k for any k.
"""

from .chain import ChainResult, chain_ideal, stabilization, we_dimension
from .diffop import DiffOp, commutes_with_pn, witness_generators
from .errors import FrobgenError
from .frobdecomp import (
    Ideal,
    PnDecomposition,
    decompose,
    frobenius_power,
    ideal_I,
    ideal_J,
    reconstruct,
)
from .generation import (
    FactoredOperator,
    GenerationCertificate,
    LocalizationElement,
    apply_to_localization,
    example_quadric_witness,
    frobenius_descent,
    generator_witness,
    inverse_p_power,
    inverse_power,
    one_over,
    power_witness,
    verify_certificate,
)
from .gfp import Fp, FpContext, is_prime
from .groebner import GroebnerBasis, buchberger, divide, ideal_equal, membership
from .poly import GREVLEX, LEX, Limits, MonomialOrder, Polynomial, PolyRing

__version__ = "0.1.0"

__all__ = [
    "ChainResult",
    "DiffOp",
    "FactoredOperator",
    "Fp",
    "FpContext",
    "FrobgenError",
    "GenerationCertificate",
    "GroebnerBasis",
    "GREVLEX",
    "Ideal",
    "LEX",
    "Limits",
    "LocalizationElement",
    "MonomialOrder",
    "PnDecomposition",
    "Polynomial",
    "PolyRing",
    "apply_to_localization",
    "buchberger",
    "chain_ideal",
    "commutes_with_pn",
    "decompose",
    "divide",
    "example_quadric_witness",
    "frobenius_descent",
    "frobenius_power",
    "generator_witness",
    "ideal_I",
    "ideal_J",
    "ideal_equal",
    "inverse_p_power",
    "inverse_power",
    "is_prime",
    "membership",
    "one_over",
    "power_witness",
    "reconstruct",
    "stabilization",
    "verify_certificate",
    "we_dimension",
    "witness_generators",
]
