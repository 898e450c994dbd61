"""Computer algebra for the natural operations on homotopy groups of
spectral partition Lie algebras and mod-p TAQ cohomology."""

from .fpcore import FpScalar, Prime, binom_mod_p, fp_linear_combine
from .ringoid import (
    ADDITIVE, FULL, DualElement, DualOpWord, dual_adem_rewrite,
    is_admissible_dual, normal_form_dual, suspend, unstable_ext_basis,
)
from .power_ring import (
    PowerOp, RWord, compose, identity_op, op_basis, to_R_notation,
    verify_adem_R, word_op,
)
from .lie import FreeShiftedLie, LieSymbol
from .free_algebra import BMSequence, DimTable, FreeAlgebra, FreeBasisElement

__version__ = "0.1.0"
