from .poly import Poly, poly_divmod, poly_gcd
from .smith import (
    PolyMatrix,
    SmithForm,
    kronecker_pencil,
    pencil_split_check,
    smith_normal_form,
    snf_check,
)

__all__ = [
    "Poly",
    "PolyMatrix",
    "SmithForm",
    "kronecker_pencil",
    "pencil_split_check",
    "poly_divmod",
    "poly_gcd",
    "smith_normal_form",
    "snf_check",
]
