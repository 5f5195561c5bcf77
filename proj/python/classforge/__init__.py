"""Imaginary quadratic fields with prescribed class-group divisibility.

Thin wrapper over the compiled extension; integers cross the boundary as
arbitrary-precision Python ints.
"""

from fractions import Fraction

from classforge._core import (  # noqa: F401
    ClassforgeError,
    class_group,
    crt,
    divisibility,
    factor,
    generate,
    hurwitz_numerator12,
    is_prime,
    kronecker,
    p_rank,
    r3_bruteforce,
    r3_gauss,
    scholz,
    search_small,
    squarefree_decompose,
    torsion_count,
    verify,
)

__all__ = [
    "ClassforgeError",
    "class_group",
    "crt",
    "divisibility",
    "factor",
    "generate",
    "hurwitz",
    "hurwitz_numerator12",
    "is_prime",
    "kronecker",
    "p_rank",
    "r3_bruteforce",
    "r3_gauss",
    "scholz",
    "search_small",
    "squarefree_decompose",
    "torsion_count",
    "verify",
]


def hurwitz(N):
    """Hurwitz-Kronecker class number H(N) as an exact Fraction."""
    return Fraction(hurwitz_numerator12(N), 12)
