"""
Hilbert Service
Hilbert series of monomial ideals by pivot recursion, and from them the
dimension and degree of the scheme cut out by a homogeneous ideal.
"""
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Sequence, Tuple

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyElement, ring

from services.algebra_core import GREVLEX, is_homogeneous
from services.errors import NonHomogeneous
from services.groebner import compute_basis, leading_term_ideal

if TYPE_CHECKING:
    from services.ideal_ops import Ideal

logger = logging.getLogger(__name__)

SERIES_RING, T = ring("T", ZZ)


@dataclass(frozen=True)
class HilbertSeries:
    """N(T) / (1 - T)^arity."""

    numerator: PolyElement
    arity: int

    def reduced(self) -> Tuple[PolyElement, int]:
        """Cancel (1 - T) factors; returns (numerator, pole order) with N(1) != 0 unless N = 0."""
        numerator, pole = self.numerator, self.arity
        while pole > 0 and numerator and _value_at_one(numerator) == 0:
            numerator = numerator.exquo(1 - T)
            pole -= 1
        return numerator, pole

    @property
    def pole_order(self) -> int:
        return self.reduced()[1]

    @property
    def multiplicity(self) -> int:
        numerator, _ = self.reduced()
        return _value_at_one(numerator)

    def coefficients(self) -> List[int]:
        """Numerator coefficients from T^0 upwards."""
        if not self.numerator:
            return [0]
        coeffs = [0] * (self.numerator.degree() + 1)
        for (k,), c in self.numerator.terms():
            coeffs[k] = int(c)
        return coeffs

    def graded_dimensions(self, up_to: int) -> List[int]:
        """Dimensions of the graded pieces of degree 0..up_to."""
        numerator = self.coefficients()
        dims = []
        for t in range(up_to + 1):
            total = 0
            for k, a in enumerate(numerator):
                if a and k <= t:
                    total += a * math.comb(t - k + self.arity - 1, self.arity - 1)
            dims.append(total)
        return dims


@dataclass(frozen=True)
class SchemeMetrics:
    """Projective dimension (-1 when empty) and degree of a projective scheme."""

    projective_dimension: int
    degree: int

    @property
    def is_empty(self) -> bool:
        return self.projective_dimension < 0


EMPTY = SchemeMetrics(-1, 0)


def _value_at_one(numerator: PolyElement) -> int:
    return int(sum(numerator.itercoeffs()))


def minimalize(A: np.ndarray) -> np.ndarray:
    """Minimal generators among the rows of A (duplicates and multiples dropped)."""
    if len(A) <= 1:
        return A
    A = np.unique(A, axis=0)
    A = A[np.argsort(A.sum(axis=1), kind="stable")]
    keep = []
    for i, m in enumerate(A):
        if not keep or not np.any(np.all(A[keep] <= m, axis=1)):
            keep.append(i)
    return A[keep]


def pivot(A: np.ndarray, column: int) -> Tuple[np.ndarray, np.ndarray]:
    """Split on the variable ``column``: generators of I + (x) and of I : x."""
    p = np.zeros(A.shape[1], dtype=A.dtype)
    p[column] = 1
    left = np.vstack([A[A[:, column] == 0], p])
    right = np.where(A >= p, A - p, 0)
    return minimalize(left), minimalize(right)


def _numerator(A: np.ndarray) -> PolyElement:
    if A.shape[0] == 0:
        return SERIES_RING.one
    degrees = A.sum(axis=1)
    if np.any(degrees == 0):
        return SERIES_RING.zero
    support = np.count_nonzero(A, axis=1)
    mixed = A[support > 1]
    if mixed.shape[0] == 0:
        result = SERIES_RING.one
        for d in degrees:
            result *= 1 - T ** int(d)
        return result
    column = int(np.argmax(np.count_nonzero(mixed, axis=0)))
    with_var, colon = pivot(A, column)
    return _numerator(with_var) + T * _numerator(colon)


def hilbert_numerator(lt_gens: Sequence[Sequence[int]], arity: int) -> HilbertSeries:
    """Hilbert series numerator of k[x_1..x_arity] modulo a monomial ideal.

    Uses N(I) = N(I + (x)) + T * N(I : x) with x the variable occurring in the
    most non-pure-power generators; ideals of pure powers are the base case.
    """
    rows = [tuple(m) for m in lt_gens]
    A = np.array(rows, dtype=np.int64).reshape(len(rows), arity)
    return HilbertSeries(_numerator(minimalize(A)), arity)


def hilbert_series(ideal: "Ideal") -> HilbertSeries:
    gb = compute_basis(ideal.generators, ideal.ring, GREVLEX)
    return hilbert_numerator(leading_term_ideal(gb), ideal.ring.arity)


def affine_dimension(ideal: "Ideal") -> float:
    """Krull dimension of k[x]/I; -inf for the unit ideal."""
    gb = compute_basis(ideal.generators, ideal.ring, GREVLEX)
    if gb.is_unit:
        return -math.inf
    return hilbert_numerator(leading_term_ideal(gb), ideal.ring.arity).pole_order


def dim_and_degree(ideal: "Ideal") -> SchemeMetrics:
    """Projective dimension and degree of Proj(k[z]/I).

    Raises:
        NonHomogeneous: a generator is not homogeneous
    """
    for g in ideal.generators:
        if not is_homogeneous(g):
            raise NonHomogeneous(f"generator {g} is not homogeneous")
    gb = compute_basis(ideal.generators, ideal.ring, GREVLEX)
    if gb.is_unit:
        return EMPTY
    series = hilbert_numerator(leading_term_ideal(gb), ideal.ring.arity)
    numerator, pole = series.reduced()
    if pole == 0:
        return EMPTY
    metrics = SchemeMetrics(pole - 1, _value_at_one(numerator))
    logger.debug(f"dim/degree over {ideal.ring}: {metrics}")
    return metrics
