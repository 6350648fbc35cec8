"""
Chow Ring Service
Classes in A_*(P^n) = Z[H]/(H^(n+1)) as truncated power series in H, with the
dual and line-bundle tensor operations the class formulas are written in.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Union

from sympy.polys.domains import QQ
from sympy.polys.ring_series import rs_mul, rs_pow, rs_trunc
from sympy.polys.rings import PolyElement, ring

from services.errors import DimensionMismatch, NonIntegralClass

logger = logging.getLogger(__name__)

CHOW_RING, H = ring("H", QQ)


@dataclass(frozen=True)
class ChowClass:
    """a_0 + a_1 H + ... + a_n H^n in the Chow ring of P^n.

    Entries are rational while series inverses are in flight; final classes
    are checked integral through ``integer_coefficients``.
    """

    n: int
    series: PolyElement

    def __post_init__(self):
        if self.n < 0:
            raise DimensionMismatch(f"ambient dimension must be >= 0, got {self.n}")
        object.__setattr__(self, "series", rs_trunc(CHOW_RING(self.series), H, self.n + 1))

    @classmethod
    def from_coefficients(cls, coefficients: Sequence, n: int = None) -> "ChowClass":
        coefficients = list(coefficients)
        if n is None:
            n = len(coefficients) - 1
        series = CHOW_RING.from_dict({(k,): QQ.convert(a) for k, a in enumerate(coefficients) if a})
        return cls(n, series)

    @classmethod
    def zero(cls, n: int) -> "ChowClass":
        return cls(n, CHOW_RING.zero)

    @classmethod
    def one(cls, n: int) -> "ChowClass":
        return cls(n, CHOW_RING.one)

    @classmethod
    def hyperplane(cls, n: int) -> "ChowClass":
        return cls(n, H)

    @classmethod
    def line_chern(cls, n: int, m: int) -> "ChowClass":
        """c(O(mH)) = 1 + mH."""
        return cls(n, 1 + m * H)

    @classmethod
    def chern_projective_space(cls, n: int) -> "ChowClass":
        """c(TP^n) = (1 + H)^(n+1)."""
        return cls(n, rs_pow(1 + H, n + 1, H, n + 1))

    def _check(self, other: "ChowClass"):
        if not isinstance(other, ChowClass):
            raise TypeError(f"expected ChowClass, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatch(f"classes in P^{self.n} and P^{other.n}")

    def __add__(self, other: "ChowClass") -> "ChowClass":
        self._check(other)
        return ChowClass(self.n, self.series + other.series)

    def __sub__(self, other: "ChowClass") -> "ChowClass":
        self._check(other)
        return ChowClass(self.n, self.series - other.series)

    def __neg__(self) -> "ChowClass":
        return ChowClass(self.n, -self.series)

    def __mul__(self, other: Union["ChowClass", int]) -> "ChowClass":
        if isinstance(other, int):
            return ChowClass(self.n, self.series * other)
        self._check(other)
        return ChowClass(self.n, rs_mul(self.series, other.series, H, self.n + 1))

    __rmul__ = __mul__

    def power(self, exponent: int) -> "ChowClass":
        """self^exponent; negative exponents need a nonzero constant term."""
        if exponent == 0:
            return ChowClass.one(self.n)
        return ChowClass(self.n, rs_pow(self.series, exponent, H, self.n + 1))

    def truncate(self, degree: int) -> "ChowClass":
        """Drop the terms of H-degree above ``degree``."""
        return ChowClass(self.n, rs_trunc(self.series, H, degree + 1))

    def coefficient(self, k: int):
        return self.series.get((k,), QQ.zero)

    def coefficients(self) -> List:
        return [self.coefficient(k) for k in range(self.n + 1)]

    @property
    def is_integral(self) -> bool:
        return all(QQ.denom(a) == 1 for a in self.series.itercoeffs())

    def integer_coefficients(self) -> List[int]:
        """Coefficients a_0..a_n as Python ints.

        Raises:
            NonIntegralClass: some entry is not an integer
        """
        if not self.is_integral:
            logger.error(f"Non-integral class {self.series} in P^{self.n}")
            raise NonIntegralClass(f"class {self.series} has non-integer entries")
        return [int(QQ.numer(a)) for a in self.coefficients()]

    def dual(self) -> "ChowClass":
        """sum (-1)^j a_j H^j."""
        return ChowClass(self.n, CHOW_RING.from_dict(
            {(k,): (-a if k % 2 else a) for (k,), a in self.series.items()}))

    def tensor_line(self, m: int) -> "ChowClass":
        """sum a_j H^j / (1 + mH)^j."""
        prec = self.n + 1
        result = CHOW_RING.zero
        for (j,), a in self.series.items():
            term = CHOW_RING({(j,): a})
            if j:
                term = rs_mul(term, rs_pow(1 + m * H, -j, H, prec), H, prec)
            result += term
        return ChowClass(self.n, result)

    def inv_chern_line(self, m: int) -> "ChowClass":
        """self * (1 + mH)^(-1)."""
        prec = self.n + 1
        return ChowClass(self.n, rs_mul(self.series, rs_pow(1 + m * H, -1, H, prec), H, prec))

    def integral(self) -> int:
        """Degree of the class: the coefficient of H^n.

        Raises:
            NonIntegralClass: some entry of the class, not only the degree, is fractional
        """
        return self.integer_coefficients()[self.n]

    def __str__(self):
        return str(self.series.as_expr())
