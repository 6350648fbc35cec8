"""
Algebra Core
Exact coefficient fields, polynomial rings over named variables and the
monomial orders every Groebner computation is driven by.

Polynomials are sympy ``PolyElement`` values. A ring is identified by its
variable names and field; the same ring is materialised as one sympy ring per
monomial order, and ``PolynomialRing.convert`` moves polynomials between them
(or between rings that share variable names).
"""
import logging
import operator
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple

from sympy import Symbol, isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.orderings import MonomialOrder as SympyMonomialOrder
from sympy.polys.orderings import grevlex as sympy_grevlex
from sympy.polys.orderings import lex as sympy_lex
from sympy.polys.rings import PolyElement, PolyRing

from services.errors import (
    InvalidField,
    NameCollision,
    RingMismatch,
    UnknownVariable,
    ZeroPolynomial,
)

logger = logging.getLogger(__name__)

Polynomial = PolyElement
Monomial = Tuple[int, ...]

MAX_MODULUS = 2 ** 31


@lru_cache(maxsize=None)
def _prime_domain(modulus: int):
    return GF(modulus)


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals (modulus None) or GF(p) with p < 2^31."""

    modulus: Optional[int] = None

    def __post_init__(self):
        if self.modulus is None:
            return
        if isinstance(self.modulus, bool) or not isinstance(self.modulus, int):
            raise InvalidField(f"modulus must be an integer, got {self.modulus!r}")
        if not 2 <= self.modulus < MAX_MODULUS:
            raise InvalidField(f"modulus {self.modulus} outside [2, 2^31)")
        if not isprime(self.modulus):
            raise InvalidField(f"modulus {self.modulus} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls()

    @classmethod
    def prime_field(cls, p: int) -> "FieldSpec":
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``q`` or ``fp:<p>``."""
        value = (text or "").strip().lower()
        if value in ("q", "qq", "rationals"):
            return cls.rationals()
        if value.startswith("fp:"):
            digits = value[3:]
            if not digits.isdigit():
                raise InvalidField(f"bad prime in field '{text}'")
            return cls.prime_field(int(digits))
        raise InvalidField(f"unknown field '{text}', expected q or fp:<p>")

    @classmethod
    def from_domain(cls, domain) -> "FieldSpec":
        if domain == QQ:
            return cls.rationals()
        if getattr(domain, "is_FiniteField", False):
            return cls.prime_field(int(domain.mod))
        raise InvalidField(f"unsupported coefficient domain {domain}")

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    def domain(self):
        """The sympy domain: QQ or GF(p)."""
        return QQ if self.modulus is None else _prime_domain(self.modulus)

    def __str__(self):
        return "q" if self.modulus is None else f"fp:{self.modulus}"


_BASE_KEYS = {"lex": sympy_lex, "grevlex": sympy_grevlex}


def _picker(indices: Tuple[int, ...]):
    """Exponents at ``indices`` as a tuple (itemgetter returns a bare value for one index)."""
    if not indices:
        return lambda monomial: ()
    if len(indices) == 1:
        (i,) = indices
        return lambda monomial: (monomial[i],)
    return operator.itemgetter(*indices)


def _part_key(indices: Tuple[int, ...], kind: str):
    """Flat sort key of one block: the exponents for lex, degree then negated reversed exponents for grevlex."""
    if kind == "lex":
        return _picker(indices)
    if kind != "grevlex":
        raise ValueError(f"unknown block order {kind!r}")
    pick = _picker(tuple(reversed(indices)))

    def key(monomial):
        part = pick(monomial)
        return (sum(part),) + tuple(map(operator.neg, part))

    return key


class BlockOrder(SympyMonomialOrder):
    """Elimination order: compare the front block first, then the back block.

    Any monomial involving a front variable ranks above every monomial in the
    back variables alone, provided the front order is degree-compatible or lex.
    Keys are flat tuples; each block has a fixed length so concatenation
    compares block by block.
    """

    alias = "block"
    is_global = True

    def __init__(self, front: Sequence[int], back: Sequence[int],
                 front_kind: str = "grevlex", back_kind: str = "grevlex"):
        self.front = tuple(front)
        self.back = tuple(back)
        self.front_kind = front_kind
        self.back_kind = back_kind
        self._front_key = _part_key(self.front, front_kind)
        self._back_key = _part_key(self.back, back_kind)

    def __call__(self, monomial):
        return self._front_key(monomial) + self._back_key(monomial)

    def _signature(self):
        return (self.front, self.back, self.front_kind, self.back_kind)

    def __eq__(self, other):
        return isinstance(other, BlockOrder) and self._signature() == other._signature()

    def __hash__(self):
        return hash((BlockOrder, self._signature()))

    def __repr__(self):
        return f"BlockOrder({self.front}, {self.back}, {self.front_kind!r}, {self.back_kind!r})"


class WeightedOrder(SympyMonomialOrder):
    """Weighted degree first, ties broken as in grevlex."""

    alias = "wgrevlex"
    is_global = True

    def __init__(self, weights: Sequence[int]):
        self.weights = tuple(weights)

    def __call__(self, monomial):
        return (sum(map(operator.mul, self.weights, monomial)),) + tuple(map(operator.neg, reversed(monomial)))

    def __eq__(self, other):
        return isinstance(other, WeightedOrder) and self.weights == other.weights

    def __hash__(self):
        return hash((WeightedOrder, self.weights))

    def __repr__(self):
        return f"WeightedOrder({self.weights})"


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order by variable names: lex, grevlex, weighted grevlex or a two-block order."""

    kind: str = "grevlex"
    front: Tuple[str, ...] = ()
    front_kind: str = "grevlex"
    back_kind: str = "grevlex"
    weights: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls("lex")

    @classmethod
    def grevlex(cls) -> "MonomialOrder":
        return cls("grevlex")

    @classmethod
    def block(cls, front: Iterable[str], front_kind: str = "grevlex",
              back_kind: str = "grevlex") -> "MonomialOrder":
        return cls("block", tuple(front), front_kind, back_kind)

    @classmethod
    def weighted(cls, weights: Dict[str, int]) -> "MonomialOrder":
        """Weighted grevlex; variables not named keep weight 1."""
        return cls("weighted", weights=tuple(sorted((name, int(w)) for name, w in weights.items())))

    def sympy_key(self, variables: Sequence[str]):
        """The sympy order object for a ring with these variables."""
        if self.kind in _BASE_KEYS:
            return _BASE_KEYS[self.kind]
        if self.kind == "weighted":
            table = dict(self.weights)
            return WeightedOrder([table.get(name, 1) for name in variables])
        if self.kind != "block":
            raise ValueError(f"unknown monomial order {self.kind!r}")
        front = set(self.front)
        front_idx = [i for i, name in enumerate(variables) if name in front]
        back_idx = [i for i, name in enumerate(variables) if name not in front]
        return BlockOrder(front_idx, back_idx, self.front_kind, self.back_kind)

    def compare(self, variables: Sequence[str], a: Monomial, b: Monomial) -> int:
        """Return -1, 0 or 1 as a is below, equal to or above b."""
        key = self.sympy_key(variables)
        ka, kb = key(a), key(b)
        return (ka > kb) - (ka < kb)


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


@lru_cache(maxsize=None)
def _sympy_ring(variables: Tuple[str, ...], field: FieldSpec, order: MonomialOrder) -> PolyRing:
    symbols = tuple(Symbol(name) for name in variables)
    return PolyRing(symbols, field.domain(), order.sympy_key(variables))


@dataclass(frozen=True)
class PolynomialRing:
    """k[variables] with k given by a FieldSpec; the variable list fixes exponent positions."""

    variables: Tuple[str, ...]
    field: FieldSpec = FieldSpec()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise NameCollision(f"duplicate variable names in {self.variables}")

    @property
    def arity(self) -> int:
        return len(self.variables)

    def sympy_ring(self, order: MonomialOrder = GREVLEX) -> PolyRing:
        return _sympy_ring(self.variables, self.field, order)

    @property
    def base(self) -> PolyRing:
        """The grevlex materialisation, home of canonical polynomials."""
        return self.sympy_ring(GREVLEX)

    @property
    def zero(self) -> Polynomial:
        return self.base.zero

    @property
    def one(self) -> Polynomial:
        return self.base.one

    def constant(self, value) -> Polynomial:
        return self.base.ground_new(self.field.domain().convert(value))

    def gens(self) -> Tuple[Polynomial, ...]:
        return self.base.gens

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def var(self, name: str) -> Polynomial:
        return self.base.gens[self.index(name)]

    def extend(self, names: Sequence[str], first: bool = False) -> "PolynomialRing":
        clash = [name for name in names if name in self.variables]
        if clash:
            raise NameCollision(f"variable(s) {', '.join(clash)} already in ring")
        names = tuple(names)
        variables = names + self.variables if first else self.variables + names
        return PolynomialRing(variables, self.field)

    def drop(self, names: Iterable[str]) -> "PolynomialRing":
        names = set(names)
        for name in names:
            self.index(name)
        return PolynomialRing(tuple(v for v in self.variables if v not in names), self.field)

    def fresh_name(self, stem: str, taken: Iterable[str] = ()) -> str:
        """A variable name starting with ``stem`` that the ring does not use."""
        used = set(self.variables) | set(taken)
        if stem not in used:
            return stem
        suffix = 0
        while f"{stem}_{suffix}" in used:
            suffix += 1
        return f"{stem}_{suffix}"

    def from_terms(self, terms: Dict[Monomial, object], order: MonomialOrder = GREVLEX) -> Polynomial:
        return self.sympy_ring(order).from_dict(terms)

    def owns(self, p: Polynomial) -> bool:
        return ring_of(p) == self

    def convert(self, p: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
        """Move p into this ring's materialisation for ``order``, matching variables by name.

        Raises:
            UnknownVariable: p uses a variable this ring does not have
        """
        target = self.sympy_ring(order)
        if p.ring == target:
            return p
        source = tuple(str(s) for s in p.ring.symbols)
        if source == self.variables:
            return target.from_dict(p, p.ring.domain)
        positions = []
        for name in source:
            positions.append(self.variables.index(name) if name in self.variables else None)
        terms = {}
        for monom, coeff in p.items():
            exps = [0] * self.arity
            for i, e in enumerate(monom):
                if not e:
                    continue
                j = positions[i]
                if j is None:
                    raise UnknownVariable(source[i])
                exps[j] = e
            terms[tuple(exps)] = coeff
        return target.from_dict(terms, p.ring.domain)

    def __str__(self):
        return f"{self.field}[{', '.join(self.variables)}]"


@lru_cache(maxsize=None)
def _ring_of_sympy(sympy_ring: PolyRing) -> PolynomialRing:
    return PolynomialRing(tuple(str(s) for s in sympy_ring.symbols), FieldSpec.from_domain(sympy_ring.domain))


def ring_of(p: Polynomial) -> PolynomialRing:
    """The named ring a polynomial belongs to (whatever order it is stored under)."""
    return _ring_of_sympy(p.ring)


def _same_ring(p: Polynomial, q: Polynomial):
    if ring_of(p) != ring_of(q):
        raise RingMismatch(f"{ring_of(p)} vs {ring_of(q)}")
    if p.ring != q.ring:
        q = ring_of(p).convert(q)
        p = ring_of(p).convert(p)
    return p, q


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p, q = _same_ring(p, q)
    return p + q


def sub(p: Polynomial, q: Polynomial) -> Polynomial:
    p, q = _same_ring(p, q)
    return p - q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p, q = _same_ring(p, q)
    return p * q


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    """Formal partial derivative; exponents are reduced into the field so char-p terms cancel."""
    i = ring_of(p).index(var)
    domain = p.ring.domain
    terms = {}
    for monom, coeff in p.items():
        e = monom[i]
        if not e:
            continue
        lowered = monom[:i] + (e - 1,) + monom[i + 1:]
        terms[lowered] = coeff * domain.convert(e)
    # from_dict drops coefficients that became zero
    return p.ring.from_dict(terms)


def total_degree(p: Polynomial) -> int:
    """Total degree; -1 for the zero polynomial."""
    return max((sum(m) for m in p.itermonoms()), default=-1)


def is_homogeneous(p: Polynomial) -> bool:
    return len({sum(m) for m in p.itermonoms()}) <= 1


def leading_term(p: Polynomial, order: MonomialOrder = GREVLEX) -> Tuple[Monomial, object]:
    """Maximal (monomial, coefficient) of p under ``order``.

    Raises:
        ZeroPolynomial: p is zero
    """
    if not p:
        raise ZeroPolynomial("zero polynomial has no leading term")
    key = order.sympy_key(ring_of(p).variables)
    return max(p.items(), key=lambda term: key(term[0]))


def homogenize(p: Polynomial, new_var: str, first: bool = False) -> Polynomial:
    """Homogenize p with a new variable; setting it to 1 gives back p.

    Args:
        p: polynomial to homogenize
        new_var: name of the homogenizing variable, not yet in the ring
        first: place the new variable first instead of last

    Returns:
        Homogeneous polynomial in the extended ring
    """
    ring = ring_of(p)
    target = ring.extend([new_var], first=first)
    d = max(total_degree(p), 0)
    terms = {}
    for monom, coeff in p.items():
        pad = (d - sum(monom),)
        terms[pad + monom if first else monom + pad] = coeff
    return target.base.from_dict(terms, p.ring.domain)


def dehomogenize(p: Polynomial, var: str, value=1) -> Polynomial:
    """Substitute ``var := value`` and drop var from the ring."""
    ring = ring_of(p)
    i = ring.index(var)
    target = ring.drop([var])
    domain = p.ring.domain
    value = domain.convert(value)
    terms = {}
    for monom, coeff in p.items():
        e = monom[i]
        if e and not value:
            continue
        reduced = monom[:i] + monom[i + 1:]
        term = coeff * value ** e if e else coeff
        terms[reduced] = terms.get(reduced, domain.zero) + term
    return target.base.from_dict(terms, domain)
