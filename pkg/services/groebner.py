"""
Groebner Service
Buchberger's algorithm with the Gebauer-Moeller pair criteria, normal forms,
reduced bases and leading-term ideals. A second engine (sympy's own
groebnertools) can be swapped in behind the same GroebnerBasis contract.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy.polys.groebnertools import groebner as sympy_groebner

from config import Config
from services.algebra_core import (
    GREVLEX,
    Monomial,
    MonomialOrder,
    Polynomial,
    PolynomialRing,
    ring_of,
)
from services.errors import GroebnerCertificateError, RingMismatch, ZeroPolynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis of the ideal spanned by ``generators``.

    ``generators`` live in the ring's grevlex materialisation, ``elements`` in
    the materialisation for ``order`` so sympy's division uses the right order.
    """

    ring: PolynomialRing
    order: MonomialOrder
    generators: Tuple[Polynomial, ...]
    elements: Tuple[Polynomial, ...]

    @property
    def is_zero(self) -> bool:
        return not self.elements

    @property
    def is_unit(self) -> bool:
        return any(g.is_ground for g in self.elements)

    def reduce(self, p: Polynomial) -> Polynomial:
        """Normal form of p, returned in the grevlex materialisation."""
        q = self.ring.convert(p, self.order)
        if q and self.elements:
            q = q.rem(list(self.elements))
        return self.ring.convert(q)

    def contains(self, p: Polynomial) -> bool:
        return not self.reduce(p)

    def leading_monomials(self) -> List[Monomial]:
        return [g.LM for g in self.elements]

    def polynomials(self) -> List[Polynomial]:
        """Basis elements moved to the grevlex materialisation."""
        return [self.ring.convert(g) for g in self.elements]


def _selection_key(R, lcm):
    return (sum(lcm), R.order(lcm))


def _normalize(f):
    """Primitive with positive leading coefficient over QQ, monic over GF(p)."""
    domain = f.ring.domain
    if domain.is_FiniteField:
        return f.monic()
    _, f = f.clear_denoms()
    content = reduce(gcd, (int(domain.numer(c)) for c in f.itercoeffs()), 0)
    if content > 1:
        f = f.quo_ground(domain.convert(content))
    if f.LC < 0:
        f = -f
    return f


def _spoly(f, g, lmf, lmg):
    R = f.ring
    lcm = R.monomial_lcm(lmf, lmg)
    s1 = f.mul_term((R.monomial_div(lcm, lmf), g.LC))
    s2 = g.mul_term((R.monomial_div(lcm, lmg), f.LC))
    return s1 - s2


def _update(G, lmG, P, f, lmf):
    """Add f to G and prune the pair set with the Gebauer-Moeller criteria."""
    R = f.ring
    lcm = R.monomial_lcm
    mul = R.monomial_mul
    div = R.monomial_div
    k = len(G)

    P = {p for p in P if (not div(lcm(lmG[p[0]], lmG[p[1]]), lmf) or
                          lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf) or
                          lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf))}
    lcm_dict = {}
    for i in range(k):
        lcm_dict.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimal = []
    for L in sorted(lcm_dict, key=R.order):
        if all(not div(L, L_) for L_ in minimal):
            minimal.append(L)
    new_pairs = set()
    for L in minimal:
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_dict[L]):
            new_pairs.add((min(lcm_dict[L]), k))

    G.append(f)
    lmG.append(lmf)
    return P | new_pairs


def _minimalize(G):
    R = G[0].ring
    Gmin = []
    for f in sorted(G, key=lambda h: R.order(h.LM)):
        if all(not R.monomial_div(f.LM, g.LM) for g in Gmin):
            Gmin.append(f)
    return Gmin


def _interreduce(G):
    Gred = []
    for i in range(len(G)):
        others = G[:i] + G[i + 1:]
        g = G[i].rem(others) if others else G[i]
        Gred.append(g.monic())
    return Gred


def _finish(G):
    R = G[0].ring
    return sorted(_interreduce(_minimalize(G)), key=lambda g: R.order(g.LM))


def _buchberger_engine(F):
    """Reduced basis of the nonzero polynomials F, all in one ordered sympy ring."""
    R = F[0].ring
    G, lmG, P = [], [], set()
    for f in F:
        f = _normalize(f)
        if f.is_ground:
            return [R.one]
        P = _update(G, lmG, P, f, f.LM)

    pairs_done = 0
    while P:
        i, j = min(P, key=lambda p: (_selection_key(R, R.monomial_lcm(lmG[p[0]], lmG[p[1]])), p))
        P.remove((i, j))
        pairs_done += 1
        r = _spoly(G[i], G[j], lmG[i], lmG[j]).rem(G)
        if r:
            r = _normalize(r)
            if r.is_ground:
                logger.debug(f"Unit ideal detected after {pairs_done} pairs")
                return [R.one]
            P = _update(G, lmG, P, r, r.LM)

    basis = _finish(G)
    logger.debug(f"Buchberger: {pairs_done} pairs, {len(G)} intermediate, {len(basis)} reduced")
    return basis


def _sympy_engine(F):
    R = F[0].ring
    G = sympy_groebner(list(F), R, method="buchberger")
    G = [g for g in G if g]
    if any(g.is_ground for g in G):
        return [R.one]
    return sorted((g.monic() for g in G), key=lambda g: R.order(g.LM))


ENGINES = {"buchberger": _buchberger_engine, "sympy": _sympy_engine}


def _prepare(gens: Sequence[Polynomial], ring: Optional[PolynomialRing]):
    gens = [g for g in gens if g]
    if ring is None:
        if not gens:
            raise ValueError("ring required when no nonzero generators are given")
        ring = ring_of(gens[0])
    for g in gens:
        if ring_of(g) != ring:
            raise RingMismatch(f"generator in {ring_of(g)}, expected {ring}")
    return ring, tuple(ring.convert(g) for g in gens)


def _run(engine: str, ring: PolynomialRing, order: MonomialOrder, gens: Tuple[Polynomial, ...]) -> GroebnerBasis:
    if not gens:
        return GroebnerBasis(ring, order, gens, ())
    F = [ring.convert(g, order) for g in gens]
    elements = tuple(ENGINES[engine](F))
    return GroebnerBasis(ring, order, gens, elements)


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
               ring: Optional[PolynomialRing] = None) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm (normal selection strategy).

    Args:
        gens: generators; zeros are dropped
        order: monomial order
        ring: required when every generator is zero

    Returns:
        GroebnerBasis with monic elements sorted by leading monomial
    """
    ring, gens = _prepare(gens, ring)
    return _run("buchberger", ring, order, gens)


@lru_cache(maxsize=1024)
def _cached_basis(engine: str, ring: PolynomialRing, order: MonomialOrder,
                  gens: Tuple[Polynomial, ...], verify: bool) -> GroebnerBasis:
    gb = _run(engine, ring, order, gens)
    return certify(gb) if verify else gb


def compute_basis(gens: Sequence[Polynomial], ring: Optional[PolynomialRing] = None,
                  order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Reduced basis from the configured engine, memoised on (ring, order, generators).

    When ``Config.VERIFY_GROEBNER`` is set every basis is certified once, before it is cached.
    """
    ring, gens = _prepare(gens, ring)
    engine = Config.GROEBNER_ENGINE if Config.GROEBNER_ENGINE in ENGINES else "buchberger"
    return _cached_basis(engine, ring, order, gens, bool(Config.VERIFY_GROEBNER))


def normal_form(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> Polynomial:
    """Remainder of multivariate division of p by ``basis`` under ``order``."""
    ring = ring_of(p)
    divisors = [ring.convert(g, order) for g in basis if g]
    if not p or not divisors:
        return p
    return ring.convert(ring.convert(p, order).rem(divisors))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """S-polynomial lc(g)*(L/lm f)*f - lc(f)*(L/lm g)*g with L = lcm of the leading monomials."""
    if not f or not g:
        raise ZeroPolynomial("S-polynomial of a zero polynomial")
    ring = ring_of(f)
    if ring_of(g) != ring:
        raise RingMismatch(f"{ring} vs {ring_of(g)}")
    f1, g1 = ring.convert(f, order), ring.convert(g, order)
    return ring.convert(_spoly(f1, g1, f1.LM, g1.LM))


def leading_term_ideal(gb: GroebnerBasis) -> List[Monomial]:
    """Minimal monomial generators of the initial ideal of a reduced basis."""
    return sorted(set(gb.leading_monomials()))


def is_certified(gb: GroebnerBasis) -> bool:
    """True when all S-pairs and all source generators reduce to zero."""
    G = list(gb.elements)
    if not G:
        return all(not g for g in gb.generators)
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if _spoly(G[i], G[j], G[i].LM, G[j].LM).rem(G):
                return False
    return all(not gb.ring.convert(f, gb.order).rem(G) for f in gb.generators)


def certify(gb: GroebnerBasis) -> GroebnerBasis:
    """Raise GroebnerCertificateError unless ``is_certified(gb)``."""
    if not is_certified(gb):
        logger.error(f"Basis of {len(gb.generators)} generators in {gb.ring} failed its certificate")
        raise GroebnerCertificateError(f"basis over {gb.ring} failed certificate check")
    return gb
