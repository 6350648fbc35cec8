"""
Ideal Operations Service
Elimination, intersection, ideal quotient and saturation, the graph ideal of a
rational map, and generic slicing of a graph by random hyperplanes pulled
back from the target projective space.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import Config
from services.algebra_core import (
    GREVLEX,
    FieldSpec,
    MonomialOrder,
    Polynomial,
    PolynomialRing,
    is_homogeneous,
    partial_derivative,
    ring_of,
    total_degree,
)
from services.errors import (
    DegreeMismatch,
    GenericityFailure,
    NonHomogeneous,
    RingMismatch,
    ZeroDivisor,
    ZeroIdeal,
    ZeroMap,
)
from services.groebner import GroebnerBasis, compute_basis
from services.hilbert import affine_dimension

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1

# Below this modulus a random element of an ideal hits a fixed prime too often
GENERIC_MIN_MODULUS = 1000
SATURATION_STREAM = 0x5A7


@dataclass(frozen=True)
class Ideal:
    """Ideal of ``ring`` spanned by ``generators`` (zeros are dropped)."""

    ring: PolynomialRing
    generators: Tuple[Polynomial, ...] = ()

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if not g:
                continue
            if ring_of(g) != self.ring:
                raise RingMismatch(f"generator in {ring_of(g)}, ideal in {self.ring}")
            gens.append(self.ring.convert(g))
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def unit(cls, ring: PolynomialRing) -> "Ideal":
        return cls(ring, (ring.one,))

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def basis(self, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
        return compute_basis(self.generators, self.ring, order)

    def is_unit(self) -> bool:
        return self.basis().is_unit

    def is_homogeneous(self) -> bool:
        return all(is_homogeneous(g) for g in self.generators)

    def degrees(self) -> List[int]:
        return [total_degree(g) for g in self.generators]

    def contains(self, p: Polynomial) -> bool:
        return self.basis().contains(p)

    def contains_ideal(self, other: "Ideal") -> bool:
        gb = self.basis()
        return all(gb.contains(g) for g in other.generators)

    def same_as(self, other: "Ideal") -> bool:
        """Equality as ideals (reduced grevlex bases agree)."""
        if other.ring != self.ring:
            return False
        return self.basis().elements == other.basis().elements

    def reduced(self) -> "Ideal":
        """The same ideal spanned by its reduced grevlex basis."""
        return Ideal(self.ring, tuple(self.basis().polynomials()))

    def __add__(self, other: Union["Ideal", Polynomial]) -> "Ideal":
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return Ideal(self.ring, self.generators + other.generators)
        return Ideal(self.ring, self.generators + (other,))

    def __mul__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return Ideal(self.ring, tuple(f * g for f in self.generators for g in other.generators))

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")" if self.generators else "(0)"


def _variable_index(p: Polynomial) -> Optional[int]:
    """Position of the variable when p is a scalar multiple of one variable."""
    if len(p) != 1:
        return None
    (monom,) = p.itermonoms()
    if sum(monom) != 1:
        return None
    return monom.index(1)


def _divide_out(p: Polynomial, i: int, limit: Optional[int] = None) -> Polynomial:
    """Divide p by the largest power of variable i dividing it, at most ``limit``."""
    k = min(m[i] for m in p.itermonoms())
    if limit is not None:
        k = min(k, limit)
    if not k:
        return p
    return p.ring.from_dict({m[:i] + (m[i] - k,) + m[i + 1:]: c for m, c in p.items()})


def _colon_variable(I: Ideal, name: str, saturate: bool) -> Ideal:
    # I homogeneous, grevlex with x last: x divides a basis element iff it divides its leading term
    ring = I.ring
    moved = PolynomialRing(tuple(v for v in ring.variables if v != name) + (name,), ring.field)
    gb = compute_basis([moved.convert(g) for g in I.generators], moved, GREVLEX)
    last = moved.arity - 1
    gens = [_divide_out(g, last, None if saturate else 1) for g in gb.polynomials()]
    return Ideal(ring, tuple(ring.convert(g) for g in gens))


def _colon_element(I: Ideal, h: Polynomial, saturate: bool) -> Ideal:
    """I : h, or I : h^infinity, for homogeneous I and h from a single basis.

    I + (v - h) with v of weight deg h is weighted homogeneous; in weighted
    grevlex with v last, v divides a basis element iff it divides its leading
    term. Dividing v out and substituting v = h back gives the colon ideal.
    """
    index = _variable_index(h)
    if index is not None:
        return _colon_variable(I, I.ring.variables[index], saturate)
    ring = I.ring
    v_name = ring.fresh_name("v")
    extended = ring.extend([v_name])
    v = extended.var(v_name)
    image = extended.convert(h)
    gens = [extended.convert(g) for g in I.generators] + [v - image]
    gb = compute_basis(gens, extended, MonomialOrder.weighted({v_name: total_degree(h)}))
    last = extended.arity - 1
    result = []
    for g in gb.polynomials():
        g = _divide_out(g, last, None if saturate else 1)
        result.append(ring.convert(g.compose(v, image)))
    return Ideal(ring, tuple(result))


def _homogeneous_pair(I: Ideal, g: Polynomial) -> bool:
    return is_homogeneous(g) and I.is_homogeneous()


def eliminate(I: Ideal, variables: Iterable[str]) -> Ideal:
    """I intersected with the subring in the remaining variables, via a block order.

    Returns:
        Ideal of the smaller ring
    """
    names = tuple(dict.fromkeys(variables))
    remaining = I.ring.drop(names)
    if I.is_zero:
        return Ideal(remaining)
    gb = compute_basis(I.generators, I.ring, MonomialOrder.block(names))
    positions = [I.ring.index(v) for v in names]
    kept = [g for g in gb.polynomials()
            if all(m[i] == 0 for m in g.itermonoms() for i in positions)]
    return Ideal(remaining, tuple(remaining.convert(g) for g in kept))


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I cap J as the elimination of s from s*I + (1 - s)*J."""
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")
    if I.is_zero or J.is_zero:
        return Ideal(I.ring)
    ring = I.ring
    s_name = ring.fresh_name("s")
    extended = ring.extend([s_name], first=True)
    s = extended.var(s_name)
    gens = [s * extended.convert(f) for f in I.generators]
    gens += [(1 - s) * extended.convert(g) for g in J.generators]
    return eliminate(Ideal(extended, tuple(gens)), [s_name])


def quotient(I: Ideal, g: Union[Polynomial, Ideal]) -> Ideal:
    """Colon ideal I : g, or I : J as the intersection over the generators of J.

    Raises:
        ZeroDivisor: g is the zero polynomial
    """
    if isinstance(g, Ideal):
        if g.is_zero:
            return Ideal.unit(I.ring)
        result = None
        for h in g.generators:
            part = quotient(I, h)
            result = part if result is None else intersect(result, part)
        return result
    if not g:
        raise ZeroDivisor("ideal quotient by zero")
    if ring_of(g) != I.ring:
        raise RingMismatch(f"{ring_of(g)} vs {I.ring}")
    g = I.ring.convert(g)
    if g.is_ground or I.is_zero:
        return I
    if _homogeneous_pair(I, g):
        return _colon_element(I, g, saturate=False)
    meet = intersect(I, Ideal(I.ring, (g,)))
    return Ideal(I.ring, tuple(h.exquo(g) for h in meet.generators))


def _saturate_generator(I: Ideal, g: Polynomial) -> Ideal:
    if _homogeneous_pair(I, g):
        return _colon_element(I, g, saturate=True)
    ring = I.ring
    w_name = ring.fresh_name("w")
    extended = ring.extend([w_name], first=True)
    w = extended.var(w_name)
    gens = tuple(extended.convert(f) for f in I.generators) + (1 - w * extended.convert(g),)
    return eliminate(Ideal(extended, gens), [w_name])


def generic_element(J: Ideal, rng: "SliceRng") -> Polynomial:
    """Random combination of the generators of J raised to a common degree.

    J and the ideal of these powers have the same radical, so they saturate alike.
    """
    degrees = J.degrees()
    common = math.lcm(*degrees)
    coeffs = rng.coefficients(len(degrees))
    h = J.ring.zero
    for c, g, d in zip(coeffs, J.generators, degrees):
        if c:
            h += J.ring.constant(c) * g ** (common // d)
    return h


def _generic_applies(I: Ideal, J: Ideal) -> bool:
    field = I.ring.field
    if not field.is_rational and field.modulus < GENERIC_MIN_MODULUS:
        return False
    return I.is_homogeneous() and J.is_homogeneous()


def saturate(I: Ideal, J: Ideal) -> Ideal:
    """I : J^infinity.

    ``generic`` divides by powers of one random element of J in a single basis
    (exact unless that element lies in an associated prime of the result not
    containing J); below GENERIC_MIN_MODULUS, or for inhomogeneous input, it
    falls back to ``generators``, which saturates by each generator and
    intersects. ``colon`` iterates I : J until the reduced basis stops changing.
    """
    if J.is_zero:
        raise ZeroIdeal("saturation by the zero ideal")
    if I.is_zero or any(g.is_ground for g in J.generators):
        return I
    strategy = Config.SATURATION
    if strategy == "generic" and not _generic_applies(I, J):
        logger.debug(f"Generic saturation not applicable over {I.ring}, saturating by generators")
        strategy = "generators"

    if strategy == "generic":
        if len(J.generators) == 1:
            h = J.generators[0]
        else:
            rng = SliceRng.derive(Config.SEED, SATURATION_STREAM, field=I.ring.field, bound=Config.SLICE_BOUND)
            h = generic_element(J, rng)
            while not h:
                h = generic_element(J, rng)
        return _colon_element(I, h, saturate=True).reduced()

    if strategy == "generators":
        result = None
        for g in J.generators:
            part = _saturate_generator(I, g)
            result = part if result is None else intersect(result, part)
        return result.reduced()

    current = I.reduced()
    rounds = 0
    while True:
        rounds += 1
        following = quotient(current, J).reduced()
        if following.same_as(current):
            logger.debug(f"Saturation stable after {rounds} colon steps")
            return following
        current = following


@dataclass(frozen=True)
class GraphIdeal:
    """Ideal of the graph of a rational map P^n --> P^N inside k[t_0..t_N, z_0..z_n]."""

    ideal: Ideal
    target: Tuple[str, ...]
    base: PolynomialRing

    @property
    def irrelevant(self) -> Ideal:
        """The irrelevant ideal (t_0, ..., t_N) of the target factor."""
        ring = self.ideal.ring
        return Ideal(ring, tuple(ring.var(t) for t in self.target))


def _target_names(base: PolynomialRing, count: int) -> Tuple[str, ...]:
    prefix = "t"
    while any(f"{prefix}{j}" in base.variables for j in range(count)):
        prefix = "_" + prefix
    return tuple(f"{prefix}{j}" for j in range(count))


def graph_ideal(f: Sequence[Polynomial]) -> GraphIdeal:
    """Graph of z -> (f_0(z) : ... : f_N(z)) via t_j - u*f_j and elimination of u.

    Raises:
        ZeroMap: every component is zero
        NonHomogeneous: a component is not homogeneous
        DegreeMismatch: components of different degrees
    """
    if not f or not any(f):
        raise ZeroMap("rational map with all components zero")
    base = ring_of(f[0])
    for p in f:
        if ring_of(p) != base:
            raise RingMismatch(f"{ring_of(p)} vs {base}")
        if not is_homogeneous(p):
            raise NonHomogeneous(f"map component {p} is not homogeneous")
    degrees = {total_degree(p) for p in f if p}
    if len(degrees) > 1:
        raise DegreeMismatch(f"map components have degrees {sorted(degrees)}")

    target = _target_names(base, len(f))
    u_name = base.fresh_name("u", taken=target)
    big = PolynomialRing((u_name,) + target + base.variables, base.field)
    u = big.var(u_name)
    J = tuple(big.var(t) - u * big.convert(p) for t, p in zip(target, f))
    graph = eliminate(Ideal(big, J), [u_name])
    logger.info(f"Graph ideal over {base} with {len(f)} components: {len(graph.generators)} generators")
    return GraphIdeal(graph, target, base)


@dataclass
class SliceRng:
    """Random source for slicing forms: integers in [-bound, bound] over Q, residues over GF(p)."""

    seed: int
    field: FieldSpec = FieldSpec()
    bound: int = 997
    stream: Tuple[int, ...] = ()
    _generator: np.random.Generator = dataclass_field(init=False, repr=False)

    def __post_init__(self):
        entropy = [self.seed & MASK64, *self.stream] if self.stream else self.seed & MASK64
        self._generator = np.random.default_rng(entropy)

    @classmethod
    def derive(cls, seed: int, *stream: int, field: FieldSpec = FieldSpec(), bound: int = 997) -> "SliceRng":
        """Independent generator for a sub-computation, fixed by (seed, stream)."""
        return cls(seed, field, bound, tuple(int(s) for s in stream))

    def coefficients(self, count: int) -> List[int]:
        while True:
            if self.field.is_rational:
                draw = self._generator.integers(-self.bound, self.bound + 1, size=count)
            else:
                draw = self._generator.integers(0, self.field.modulus, size=count)
            values = [int(v) for v in draw]
            if any(values):
                return values

    def linear_form(self, ring: PolynomialRing, variables: Sequence[str]) -> Polynomial:
        coeffs = self.coefficients(len(variables))
        form = ring.zero
        for c, name in zip(coeffs, variables):
            form += ring.constant(c) * ring.var(name)
        return form


def slice_with(J: Ideal, ell: Polynomial, target: Sequence[str]) -> Ideal:
    """saturate(J + (ell), (t_0..t_N)) without a genericity check."""
    ring = J.ring
    irrelevant = Ideal(ring, tuple(ring.var(t) for t in target))
    return saturate(J + ell, irrelevant)


def slice_once(J_prev: Ideal, rng: SliceRng, target: Sequence[str],
               retries: Optional[int] = None) -> Tuple[Ideal, Polynomial]:
    """Cut J_prev by a random t-hyperplane, accepted only if the dimension drops by one.

    Args:
        J_prev: t,z-bihomogeneous ideal saturated against the t-variables
        rng: owner of the random stream
        target: names of the t-variables
        retries: genericity retry budget (Config.SLICE_RETRIES by default)

    Returns:
        (saturated sliced ideal, accepted linear form)

    Raises:
        GenericityFailure: no form passed the dimension check
    """
    retries = Config.SLICE_RETRIES if retries is None else retries
    ring = J_prev.ring
    before = affine_dimension(J_prev)
    for attempt in range(1, retries + 1):
        ell = rng.linear_form(ring, target)
        after = affine_dimension(J_prev + ell)
        if after == before - 1:
            if attempt > 1:
                logger.info(f"Slice accepted on attempt {attempt}")
            return slice_with(J_prev, ell, target), ell
        logger.warning(f"Slicing form {ell} not generic (dimension {before} -> {after}), retrying")
    raise GenericityFailure(f"no generic slice after {retries} attempts")


def project_to_base(J: Ideal, target: Sequence[str]) -> Ideal:
    """Image in the base projective space: eliminate the t-variables."""
    return eliminate(J, target)


def pull_back_once(K_prev: Ideal, components: Sequence[Polynomial], base: Ideal, rng: SliceRng,
                   retries: Optional[int] = None) -> Tuple[Ideal, Polynomial]:
    """Cut K_prev by the pull-back of a random target hyperplane, off the base locus.

    K_prev is the image in the source of the graph cut by earlier hyperplanes;
    the result (K_prev + (sum c_j f_j)) : base^infinity is the image of the
    graph cut by one more. Accepted when the dimension drops by one or the
    image becomes empty.

    Returns:
        (saturated ideal, accepted pulled-back form)

    Raises:
        GenericityFailure: no form passed the dimension check
    """
    retries = Config.SLICE_RETRIES if retries is None else retries
    ring = K_prev.ring
    before = affine_dimension(K_prev)
    for attempt in range(1, retries + 1):
        form = ring.zero
        for c, f in zip(rng.coefficients(len(components)), components):
            form += ring.constant(c) * f
        if not form:
            logger.warning("Pulled-back form vanished, retrying")
            continue
        K = saturate(K_prev + form, base)
        after = affine_dimension(K)
        if after == before - 1 or after <= 0:
            if attempt > 1:
                logger.info(f"Pull-back accepted on attempt {attempt}")
            return K, form
        logger.warning(f"Pulled-back form not generic (dimension {before} -> {after}), retrying")
    raise GenericityFailure(f"no generic pull-back after {retries} attempts")


def _monomials_of_degree(ring: PolynomialRing, degree: int) -> List[Polynomial]:
    result = []
    for combo in itertools.combinations_with_replacement(ring.gens(), degree):
        m = ring.one
        for v in combo:
            m = m * v
        result.append(m)
    return result


def normalize_same_degree(I: Ideal, degree: Optional[int] = None) -> Ideal:
    """Raise every generator to a common degree r by multiplying with all monomials of degree r - d.

    Raises:
        NonHomogeneous: a generator is not homogeneous
        DegreeMismatch: ``degree`` is below the largest generator degree
    """
    if not I.is_homogeneous():
        raise NonHomogeneous("normalization needs homogeneous generators")
    if I.is_zero:
        return I
    r = max(I.degrees())
    if degree is not None:
        if degree < r:
            raise DegreeMismatch(f"requested degree {degree} below generator degree {r}")
        r = degree
    gens = []
    for g in I.generators:
        d = total_degree(g)
        if d == r:
            gens.append(g)
        else:
            gens.extend(g * m for m in _monomials_of_degree(I.ring, r - d))
    return Ideal(I.ring, tuple(dict.fromkeys(gens)))


def jacobian_ideal(F: Polynomial) -> Ideal:
    """(dF/dz_0, ..., dF/dz_n); vanishing partials are dropped."""
    if not is_homogeneous(F):
        raise NonHomogeneous(f"{F} is not homogeneous")
    ring = ring_of(F)
    return Ideal(ring, tuple(partial_derivative(F, v) for v in ring.variables))


def trim_generators(I: Ideal) -> Ideal:
    """Drop generators lying in the ideal spanned by the remaining ones."""
    gens = list(I.generators)
    i = 0
    while i < len(gens):
        others = gens[:i] + gens[i + 1:]
        if others and Ideal(I.ring, tuple(others)).contains(gens[i]):
            logger.debug(f"Dropping redundant generator {gens[i]}")
            del gens[i]
        else:
            i += 1
    return Ideal(I.ring, tuple(gens))
