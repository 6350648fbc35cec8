"""
Characteristic Class Service
Projective degrees of the graph of the rational map defined by an ideal, and
from them the Segre, Fulton, Chern-Schwartz-MacPherson and Milnor classes,
Euler characteristics (projective and affine) and excess intersection counts.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from config import Config
from services.algebra_core import (
    GREVLEX,
    Polynomial,
    PolynomialRing,
    dehomogenize,
    homogenize,
    is_homogeneous,
    ring_of,
    total_degree,
)
from services.chow import H, ChowClass
from services.errors import (
    ImageDimensionMismatch,
    NonHomogeneous,
    RingMismatch,
    UnsupportedField,
    VanishingJacobian,
    ZeroIdeal,
    ZeroPolynomial,
)
from services.hilbert import dim_and_degree
from services.ideal_ops import (
    Ideal,
    SliceRng,
    graph_ideal,
    jacobian_ideal,
    normalize_same_degree,
    project_to_base,
    pull_back_once,
    slice_once,
    trim_generators,
)

logger = logging.getLogger(__name__)

AFFINE_METHODS = ("limit", "hyperplane")


@dataclass(frozen=True)
class ProjectiveDegrees:
    """Shadow g_0 + g_1 H + ... + g_n H^n of the graph, with the common generator degree r."""

    g: Tuple[int, ...]
    generator_degree: int

    @property
    def n(self) -> int:
        return len(self.g) - 1

    def as_class(self) -> ChowClass:
        return ChowClass.from_coefficients(self.g, self.n)


@dataclass
class ClassReport:
    segre: Optional[ChowClass] = None
    fulton: Optional[ChowClass] = None
    csm: Optional[ChowClass] = None
    milnor: Optional[ChowClass] = None
    euler: Optional[int] = None


def segre_from_degrees(g: Sequence[int], r: int, n: int) -> ChowClass:
    """1 - c(O(rH))^-1 (G tensor O(rH)) = 1 - sum g_j H^j / (1 + rH)^(j+1)."""
    shadow = ChowClass.from_coefficients(g, n)
    return ChowClass.one(n) - shadow.tensor_line(r).inv_chern_line(r)


def csm_from_degrees(g: Sequence[int], n: int) -> ChowClass:
    """(1 + H)^(n+1) - sum g_d (-H)^d (1 + H)^(n-d) for the shadow of a gradient map."""
    one_plus = ChowClass(n, 1 + H)
    minus_h = ChowClass(n, -H)
    result = ChowClass.chern_projective_space(n)
    for d, gd in enumerate(g):
        if gd and d <= n:
            result = result - gd * minus_h.power(d) * one_plus.power(n - d)
    return result


def excess_count(s: ChowClass, d: int) -> int:
    """d^n - integral of (1 + dH)^n . s: Bezout corrected for the base scheme."""
    n = s.n
    return d ** n - (ChowClass.line_chern(n, d).power(n) * s).integral()


def dtuple_base_ideal(configuration: Polynomial, names: Sequence[str] = ("x", "y", "z", "w")) -> Ideal:
    """Base scheme of the map P^3 --> P^d sending a 2x2 matrix to a translate of a d-tuple.

    ``configuration`` is a binary form f(s, t) of degree d cutting out d points
    of P^1; the matrix (x y; z w) maps it to f(xs + yt, zs + wt), and the
    coefficients of that form in s, t generate the ideal.

    Raises:
        ZeroPolynomial: the configuration is zero
        RingMismatch: the configuration is not in two variables
        NonHomogeneous: the configuration is not a form
    """
    if not configuration:
        raise ZeroPolynomial("empty d-tuple configuration")
    source = ring_of(configuration)
    if source.arity != 2:
        raise RingMismatch(f"d-tuple configuration must be a binary form, got {source}")
    if not is_homogeneous(configuration):
        raise NonHomogeneous(f"d-tuple configuration {configuration} is not a form")
    matrix_ring = PolynomialRing(tuple(names), source.field)
    if matrix_ring.arity != 4:
        raise RingMismatch(f"need four matrix entries, got {matrix_ring.variables}")
    big = matrix_ring.extend(source.variables)
    s, t = (big.var(v) for v in source.variables)
    x, y, z, w = (big.var(v) for v in matrix_ring.variables)
    translate = big.convert(configuration).compose([(s, x * s + y * t), (t, z * s + w * t)])

    pieces: Dict[Tuple[int, ...], Dict[Tuple[int, ...], object]] = {}
    for monom, coeff in translate.items():
        pieces.setdefault(monom[4:], {})[monom[:4]] = coeff
    gens = [matrix_ring.from_terms(pieces[key]) for key in sorted(pieces, reverse=True)]
    return Ideal(matrix_ring, tuple(gens))


class CharacteristicClassService:
    """Runs the class pipeline for homogeneous ideals in k[z_0..z_n].

    Args:
        seed: master seed for slicing forms (Config.SEED by default)
        slice_bound: coefficient bound for forms over Q
        slice_retries: genericity retry budget per slice
        max_workers: threads for inclusion-exclusion subsets
        force: allow CSM/Euler computations over GF(p)
        simplify: drop redundant generators before inclusion-exclusion
        degrees_method: ``pullback`` or ``graph`` (Config.DEGREES_METHOD by default)
    """

    def __init__(self, seed: Optional[int] = None, slice_bound: Optional[int] = None,
                 slice_retries: Optional[int] = None, max_workers: Optional[int] = None,
                 force: bool = False, simplify: bool = False, degrees_method: Optional[str] = None):
        self.seed = Config.SEED if seed is None else int(seed)
        self.slice_bound = Config.SLICE_BOUND if slice_bound is None else slice_bound
        self.slice_retries = Config.SLICE_RETRIES if slice_retries is None else slice_retries
        self.max_workers = Config.MAX_WORKERS if max_workers is None else max_workers
        self.force = force
        self.simplify = simplify
        self.degrees_method = Config.DEGREES_METHOD if degrees_method is None else degrees_method
        if self.degrees_method not in Config.DEGREES_METHODS:
            raise ValueError(f"unknown degrees method {self.degrees_method!r}, "
                             f"expected one of {sorted(Config.DEGREES_METHODS)}")

    def _rng(self, ring: PolynomialRing, *stream: int) -> SliceRng:
        return SliceRng.derive(self.seed, *stream, field=ring.field, bound=self.slice_bound)

    @staticmethod
    def _dimension(ideal: Ideal) -> int:
        return ideal.ring.arity - 1

    def projective_degrees(self, ideal: Ideal, rng: Optional[SliceRng] = None) -> ProjectiveDegrees:
        """Degrees g_0..g_n of the images of successive generic slices of the graph.

        ``pullback`` cuts the source by pulled-back hyperplanes and saturates
        away the base locus; ``graph`` slices the graph ideal in the product
        and projects. Both give the same degrees.

        Raises:
            ZeroIdeal: the ideal is (0)
            NonHomogeneous: a generator is not homogeneous
            GenericityFailure: slicing ran out of retries
            ImageDimensionMismatch: a projected slice has an unexpected dimension
        """
        if ideal.is_zero:
            raise ZeroIdeal("projective degrees of the zero ideal")
        if not ideal.is_homogeneous():
            raise NonHomogeneous("projective degrees need a homogeneous ideal")
        n = self._dimension(ideal)
        if ideal.is_unit():
            return ProjectiveDegrees((1,) + (0,) * n, 0)

        normalized = normalize_same_degree(ideal)
        r = normalized.degrees()[0]
        rng = rng or self._rng(ideal.ring)
        if self.degrees_method == "graph":
            graph = graph_ideal(list(normalized.generators))
            current = graph.ideal

            def step(J: Ideal) -> Tuple[Ideal, Ideal]:
                J, _ = slice_once(J, rng, graph.target, self.slice_retries)
                return J, project_to_base(J, graph.target)
        else:
            current = Ideal(ideal.ring)

            def step(K: Ideal) -> Tuple[Ideal, Ideal]:
                K, _ = pull_back_once(K, normalized.generators, normalized, rng, self.slice_retries)
                return K, K

        degrees = [1]
        empty = False
        for i in range(1, n + 1):
            if empty:
                degrees.append(0)
                continue
            current, image = step(current)
            metrics = dim_and_degree(image)
            if metrics.is_empty:
                empty = True
                degrees.append(0)
            elif metrics.projective_dimension == n - i:
                degrees.append(metrics.degree)
            else:
                raise ImageDimensionMismatch(
                    f"slice {i}: image of dimension {metrics.projective_dimension}, expected {n - i}")
            logger.info(f"g_{i} = {degrees[-1]}")
        return ProjectiveDegrees(tuple(degrees), r)

    def segre(self, ideal: Ideal) -> ChowClass:
        """Push-forward of the Segre class of the scheme cut out by ``ideal``."""
        shadow = self.projective_degrees(ideal)
        s = segre_from_degrees(shadow.g, shadow.generator_degree, shadow.n)
        s.integer_coefficients()
        return s

    def fulton(self, ideal: Ideal) -> ChowClass:
        """(1 + H)^(n+1) . segre."""
        s = self.segre(ideal)
        c = ChowClass.chern_projective_space(s.n) * s
        c.integer_coefficients()
        return c

    def _check_field(self, ring: PolynomialRing, what: str):
        if ring.field.is_rational:
            return
        if not self.force:
            raise UnsupportedField(f"{what} over {ring.field} needs force")
        logger.warning(f"Computing {what} over {ring.field}; the class is only meaningful in characteristic 0")

    def _csm_hypersurface(self, F: Polynomial, rng: Optional[SliceRng]) -> ChowClass:
        ring = ring_of(F)
        n = ring.arity - 1
        if not F:
            raise ZeroPolynomial("hypersurface of the zero polynomial")
        if F.is_ground:
            return ChowClass.zero(n)
        jacobian = jacobian_ideal(F)
        if jacobian.is_zero:
            raise VanishingJacobian(f"all partial derivatives of {F} vanish over {ring.field}")
        shadow = self.projective_degrees(jacobian, rng)
        c = csm_from_degrees(shadow.g, n)
        c.integer_coefficients()
        return c

    def csm_hypersurface(self, F: Polynomial) -> ChowClass:
        """CSM class of the hypersurface F = 0 from the shadow of its gradient map."""
        return self._csm_hypersurface(F, None)

    def csm(self, ideal: Ideal) -> ChowClass:
        """CSM class of the support, by inclusion-exclusion over products of generators."""
        n = self._dimension(ideal)
        if ideal.is_zero:
            return ChowClass.chern_projective_space(n)
        self._check_field(ideal.ring, "CSM class")
        if not ideal.is_homogeneous():
            raise NonHomogeneous("CSM class needs a homogeneous ideal")
        if self.simplify:
            ideal = trim_generators(ideal)
        gens = list(ideal.generators)
        if any(g.is_ground for g in gens):
            return ChowClass.zero(n)

        count = len(gens)
        products: Dict[int, Polynomial] = {}
        for mask in range(1, 1 << count):
            low = mask & -mask
            index = low.bit_length() - 1
            rest = mask ^ low
            products[mask] = gens[index] if not rest else products[rest] * gens[index]
        logger.info(f"Inclusion-exclusion over {len(products)} products in P^{n}")

        def run(mask: int) -> ChowClass:
            c = self._csm_hypersurface(products[mask], self._rng(ideal.ring, mask))
            logger.info(f"Subset {mask:b} done")
            return c

        masks = sorted(products)
        if self.max_workers > 1 and len(masks) > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                classes = dict(zip(masks, pool.map(run, masks)))
        else:
            classes = {mask: run(mask) for mask in masks}

        total = ChowClass.zero(n)
        for mask in masks:
            sign = 1 if bin(mask).count("1") % 2 else -1
            total = total + sign * classes[mask]
        return total

    def milnor(self, ideal: Ideal) -> ClassReport:
        """Fulton, CSM and Milnor = CSM - Fulton in one report."""
        segre = self.segre(ideal)
        fulton = ChowClass.chern_projective_space(segre.n) * segre
        csm = self.csm(ideal)
        return ClassReport(segre=segre, fulton=fulton, csm=csm, milnor=csm - fulton,
                           euler=csm.integral())

    def euler(self, ideal: Ideal) -> int:
        """Topological Euler characteristic of the support: the degree of its CSM class."""
        if ideal.is_zero:
            # chi(P^n) = n + 1, also for the bare zero ideal with no variables
            return ideal.ring.arity
        return self.csm(ideal).integral()

    def predegree(self, configuration: Polynomial) -> int:
        """Predegree of the orbit closure of a d-tuple: translates through three general points.

        Three general surfaces of the d-tuple's base map meet in d^3 points less
        the excess carried by the base scheme.
        """
        d = total_degree(configuration)
        s = self.segre(dtuple_base_ideal(configuration))
        return excess_count(s, d)

    def euler_affine(self, ideal: Ideal, method: str = "limit") -> int:
        """Euler characteristic of the affine scheme S in A^n cut out by ``ideal``.

        ``limit``: chi(closure) - chi(part at infinity).
        ``hyperplane``: chi(closure union hyperplane at infinity) - n.
        """
        if method not in AFFINE_METHODS:
            raise ValueError(f"unknown affine method {method!r}, expected one of {AFFINE_METHODS}")
        if ideal.is_zero:
            raise ZeroIdeal("affine Euler characteristic of the zero ideal")
        self._check_field(ideal.ring, "Euler characteristic")
        ring = ideal.ring
        n = ring.arity
        z0 = ring.fresh_name("z0")
        basis = ideal.basis(GREVLEX).polynomials()
        closure_gens = tuple(homogenize(g, z0, first=True) for g in basis)
        closure = Ideal(ring_of(closure_gens[0]), closure_gens)
        chi_closure = self.euler(closure)

        if method == "hyperplane":
            z = closure.ring.var(z0)
            union = Ideal(closure.ring, tuple(z * g for g in closure.generators))
            return self.euler(union) - n

        limit = Ideal(ring, tuple(dehomogenize(g, z0, 0) for g in closure.generators))
        if n == 0 or dim_and_degree(limit).is_empty:
            chi_limit = 0
        else:
            chi_limit = self.euler(limit)
        logger.info(f"chi(closure) = {chi_closure}, chi(limit) = {chi_limit}")
        return chi_closure - chi_limit
