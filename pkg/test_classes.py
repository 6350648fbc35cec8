"""
Tests for projective degrees, Segre/Fulton/CSM/Milnor classes, Euler
characteristics and excess counts

Pure formula tests run instantly; pipeline tests in P^1, P^2 and P^3 take
seconds. The quintic threefolds, the symmetric determinant and the
characteristic three d-tuple are marked slow.
"""
import pytest

from services.algebra_core import FieldSpec, PolynomialRing
from services.chow import ChowClass
from services.classes import (
    CharacteristicClassService,
    ProjectiveDegrees,
    csm_from_degrees,
    dtuple_base_ideal,
    excess_count,
    segre_from_degrees,
)
from services.errors import (
    GenericityFailure,
    NonHomogeneous,
    RingMismatch,
    UnsupportedField,
    VanishingJacobian,
    ZeroIdeal,
    ZeroPolynomial,
)
from services.ideal_ops import Ideal
from services.parser import parse_ideal


@pytest.fixture
def service():
    return CharacteristicClassService()


def coefficients(c: ChowClass):
    return c.integer_coefficients()


# Class formulas from projective degrees

def test_segre_of_coordinate_axes_from_degrees():
    s = segre_from_degrees((1, 2, 1, 0), 2, 3)
    assert coefficients(s) == [0, 0, 3, -10]


def test_segre_of_point_and_cubic_from_degrees():
    s = segre_from_degrees((1, 3, 6, 12), 3, 3)
    assert coefficients(s) == [0, 0, 3, -12]


def test_segre_of_hypersurface_from_degrees():
    # a single form of degree r: s = rH / (1 + rH)
    assert coefficients(segre_from_degrees((1, 0, 0, 0), 1, 3)) == [0, 1, -1, 1]
    assert coefficients(segre_from_degrees((1, 0, 0), 3, 2)) == [0, 3, -9]


def test_segre_of_empty_scheme():
    assert coefficients(segre_from_degrees((1, 1, 1), 1, 2)) == [0, 0, 0]


@pytest.mark.parametrize("degrees,expected", [
    ((1, 2, 4), [0, 3, 0]),
    ((1, 2, 0), [0, 3, 4]),
    ((1, 1, 0), [0, 2, 3]),
    ((1, 0, 0), [0, 1, 2]),
])
def test_csm_from_gradient_degrees(degrees, expected):
    assert coefficients(csm_from_degrees(degrees, 2)) == expected


@pytest.mark.parametrize("segre,count", [
    ([0, 0, 13, -70], 0),
    ([0, 0, 11, -58], 18),
    ([0, 0, 9, -34], 24),
    ([0, 0, 7, -22], 42),
])
def test_excess_count_for_quintic_surfaces(segre, count):
    assert excess_count(ChowClass.from_coefficients(segre), 5) == count


def test_excess_count_of_coordinate_axes():
    assert excess_count(ChowClass.from_coefficients([0, 0, 3, -10]), 2) == 0


def test_projective_degrees_as_class():
    shadow = ProjectiveDegrees((1, 2, 1, 0), 2)
    assert shadow.n == 3
    assert coefficients(shadow.as_class()) == [1, 2, 1, 0]


# Pipeline on small inputs

@pytest.fixture
def plane():
    return PolynomialRing(("x", "y", "z"))


def test_degrees_of_pair_of_lines(service, plane):
    x, y, z = plane.gens()
    assert service.projective_degrees(Ideal(plane, (x, y))).g == (1, 1, 0)
    shadow = service.projective_degrees(Ideal(plane, (x * y,)))
    assert shadow.g == (1, 0, 0)
    assert shadow.generator_degree == 2


def test_degrees_of_unit_ideal(service, plane):
    shadow = service.projective_degrees(Ideal.unit(plane))
    assert shadow.g == (1, 0, 0)
    assert shadow.generator_degree == 0


def test_degrees_of_squares_map(service, plane):
    x, y, z = plane.gens()
    assert service.projective_degrees(Ideal(plane, (x ** 2, y ** 2, z ** 2))).g == (1, 2, 4)


def test_degrees_reject_bad_input(service, plane):
    x, y, z = plane.gens()
    with pytest.raises(ZeroIdeal):
        service.projective_degrees(Ideal(plane))
    with pytest.raises(NonHomogeneous):
        service.projective_degrees(Ideal(plane, (x * y - z,)))


def test_pair_of_lines(service, plane):
    x, y, z = plane.gens()
    lines = Ideal(plane, (x * y,))
    assert coefficients(service.fulton(lines)) == [0, 2, 2]
    assert coefficients(service.csm(lines)) == [0, 2, 3]
    assert service.euler(lines) == 3


def test_hyperplane_segre(service):
    space = PolynomialRing(("x", "y", "z", "w"))
    s = service.segre(Ideal(space, (space.var("w"),)))
    assert coefficients(s) == [0, 1, -1, 1]


def test_smooth_plane_cubic(service, plane):
    x, y, z = plane.gens()
    cubic = Ideal(plane, (x ** 3 + y ** 3 + z ** 3,))
    assert coefficients(service.fulton(cubic)) == [0, 3, 0]
    assert coefficients(service.csm(cubic)) == [0, 3, 0]
    assert service.euler(cubic) == 0


def test_three_concurrent_lines(service, plane):
    x, y, z = plane.gens()
    cubic = Ideal(plane, (x * y * (x + y),))
    assert coefficients(service.fulton(cubic)) == [0, 3, 0]
    assert coefficients(service.csm(cubic)) == [0, 3, 4]
    assert service.euler(cubic) == 4
    report = service.milnor(cubic)
    assert coefficients(report.milnor) == [0, 0, 4]
    assert report.euler == 4


def test_hypersurface_csm(service, plane):
    x, y, z = plane.gens()
    assert coefficients(service.csm_hypersurface(z)) == [0, 1, 2]
    assert coefficients(service.csm_hypersurface(plane.constant(5))) == [0, 0, 0]
    with pytest.raises(ZeroPolynomial):
        service.csm_hypersurface(plane.zero)


def test_degenerate_ideals(service, plane):
    assert coefficients(service.csm(Ideal(plane))) == [1, 3, 3]
    assert service.euler(Ideal(plane)) == 3
    assert coefficients(service.csm(Ideal.unit(plane))) == [0, 0, 0]
    assert coefficients(service.segre(Ideal.unit(plane))) == [0, 0, 0]


def test_points_on_the_line(service):
    line = PolynomialRing(("x", "y"))
    x, y = line.gens()
    assert service.euler(Ideal(line, (x * y * (x + y),))) == 3
    assert coefficients(service.fulton(Ideal(line, (x ** 2,)))) == [0, 2]
    assert coefficients(service.csm(Ideal(line, (x ** 2,)))) == [0, 1]


def test_csm_over_prime_field_needs_force(plane):
    ring = PolynomialRing(plane.variables, FieldSpec.prime_field(32003))
    x, y, z = ring.gens()
    lines = Ideal(ring, (x * y,))
    with pytest.raises(UnsupportedField):
        CharacteristicClassService().csm(lines)
    assert coefficients(CharacteristicClassService(force=True).csm(lines)) == [0, 2, 3]
    assert coefficients(CharacteristicClassService().fulton(lines)) == [0, 2, 2]


def test_vanishing_jacobian_in_characteristic_p():
    ring = PolynomialRing(("x", "y", "z"), FieldSpec.prime_field(3))
    x, y, z = ring.gens()
    with pytest.raises(VanishingJacobian):
        CharacteristicClassService(force=True).csm(Ideal(ring, (x ** 3 + y ** 3 + z ** 3,)))


def test_seed_invariance(plane):
    x, y, z = plane.gens()
    cubic = Ideal(plane, (x * y * (x + y),))
    results = {tuple(coefficients(CharacteristicClassService(seed=seed).csm(cubic)))
               for seed in (1, 2, 271828)}
    assert results == {(0, 3, 4)}


def test_workers_do_not_change_results(plane):
    x, y, z = plane.gens()
    ideal = Ideal(plane, (x * y, x * z))
    serial = CharacteristicClassService(max_workers=1).csm(ideal)
    threaded = CharacteristicClassService(max_workers=3).csm(ideal)
    assert serial == threaded


def test_explicit_zero_settings_are_kept(plane):
    x, y, z = plane.gens()
    service = CharacteristicClassService(slice_retries=0, max_workers=0)
    assert service.slice_retries == 0
    assert service.max_workers == 0
    with pytest.raises(GenericityFailure):
        service.projective_degrees(Ideal(plane, (x, y)))


def test_degrees_methods_agree(plane):
    x, y, z = plane.gens()
    ideal = Ideal(plane, (x ** 2, x * y))
    pullback = CharacteristicClassService(degrees_method="pullback").projective_degrees(ideal)
    graph = CharacteristicClassService(degrees_method="graph").projective_degrees(ideal)
    assert pullback == graph
    assert pullback.g == (1, 1, 0)
    with pytest.raises(ValueError):
        CharacteristicClassService(degrees_method="resultant")


# Affine Euler characteristics

def test_affine_three_lines(service):
    ideal = parse_ideal("x*y*(x+y)")
    assert service.euler_affine(ideal) == 1
    assert service.euler_affine(ideal, method="hyperplane") == 1


def test_affine_fermat_cubic(service):
    ideal = parse_ideal("x^3 + y^3 - 1")
    assert service.euler_affine(ideal) == -3
    assert service.euler_affine(ideal, method="hyperplane") == -3


def test_affine_point(service):
    assert service.euler_affine(parse_ideal("x - 1, y")) == 1


def test_affine_bad_arguments(service):
    with pytest.raises(ValueError):
        service.euler_affine(parse_ideal("x*y"), method="chart")
    with pytest.raises(ZeroIdeal):
        service.euler_affine(parse_ideal("0", ["x", "y"]))


# d-tuples

def test_dtuple_base_ideal_of_two_points():
    binary = PolynomialRing(("s", "t"))
    s, t = binary.gens()
    ideal = dtuple_base_ideal(s * t)
    x, y, z, w = ideal.ring.gens()
    assert ideal.ring.variables == ("x", "y", "z", "w")
    assert list(ideal.generators) == [x * z, x * w + y * z, y * w]


def test_dtuple_base_ideal_reduces_mod_p():
    binary = PolynomialRing(("s", "t"), FieldSpec.prime_field(3))
    s, t = binary.gens()
    ideal = dtuple_base_ideal(s * (s + 3 * t) ** 2 * (s + 5 * t) * (s + 16 * t))
    assert ideal.ring.field == FieldSpec.prime_field(3)
    assert ideal.degrees() == [5] * 6
    # over GF(3) the configuration is s^3 (s + t) (s + 2t)
    assert ideal.same_as(dtuple_base_ideal(s ** 3 * (s + t) * (s + 2 * t)))


def test_dtuple_base_ideal_rejects_bad_configurations():
    binary = PolynomialRing(("s", "t"))
    s, t = binary.gens()
    with pytest.raises(ZeroPolynomial):
        dtuple_base_ideal(binary.zero)
    with pytest.raises(NonHomogeneous):
        dtuple_base_ideal(s * t + s)
    with pytest.raises(RingMismatch):
        dtuple_base_ideal(PolynomialRing(("s", "t", "u")).var("u"))


def test_predegree_of_three_points(service):
    # three reduced lines on the quadric of rank one matrices; 3! translates
    binary = PolynomialRing(("s", "t"))
    s, t = binary.gens()
    configuration = s * t * (s + t)
    assert coefficients(service.segre(dtuple_base_ideal(configuration))) == [0, 0, 3, -6]
    assert service.predegree(configuration) == 6


@pytest.mark.slow
def test_dtuple_in_characteristic_three(service):
    binary = PolynomialRing(("s", "t"), FieldSpec.prime_field(3))
    s, t = binary.gens()
    configuration = s * (s + 3 * t) ** 2 * (s + 5 * t) * (s + 16 * t)
    base = dtuple_base_ideal(configuration)
    shadow = service.projective_degrees(base)
    assert shadow.g == (1, 5, 14, 18)
    assert shadow.generator_degree == 5
    assert coefficients(segre_from_degrees(shadow.g, 5, 3)) == [0, 0, 11, -58]
    assert service.predegree(configuration) == 18


# Corpus

SPACE = ["x", "y", "z", "w"]
DISCRIMINANT = "-27*x^2*w^2 + 18*x*w*y*z + y^2*z^2 - 4*y^3*w - 4*x*z^3"

SEEDED_CORPUS = [
    pytest.param("x*y, x*z, y*z", SPACE, "segre", [0, 0, 3, -10], id="coordinate-axes"),
    pytest.param("z, x*y*(x+y)", SPACE, "segre", [0, 0, 3, -12], id="point-and-cubic"),
    pytest.param("x*y, x*z, y*z, z^2", SPACE, "fulton", [0, 0, 2, 4], id="nonreduced-axes"),
    pytest.param("x*z - y^2, y*w - z^2, x*w - y*z", SPACE, "fulton", [0, 0, 3, 2], id="twisted-cubic"),
    pytest.param("y^6 + z*x^3*y^2 + z^2*x^4", ["x", "y", "z"], "csm", [0, 6, 0], id="plane-sextic"),
    pytest.param("x*y, x*z", SPACE, "fulton", [0, 1, 4, 2], id="line-and-plane"),
    pytest.param(DISCRIMINANT, SPACE, "csm", [0, 4, 6, 4], id="discriminant"),
]


@pytest.mark.parametrize("seed", [1, 2])
@pytest.mark.parametrize("source,names,method,expected", SEEDED_CORPUS)
def test_corpus_does_not_depend_on_seed(seed, source, names, method, expected):
    service = CharacteristicClassService(seed=seed)
    ideal = parse_ideal(source, names)
    assert coefficients(getattr(service, method)(ideal)) == expected


@pytest.mark.usefixtures("verified_bases")
def test_coordinate_axes_in_space(service):
    axes = parse_ideal("x*y, x*z, y*z", SPACE)
    assert service.projective_degrees(axes).g == (1, 2, 1, 0)
    assert coefficients(service.segre(axes)) == [0, 0, 3, -10]
    assert coefficients(service.fulton(axes)) == [0, 0, 3, 2]
    assert coefficients(service.csm(axes)) == [0, 0, 3, 4]


@pytest.mark.usefixtures("verified_bases")
def test_point_and_cubic_in_space(service):
    ideal = parse_ideal("z, x*y*(x+y)", SPACE)
    assert service.projective_degrees(ideal).g == (1, 3, 6, 12)
    assert coefficients(service.segre(ideal)) == [0, 0, 3, -12]
    assert coefficients(service.fulton(ideal)) == [0, 0, 3, 0]
    assert coefficients(service.csm(ideal)) == [0, 0, 3, 4]


def test_point_and_cubic_through_the_graph():
    ideal = parse_ideal("z, x*y*(x+y)", SPACE)
    graph = CharacteristicClassService(degrees_method="graph")
    assert graph.projective_degrees(ideal).g == (1, 3, 6, 12)


@pytest.mark.usefixtures("verified_bases")
def test_nonreduced_axes(service):
    ideal = parse_ideal("x*y, x*z, y*z, z^2", SPACE)
    assert coefficients(service.fulton(ideal)) == [0, 0, 2, 4]
    assert coefficients(service.csm(ideal)) == [0, 0, 2, 3]


@pytest.mark.usefixtures("verified_bases")
def test_twisted_cubic_is_smooth(service):
    cubic = parse_ideal("x*z - y^2, y*w - z^2, x*w - y*z", SPACE)
    assert coefficients(service.fulton(cubic)) == [0, 0, 3, 2]
    assert coefficients(service.csm(cubic)) == [0, 0, 3, 2]


@pytest.mark.usefixtures("verified_bases")
def test_milnor_of_plane_sextic(service):
    report = service.milnor(parse_ideal("y^6 + z*x^3*y^2 + z^2*x^4"))
    assert coefficients(report.fulton) == [0, 6, -18]
    assert coefficients(report.csm) == [0, 6, 0]
    assert coefficients(report.milnor) == [0, 0, 18]


@pytest.mark.usefixtures("verified_bases")
def test_milnor_of_line_and_plane(service):
    report = service.milnor(parse_ideal("x*y, x*z", SPACE))
    assert service.projective_degrees(parse_ideal("x*y, x*z", SPACE)).g == (1, 1, 0, 0)
    assert coefficients(report.segre) == [0, 1, 0, -4]
    assert coefficients(report.fulton) == [0, 1, 4, 2]
    assert coefficients(report.csm) == [0, 1, 4, 4]
    assert coefficients(report.milnor) == [0, 0, 0, 2]
    assert report.euler == 4


@pytest.mark.usefixtures("verified_bases")
def test_discriminant_of_binary_cubics(service):
    discriminant = parse_ideal(DISCRIMINANT, SPACE)
    assert coefficients(service.csm(discriminant)) == [0, 4, 6, 4]
    assert service.euler(discriminant) == 4


@pytest.mark.slow
@pytest.mark.usefixtures("verified_bases")
def test_fermat_quintic(service):
    quintic = parse_ideal("x^5 + y^5 + z^5 + w^5 + t^5")
    assert coefficients(service.fulton(quintic)) == [0, 5, 0, 50, -200]
    assert coefficients(service.csm(quintic)) == [0, 5, 0, 50, -200]
    assert service.euler(quintic) == -200


@pytest.mark.slow
def test_fermat_quintic_degrees_over_prime_field():
    quintic = parse_ideal("x^5 + y^5 + z^5 + w^5 + t^5", field=FieldSpec.prime_field(32003))
    assert coefficients(CharacteristicClassService().fulton(quintic)) == [0, 5, 0, 50, -200]


@pytest.mark.slow
def test_singular_quintic(service):
    quintic = parse_ideal("x^3*t^2 + x*z^4 + w^5 - y^2*t^3", ["x", "y", "z", "w", "t"])
    assert coefficients(service.csm(quintic)) == [0, 5, 0, 38, 4]


@pytest.mark.slow
def test_symmetric_determinant(service):
    det = parse_ideal("a*d*f + 2*b*c*e - a*e^2 - d*c^2 - f*b^2", ["a", "b", "c", "d", "e", "f"])
    assert coefficients(service.csm(det)) == [0, 3, 9, 14, 12, 6]
