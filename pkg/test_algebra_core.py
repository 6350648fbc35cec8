"""
Tests for fields, rings, monomial orders and polynomial helpers
"""
import itertools

import pytest
from sympy.polys.orderings import grevlex as sympy_grevlex
from sympy.polys.orderings import lex as sympy_lex

from services.algebra_core import (
    GREVLEX,
    LEX,
    FieldSpec,
    MonomialOrder,
    PolynomialRing,
    add,
    dehomogenize,
    homogenize,
    is_homogeneous,
    leading_term,
    partial_derivative,
    ring_of,
    total_degree,
)
from services.errors import (
    InvalidField,
    NameCollision,
    RingMismatch,
    UnknownVariable,
    ZeroPolynomial,
)


@pytest.fixture
def xyz():
    return PolynomialRing(("x", "y", "z"))


def test_field_parsing():
    assert FieldSpec.parse("q").is_rational
    assert FieldSpec.parse(" QQ ") == FieldSpec.rationals()
    assert FieldSpec.parse("fp:32003") == FieldSpec.prime_field(32003)
    assert FieldSpec.parse("fp:7").characteristic == 7
    assert str(FieldSpec.parse("fp:7")) == "fp:7"
    assert str(FieldSpec()) == "q"


@pytest.mark.parametrize("text", ["fp:8", "fp:1", "fp:2147483659", "fp:", "fp:x", "r", ""])
def test_bad_fields(text):
    with pytest.raises(InvalidField):
        FieldSpec.parse(text)


def test_prime_field_reduces_constants():
    ring = PolynomialRing(("x",), FieldSpec.prime_field(5))
    x = ring.var("x")
    assert 5 * x == ring.zero
    assert ring.constant(7) == ring.constant(2)


def test_duplicate_variables_rejected():
    with pytest.raises(NameCollision):
        PolynomialRing(("x", "x"))


def test_ring_lookup(xyz):
    assert xyz.arity == 3
    assert xyz.index("z") == 2
    with pytest.raises(UnknownVariable):
        xyz.var("w")
    assert str(xyz) == "q[x, y, z]"


def test_extend_and_drop(xyz):
    bigger = xyz.extend(["u"], first=True)
    assert bigger.variables == ("u", "x", "y", "z")
    assert bigger.drop(["u"]) == xyz
    with pytest.raises(NameCollision):
        xyz.extend(["y"])
    with pytest.raises(UnknownVariable):
        xyz.drop(["w"])


def test_fresh_name(xyz):
    assert xyz.fresh_name("s") == "s"
    assert xyz.fresh_name("x") == "x_0"
    assert xyz.fresh_name("s", taken=["s", "s_0"]) == "s_1"


def test_convert_by_name(xyz):
    x, y, z = xyz.gens()
    moved = PolynomialRing(("z", "x", "y"))
    p = moved.convert(x ** 2 * z + y)
    assert ring_of(p) == moved
    assert xyz.convert(p) == x ** 2 * z + y
    with pytest.raises(UnknownVariable):
        PolynomialRing(("x", "y")).convert(z)


def test_ring_of_ignores_order(xyz):
    x, y, z = xyz.gens()
    stored = xyz.convert(x * y - z, LEX)
    assert ring_of(stored) == xyz
    assert xyz.convert(stored) == x * y - z


def test_mixed_rings_rejected(xyz):
    other = PolynomialRing(("x", "y"))
    with pytest.raises(RingMismatch):
        add(xyz.var("x"), other.var("x"))


def test_monomial_orders(xyz):
    # x^2 vs x*y^2: lex looks at x first, grevlex at total degree
    assert LEX.compare(xyz.variables, (2, 0, 0), (1, 2, 0)) == 1
    assert GREVLEX.compare(xyz.variables, (2, 0, 0), (1, 2, 0)) == -1
    # grevlex breaks degree ties on the smallest power of the last variable
    assert GREVLEX.compare(xyz.variables, (0, 2, 0), (1, 0, 1)) == 1


def test_block_order_eliminates_front(xyz):
    order = MonomialOrder.block(["z"])
    # any monomial with z beats any monomial without it
    assert order.compare(xyz.variables, (0, 0, 1), (5, 5, 0)) == 1
    assert order.compare(xyz.variables, (3, 0, 0), (0, 2, 0)) == 1
    assert MonomialOrder.block(["z"]) == order
    assert hash(order.sympy_key(xyz.variables)) == hash(MonomialOrder.block(["z"]).sympy_key(xyz.variables))


@pytest.mark.parametrize("front_kind,back_kind", [("grevlex", "grevlex"), ("lex", "grevlex"), ("grevlex", "lex")])
def test_block_key_orders_block_by_block(front_kind, back_kind):
    variables = ("u", "a", "b", "c", "d")
    order = MonomialOrder.block(["u", "c"], front_kind, back_kind)
    key = order.sympy_key(variables)
    bases = {"lex": sympy_lex, "grevlex": sympy_grevlex}
    # positions of u and c in the ring
    front, back = (0, 3), (1, 2, 4)

    def nested(m):
        return (bases[front_kind](tuple(m[i] for i in front)), bases[back_kind](tuple(m[i] for i in back)))

    monomials = list(itertools.product(range(3), repeat=5))
    assert sorted(monomials, key=key) == sorted(monomials, key=nested)


def test_weighted_order(xyz):
    order = MonomialOrder.weighted({"z": 3})
    # weight of z^1 is 3, of x^2 only 2
    assert order.compare(xyz.variables, (0, 0, 1), (2, 0, 0)) == 1
    # equal weight: the one with less z wins, as in grevlex
    assert order.compare(xyz.variables, (3, 0, 0), (0, 0, 1)) == 1
    assert order == MonomialOrder.weighted({"z": 3})
    assert order != GREVLEX
    assert MonomialOrder.weighted({}).compare(xyz.variables, (0, 2, 0), (1, 0, 1)) == 1


def test_leading_term(xyz):
    x, y, z = xyz.gens()
    p = x * z - y ** 2
    assert leading_term(p, GREVLEX) == ((0, 2, 0), -1)
    assert leading_term(p, LEX)[0] == (1, 0, 1)
    with pytest.raises(ZeroPolynomial):
        leading_term(xyz.zero)


def test_partial_derivative_in_characteristic_p():
    ring = PolynomialRing(("x", "y"), FieldSpec.prime_field(3))
    x, y = ring.gens()
    assert partial_derivative(x ** 3 + x * y, "x") == y
    assert not partial_derivative(x ** 3, "x")


def test_partial_derivative(xyz):
    x, y, z = xyz.gens()
    assert partial_derivative(x ** 2 * y + z, "x") == 2 * x * y
    assert partial_derivative(x ** 2 * y + z, "z") == xyz.one


def test_degrees(xyz):
    x, y, z = xyz.gens()
    assert total_degree(xyz.zero) == -1
    assert total_degree(x ** 2 * y + z) == 3
    assert is_homogeneous(x * y - z ** 2)
    assert not is_homogeneous(x * y - z)
    assert is_homogeneous(xyz.zero)


def test_homogenize_round_trip():
    ring = PolynomialRing(("x", "y"))
    x, y = ring.gens()
    p = x ** 3 + y ** 3 - 1
    h = homogenize(p, "z0", first=True)
    closure = ring_of(h)
    assert closure.variables == ("z0", "x", "y")
    z0 = closure.var("z0")
    assert h == closure.var("x") ** 3 + closure.var("y") ** 3 - z0 ** 3
    assert dehomogenize(h, "z0") == p


def test_dehomogenize_at_zero():
    ring = PolynomialRing(("z0", "x", "y"))
    z0, x, y = ring.gens()
    limit = dehomogenize(x ** 3 + y ** 3 - z0 ** 3, "z0", 0)
    plane = PolynomialRing(("x", "y"))
    assert limit == plane.var("x") ** 3 + plane.var("y") ** 3


@pytest.mark.parametrize("seed", range(5))
def test_homogenize_then_dehomogenize_is_identity(seed, random_forms):
    ring = PolynomialRing(("x", "y", "z"))
    form = random_forms(seed)
    p = form(ring, 3) + form(ring, 1) + form(ring, 0, terms=1)
    for first in (True, False):
        h = homogenize(p, "t", first=first)
        assert is_homogeneous(h)
        assert total_degree(h) == 3
        assert dehomogenize(h, "t") == p
