"""
Ideal Parser
Reads generator lists such as ``x*y, x*z, y*z`` or ``ideal(x^5+y^5+z^5)`` into
an Ideal, and classes such as ``3*H^2 - 10*H^3`` into a ChowClass.

Grammar (whitespace ignored, ``**`` accepted for ``^``)::

    ideal  := ['ideal' '('] poly (',' poly)* [')']
    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*'? factor)*
    factor := atom ('^' nat)?
    atom   := variable | integer | '(' poly ')'
"""
import logging
import re
from typing import List, NamedTuple, Optional, Sequence

from services.algebra_core import FieldSpec, Polynomial, PolynomialRing
from services.chow import ChowClass
from services.errors import ParseError, UnknownVariable
from services.ideal_ops import Ideal

logger = logging.getLogger(__name__)

TOKENS = {
    "name": r"[A-Za-z_][A-Za-z0-9_]*",
    "int": r"\d+",
    "pow": r"\*\*|\^",
    "mul": r"\*",
    "plus": r"\+",
    "minus": r"-",
    "lpar": r"\(",
    "rpar": r"\)",
    "comma": r",",
    "skip": r"\s+",
    "error": r".",
}
TOKEN_RE = re.compile("|".join(f"(?P<{kind}>{pattern})" for kind, pattern in TOKENS.items()))
ATOM_START = {"name", "int", "lpar"}


class Token(NamedTuple):
    kind: str
    value: str
    position: int


def tokenize(source: str) -> List[Token]:
    tokens = []
    for mo in TOKEN_RE.finditer(source):
        kind = mo.lastgroup
        if kind == "skip":
            continue
        if kind == "error":
            raise ParseError(f"unexpected character {mo.group()!r}", mo.start())
        tokens.append(Token(kind, mo.group(), mo.start()))
    tokens.append(Token("end", "", len(source)))
    return tokens


def _strip_wrapper(tokens: List[Token]) -> List[Token]:
    if not (len(tokens) >= 4 and tokens[0].kind == "name" and tokens[0].value == "ideal"
            and tokens[1].kind == "lpar"):
        return tokens
    depth = 0
    for i, token in enumerate(tokens[1:], start=1):
        depth += {"lpar": 1, "rpar": -1}.get(token.kind, 0)
        if depth == 0:
            # the wrapper only counts when its parenthesis closes the input
            return tokens[2:i] + tokens[i + 1:] if i == len(tokens) - 2 else tokens
    return tokens


def infer_variables(tokens: Sequence[Token]) -> List[str]:
    """Variable names in order of first appearance."""
    return list(dict.fromkeys(t.value for t in tokens if t.kind == "name"))


class _Parser:
    def __init__(self, tokens: List[Token], ring: PolynomialRing):
        self.tokens = tokens
        self.ring = ring
        self.index = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.token
        self.index += 1
        return token

    def expect(self, kind: str) -> Token:
        if self.token.kind != kind:
            found = self.token.value or "end of input"
            raise ParseError(f"expected {kind}, found {found!r}", self.token.position)
        return self.advance()

    def generators(self) -> List[Polynomial]:
        gens = [self.poly()]
        while self.token.kind == "comma":
            self.advance()
            gens.append(self.poly())
        if self.token.kind != "end":
            raise ParseError(f"unexpected {self.token.value!r}", self.token.position)
        return gens

    def poly(self) -> Polynomial:
        negate = False
        if self.token.kind in ("plus", "minus"):
            negate = self.advance().kind == "minus"
        result = self.term()
        if negate:
            result = -result
        while self.token.kind in ("plus", "minus"):
            op = self.advance().kind
            right = self.term()
            result = result + right if op == "plus" else result - right
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.token.kind == "mul" or self.token.kind in ATOM_START:
            if self.token.kind == "mul":
                self.advance()
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.token.kind == "pow":
            self.advance()
            exponent = self.expect("int")
            base = base ** int(exponent.value)
        return base

    def atom(self) -> Polynomial:
        token = self.token
        if token.kind == "int":
            self.advance()
            return self.ring.constant(int(token.value))
        if token.kind == "name":
            self.advance()
            if token.value not in self.ring.variables:
                raise UnknownVariable(token.value, token.position)
            return self.ring.var(token.value)
        if token.kind == "lpar":
            self.advance()
            inner = self.poly()
            self.expect("rpar")
            return inner
        found = token.value or "end of input"
        raise ParseError(f"unexpected {found!r}", token.position)


def parse_polynomials(source: str, ring: PolynomialRing) -> List[Polynomial]:
    if not source or not source.strip():
        raise ParseError("empty input", 0)
    return _Parser(_strip_wrapper(tokenize(source)), ring).generators()


def parse_ideal(source: str, variables: Optional[Sequence[str]] = None,
                field: FieldSpec = FieldSpec()) -> Ideal:
    """Parse a generator list into an Ideal.

    Args:
        source: comma separated generators, optionally wrapped in ``ideal(...)``
        variables: ring variables; inferred in order of first appearance when omitted
        field: coefficient field; integer literals are reduced into it

    Returns:
        Ideal over PolynomialRing(variables, field)

    Raises:
        ParseError: malformed input (with the character offset)
        UnknownVariable: a name outside an explicit variable list
    """
    if not source or not source.strip():
        raise ParseError("empty input", 0)
    tokens = _strip_wrapper(tokenize(source))
    if variables is None:
        variables = infer_variables(tokens)
        if not variables:
            # only a bare zero makes sense without variables
            constants = _Parser(tokens, PolynomialRing((), field)).generators()
            if any(constants):
                raise ParseError("no variables in input; give them explicitly", 0)
            logger.debug("Parsed the zero ideal with no variables")
            return Ideal(PolynomialRing((), field))
    ring = PolynomialRing(tuple(variables), field)
    gens = _Parser(tokens, ring).generators()
    logger.debug(f"Parsed {len(gens)} generator(s) over {ring}")
    return Ideal(ring, tuple(gens))


CLASS_RING = PolynomialRing(("H",))


def parse_class(source: str, n: int) -> ChowClass:
    """Parse a polynomial in H into a class of P^n (terms above H^n are dropped)."""
    polys = parse_polynomials(source, CLASS_RING)
    if len(polys) != 1:
        raise ParseError("expected a single polynomial in H", 0)
    p = polys[0]
    return ChowClass.from_coefficients(
        [p.get((k,), 0) for k in range(n + 1)], n)


def _integer_coefficients(p: Polynomial) -> List:
    domain = p.ring.domain
    if getattr(domain, "is_FiniteField", False):
        return [(m, int(domain.to_int(c))) for m, c in p.terms()]
    _, p = p.clear_denoms()
    return [(m, int(domain.numer(c))) for m, c in p.terms()]


def render_polynomial(p: Polynomial) -> str:
    """Source text of p with denominators cleared."""
    if not p:
        return "0"
    names = [str(s) for s in p.ring.symbols]
    parts = []
    for monom, coeff in _integer_coefficients(p):
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        magnitude = abs(coeff)
        if magnitude != 1 or not factors:
            factors.insert(0, str(magnitude))
        body = "*".join(factors)
        if not parts:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(parts)


def render_source(ideal: Ideal) -> str:
    """Parseable text of an ideal's generators."""
    if ideal.is_zero:
        return "0"
    return ", ".join(render_polynomial(g) for g in ideal.generators)
