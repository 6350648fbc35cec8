"""
Error types
Every failure raised by the algebra services derives from AlgebraError so the
front ends can map them to exit codes and HTTP statuses in one place.
"""


class AlgebraError(Exception):
    """Base class for all toolkit errors"""


class RingMismatch(AlgebraError):
    """Operands live in different polynomial rings"""


class UnknownVariable(AlgebraError):
    """A variable name is not part of the ring"""

    def __init__(self, name: str, position: int = None):
        self.name = name
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown variable '{name}'{where}")


class NameCollision(AlgebraError):
    """A new variable name is already used by the ring"""


class ZeroPolynomial(AlgebraError):
    """Operation undefined on the zero polynomial"""


class InvalidField(AlgebraError):
    """Bad coefficient field description"""


class NonHomogeneous(AlgebraError):
    """Operation needs homogeneous input"""


class DegreeMismatch(AlgebraError):
    """Generators of a rational map do not share a degree"""


class ZeroMap(AlgebraError):
    """All components of a rational map vanish"""


class ZeroIdeal(AlgebraError):
    """Operation undefined on the zero ideal"""


class ZeroDivisor(AlgebraError):
    """Ideal quotient by the zero polynomial"""


class GenericityFailure(AlgebraError):
    """No generic slicing form found within the retry budget"""


class ImageDimensionMismatch(AlgebraError):
    """Projected slice has neither the expected dimension nor is empty"""


class VanishingJacobian(AlgebraError):
    """All partial derivatives of a hypersurface vanish"""


class NonIntegralClass(AlgebraError):
    """A class that must be integral has a fractional coefficient"""


class DimensionMismatch(AlgebraError):
    """Chow classes of different ambient spaces"""


class UnsupportedField(AlgebraError):
    """Command is not supported over the requested field"""


class GroebnerCertificateError(AlgebraError):
    """A computed basis failed its certificate check"""


class ParseError(AlgebraError):
    """Malformed ideal or class source text"""

    def __init__(self, message: str, position: int = 0):
        self.message = message
        self.position = position
        super().__init__(f"{message} at position {position}")
