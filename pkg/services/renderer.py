"""
Result Renderer
Text and JSON renderings of classes, Euler characteristics, projective
degrees and class reports.
"""
import json
from typing import Any, Dict, Union

from sympy.polys.domains import QQ

from services.chow import ChowClass
from services.classes import ClassReport, ProjectiveDegrees

FORMATS = ("text", "json")

REPORT_LABELS = (
    ("segre", "Segre class"),
    ("fulton", "Fulton class"),
    ("csm", "Chern-Schwartz-MacPherson class"),
    ("milnor", "Milnor class"),
)


def _number(a) -> Union[int, str]:
    if QQ.denom(a) == 1:
        return int(QQ.numer(a))
    return f"{int(QQ.numer(a))}/{int(QQ.denom(a))}"


def render_class(c: ChowClass) -> str:
    """Nonzero terms by increasing power of H, e.g. ``3*H^2 - 10*H^3``."""
    parts = []
    for k, a in enumerate(c.coefficients()):
        if not a:
            continue
        value = _number(abs(a))
        if k == 0:
            body = str(value)
        else:
            power = "H" if k == 1 else f"H^{k}"
            body = power if value == 1 else f"{value}*{power}"
        if not parts:
            parts.append(f"-{body}" if a < 0 else body)
        else:
            parts.append(f" - {body}" if a < 0 else f" + {body}")
    return "".join(parts) or "0"


def class_payload(c: ChowClass) -> Dict[str, Any]:
    return {"n": c.n, "coefficients": [_number(a) for a in c.coefficients()]}


def to_payload(value, key: str = "euler") -> Dict[str, Any]:
    """JSON-ready dict for any pipeline result; bare integers go under ``key``."""
    if isinstance(value, ChowClass):
        return class_payload(value)
    if isinstance(value, ProjectiveDegrees):
        return {"degrees": list(value.g), "generator_degree": value.generator_degree}
    if isinstance(value, ClassReport):
        payload = {key: class_payload(getattr(value, key))
                   for key, _ in REPORT_LABELS if getattr(value, key) is not None}
        if value.euler is not None:
            payload["euler"] = value.euler
        return payload
    if isinstance(value, int):
        return {key: value}
    raise TypeError(f"cannot render {type(value).__name__}")


def render(value, fmt: str = "text", key: str = "euler") -> str:
    """Render a result as ``text`` or ``json``."""
    if fmt == "json":
        return json.dumps(to_payload(value, key))
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    if isinstance(value, ChowClass):
        return render_class(value)
    if isinstance(value, ProjectiveDegrees):
        return ", ".join(str(g) for g in value.g)
    if isinstance(value, ClassReport):
        lines = [f"{label} : {render_class(getattr(value, key))}"
                 for key, label in REPORT_LABELS if getattr(value, key) is not None]
        if value.euler is not None:
            lines.append(f"Euler characteristic : {value.euler}")
        return "\n".join(lines)
    if isinstance(value, int):
        return str(value)
    raise TypeError(f"cannot render {type(value).__name__}")
