"""Textual and JSON-object forms for exact values.

Scalars never pass through floats: rationals serialize as "p/q" strings,
Q(sqrt2) reals as {"rat": "p/q", "sqrt2": "p/q"} objects (or compact tokens
like "1/2-1/3s2" in ray-set files), complex values as {"re": ..., "im": ...}.
Parsers accept shorthand: a bare rational string where a richer scalar is
expected means its rational embedding.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction

from .coloring import ProjectionRep, TruthValue
from .errors import InvalidInputError
from .fields import GaussianRational, QuadComplex, QuadRational
from .linalg import Frame, GMatrix, GVector, QuadHermitian
from .povm import PovmDecomposition, PovmElement


def format_fraction(x: Fraction) -> str:
    return str(x)


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise InvalidInputError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"not a rational: {s!r}") from exc
    raise InvalidInputError(f"not a rational: {s!r}")


_QUAD_TOKEN = _re.compile(
    r"^(?P<rat>[+-]?\d+(?:/\d+)?(?=$|[+-]))?(?P<s2>[+-]?(?:\d+(?:/\d+)?)?s2)?$"
)


def parse_quad_token(s: str) -> QuadRational:
    """Parse compact tokens: '3', '-1/2', 's2', '-s2', '3/4s2', '1+s2',
    '1/2-1/3s2'."""
    s = s.strip()
    m = _QUAD_TOKEN.match(s)
    if not m or (m.group("rat") is None and m.group("s2") is None):
        raise InvalidInputError(f"bad Q(sqrt2) token: {s!r}")
    rat = Fraction(m.group("rat")) if m.group("rat") else Fraction(0)
    s2 = Fraction(0)
    if m.group("s2"):
        coef = m.group("s2")[:-2]
        if coef in ("", "+"):
            s2 = Fraction(1)
        elif coef == "-":
            s2 = Fraction(-1)
        else:
            s2 = Fraction(coef)
    return QuadRational(rat, s2)


def format_quad_token(q: QuadRational) -> str:
    """Compact inverse of parse_quad_token."""
    if q.sqrt2 == 0:
        return str(q.rat)
    if q.sqrt2 == 1:
        s2 = "s2"
    elif q.sqrt2 == -1:
        s2 = "-s2"
    elif q.sqrt2 > 0:
        s2 = f"{q.sqrt2}s2"
    else:
        s2 = f"-{-q.sqrt2}s2"
    if q.rat == 0:
        return s2
    sign = "+" if q.sqrt2 > 0 else ""
    return f"{q.rat}{sign}{s2}"


def quad_to_obj(q: QuadRational):
    return {"rat": str(q.rat), "sqrt2": str(q.sqrt2)}


def quad_from_obj(obj) -> QuadRational:
    if isinstance(obj, str):
        return parse_quad_token(obj)
    if isinstance(obj, int) and not isinstance(obj, bool):
        return QuadRational(obj)
    if isinstance(obj, dict):
        extra = set(obj) - {"rat", "sqrt2"}
        if extra:
            raise InvalidInputError(f"unexpected keys in Q(sqrt2) scalar: {sorted(extra)}")
        return QuadRational(
            parse_fraction(obj.get("rat", 0)), parse_fraction(obj.get("sqrt2", 0))
        )
    raise InvalidInputError(f"not a Q(sqrt2) scalar: {obj!r}")


def gaussian_to_obj(z: GaussianRational):
    return {"re": str(z.re), "im": str(z.im)}


def gaussian_from_obj(obj) -> GaussianRational:
    if isinstance(obj, (str, int)):
        return GaussianRational(parse_fraction(obj))
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise InvalidInputError(f"unexpected keys in complex scalar: {sorted(extra)}")
        return GaussianRational(
            parse_fraction(obj.get("re", 0)), parse_fraction(obj.get("im", 0))
        )
    raise InvalidInputError(f"not a complex rational: {obj!r}")


def qcomplex_to_obj(z: QuadComplex):
    return {"re": quad_to_obj(z.re), "im": quad_to_obj(z.im)}


def qcomplex_from_obj(obj) -> QuadComplex:
    if isinstance(obj, (str, int)):
        return QuadComplex(quad_from_obj(obj))
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise InvalidInputError(f"unexpected keys in Q(sqrt2) complex: {sorted(extra)}")
        return QuadComplex(
            quad_from_obj(obj.get("re", 0)), quad_from_obj(obj.get("im", 0))
        )
    raise InvalidInputError(f"not a Q(sqrt2) complex scalar: {obj!r}")


def vector_to_obj(v: GVector):
    return [gaussian_to_obj(e) for e in v]


def vector_from_obj(obj) -> GVector:
    if not isinstance(obj, list):
        raise InvalidInputError("vector must be a JSON array")
    return GVector(gaussian_from_obj(e) for e in obj)


def vector_from_reals_obj(obj) -> GVector:
    """Vector from a JSON array of 2n exact real coordinates."""
    if not isinstance(obj, list):
        raise InvalidInputError("vector must be a JSON array of 2n reals")
    return GVector.from_reals([parse_fraction(x) for x in obj])


def frame_to_obj(f: Frame):
    return {
        "kind": "frame",
        "dimension": f.dimension,
        "legs": [vector_to_obj(leg) for leg in f],
    }


def frame_from_obj(obj) -> Frame:
    if not isinstance(obj, dict) or obj.get("kind") != "frame":
        raise InvalidInputError("expected a frame object with kind='frame'")
    legs = obj.get("legs")
    if not isinstance(legs, list):
        raise InvalidInputError("frame object must carry a 'legs' array")
    return Frame(vector_from_obj(leg) for leg in legs)


def gmatrix_to_obj(m: GMatrix):
    return [[gaussian_to_obj(e) for e in row] for row in m.rows]


def gmatrix_from_obj(obj) -> GMatrix:
    if not isinstance(obj, list):
        raise InvalidInputError("matrix must be a JSON array of rows")
    return GMatrix((gaussian_from_obj(e) for e in row) for row in obj)


def quadherm_to_obj(m: QuadHermitian):
    return [[qcomplex_to_obj(e) for e in row] for row in m.rows]


def quadherm_from_obj(obj) -> QuadHermitian:
    if not isinstance(obj, list):
        raise InvalidInputError("matrix must be a JSON array of rows")
    return QuadHermitian((qcomplex_from_obj(e) for e in row) for row in obj)


def povm_to_obj(d: PovmDecomposition):
    return {
        "kind": "povm",
        "dimension": d.n,
        "elements": [quadherm_to_obj(e.matrix) for e in d],
    }


def povm_from_obj(obj) -> PovmDecomposition:
    if not isinstance(obj, dict) or obj.get("kind") != "povm":
        raise InvalidInputError("expected a POVM object with kind='povm'")
    elements = obj.get("elements")
    if not isinstance(elements, list):
        raise InvalidInputError("POVM object must carry an 'elements' array")
    return PovmDecomposition(
        PovmElement(quadherm_from_obj(e)) for e in elements
    )


def projection_rep_from_obj(obj) -> ProjectionRep:
    if isinstance(obj, dict):
        if obj.get("kind") != "projection":
            raise InvalidInputError("expected kind='projection'")
        obj = obj.get("matrix")
    return ProjectionRep(gmatrix_from_obj(obj))


def projection_rep_to_obj(rep: ProjectionRep):
    return {"kind": "projection", "matrix": gmatrix_to_obj(rep.matrix)}


def truth_to_str(t: TruthValue) -> str:
    return t.value


def truths_to_obj(values) -> list:
    return [truth_to_str(v) for v in values]
