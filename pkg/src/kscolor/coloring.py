"""Truth-value colorings of rays, frames, and projection matrices.

A ray representative v in C^n with 2n real coordinates (r1, ..., r2n) is
TRUE when every coordinate is nonzero, v3(r1) <= -1, and v3(ri) >= 0 for all
i >= 2.  Trueness is a property of the representative, not of the ray: some
rescaling of a ray may be TRUE while others are not.

Two TRUE representatives are never orthogonal: the real part of their inner
product has 3-adic valuation v3(r1) + v3(r1') <= -2 and is therefore nonzero.
``nonorthogonality_certificate`` returns that exact real part together with
its valuation.  As a consequence an exactly orthogonal frame contains at most
one TRUE leg, so frames are colored TRUE/FALSE when one leg is TRUE and
UNDETERMINED otherwise.

A projection is represented by a Hermitian matrix M with M^2 = c*M for a
positive rational c.  The matrix coloring calls M TRUE when every component
(real and imaginary parts of every entry, except the identically zero
diagonal imaginary parts) is nonzero and the (1,1) entry's valuation is at
least one below the valuation of every other component.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError, NotApplicableError
from .fields import GaussianRational, v3
from .linalg import Frame, GMatrix, GVector, inner_product


class TruthValue(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNDETERMINED = "UNDETERMINED"
    UNDETERMINED_NO_WITNESS = "UNDETERMINED-NO-WITNESS"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ColoredRay:
    """A ray representative together with its assigned truth value."""

    vector: GVector
    value: TruthValue


def classify_ray(v: GVector) -> TruthValue:
    """Color a single ray representative TRUE or UNDETERMINED.

    The zero vector is rejected at GVector construction, so every input here
    is a valid representative.
    """
    coords = v.real_coordinates()
    first = coords[0]
    if first == 0 or v3(first) > -1:
        return TruthValue.UNDETERMINED
    for c in coords[1:]:
        if c == 0 or v3(c) < 0:
            return TruthValue.UNDETERMINED
    return TruthValue.TRUE


_RESCALE_RANGE = range(-8, 9)


def certifying_rescalings(v: GVector) -> list[GVector]:
    """All TRUE representatives of the ray of v among rescalings by
    +-3^k and +-i*3^k for k in [-8, 8]."""
    out = []
    for k in _RESCALE_RANGE:
        mag = Fraction(3) ** k
        for unit in (
            GaussianRational(mag),
            GaussianRational(-mag),
            GaussianRational(0, mag),
            GaussianRational(0, -mag),
        ):
            w = v.scaled(unit)
            if classify_ray(w) is TruthValue.TRUE:
                out.append(w)
    return out


def classify_in_frame(frame: Frame) -> list[TruthValue]:
    """Color every leg of an exactly orthogonal frame.

    When some leg is TRUE it is unique (no two TRUE representatives are
    orthogonal) and all other legs are FALSE.  When no leg is TRUE the whole
    frame is UNDETERMINED.
    """
    base = [classify_ray(leg) for leg in frame]
    n_true = sum(1 for b in base if b is TruthValue.TRUE)
    if n_true == 0:
        return [TruthValue.UNDETERMINED] * len(base)
    if n_true > 1:
        # Impossible for exactly orthogonal legs; guarded for safety.
        raise AssertionError("two TRUE legs in an orthogonal frame")
    return [
        TruthValue.TRUE if b is TruthValue.TRUE else TruthValue.FALSE for b in base
    ]


def truth_sum(frame: Frame) -> int:
    """Number of TRUE legs in a suitable frame; always 1.

    Raises NotApplicableError when the frame has no TRUE leg, since the
    one-per-frame identity only applies to suitable frames.
    """
    values = classify_in_frame(frame)
    total = sum(1 for t in values if t is TruthValue.TRUE)
    if total == 0:
        raise NotApplicableError("frame has no TRUE leg; truth sum undefined")
    return total


def nonorthogonality_certificate(u: GVector, v: GVector) -> tuple[Fraction, int]:
    """Exact evidence that two TRUE representatives are not orthogonal.

    Returns (re, val) where re is the real part of <u, v> and val = v3(re).
    For TRUE inputs val <= -2 always holds, so re is nonzero.
    """
    if classify_ray(u) is not TruthValue.TRUE or classify_ray(v) is not TruthValue.TRUE:
        raise InvalidInputError("both representatives must be TRUE")
    re = inner_product(u, v).re
    val = v3(re)
    return re, int(val)


class ProjectionRep:
    """Hermitian matrix M with M^2 = c*M for an exact rational c > 0.

    The matrix M/c is an orthogonal projector; M itself is the stored
    representative, and trueness depends on the representative.  ``rank`` is
    trace(M)/c, a positive integer.
    """

    __slots__ = ("matrix", "idem_scale", "rank")

    def __init__(self, matrix: GMatrix):
        if not isinstance(matrix, GMatrix):
            matrix = GMatrix(matrix)
        if matrix.is_zero():
            raise InvalidInputError("the zero matrix does not represent a projection")
        if not matrix.is_hermitian():
            raise InvalidInputError("projection representative must be Hermitian")
        msq = matrix @ matrix
        first = next(
            (i, j)
            for i in range(matrix.n)
            for j in range(matrix.n)
            if not matrix.entry(i, j).is_zero()
        )
        ratio = msq.entry(*first) * matrix.entry(*first).inverse()
        if ratio.im != 0 or ratio.re <= 0:
            raise InvalidInputError("matrix does not satisfy M^2 = c*M with c > 0")
        c = ratio.re
        if msq != matrix.scaled(GaussianRational(c)):
            raise InvalidInputError("matrix does not satisfy M^2 = c*M")
        tr = matrix.trace()
        rank = tr.re / c
        if tr.im != 0 or rank.denominator != 1 or rank <= 0:
            raise InvalidInputError("trace/c must be a positive integer")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "idem_scale", c)
        object.__setattr__(self, "rank", int(rank))

    def __setattr__(self, name, value):
        raise AttributeError("ProjectionRep is immutable")

    def projector(self) -> GMatrix:
        """The idempotent projector M / c."""
        return self.matrix.scaled(GaussianRational(1 / self.idem_scale))

    @classmethod
    def from_ray(cls, v: GVector) -> "ProjectionRep":
        from .linalg import projector_of

        return cls(projector_of(v))

    def __eq__(self, other):
        if not isinstance(other, ProjectionRep):
            return NotImplemented
        return self.matrix == other.matrix

    def __repr__(self):
        return f"ProjectionRep({self.matrix!r})"


def _component_valuations(m: GMatrix):
    """Valuations of all components other than the (1,1) real part, or None
    when some required component vanishes.

    Diagonal imaginary parts are identically zero for Hermitian matrices and
    are excluded rather than treated as vanishing components.
    """
    vals = []
    for i in range(m.n):
        for j in range(m.n):
            e = m.entry(i, j)
            if e.re == 0:
                return None
            if not (i == 0 and j == 0):
                vals.append(v3(e.re))
            if i != j:
                if e.im == 0:
                    return None
                vals.append(v3(e.im))
    return vals


def classify_projection_matrix(rep: ProjectionRep) -> TruthValue:
    """Color a projection representative TRUE or UNDETERMINED.

    TRUE requires every component nonzero and v3(a11) <= v3(x) - 1 for every
    other component x; equivalently a11's denominator carries strictly more
    powers of 3 than any other component's.
    """
    m = rep.matrix
    a11 = m.entry(0, 0).re
    if a11 == 0:
        return TruthValue.UNDETERMINED
    others = _component_valuations(m)
    if others is None:
        return TruthValue.UNDETERMINED
    if v3(a11) <= min(others, default=v3(a11) + 1) - 1:
        return TruthValue.TRUE
    return TruthValue.UNDETERMINED


def witness_shift(rep: ProjectionRep) -> Fraction:
    """The scale 3^(-2 - v3(a11)) attached to a TRUE matrix coloring.

    With t the returned value, the (1,1) real part of t*M has valuation
    exactly -2 while every other component has valuation >= -1: only the
    (1,1) denominator is divisible by 9.
    """
    if classify_projection_matrix(rep) is not TruthValue.TRUE:
        raise InvalidInputError("witness shift is defined for TRUE representatives")
    val = v3(rep.matrix.entry(0, 0).re)
    return Fraction(3) ** (-2 - int(val))


def classify_decomposition(reps: "list[ProjectionRep]") -> list[TruthValue]:
    """Color the members of an exact projective decomposition of identity.

    Requires sum of M_i/c_i to be the identity and M_i M_j = 0 for i != j.
    With a TRUE member present it is unique and the rest are FALSE; with no
    TRUE member all are UNDETERMINED.
    """
    if not reps:
        raise InvalidInputError("empty decomposition")
    n = reps[0].matrix.n
    if any(r.matrix.n != n for r in reps):
        raise InvalidInputError("decomposition members must share one dimension")
    zero = GMatrix.zeros(n)
    for i in range(len(reps)):
        for j in range(len(reps)):
            if i != j and reps[i].matrix @ reps[j].matrix != zero:
                raise InvalidInputError(f"members {i} and {j} are not orthogonal")
    total = zero
    for r in reps:
        total = total + r.projector()
    if total != GMatrix.identity(n):
        raise InvalidInputError("projectors do not sum to the identity")

    base = [classify_projection_matrix(r) for r in reps]
    n_true = sum(1 for b in base if b is TruthValue.TRUE)
    if n_true == 0:
        return [TruthValue.UNDETERMINED] * len(base)
    if n_true > 1:
        raise AssertionError("two TRUE members in an orthogonal decomposition")
    return [
        TruthValue.TRUE if b is TruthValue.TRUE else TruthValue.FALSE for b in base
    ]
