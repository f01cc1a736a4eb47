"""Exact linear algebra over the Gaussian rationals and over Q(sqrt2).

Vectors and matrices are immutable.  Rays are stored unnormalized: scaling a
vector by a nonzero scalar does not change the ray it represents, and every
operation that compares rays does so through the scale and phase invariant
squared projector distance ``ray_dist2``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateInputError, InvalidInputError
from .fields import (
    GAUSS_ZERO,
    GaussianRational,
    QUAD_ZERO,
    QuadComplex,
    QuadRational,
)


def _coerce_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    raise InvalidInputError(f"matrix/vector entries must be GaussianRational, got {type(x).__name__}")


class GVector:
    """Vector in C^n with GaussianRational entries, n >= 2, not all zero."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable):
        ent = tuple(_coerce_gaussian(e) for e in entries)
        if len(ent) < 2:
            raise InvalidInputError("vectors must have at least 2 entries")
        if all(e.is_zero() for e in ent):
            raise InvalidInputError("the zero vector does not represent a ray")
        object.__setattr__(self, "entries", ent)

    def __setattr__(self, name, value):
        raise AttributeError("GVector is immutable")

    @classmethod
    def from_reals(cls, coords: Sequence) -> "GVector":
        """Build a vector from 2n interleaved real coordinates
        (re1, im1, re2, im2, ...)."""
        coords = list(coords)
        if len(coords) % 2 != 0 or len(coords) < 4:
            raise InvalidInputError("expected an even number (>= 4) of real coordinates")
        return cls(
            GaussianRational(coords[2 * k], coords[2 * k + 1])
            for k in range(len(coords) // 2)
        )

    def real_coordinates(self) -> tuple[Fraction, ...]:
        """The 2n real coordinates (re1, im1, re2, im2, ...)."""
        out = []
        for e in self.entries:
            out.append(e.re)
            out.append(e.im)
        return tuple(out)

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.real_coordinates()]

    def scaled(self, s) -> "GVector":
        s = GaussianRational._coerce(s)
        if s.is_zero():
            raise InvalidInputError("cannot scale a ray representative by zero")
        return GVector(e * s for e in self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, GVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"GVector({list(self.entries)!r})"


def inner_product(u: GVector, v: GVector) -> GaussianRational:
    """Hermitian inner product, conjugate linear in the first argument."""
    if len(u) != len(v):
        raise InvalidInputError("inner product of vectors of different lengths")
    acc = GAUSS_ZERO
    for a, b in zip(u, v):
        acc = acc + a.conjugate() * b
    return acc


def norm2(v: GVector) -> Fraction:
    """Squared norm <v, v>, an exact positive rational."""
    acc = Fraction(0)
    for a in v:
        acc += a.abs2()
    return acc


def same_ray(u: GVector, v: GVector) -> bool:
    """Whether u and v represent the same projective ray (exactly
    proportional over the Gaussian rationals)."""
    if len(u) != len(v):
        return False
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True


def ray_dist2(u: GVector, v: GVector) -> Fraction:
    """Squared Frobenius distance between the rank-1 projectors onto u and v.

    Equals 2 * (1 - |<u,v>|^2 / (<u,u> <v,v>)), an exact rational in [0, 2],
    invariant under rescaling either argument.
    """
    if len(u) != len(v):
        raise InvalidInputError("ray distance of vectors of different lengths")
    ip = inner_product(u, v)
    return 2 * (1 - Fraction(ip.abs2(), norm2(u) * norm2(v)))


class Frame:
    """An exactly orthogonal set of n nonzero vectors in C^n.

    Legs are kept unnormalized; orthogonality is verified exactly on
    construction.
    """

    __slots__ = ("legs",)

    def __init__(self, legs: Iterable[GVector]):
        legs = tuple(legs)
        if not legs:
            raise InvalidInputError("a frame needs at least one leg")
        dim = len(legs[0])
        if any(len(leg) != dim for leg in legs):
            raise InvalidInputError("frame legs must share one ambient dimension")
        if len(legs) != dim:
            raise InvalidInputError(
                f"a frame in dimension {dim} needs exactly {dim} legs, got {len(legs)}"
            )
        for i in range(len(legs)):
            for j in range(i + 1, len(legs)):
                if not inner_product(legs[i], legs[j]).is_zero():
                    raise InvalidInputError(f"legs {i} and {j} are not orthogonal")
        object.__setattr__(self, "legs", legs)

    def __setattr__(self, name, value):
        raise AttributeError("Frame is immutable")

    @property
    def dimension(self) -> int:
        return len(self.legs)

    def __len__(self):
        return len(self.legs)

    def __iter__(self):
        return iter(self.legs)

    def __getitem__(self, k):
        return self.legs[k]

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.legs == other.legs

    def __repr__(self):
        return f"Frame({list(self.legs)!r})"


def gram_schmidt(vectors: Sequence[GVector]) -> Frame:
    """Exact Gram-Schmidt orthogonalization without normalization.

    The first output leg equals the first input verbatim; leg k lies in the
    span of inputs 1..k.  Linearly dependent inputs raise
    DegenerateInputError.
    """
    vectors = [v if isinstance(v, GVector) else GVector(v) for v in vectors]
    if not vectors:
        raise InvalidInputError("gram_schmidt needs at least one vector")
    dim = len(vectors[0])
    if len(vectors) != dim:
        raise InvalidInputError(
            f"gram_schmidt in dimension {dim} needs exactly {dim} vectors"
        )
    done: list[list[GaussianRational]] = []
    norms: list[Fraction] = []
    for v in vectors:
        w = list(v)
        for u, n2 in zip(done, norms):
            ip = GAUSS_ZERO
            for a, b in zip(u, w):
                ip = ip + a.conjugate() * b
            if not ip.is_zero():
                coef = GaussianRational(ip.re / n2, ip.im / n2)
                w = [wb - coef * ua for wb, ua in zip(w, u)]
        if all(e.is_zero() for e in w):
            raise DegenerateInputError("input vectors are linearly dependent")
        done.append(w)
        norms.append(sum((e.abs2() for e in w), Fraction(0)))
    return Frame(GVector(w) for w in done)


class GMatrix:
    """Square matrix over the Gaussian rationals."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(tuple(_coerce_gaussian(e) for e in row) for row in rows)
        n = len(rs)
        if n < 1 or any(len(r) != n for r in rs):
            raise InvalidInputError("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rs)

    def __setattr__(self, name, value):
        raise AttributeError("GMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "GMatrix":
        return cls(
            [GaussianRational(1 if i == j else 0) for j in range(n)] for i in range(n)
        )

    @classmethod
    def zeros(cls, n: int) -> "GMatrix":
        return cls([GAUSS_ZERO] * n for _ in range(n))

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> GaussianRational:
        return self.rows[i][j]

    def __add__(self, other):
        if not isinstance(other, GMatrix) or other.n != self.n:
            return NotImplemented
        return GMatrix(
            (a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def __sub__(self, other):
        if not isinstance(other, GMatrix) or other.n != self.n:
            return NotImplemented
        return GMatrix(
            (a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def __matmul__(self, other):
        if not isinstance(other, GMatrix) or other.n != self.n:
            return NotImplemented
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = GAUSS_ZERO
                for a, b in zip(self.rows[i], cols[j]):
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return GMatrix(out)

    def scaled(self, s) -> "GMatrix":
        s = GaussianRational._coerce(s)
        return GMatrix((e * s for e in row) for row in self.rows)

    def dagger(self) -> "GMatrix":
        n = self.n
        return GMatrix(
            (self.rows[j][i].conjugate() for j in range(n)) for i in range(n)
        )

    def trace(self) -> GaussianRational:
        acc = GAUSS_ZERO
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def is_hermitian(self) -> bool:
        n = self.n
        for i in range(n):
            for j in range(i, n):
                if self.rows[i][j] != self.rows[j][i].conjugate():
                    return False
        return True

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def __eq__(self, other):
        if not isinstance(other, GMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"GMatrix({[list(r) for r in self.rows]!r})"


def matrix_inverse(a: GMatrix) -> GMatrix:
    """Exact inverse by Gauss-Jordan elimination.

    Raises DegenerateInputError for singular input.
    """
    n = a.n
    work = [list(row) + [GaussianRational(1 if i == j else 0) for j in range(n)]
            for i, row in enumerate(a.rows)]
    for col in range(n):
        pivot_row = next(
            (r for r in range(col, n) if not work[r][col].is_zero()), None
        )
        if pivot_row is None:
            raise DegenerateInputError("matrix is singular")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        inv_p = work[col][col].inverse()
        work[col] = [e * inv_p for e in work[col]]
        for r in range(n):
            if r != col and not work[r][col].is_zero():
                f = work[r][col]
                work[r] = [e - f * p for e, p in zip(work[r], work[col])]
    return GMatrix(row[n:] for row in work)


def cayley_unitary(h: GMatrix) -> GMatrix:
    """Cayley transform (I - iH)(I + iH)^(-1) of a Hermitian matrix.

    The result is exactly unitary with GaussianRational entries; I + iH is
    always invertible for Hermitian H.
    """
    if not h.is_hermitian():
        raise InvalidInputError("cayley_unitary requires a Hermitian matrix")
    i_unit = GaussianRational(0, 1)
    ih = h.scaled(i_unit)
    ident = GMatrix.identity(h.n)
    return (ident - ih) @ matrix_inverse(ident + ih)


def projector_of(v: GVector) -> GMatrix:
    """Rank-1 orthogonal projector onto the ray of v, exact."""
    inv_n2 = GaussianRational(1 / norm2(v))
    return GMatrix(((a * b.conjugate()) * inv_n2 for b in v) for a in v)


def _coerce_quad_complex(x) -> QuadComplex:
    if isinstance(x, QuadComplex):
        return x
    return QuadComplex._coerce(x)


class QuadHermitian:
    """Hermitian matrix with QuadComplex entries, verified exactly."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(tuple(_coerce_quad_complex(e) for e in row) for row in rows)
        n = len(rs)
        if n < 1 or any(len(r) != n for r in rs):
            raise InvalidInputError("matrix must be square and nonempty")
        for i in range(n):
            for j in range(i, n):
                if rs[i][j] != rs[j][i].conjugate():
                    raise InvalidInputError(f"not Hermitian at entry ({i}, {j})")
        object.__setattr__(self, "rows", rs)

    def __setattr__(self, name, value):
        raise AttributeError("QuadHermitian is immutable")

    @classmethod
    def identity(cls, n: int) -> "QuadHermitian":
        return cls(
            [QuadComplex(1 if i == j else 0) for j in range(n)] for i in range(n)
        )

    @classmethod
    def zeros(cls, n: int) -> "QuadHermitian":
        return cls([QuadComplex(0)] * n for _ in range(n))

    @classmethod
    def from_gmatrix(cls, m: GMatrix) -> "QuadHermitian":
        if not m.is_hermitian():
            raise InvalidInputError("matrix is not Hermitian")
        return cls(
            (QuadComplex.from_gaussian(e) for e in row) for row in m.rows
        )

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> QuadComplex:
        return self.rows[i][j]

    def __add__(self, other):
        if not isinstance(other, QuadHermitian) or other.n != self.n:
            return NotImplemented
        return QuadHermitian(
            (a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def __sub__(self, other):
        if not isinstance(other, QuadHermitian) or other.n != self.n:
            return NotImplemented
        return QuadHermitian(
            (a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def scaled(self, s) -> "QuadHermitian":
        """Scale by a real QuadRational (keeps the matrix Hermitian)."""
        if not isinstance(s, QuadRational):
            s = QuadRational(s)
        return QuadHermitian((e * QuadComplex(s) for e in row) for row in self.rows)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def __eq__(self, other):
        if not isinstance(other, QuadHermitian):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"QuadHermitian({[list(r) for r in self.rows]!r})"


def psd_check(a: QuadHermitian) -> bool:
    """Exact positive semidefiniteness by pivoted LDL* elimination.

    Picks any strictly positive diagonal pivot, forms the Schur complement,
    and repeats.  A strictly negative diagonal entry disproves PSD; if all
    remaining diagonal entries are zero the block must vanish identically.
    """
    n = a.n
    work = [[a.entry(i, j) for j in range(n)] for i in range(n)]
    active = list(range(n))
    while active:
        pivot = None
        for i in active:
            s = work[i][i].re.sign()
            if s < 0:
                return False
            if s > 0 and pivot is None:
                pivot = i
        if pivot is None:
            # Zero diagonal block is PSD only if it is the zero block.
            return all(
                work[i][j].is_zero() for i in active for j in active
            )
        inv_p = work[pivot][pivot].re.inverse()
        rest = [i for i in active if i != pivot]
        col = {i: work[i][pivot] for i in rest}
        row = {j: work[pivot][j] for j in rest}
        scale = QuadComplex(inv_p)
        for i in rest:
            ci = col[i] * scale
            wi = work[i]
            for j in rest:
                wi[j] = wi[j] - ci * row[j]
        active = rest
    return True


def frob_dist2(a, b):
    """Squared Frobenius distance between two matrices of one kind.

    Returns an exact Fraction for GMatrix arguments and an exact QuadRational
    for QuadHermitian arguments.
    """
    if isinstance(a, GMatrix) and isinstance(b, GMatrix):
        if a.n != b.n:
            raise InvalidInputError("matrix size mismatch")
        acc = Fraction(0)
        for ra, rb in zip(a.rows, b.rows):
            for x, y in zip(ra, rb):
                acc += (x - y).abs2()
        return acc
    if isinstance(a, QuadHermitian) and isinstance(b, QuadHermitian):
        if a.n != b.n:
            raise InvalidInputError("matrix size mismatch")
        acc = QUAD_ZERO
        for ra, rb in zip(a.rows, b.rows):
            for x, y in zip(ra, rb):
                acc = acc + (x - y).abs2()
        return acc
    raise InvalidInputError("frob_dist2 expects two GMatrix or two QuadHermitian")
