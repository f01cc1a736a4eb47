"""Dense constructions: nearby true rays, suitable frames, and false rays.

Given machine-precision targets and a positive epsilon, these operations
return exact objects (vectors over the Gaussian rationals, exactly orthogonal
frames) whose distance to the target is verified by exact rational
arithmetic, never by floating comparison.  Distance is the squared Frobenius
distance between normalized projectors (``ray_dist2``), measured against the
rationalized target; for frames, the maximum over legs.

The float-to-rational budget is split per coordinate: with m = 2n real
coordinates, each coordinate receives eps/(8*sqrt(m)) for rationalization and
the same again for divisibility adjustment, keeping the Euclidean move below
eps/4 and the projective distance well below eps.  If the exact verification
still misses (it can, since Gram-Schmidt drift is only estimated), the budget
is halved and the construction retried, up to 40 rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .coloring import TruthValue, classify_in_frame, classify_ray
from .errors import DegenerateInputError, InvalidInputError, ResourceLimitError
from .fields import adjust_denominator, rationalize
from .linalg import Frame, GVector, gram_schmidt, inner_product, ray_dist2

_MAX_ROUNDS = 40


@dataclass(frozen=True)
class ApproxResult:
    """An exactly-verified approximation outcome.

    ``object`` is the constructed GVector or Frame; ``achieved_dist2`` the
    exact squared projector distance to the rationalized target (max over
    legs for frames); ``certificate`` the coloring of the object; ``witness``
    an optional suitable frame (present for false rays).
    """

    object: Union[GVector, Frame]
    achieved_dist2: Fraction
    certificate: Union[TruthValue, list[TruthValue]]
    witness: Optional[Frame] = None


def _validate_real_target(target) -> list[float]:
    try:
        coords = [float(x) for x in target]
    except (TypeError, ValueError) as exc:
        raise InvalidInputError("target must be a sequence of reals") from exc
    if len(coords) < 4 or len(coords) % 2 != 0:
        raise InvalidInputError(
            "target must hold 2n real coordinates for some n >= 2"
        )
    if any(not math.isfinite(c) for c in coords):
        raise InvalidInputError("target coordinates must be finite")
    if all(c == 0.0 for c in coords):
        raise InvalidInputError("the zero target does not define a ray")
    return coords


def _unit(coords: list[float]) -> list[float]:
    nrm = math.sqrt(math.fsum(c * c for c in coords))
    return [c / nrm for c in coords]


def _rationalize_coords(coords: list[float], max_den: int) -> list[Fraction]:
    return [rationalize(c, max_den) for c in coords]


def _budget(eps: Fraction, n_coords: int, round_no: int) -> tuple[Fraction, int]:
    """Per-coordinate slack and matching denominator bound for one round."""
    scale = 8 * math.isqrt(n_coords - 1) + 8  # >= 8*sqrt(n_coords)
    delta = eps / scale / (2 ** round_no)
    max_den = max(4, math.ceil(1 / delta))
    return delta, max_den


def _true_vector_from_reference(ref: list[Fraction], delta: Fraction) -> GVector:
    """Nudge rationalized coordinates into the TRUE pattern.

    Zero coordinates are displaced by the smallest magnitude inside the
    budget; coordinate 1 gets a denominator divisible by 3 and the rest get
    denominators prime to 3, each move bounded by delta.
    """
    filler = Fraction(1, max(4, math.ceil(1 / delta)))
    out = []
    for k, r in enumerate(ref):
        if r == 0:
            r = filler
        out.append(adjust_denominator(r, want_div3=(k == 0), eps=delta))
    return GVector.from_reals(out)


def nearest_true_ray(target: Sequence, eps) -> ApproxResult:
    """A TRUE ray representative within eps of the target ray.

    The target is given as 2n machine reals (n >= 2 complex coordinates);
    the result's squared projector distance to the rationalized target is
    verified exactly to be at most eps squared.
    """
    coords = _validate_real_target(target)
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    unit = _unit(coords)
    eps2 = eps * eps

    # If the target itself is (up to float noise) a TRUE rational vector,
    # keep that representative: trueness depends on the representative, and
    # normalizing would destroy it.
    delta0, _ = _budget(eps, len(unit), 0)
    span = max(abs(c) for c in coords)
    raw_den = max(4, math.ceil((1 + span) / delta0))
    ref_raw = [rationalize(c, raw_den) for c in coords]
    if any(r != 0 for r in ref_raw):
        raw_vec = GVector.from_reals(ref_raw)
        if classify_ray(raw_vec) is TruthValue.TRUE:
            exact_target = GVector.from_reals([Fraction(c) for c in coords])
            if 4 * ray_dist2(raw_vec, exact_target) <= eps2:
                return ApproxResult(raw_vec, Fraction(0), TruthValue.TRUE)

    best: Optional[Fraction] = None
    for round_no in range(_MAX_ROUNDS):
        delta, max_den = _budget(eps, len(unit), round_no)
        ref = _rationalize_coords(unit, max_den)
        if all(r == 0 for r in ref):
            continue
        ref_vec = GVector.from_reals(ref)
        if classify_ray(ref_vec) is TruthValue.TRUE:
            # The rationalized target itself qualifies: zero distance.
            return ApproxResult(ref_vec, Fraction(0), TruthValue.TRUE)
        cand = _true_vector_from_reference(ref, delta)
        if classify_ray(cand) is not TruthValue.TRUE:
            continue
        d2 = ray_dist2(cand, ref_vec)
        if d2 <= eps2:
            return ApproxResult(cand, d2, TruthValue.TRUE)
        best = d2 if best is None else min(best, d2)
    raise ResourceLimitError(
        f"no TRUE ray within eps={eps} after {_MAX_ROUNDS} rounds",
        achieved_dist2=best,
    )


def _validate_frame_target(targets) -> list[list[float]]:
    rows = [_validate_real_target(t) for t in targets]
    n = len(rows)
    if n < 2:
        raise InvalidInputError("a frame target needs at least 2 vectors")
    if any(len(r) != 2 * n for r in rows):
        raise InvalidInputError(
            f"each of the {n} target vectors must hold {2 * n} real coordinates"
        )
    # Gram matrix of the complex vectors must be within 1e-6 of the identity.
    for i in range(n):
        zi = [complex(rows[i][2 * k], rows[i][2 * k + 1]) for k in range(n)]
        for j in range(i, n):
            zj = [complex(rows[j][2 * k], rows[j][2 * k + 1]) for k in range(n)]
            g = sum(a.conjugate() * b for a, b in zip(zi, zj))
            want = 1.0 if i == j else 0.0
            if abs(g - want) > 1e-6:
                raise InvalidInputError(
                    f"target vectors are not orthonormal to 1e-6 at pair ({i}, {j})"
                )
    return rows


def suitable_frame_near(targets: Sequence[Sequence], eps) -> ApproxResult:
    """An exactly orthogonal frame with exactly one TRUE leg, legwise within
    eps of the given nearly-orthonormal float vectors.

    The TRUE leg replaces target leg 1 (callers can permute targets to move
    it); the other legs come from exact Gram-Schmidt of the rationalized
    targets against it, which keeps their drift of the same order as leg 1's.
    """
    rows = _validate_frame_target(targets)
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    n = len(rows)
    eps2 = eps * eps
    best: Optional[Fraction] = None
    for round_no in range(_MAX_ROUNDS):
        _, max_den = _budget(eps / (2 * n), 2 * n, round_no)
        refs = []
        for row in rows:
            ref = _rationalize_coords(row, max_den)
            if all(r == 0 for r in ref):
                refs = None
                break
            refs.append(GVector.from_reals(ref))
        if refs is None:
            continue

        if _exactly_orthogonal(refs):
            ready = Frame(refs)
            values = classify_in_frame(ready)
            if values.count(TruthValue.TRUE) == 1:
                return ApproxResult(ready, Fraction(0), values)

        try:
            leg1 = nearest_true_ray(rows[0], eps / (4 * n) / (2 ** round_no))
            frame = gram_schmidt([leg1.object] + refs[1:])
        except (DegenerateInputError, ResourceLimitError):
            continue
        values = classify_in_frame(frame)
        if values.count(TruthValue.TRUE) != 1 or values[0] is not TruthValue.TRUE:
            continue
        dists = [ray_dist2(frame[k], refs[k]) for k in range(n)]
        worst = max(dists)
        if worst <= eps2:
            return ApproxResult(frame, worst, values)
        best = worst if best is None else min(best, worst)
    raise ResourceLimitError(
        f"no suitable frame within eps={eps} after {_MAX_ROUNDS} rounds",
        achieved_dist2=best,
    )


def _exactly_orthogonal(vectors: list[GVector]) -> bool:
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            if not inner_product(vectors[i], vectors[j]).is_zero():
                return False
    return True


def _standard_basis_floats(n: int, skip: int) -> list[list[float]]:
    rows = []
    for j in range(n):
        if j == skip:
            continue
        row = [0.0] * (2 * n)
        row[2 * j] = 1.0
        rows.append(row)
    return rows


def false_ray_near(target: Sequence, eps) -> ApproxResult:
    """A not-TRUE ray within eps of the target, witnessed by a suitable frame
    that contains it.

    The target approximant sits at leg 2 of the witness; leg 1 carries the
    TRUE ray.  Leg 2 is exactly orthogonal to the TRUE leg, so it can never
    classify TRUE itself.
    """
    coords = _validate_real_target(target)
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    unit = _unit(coords)
    n = len(unit) // 2
    eps2 = eps * eps
    # Complete the target to a basis: drop the standard vector with the
    # largest overlap to keep the completion well conditioned.
    overlap = [
        unit[2 * j] * unit[2 * j] + unit[2 * j + 1] * unit[2 * j + 1]
        for j in range(n)
    ]
    skip = max(range(n), key=lambda j: overlap[j])
    best: Optional[Fraction] = None
    for round_no in range(_MAX_ROUNDS):
        delta, max_den = _budget(eps, len(unit), round_no)
        ref = _rationalize_coords(unit, max_den)
        if all(r == 0 for r in ref):
            continue
        t_rat = GVector.from_reals(ref)
        fillers = [GVector.from_reals(r) for r in _standard_basis_floats(n, skip)]
        # completion legs: t_rat, w2, ..., wn.  Promote w2 to a TRUE ray and
        # re-orthogonalize with the target approximant second.
        try:
            completion = gram_schmidt([t_rat] + fillers)
            leg_true = nearest_true_ray(
                completion[1].to_floats(), eps / 8 / (2 ** round_no)
            )
            frame = gram_schmidt(
                [leg_true.object, t_rat] + list(completion[2:])
            )
        except (DegenerateInputError, ResourceLimitError):
            continue
        values = classify_in_frame(frame)
        if values.count(TruthValue.TRUE) != 1 or values[0] is not TruthValue.TRUE:
            continue
        ray = frame[1]
        if classify_ray(ray) is TruthValue.TRUE:
            continue
        d2 = ray_dist2(ray, t_rat)
        if d2 <= eps2:
            return ApproxResult(ray, d2, TruthValue.FALSE, witness=frame)
        best = d2 if best is None else min(best, d2)
    raise ResourceLimitError(
        f"no FALSE ray within eps={eps} after {_MAX_ROUNDS} rounds",
        achieved_dist2=best,
    )
