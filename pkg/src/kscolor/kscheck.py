"""Kochen-Specker machinery: exact orthogonality graphs, coloring search,
and the finite-precision nullification demonstration.

Ray sets live over Q(sqrt2) + i*Q(sqrt2) so classic constructions with
sqrt(2) coordinates stay exact.  A context is a maximal set of mutually
orthogonal rays of size equal to the dimension; a coloring assigns 0/1 to
rays so that no two orthogonal rays are both 1 and every context holds
exactly one 1.  ``find_ks_coloring`` decides colorability by backtracking
with unit propagation; ``brute_force_coloring`` is the independent
cross-check for small instances.  ``perturb_to_suitable`` replaces every
context by a nearby exactly-suitable frame, showing how shared rays diverge
into per-context copies.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .coloring import TruthValue, truth_sum
from .density import suitable_frame_near
from .errors import InvalidInputError, ResourceLimitError
from .fields import QuadComplex, QuadRational
from .linalg import Frame, GVector, same_ray
from .serialize import format_quad_token, parse_quad_token

_BRUTE_FORCE_LIMIT = 24


def _coerce_quad_entry(x) -> QuadComplex:
    if isinstance(x, QuadComplex):
        return x
    return QuadComplex._coerce(x)


class RaySet:
    """A labeled list of rays in one dimension, entries in Q(sqrt2)-complex."""

    __slots__ = ("dimension", "rays", "labels")

    def __init__(self, dimension: int, rays: Sequence, labels: Optional[Sequence[str]] = None):
        if not isinstance(dimension, int) or dimension < 2:
            raise InvalidInputError("dimension must be an integer >= 2")
        rs = tuple(tuple(_coerce_quad_entry(e) for e in ray) for ray in rays)
        if not rs:
            raise InvalidInputError("a ray set needs at least one ray")
        for k, ray in enumerate(rs):
            if len(ray) != dimension:
                raise InvalidInputError(f"ray {k} does not have {dimension} entries")
            if all(e.is_zero() for e in ray):
                raise InvalidInputError(f"ray {k} is the zero vector")
        if labels is None:
            labels = tuple(f"r{k}" for k in range(len(rs)))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != len(rs):
                raise InvalidInputError("one label per ray is required")
            if len(set(labels)) != len(labels):
                raise InvalidInputError("ray labels must be unique")
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "rays", rs)
        object.__setattr__(self, "labels", labels)

    def __setattr__(self, name, value):
        raise AttributeError("RaySet is immutable")

    def __len__(self):
        return len(self.rays)

    def ray_floats(self, k: int) -> list[float]:
        """The 2n interleaved real float coordinates of ray k."""
        out = []
        for e in self.rays[k]:
            out.append(e.re.to_float())
            out.append(e.im.to_float())
        return out

    def is_rational(self) -> bool:
        return all(
            e.re.sqrt2 == 0 and e.im.sqrt2 == 0 for ray in self.rays for e in ray
        )


def _quad_inner(u, v) -> QuadComplex:
    acc = QuadComplex(0)
    for a, b in zip(u, v):
        acc = acc + a.conjugate() * b
    return acc


@dataclass(frozen=True)
class OrthGraph:
    """Exact orthogonality structure of a RaySet."""

    dimension: int
    num_rays: int
    pairs: tuple  # sorted (i, j) with i < j, exactly orthogonal
    neighbors: tuple  # per-ray frozenset of adjacent indices
    contexts: tuple  # sorted index tuples of size == dimension

    def context_count(self, i: int) -> int:
        return sum(1 for ctx in self.contexts if i in ctx)


def build_graph(rs: RaySet) -> OrthGraph:
    """Adjacency by exact inner products; contexts by exhaustive clique
    enumeration (sets are small)."""
    n = len(rs)
    nbr = [set() for _ in range(n)]
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if _quad_inner(rs.rays[i], rs.rays[j]).is_zero():
                pairs.append((i, j))
                nbr[i].add(j)
                nbr[j].add(i)
    contexts = []
    for combo in itertools.combinations(range(n), rs.dimension):
        if all(b in nbr[a] for a, b in itertools.combinations(combo, 2)):
            contexts.append(combo)
    return OrthGraph(
        dimension=rs.dimension,
        num_rays=n,
        pairs=tuple(pairs),
        neighbors=tuple(frozenset(s) for s in nbr),
        contexts=tuple(contexts),
    )


def is_valid_coloring(g: OrthGraph, assignment) -> bool:
    """Independent validity checker, straight from the definition."""
    try:
        values = [assignment[i] for i in range(g.num_rays)]
    except (KeyError, IndexError):
        return False
    if any(v not in (0, 1) for v in values):
        return False
    for i, j in g.pairs:
        if values[i] == 1 and values[j] == 1:
            return False
    for ctx in g.contexts:
        if sum(values[i] for i in ctx) != 1:
            return False
    return True


def _propagate(g: OrthGraph, state: list) -> bool:
    changed = True
    while changed:
        changed = False
        for i in range(g.num_rays):
            if state[i] == 1:
                for j in g.neighbors[i]:
                    if state[j] == 1:
                        return False
                    if state[j] is None:
                        state[j] = 0
                        changed = True
        for ctx in g.contexts:
            ones = 0
            unknown = []
            for i in ctx:
                if state[i] == 1:
                    ones += 1
                elif state[i] is None:
                    unknown.append(i)
            if ones > 1:
                return False
            if ones == 1:
                for i in unknown:
                    state[i] = 0
                    changed = True
            elif not unknown:
                return False
            elif len(unknown) == 1:
                state[unknown[0]] = 1
                changed = True
    return True


def find_ks_coloring(g: OrthGraph) -> Optional[dict[int, int]]:
    """A valid coloring, or None when the constraints are unsatisfiable.

    Backtracking with unit propagation: a 1 zeroes its neighbors, a context
    with one undecided ray and no 1 forces that ray to 1, a context fully 0
    fails.  Branch order is most-constrained-ray first (most contexts, then
    highest degree, then lowest index), trying 1 before 0; the SAT/UNSAT
    verdict does not depend on this order.
    """
    ctx_count = [g.context_count(i) for i in range(g.num_rays)]

    def search(state: list) -> Optional[list]:
        if not _propagate(g, state):
            return None
        free = [i for i in range(g.num_rays) if state[i] is None]
        if not free:
            return state
        pick = max(free, key=lambda i: (ctx_count[i], len(g.neighbors[i]), -i))
        for value in (1, 0):
            child = state.copy()
            child[pick] = value
            result = search(child)
            if result is not None:
                return result
        return None

    solution = search([None] * g.num_rays)
    if solution is None:
        return None
    return {i: solution[i] for i in range(g.num_rays)}


def brute_force_coloring(g: OrthGraph) -> Optional[dict[int, int]]:
    """Exhaustive enumeration over all 2^k assignments; the independent
    cross-validator for small instances."""
    n = g.num_rays
    if n > _BRUTE_FORCE_LIMIT:
        raise InvalidInputError(
            f"brute force is limited to {_BRUTE_FORCE_LIMIT} rays, got {n}"
        )
    ctx_masks = [sum(1 << i for i in ctx) for ctx in g.contexts]
    pair_masks = [(1 << i) | (1 << j) for i, j in g.pairs]
    for mask in range(1 << n):
        ok = True
        for cm in ctx_masks:
            if (mask & cm).bit_count() != 1:
                ok = False
                break
        if not ok:
            continue
        for pm in pair_masks:
            if (mask & pm) == pm:
                ok = False
                break
        if ok:
            return {i: (mask >> i) & 1 for i in range(n)}
    return None


@dataclass(frozen=True)
class PerturbedContext:
    """One context after nullification: its exact suitable frame."""

    index: int
    ray_indices: tuple
    frame: Frame
    values: list
    truth_total: int
    max_dist2: Fraction


@dataclass(frozen=True)
class DivergenceEntry:
    """Comparison of one originally-shared ray across two contexts."""

    ray_index: int
    label: str
    context_a: int
    context_b: int
    distinct: bool


@dataclass(frozen=True)
class NullificationReport:
    epsilon: Fraction
    contexts: list
    divergences: list
    all_suitable: bool
    all_shared_diverge: bool


def perturb_to_suitable(rs: RaySet, eps) -> NullificationReport:
    """Replace every context by a nearby exactly-suitable frame.

    Contexts are perturbed independently, so a ray shared by several
    contexts receives one exact perturbed copy per context; the report shows
    these copies are pairwise distinct rays (the contradiction-dissolving
    divergence).  Deterministic coincidences (for instance two contexts
    whose shared ray leads both constructions to the same TRUE approximant)
    are detected by exact projective comparison and re-perturbed at a
    slightly smaller epsilon.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    g = build_graph(rs)
    if not g.contexts:
        raise InvalidInputError("the ray set has no full context to perturb")

    def perturb(ctx, scale_eps):
        targets = []
        for i in ctx:
            v = rs.ray_floats(i)
            nrm = math.sqrt(sum(x * x for x in v))
            targets.append([x / nrm for x in v])
        return suitable_frame_near(targets, scale_eps)

    results = {ci: perturb(ctx, eps) for ci, ctx in enumerate(g.contexts)}

    membership: dict[int, list[tuple[int, int]]] = {}
    for ci, ctx in enumerate(g.contexts):
        for pos, ray in enumerate(ctx):
            membership.setdefault(ray, []).append((ci, pos))
    shared = {ray: occ for ray, occ in membership.items() if len(occ) > 1}

    for attempt in range(1, 21):
        redo = set()
        for ray, occ in shared.items():
            for (c1, p1), (c2, p2) in itertools.combinations(occ, 2):
                v1 = results[c1].object[p1]
                v2 = results[c2].object[p2]
                if same_ray(v1, v2):
                    redo.add(max(c1, c2))
        if not redo:
            break
        shrink = eps * Fraction(2, 3) ** attempt
        for ci in sorted(redo):
            results[ci] = perturb(g.contexts[ci], shrink)
    else:
        raise ResourceLimitError(
            "could not separate shared rays across contexts within 20 attempts"
        )

    contexts = []
    all_suitable = True
    for ci, ctx in enumerate(g.contexts):
        frame = results[ci].object
        values = list(results[ci].certificate)
        total = truth_sum(frame)
        if total != 1 or values.count(TruthValue.TRUE) != 1:
            all_suitable = False
        contexts.append(
            PerturbedContext(
                index=ci,
                ray_indices=ctx,
                frame=frame,
                values=values,
                truth_total=total,
                max_dist2=results[ci].achieved_dist2,
            )
        )

    divergences = []
    all_diverge = True
    for ray in sorted(shared):
        occ = shared[ray]
        for (c1, p1), (c2, p2) in itertools.combinations(occ, 2):
            distinct = not same_ray(results[c1].object[p1], results[c2].object[p2])
            if not distinct:
                all_diverge = False
            divergences.append(
                DivergenceEntry(
                    ray_index=ray,
                    label=rs.labels[ray],
                    context_a=c1,
                    context_b=c2,
                    distinct=distinct,
                )
            )

    return NullificationReport(
        epsilon=eps,
        contexts=contexts,
        divergences=divergences,
        all_suitable=all_suitable,
        all_shared_diverge=all_diverge,
    )


def _parse_component(token: str, field: str) -> QuadComplex:
    parts = token.split(",")
    if len(parts) > 2:
        raise InvalidInputError(f"bad component {token!r}")
    re = parse_quad_token(parts[0])
    im = parse_quad_token(parts[1]) if len(parts) == 2 else QuadRational(0)
    if field == "rational" and (re.sqrt2 != 0 or im.sqrt2 != 0):
        raise InvalidInputError(
            f"component {token!r} uses sqrt2 in a rational-field ray set"
        )
    return QuadComplex(re, im)


def _format_component(e: QuadComplex) -> str:
    if e.im.is_zero():
        return format_quad_token(e.re)
    return f"{format_quad_token(e.re)},{format_quad_token(e.im)}"


def load_rayset(text: str) -> RaySet:
    """Parse the ray-set text format and run its self-checks.

    Format: a ``rayset v1`` line, ``dimension <n>`` and ``field
    rational|quad2`` headers, optional ``contexts <k>`` and ``pairs <k>``
    self-check headers, then one ``ray <label> <c1> ... <cn>`` line per ray.
    Blank lines and ``#`` comments are ignored.
    """
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines or lines[0].split() != ["rayset", "v1"]:
        raise InvalidInputError("missing 'rayset v1' header")
    dimension = None
    field = None
    want_contexts = None
    want_pairs = None
    rays = []
    labels = []
    for ln in lines[1:]:
        parts = ln.split()
        key = parts[0]
        if key == "dimension":
            dimension = int(parts[1])
        elif key == "field":
            field = parts[1]
            if field not in ("rational", "quad2"):
                raise InvalidInputError(f"unknown field {field!r}")
        elif key == "contexts":
            want_contexts = int(parts[1])
        elif key == "pairs":
            want_pairs = int(parts[1])
        elif key == "ray":
            if dimension is None or field is None:
                raise InvalidInputError("ray line before dimension/field headers")
            if len(parts) != 2 + dimension:
                raise InvalidInputError(f"ray line has wrong arity: {ln!r}")
            labels.append(parts[1])
            rays.append([_parse_component(tok, field) for tok in parts[2:]])
        else:
            raise InvalidInputError(f"unknown ray set directive {key!r}")
    if dimension is None or field is None:
        raise InvalidInputError("missing dimension or field header")
    rs = RaySet(dimension, rays, labels)
    if want_contexts is not None or want_pairs is not None:
        g = build_graph(rs)
        if want_contexts is not None and len(g.contexts) != want_contexts:
            raise InvalidInputError(
                f"self-check failed: {len(g.contexts)} contexts, header says {want_contexts}"
            )
        if want_pairs is not None and len(g.pairs) != want_pairs:
            raise InvalidInputError(
                f"self-check failed: {len(g.pairs)} orthogonal pairs, header says {want_pairs}"
            )
    return rs


def dump_rayset(rs: RaySet, with_checks: bool = True) -> str:
    """Serialize a RaySet to the text format, including self-check headers."""
    field = "rational" if rs.is_rational() else "quad2"
    out = ["rayset v1", f"dimension {rs.dimension}", f"field {field}"]
    if with_checks:
        g = build_graph(rs)
        out.append(f"contexts {len(g.contexts)}")
        out.append(f"pairs {len(g.pairs)}")
    for label, ray in zip(rs.labels, rs.rays):
        comps = " ".join(_format_component(e) for e in ray)
        out.append(f"ray {label} {comps}")
    return "\n".join(out) + "\n"


def load_rayset_file(path) -> RaySet:
    with open(path, "r", encoding="utf-8") as fh:
        return load_rayset(fh.read())


def load_builtin(name: str) -> RaySet:
    """Load a packaged ray set by name, e.g. 'peres33' or 'peres24'."""
    try:
        text = (
            resources.files("kscolor.data").joinpath(f"{name}.rays").read_text("utf-8")
        )
    except FileNotFoundError as exc:
        raise InvalidInputError(f"no packaged ray set named {name!r}") from exc
    return load_rayset(text)
