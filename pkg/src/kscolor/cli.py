"""Command-line surface: one subcommand per library operation.

Outputs are deterministic and machine-readable. JSON is the default format
(exact scalars appear as strings, never floats); ``--format text`` renders
the same data as sorted ``path = value`` lines. The KSCOLOR_FORMAT
environment variable can change the default. Exit codes: 0 success,
2 invalid or inapplicable input, 3 degenerate input, 4 resource limit.

Inline arguments (vectors, matrices) use a JSON superset where bare tokens
like ``1/3`` or ``1/2-1/3s2`` need no quotes; ``@path`` reads the value from
a file and ``-`` from stdin. Ray-set arguments name a file, or one of the
bundled sets (``peres33``, ``peres24``) when no such file exists.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction

from . import __version__
from .coloring import (
    ProjectionRep,
    TruthValue,
    classify_in_frame,
    classify_projection_matrix,
    classify_ray,
    truth_sum,
)
from .density import false_ray_near, nearest_true_ray, suitable_frame_near
from .errors import (
    DegenerateInputError,
    InvalidInputError,
    NotApplicableError,
    ResourceLimitError,
)
from .kscheck import (
    build_graph,
    find_ks_coloring,
    load_builtin,
    load_rayset,
    perturb_to_suitable,
)
from .linalg import Frame
from .povm import classify_with_witness, make_suitable_near
from .povm import truth_sum as povm_truth_sum
from .serialize import (
    format_fraction,
    frame_from_obj,
    frame_to_obj,
    parse_fraction,
    parse_quad_token,
    povm_from_obj,
    povm_to_obj,
    projection_rep_from_obj,
    quadherm_from_obj,
    truth_to_str,
    truths_to_obj,
    vector_from_obj,
    vector_from_reals_obj,
    vector_to_obj,
)

_FORMATS = ("json", "text")
_DELIMS = "[]{},:"


# ---------------------------------------------------------------------------
# lenient value syntax: JSON plus unquoted scalar tokens


def _skip_ws(s: str, i: int) -> int:
    while i < len(s) and s[i].isspace():
        i += 1
    return i


def _parse_value(s: str, i: int):
    i = _skip_ws(s, i)
    if i >= len(s):
        raise InvalidInputError("unexpected end of input")
    c = s[i]
    if c == "[":
        out = []
        i = _skip_ws(s, i + 1)
        if i < len(s) and s[i] == "]":
            return out, i + 1
        while True:
            v, i = _parse_value(s, i)
            out.append(v)
            i = _skip_ws(s, i)
            if i < len(s) and s[i] == ",":
                i = _skip_ws(s, i + 1)
                continue
            if i < len(s) and s[i] == "]":
                return out, i + 1
            raise InvalidInputError("expected ',' or ']' in array")
    if c == "{":
        out = {}
        i = _skip_ws(s, i + 1)
        if i < len(s) and s[i] == "}":
            return out, i + 1
        while True:
            k, i = _parse_value(s, i)
            if not isinstance(k, str):
                raise InvalidInputError("object keys must be strings")
            i = _skip_ws(s, i)
            if i >= len(s) or s[i] != ":":
                raise InvalidInputError("expected ':' after object key")
            v, i = _parse_value(s, i + 1)
            out[k] = v
            i = _skip_ws(s, i)
            if i < len(s) and s[i] == ",":
                i = _skip_ws(s, i + 1)
                continue
            if i < len(s) and s[i] == "}":
                return out, i + 1
            raise InvalidInputError("expected ',' or '}' in object")
    if c == '"':
        j = i + 1
        buf = []
        while j < len(s):
            if s[j] == "\\" and j + 1 < len(s):
                buf.append(s[j + 1])
                j += 2
                continue
            if s[j] == '"':
                return "".join(buf), j + 1
            buf.append(s[j])
            j += 1
        raise InvalidInputError("unterminated string")
    j = i
    while j < len(s) and s[j] not in _DELIMS and not s[j].isspace():
        j += 1
    if j == i:
        raise InvalidInputError(f"unexpected character {c!r}")
    tok = s[i:j]
    if tok == "null":
        return None, j
    if tok == "true":
        return True, j
    if tok == "false":
        return False, j
    return tok, j


def _lenient_loads(text: str):
    val, i = _parse_value(text, 0)
    if _skip_ws(text, i) != len(text):
        raise InvalidInputError("trailing characters after value")
    return val


def _read_value(arg: str):
    """Inline value, @path, or '-' for stdin."""
    if arg == "-":
        return _lenient_loads(sys.stdin.read())
    if arg.startswith("@"):
        try:
            with open(arg[1:], "r", encoding="utf-8") as fh:
                return _lenient_loads(fh.read())
        except OSError as exc:
            raise InvalidInputError(f"cannot read {arg[1:]}: {exc}") from exc
    return _lenient_loads(arg)


def _read_doc(arg: str):
    """Like _read_value, but a bare existing file path also works."""
    if arg != "-" and not arg.startswith("@") and os.path.exists(arg):
        return _read_value("@" + arg)
    return _read_value(arg)


def _read_rayset(arg: str):
    if arg == "-":
        return load_rayset(sys.stdin.read())
    if os.path.exists(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            return load_rayset(fh.read())
    stem = os.path.splitext(os.path.basename(arg))[0]
    try:
        return load_builtin(stem)
    except (InvalidInputError, FileNotFoundError):
        raise InvalidInputError(
            f"no such ray-set file or bundled set: {arg}"
        ) from None


# ---------------------------------------------------------------------------
# input coercions


def _vector_in(obj):
    if not isinstance(obj, list) or not obj:
        raise InvalidInputError("expected a non-empty array of coordinates")
    if all(isinstance(e, dict) for e in obj):
        return vector_from_obj(obj)
    return vector_from_reals_obj(obj)


def _real_number(e) -> float:
    if isinstance(e, str):
        try:
            return float(parse_fraction(e))
        except InvalidInputError:
            return parse_quad_token(e).to_float()
    if isinstance(e, bool) or e is None:
        raise InvalidInputError(f"not a real number: {e!r}")
    if isinstance(e, int):
        return float(e)
    raise InvalidInputError(f"not a real number: {e!r}")


def _float_target(obj) -> list:
    if not isinstance(obj, list) or not obj:
        raise InvalidInputError("expected a non-empty array of coordinates")
    return [_real_number(e) for e in obj]


def _complex_entry(e) -> complex:
    if isinstance(e, list):
        if len(e) != 2:
            raise InvalidInputError("complex entries as arrays must be [re, im]")
        return complex(_real_number(e[0]), _real_number(e[1]))
    if isinstance(e, dict):
        extra = set(e) - {"re", "im"}
        if extra:
            raise InvalidInputError(f"unexpected keys in entry: {sorted(extra)}")
        return complex(_real_number(e.get("re", 0)), _real_number(e.get("im", 0)))
    return complex(_real_number(e), 0.0)


def _povm_targets_in(obj):
    if isinstance(obj, dict) and obj.get("kind") == "povm":
        return povm_from_obj(obj)
    if isinstance(obj, dict) and "elements" in obj:
        obj = obj["elements"]
    if not isinstance(obj, list) or not obj:
        raise InvalidInputError(
            "expected a POVM object or a non-empty array of target matrices"
        )
    return [
        [[_complex_entry(e) for e in row] for row in mat] for mat in obj
    ]


# ---------------------------------------------------------------------------
# output rendering


def _frac_str(x) -> str:
    return format_fraction(Fraction(x))


def _approx_vector_obj(res) -> dict:
    return {
        "achieved_dist2": _frac_str(res.achieved_dist2),
        "value": truth_to_str(res.certificate),
        "vector": vector_to_obj(res.object),
    }


def _emit_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _text_lines(obj, path: str):
    if isinstance(obj, dict):
        if not obj:
            yield f"{path} = {{}}"
            return
        for k in sorted(obj):
            yield from _text_lines(obj[k], f"{path}.{k}" if path else str(k))
        return
    if isinstance(obj, list):
        if not obj:
            yield f"{path} = []"
            return
        for i, e in enumerate(obj):
            yield from _text_lines(e, f"{path}[{i}]")
        return
    if obj is None:
        yield f"{path} = null"
    elif isinstance(obj, bool):
        yield f"{path} = {'true' if obj else 'false'}"
    else:
        yield f"{path} = {obj}"


def _emit(obj, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(_emit_json(obj))
    else:
        sys.stdout.write("\n".join(_text_lines(obj, "")) + "\n")


def _fail(exc: Exception, code: int, fmt: str) -> int:
    payload = {"error": str(exc), "type": type(exc).__name__}
    if fmt == "json":
        sys.stderr.write(_emit_json(payload))
    else:
        sys.stderr.write(f"error ({payload['type']}): {payload['error']}\n")
    return code


# ---------------------------------------------------------------------------
# subcommands


def _cmd_classify_ray(args) -> dict:
    v = _vector_in(_read_value(args.vector))
    return {"value": truth_to_str(classify_ray(v))}


def _cmd_classify_matrix(args) -> dict:
    obj = _read_value(args.matrix)
    rep = projection_rep_from_obj(obj)
    return {"value": truth_to_str(classify_projection_matrix(rep))}


def _cmd_classify_povm(args) -> dict:
    obj = _read_value(args.element)
    mat = quadherm_from_obj(obj)
    value, witness = classify_with_witness(mat)
    return {
        "value": truth_to_str(value),
        "witness": None if witness is None else povm_to_obj(witness),
    }


def _cmd_approx_true(args) -> dict:
    obj = _read_value(args.vector)
    if isinstance(obj, dict) and "target" in obj:
        obj = obj["target"]
    target = _float_target(obj)
    res = nearest_true_ray(target, args.epsilon)
    return _approx_vector_obj(res)


def _cmd_suitable_frame(args) -> dict:
    obj = _read_value(args.frame)
    if isinstance(obj, dict) and "targets" in obj:
        obj = obj["targets"]
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise InvalidInputError("expected an array of target vectors")
    targets = [_float_target(r) for r in obj]
    res = suitable_frame_near(targets, args.epsilon)
    frame = res.object
    return {
        "frame": frame_to_obj(frame),
        "max_dist2": _frac_str(res.achieved_dist2),
        "sum": truth_sum(frame),
        "values": truths_to_obj(res.certificate),
    }


def _cmd_false_ray(args) -> dict:
    obj = _read_value(args.vector)
    if isinstance(obj, dict) and "target" in obj:
        obj = obj["target"]
    target = _float_target(obj)
    res = false_ray_near(target, args.epsilon)
    out = _approx_vector_obj(res)
    out["witness"] = frame_to_obj(res.witness)
    out["witness_values"] = truths_to_obj(classify_in_frame(res.witness))
    return out


def _cmd_make_suitable_povm(args) -> dict:
    targets = _povm_targets_in(_read_doc(args.decomposition))
    dec = make_suitable_near(targets, args.epsilon, allow_split=args.allow_split)
    out = povm_to_obj(dec)
    out["sum"] = povm_truth_sum(dec)
    return out


def _cmd_verify_decomposition(args) -> dict:
    obj = _read_doc(args.object)
    if isinstance(obj, dict) and obj.get("kind") == "frame":
        return {"sum": truth_sum(frame_from_obj(obj))}
    if isinstance(obj, dict) and obj.get("kind") == "povm":
        return {"sum": povm_truth_sum(povm_from_obj(obj))}
    raise InvalidInputError("expected an object with kind='frame' or kind='povm'")


def _cmd_ks_solve(args) -> dict:
    rs = _read_rayset(args.rayset)
    g = build_graph(rs)
    coloring = find_ks_coloring(g)
    if coloring is None:
        return {"result": "UNSAT"}
    assignment = {rs.labels[i]: coloring[i] for i in range(len(rs))}
    return {"result": "SAT", "assignment": assignment}


def _cmd_ks_perturb(args) -> dict:
    rs = _read_rayset(args.rayset)
    rep = perturb_to_suitable(rs, args.epsilon)
    contexts = []
    for c in rep.contexts:
        contexts.append(
            {
                "index": c.index,
                "rays": [rs.labels[i] for i in c.ray_indices],
                "values": truths_to_obj(c.values),
                "sum": c.truth_total,
                "max_dist2": _frac_str(c.max_dist2),
                "legs": [vector_to_obj(leg) for leg in c.frame],
            }
        )
    divergences = [
        {
            "ray": d.label,
            "context_a": d.context_a,
            "context_b": d.context_b,
            "distinct": d.distinct,
        }
        for d in rep.divergences
    ]
    return {
        "epsilon": _frac_str(rep.epsilon),
        "contexts": contexts,
        "divergences": divergences,
        "all_suitable": rep.all_suitable,
        "all_shared_diverge": rep.all_shared_diverge,
    }


# developer generators: the only seed-dependent subcommands


def _rng_unit_vector(rng: random.Random, n: int) -> list:
    while True:
        coords = [rng.gauss(0.0, 1.0) for _ in range(2 * n)]
        nrm = math.sqrt(sum(x * x for x in coords))
        if nrm > 1e-6:
            return [x / nrm for x in coords]


def _rng_orthonormal(rng: random.Random, n: int) -> list:
    basis = []
    while len(basis) < n:
        raw = [complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0)) for _ in range(n)]
        for u in basis:
            ip = sum(a.conjugate() * b for a, b in zip(u, raw))
            raw = [b - ip * a for a, b in zip(u, raw)]
        nrm = math.sqrt(sum(abs(x) ** 2 for x in raw))
        if nrm > 1e-6:
            basis.append([x / nrm for x in raw])
    return basis


def _interleave(z: list) -> list:
    out = []
    for c in z:
        out.append(c.real)
        out.append(c.imag)
    return out


def _cmd_gen_ray(args) -> dict:
    rng = random.Random(args.seed)
    return {"target": _rng_unit_vector(rng, args.dimension)}


def _cmd_gen_frame(args) -> dict:
    rng = random.Random(args.seed)
    basis = _rng_orthonormal(rng, args.dimension)
    return {"targets": [_interleave(v) for v in basis]}


def _cmd_gen_povm(args) -> dict:
    n = args.dimension
    m = args.elements
    if m < 1:
        raise InvalidInputError("need at least one element")
    rng = random.Random(args.seed)
    basis = _rng_orthonormal(rng, n)
    groups = [[] for _ in range(m)]
    order = list(range(n))
    rng.shuffle(order)
    for pos, k in enumerate(order):
        groups[pos % m].append(k)
    blend = 0.1 + 0.8 * rng.random()
    mats = []
    for grp in groups:
        mat = [[0.0 + 0.0j for _ in range(n)] for _ in range(n)]
        for k in grp:
            v = basis[k]
            for i in range(n):
                for j in range(n):
                    mat[i][j] += v[i] * v[j].conjugate()
        for i in range(n):
            for j in range(n):
                mat[i][j] = (1.0 - blend) * mat[i][j]
            mat[i][i] += blend / m
        mats.append(mat)
    return {
        "elements": [
            [[[z.real, z.imag] for z in row] for row in mat] for mat in mats
        ]
    }


# ---------------------------------------------------------------------------
# parser


def _fraction_flag(text: str) -> Fraction:
    try:
        val = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    return val


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kscolor",
        description="Exact truth-value colorings for rays, projections and "
        "POVMs, with finite-precision perturbation of Kochen-Specker sets.",
    )
    parser.add_argument("--version", action="version", version=__version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--epsilon",
        type=_fraction_flag,
        default=Fraction(1, 10**6),
        help="approximation radius (default 1e-6)",
    )
    common.add_argument(
        "--dimension", type=int, default=3, help="dimension for generators"
    )
    common.add_argument(
        "--seed", type=int, default=0, help="seed for gen-* subcommands"
    )
    common.add_argument(
        "--max-denominator",
        type=int,
        default=10**6,
        help="denominator cap where rationalization is configurable",
    )
    common.add_argument(
        "--format",
        choices=_FORMATS,
        default=None,
        help="output format (default json, or KSCOLOR_FORMAT)",
    )

    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("classify-ray", _cmd_classify_ray, "truth value of a ray")
    p.add_argument("vector", help="2n exact real coordinates, e.g. [1/3,1/2,...]")

    p = add("classify-matrix", _cmd_classify_matrix, "truth value of a projection representative")
    p.add_argument("matrix", help="matrix rows, or {kind:projection,matrix:...}")

    p = add("classify-povm", _cmd_classify_povm, "truth value of a POVM element, with witness")
    p.add_argument("element", help="Hermitian Q(sqrt2) matrix rows")

    p = add("approx-true", _cmd_approx_true, "nearest TRUE ray within epsilon")
    p.add_argument("vector", help="2n real float coordinates of the target ray")

    p = add("suitable-frame", _cmd_suitable_frame, "suitable exact frame within epsilon")
    p.add_argument("frame", help="array of n nearly-orthonormal target vectors")

    p = add("false-ray", _cmd_false_ray, "FALSE ray within epsilon, with witness frame")
    p.add_argument("vector", help="2n real float coordinates of the target ray")

    p = add("make-suitable-povm", _cmd_make_suitable_povm, "suitable POVM within epsilon")
    p.add_argument("decomposition", help="file with target matrices (@path, path or inline)")
    p.add_argument(
        "--allow-split",
        action="store_true",
        help="permit appending one extra element when no donor pair exists",
    )

    p = add("verify-decomposition", _cmd_verify_decomposition, "truth sum of a frame or POVM")
    p.add_argument("object", help="frame or POVM object (@path, path or inline)")

    p = add("ks-solve", _cmd_ks_solve, "exact coloring search on a ray set")
    p.add_argument("rayset", help="ray-set file, or bundled set name")

    p = add("ks-perturb", _cmd_ks_perturb, "per-context suitable perturbation report")
    p.add_argument("rayset", help="ray-set file, or bundled set name")

    p = add("gen-ray", _cmd_gen_ray, "random unit-vector target (seeded)")
    p = add("gen-frame", _cmd_gen_frame, "random orthonormal frame target (seeded)")
    p = add("gen-povm", _cmd_gen_povm, "random POVM target (seeded)")
    p.add_argument("--elements", type=int, default=3, help="number of elements")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    fmt = args.format if args.format else _default_format()
    try:
        out = args.func(args)
    except (InvalidInputError, NotApplicableError) as exc:
        return _fail(exc, 2, fmt)
    except DegenerateInputError as exc:
        return _fail(exc, 3, fmt)
    except ResourceLimitError as exc:
        return _fail(exc, 4, fmt)
    _emit(out, fmt)
    return 0


def _default_format() -> str:
    env = os.environ.get("KSCOLOR_FORMAT", "").strip().lower()
    return env if env in _FORMATS else "json"


if __name__ == "__main__":
    sys.exit(main())
