"""Command-line frontend: polynomial families, verification runs, external
rays, and an on-disk result cache.

Output is a single JSON document on stdout (--format=table renders the same
document as aligned text). Exit codes: 0 success or pass, 1 verification
failure, 2 usage error, 3 resource-cap abort. Every error document has the
shape {"error": {"kind": ..., "detail": ...}}.
"""

import argparse
import hashlib
import json
import os
import signal
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .dynmaps import (
    COORDINATES,
    DEFAULT_DEGREE_CAP,
    DegreeCapError,
    ParamPolynomial,
    SpecialCaseError,
    coord_transform,
    dynatomic,
    gleason_poly,
    iterate_map,
    iterate_poly_gb,
    misiurewicz_poly,
    parabolic_param_poly,
)
from .numfield import ParabolicCollisionError
from .raytrace import (
    Angle,
    NonConvergenceError,
    PrecisionExhaustedError,
    RayTraceError,
    angle_orbit,
    land_and_match,
    trace_param_ray,
)
from .verify import (
    SweepCaps,
    galois_experiment,
    sweep_thm_1_4,
    sweep_thm_3_1,
    sweep_verdict,
    verify_congruences,
    verify_dynamical_units,
    verify_monic_structure,
    verify_thm_1_4,
    verify_thm_3_1,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3

# default angle set for n = 2 with the candidate families their rays land on
DEFAULT_ANGLES = (
    ("1/3", ("parabolic:1,2",)),
    ("2/5", ("parabolic:2,2",)),
    ("3/7", ("parabolic:3,1",)),
    ("1/7", ("parabolic:1,3", "parabolic:3,1")),
    ("1/5", ("parabolic:4,1",)),
    ("1/2", ("misiurewicz:1,1,2",)),
    ("1/4", ("misiurewicz:2,1,2",)),
    ("1/6", ("misiurewicz:1,2,2",)),
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit; we map to exit 2
        raise UsageError(message)


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True)


def _bipoly_json(P) -> dict:
    return {
        "outer": P.outer,
        "inner": P.inner,
        "rows": [[str(a) for a in row] for row in P.rows],
    }


def _param_poly_json(pp: ParamPolynomial) -> dict:
    out = pp.to_json()
    out["degree"] = pp.degree
    return out


# ---------------------------------------------------------------------------
# cache: one file per key, content-hashed, LRU by mtime


def _cache_dir(ns) -> Path | None:
    d = getattr(ns, "cache_dir", None) or os.environ.get("UNICRIT_CACHE")
    return Path(d) if d else None


def _cache_path(d: Path, key: str) -> Path:
    return d / (hashlib.sha256(key.encode()).hexdigest()[:32] + ".json")


def _with_cache(ns, key: str, build):
    """Return build() through the cache when one is configured.

    The cached payload is the canonical JSON emission; a hit is re-parsed so
    the output path is identical either way. Corrupt or stale entries (bad
    hash, other artifact version) are recomputed and overwritten, never
    trusted. --timings bypasses the cache entirely: timed documents are not
    byte-stable.
    """
    d = _cache_dir(ns)
    if d is None or getattr(ns, "timings", False):
        return build()
    d.mkdir(parents=True, exist_ok=True)
    path = _cache_path(d, key)
    try:
        obj = json.loads(path.read_text())
        payload = obj["payload"]
        if (
            obj["key"] == key
            and obj["version"] == __version__
            and hashlib.sha256(payload.encode()).hexdigest() == obj["sha256"]
        ):
            os.utime(path)
            return json.loads(payload)
    except (OSError, ValueError, KeyError, TypeError):
        pass
    doc = build()
    payload = _dumps(doc)
    entry = {
        "key": key,
        "version": __version__,
        "sha256": hashlib.sha256(payload.encode()).hexdigest(),
        "payload": payload,
    }
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(_dumps(entry))
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return doc


def _key(op: str, **params) -> str:
    params["op"] = op
    params["version"] = __version__
    return json.dumps(params, sort_keys=True, default=str)


def _cache_entries(d: Path) -> list[tuple[Path, int, float, str]]:
    out = []
    for path in sorted(d.glob("*.json")):
        st = path.stat()
        try:
            key = json.loads(path.read_text())["key"]
        except (OSError, ValueError, KeyError, TypeError):
            key = path.name  # corrupt entry; identified by file name
        out.append((path, st.st_size, st.st_mtime, key))
    return out


def cmd_cache_gc(ns):
    d = _cache_dir(ns)
    if d is None:
        raise UsageError("no cache directory configured (--cache-dir or UNICRIT_CACHE)")
    if not d.is_dir():
        return {"evicted": [], "kept": 0, "bytes": 0}
    entries = sorted(_cache_entries(d), key=lambda e: (e[2], e[0].name))
    total = sum(size for _, size, _, _ in entries)
    evicted = []
    for path, size, _, key in entries:
        if total <= ns.max_bytes:
            break
        path.unlink()
        total -= size
        evicted.append(key)
    return {"evicted": evicted, "kept": len(entries) - len(evicted), "bytes": total}


def cmd_cache_stat(ns):
    d = _cache_dir(ns)
    if d is None:
        raise UsageError("no cache directory configured (--cache-dir or UNICRIT_CACHE)")
    if not d.is_dir():
        return {"entries": 0, "bytes": 0, "dir": str(d)}
    entries = _cache_entries(d)
    return {
        "entries": len(entries),
        "bytes": sum(size for _, size, _, _ in entries),
        "dir": str(d),
    }


# ---------------------------------------------------------------------------
# poly


def cmd_poly_iterate(ns):
    def build():
        if ns.map == "gb":
            pair = iterate_poly_gb(ns.n, ns.h, degree_cap=ns.degree_cap)
            return {
                "kind": "iterate-gb",
                "n": ns.n,
                "k": ns.h,
                "P": _bipoly_json(pair.poly),
                "denom": str(pair.denom),
            }
        P = iterate_map(ns.n, ns.h, degree_cap=ns.degree_cap)
        return {"kind": "iterate-fc", "n": ns.n, "k": ns.h, "poly": _bipoly_json(P)}

    key = _key("poly/iterate", n=ns.n, h=ns.h, map=ns.map, cap=ns.degree_cap)
    return _with_cache(ns, key, build)


def cmd_poly_dynatomic(ns):
    form = {"fc": "f_c", "gb": "g_b"}[ns.map]

    def build():
        P = dynatomic(ns.n, ns.h, form, degree_cap=ns.degree_cap)
        return {
            "kind": "dynatomic",
            "form": form,
            "n": ns.n,
            "h": ns.h,
            "poly": _bipoly_json(P),
        }

    key = _key("poly/dynatomic", n=ns.n, h=ns.h, form=form, cap=ns.degree_cap)
    return _with_cache(ns, key, build)


def cmd_poly_gleason(ns):
    coord = ns.coord or "c"
    key = _key("poly/gleason", n=ns.n, h=ns.h, coord=coord, cap=ns.degree_cap)
    return _with_cache(
        ns,
        key,
        lambda: _param_poly_json(
            gleason_poly(ns.n, ns.h, coord, degree_cap=ns.degree_cap)
        ),
    )


def cmd_poly_misiurewicz(ns):
    coord = ns.coord or "chat"
    key = _key(
        "poly/misiurewicz",
        n=ns.n, t=ns.t, h=ns.h, tau=ns.tau, coord=coord, cap=ns.degree_cap,
    )
    return _with_cache(
        ns,
        key,
        lambda: _param_poly_json(
            misiurewicz_poly(ns.n, ns.t, ns.h, ns.tau, coord, degree_cap=ns.degree_cap)
        ),
    )


def cmd_poly_parabolic(ns):
    coord = ns.coord or "c"
    key = _key(
        "poly/parabolic", n=ns.n, h=ns.h, m=ns.m, coord=coord, cap=ns.degree_cap
    )
    return _with_cache(
        ns,
        key,
        lambda: _param_poly_json(
            parabolic_param_poly(ns.n, ns.h, ns.m, coord, degree_cap=ns.degree_cap)
        ),
    )


def cmd_poly_transform(ns):
    if ns.coord is None:
        raise UsageError("poly transform needs --coord (target coordinate)")
    try:
        obj = json.load(sys.stdin)
    except ValueError as exc:
        raise UsageError(f"stdin is not a polynomial document: {exc}") from exc
    try:
        pp = ParamPolynomial.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"stdin is not a polynomial document: {exc}") from exc
    return _param_poly_json(coord_transform(pp, ns.coord))


# ---------------------------------------------------------------------------
# verify / galois


def _report_doc(ns, report):
    return report.to_json(timings=getattr(ns, "timings", False))


def cmd_verify_thm14(ns):
    key = _key("verify/thm14", n=ns.n, h=ns.h, m=ns.m)
    return _with_cache(ns, key, lambda: _report_doc(ns, verify_thm_1_4(ns.n, ns.h, ns.m)))


def cmd_verify_thm31(ns):
    key = _key("verify/thm31", n=ns.n, t=ns.t, h=ns.h, tau=ns.tau)
    return _with_cache(
        ns, key, lambda: _report_doc(ns, verify_thm_3_1(ns.n, ns.t, ns.h, ns.tau))
    )


def cmd_verify_monic(ns):
    key = _key("verify/monic", n=ns.n, h=ns.h)
    return _with_cache(
        ns, key, lambda: _report_doc(ns, verify_monic_structure(ns.n, ns.h))
    )


def cmd_verify_congruences(ns):
    c = _parse_rational(ns.c)
    key = _key("verify/congruences", n=ns.n, c=str(c), h=ns.h)
    return _with_cache(
        ns, key, lambda: _report_doc(ns, verify_congruences(ns.n, c, ns.h))
    )


def cmd_verify_units(ns):
    c = _parse_rational(ns.c)
    key = _key("verify/units", n=ns.n, c=str(c), h=ns.h)
    return _with_cache(
        ns, key, lambda: _report_doc(ns, verify_dynamical_units(ns.n, c, ns.h))
    )


def cmd_verify_sweep(ns):
    ns_list = _parse_int_list(ns.ns)

    def build():
        if ns.claim == "thm14":
            caps = SweepCaps(max_dynatomic_degree=ns.degree_cap)
            reports = sweep_thm_1_4(ns=ns_list, r_max=ns.r_max, caps=caps)
        else:
            reports = sweep_thm_3_1(
                ns=ns_list, sum_max=ns.sum_max, gleason_h_max=ns.gleason_h_max
            )
        return {
            "claim": ns.claim,
            "verdict": sweep_verdict(reports),
            "reports": [_report_doc(ns, r) for r in reports],
        }

    if ns.claim == "thm14":
        key = _key(
            "verify/sweep", claim=ns.claim, ns=ns_list, r_max=ns.r_max,
            cap=ns.degree_cap,
        )
    else:
        key = _key(
            "verify/sweep", claim=ns.claim, ns=ns_list, sum_max=ns.sum_max,
            gleason_h_max=ns.gleason_h_max,
        )
    return _with_cache(ns, key, build)


def cmd_galois(ns):
    key = _key(
        "galois", kind=ns.kind, n=ns.n, h=ns.h, t=ns.t, tau=ns.tau, m=ns.m
    )
    return _with_cache(
        ns,
        key,
        lambda: _report_doc(
            ns, galois_experiment(ns.n, ns.kind, h=ns.h, t=ns.t, tau=ns.tau, m=ns.m)
        ),
    )


# ---------------------------------------------------------------------------
# ray


def _parse_angle(text: str) -> Angle:
    try:
        return Angle.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad angle {text!r}: {exc}") from exc


def _build_candidate(n: int, spec: str):
    kind, _, rest = spec.partition(":")
    try:
        nums = [int(x) for x in rest.split(",")] if rest else []
    except ValueError:
        nums = None
    if nums is not None:
        if kind == "parabolic" and len(nums) == 2:
            return parabolic_param_poly(n, nums[0], nums[1], "c")
        if kind == "misiurewicz" and len(nums) == 3:
            return misiurewicz_poly(n, nums[0], nums[1], nums[2], "c")
        if kind == "gleason" and len(nums) == 1:
            return gleason_poly(n, nums[0], "c")
    raise UsageError(
        f"bad candidate spec {spec!r}; expected parabolic:h,m or "
        "misiurewicz:t,h,tau or gleason:h"
    )


def cmd_ray_trace(ns):
    path = trace_param_ray(
        ns.n,
        _parse_angle(ns.angle),
        potential_start=ns.potential_start,
        potential_end=ns.potential_end,
        steps_per_halving=ns.steps_per_halving,
        precision_bits=ns.precision_bits,
    )
    return path.to_json()


def cmd_ray_land(ns):
    if not ns.candidates:
        raise UsageError("ray land needs at least one --candidates spec")
    angle = _parse_angle(ns.angle)
    cands = [_build_candidate(ns.n, spec) for spec in ns.candidates]
    report = land_and_match(
        ns.n,
        angle,
        cands,
        potential_end=ns.potential_end,
        precision_bits=ns.precision_bits,
        tolerance=ns.tolerance,
        margin_min=ns.margin_min,
    )
    return report.to_json()


def cmd_ray_angles(ns):
    if ns.n != 2:
        raise UsageError("the default angle set is defined for n = 2")
    rows = []
    for text, cands in DEFAULT_ANGLES:
        angle = Angle.parse(text)
        pre, per = angle_orbit(angle, ns.n)
        rows.append(
            {
                "angle": text,
                "preperiod": pre,
                "period": per,
                "candidates": list(cands),
            }
        )
    return {"n": ns.n, "angles": rows}


# ---------------------------------------------------------------------------
# parsing helpers


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}: {exc}") from exc


def _parse_int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}: {exc}") from exc


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--cache-dir", default=None)

    timed = _Parser(add_help=False)
    timed.add_argument("--timings", action="store_true",
                       help="real elapsed_ms in reports (disables the cache)")

    parser = _Parser(prog="unicrit", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, handler, parents=(common,), **kw):
        p = sub.add_parser(name, parents=list(parents), **kw)
        if handler is not None:
            # group parsers must not predefine the dest: argparse applies
            # parent defaults to the namespace first, which would mask the
            # leaf's set_defaults
            p.set_defaults(handler=handler)
        return p

    # poly
    poly = leaf(groups, "poly", None).add_subparsers(
        dest="family", required=True, parser_class=_Parser
    )
    p = leaf(poly, "iterate", cmd_poly_iterate)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--map", choices=("gb", "fc"), default="gb")
    p.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    p = leaf(poly, "dynatomic", cmd_poly_dynatomic)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--map", choices=("gb", "fc"), default="fc")
    p.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    p = leaf(poly, "gleason", cmd_poly_gleason)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--coord", choices=COORDINATES, default=None)
    p.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    p = leaf(poly, "misiurewicz", cmd_poly_misiurewicz)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--coord", choices=COORDINATES, default=None)
    p.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    p = leaf(poly, "parabolic", cmd_poly_parabolic)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--coord", choices=COORDINATES, default=None)
    p.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    p = leaf(poly, "transform", cmd_poly_transform)
    p.add_argument("--coord", choices=COORDINATES, required=True)

    # verify
    verify = leaf(groups, "verify", None).add_subparsers(
        dest="claim_group", required=True, parser_class=_Parser
    )
    p = leaf(verify, "thm14", cmd_verify_thm14, parents=(common, timed))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = leaf(verify, "thm31", cmd_verify_thm31, parents=(common, timed))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--tau", type=int, default=None)
    p = leaf(verify, "monic", cmd_verify_monic, parents=(common, timed))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p = leaf(verify, "congruences", cmd_verify_congruences, parents=(common, timed))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", required=True, help="rational parameter, e.g. -1/4")
    p.add_argument("--h", type=int, required=True)
    p = leaf(verify, "units", cmd_verify_units, parents=(common, timed))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", required=True, help="rational parameter, e.g. -2")
    p.add_argument("--h", type=int, required=True)
    p = leaf(verify, "sweep", cmd_verify_sweep, parents=(common, timed))
    p.add_argument("claim", choices=("thm14", "thm31"))
    p.add_argument("--ns", default="2,3,4", help="comma-separated degrees n")
    p.add_argument("--r-max", type=int, default=6)
    p.add_argument("--sum-max", type=int, default=6)
    p.add_argument("--gleason-h-max", type=int, default=5)
    p.add_argument("--degree-cap", type=int, default=SweepCaps().max_dynatomic_degree)

    # ray
    ray = leaf(groups, "ray", None).add_subparsers(
        dest="ray_op", required=True, parser_class=_Parser
    )
    p = leaf(ray, "trace", cmd_ray_trace)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--angle", required=True, help="rational angle p/q")
    p.add_argument("--potential-start", type=float, default=32.0)
    p.add_argument("--potential-end", type=float, default=1e-8)
    p.add_argument("--steps-per-halving", type=int, default=12)
    p.add_argument("--precision-bits", type=int, default=256)
    p = leaf(ray, "land", cmd_ray_land)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--angle", required=True, help="rational angle p/q")
    p.add_argument(
        "--candidates",
        action="append",
        default=None,
        help="candidate family, e.g. parabolic:4,1 (repeatable)",
    )
    p.add_argument("--potential-end", type=float, default=1e-8)
    p.add_argument("--precision-bits", type=int, default=256)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--margin-min", type=float, default=10.0)
    p = leaf(ray, "angles", cmd_ray_angles)
    p.add_argument("--n", type=int, default=2)

    # galois
    p = leaf(groups, "galois", cmd_galois, parents=(common, timed))
    p.add_argument("--kind", choices=("gleason", "misiurewicz", "parabolic"),
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--tau", type=int, default=None)
    p.add_argument("--m", type=int, default=None)

    # cache
    cache = leaf(groups, "cache", None).add_subparsers(
        dest="cache_op", required=True, parser_class=_Parser
    )
    p = leaf(cache, "gc", cmd_cache_gc)
    p.add_argument("--max-bytes", type=int, required=True)
    leaf(cache, "stat", cmd_cache_stat)

    return parser


# ---------------------------------------------------------------------------
# rendering


def _table_rows(rows: list[dict], columns: list[str]) -> list[str]:
    widths = [
        max(len(col), *(len(str(r.get(col, ""))) for r in rows)) if rows else len(col)
        for col in columns
    ]
    lines = ["  ".join(col.ljust(w) for col, w in zip(columns, widths)).rstrip()]
    for r in rows:
        lines.append(
            "  ".join(str(r.get(col, "")).ljust(w) for col, w in zip(columns, widths)).rstrip()
        )
    return lines


def _kv_lines(doc: dict, skip=()) -> list[str]:
    width = max((len(k) for k in doc if k not in skip), default=0)
    out = []
    for k in sorted(doc):
        if k in skip:
            continue
        v = doc[k]
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        out.append(f"{k.ljust(width)}  {v}")
    return out


def _poly_terms(doc: dict) -> list[str]:
    var = doc.get("var", "x")
    coeffs = doc["coeffs"]
    lines = []
    for k in range(len(coeffs) - 1, -1, -1):
        if coeffs[k] != "0":
            lines.append(f"{var}^{k}".ljust(8) + coeffs[k])
    return lines


def render_table(doc: dict) -> str:
    if "error" in doc:
        err = doc["error"]
        return f"error [{err['kind']}]: {err['detail']}"
    if "note" in doc:
        return f"note: {doc['note']['detail']}"
    if "reports" in doc:  # sweep
        rows = [
            {
                "claim": r["claim"],
                "cell": json.dumps(r["cell"], sort_keys=True),
                "verdict": r["verdict"],
                "witnesses": len(r["witnesses"]),
            }
            for r in doc["reports"]
        ]
        lines = _table_rows(rows, ["claim", "cell", "verdict", "witnesses"])
        lines.append(f"verdict: {doc['verdict']}")
        return "\n".join(lines)
    if "claim" in doc:  # single verification report
        lines = _kv_lines(doc, skip=("witnesses",))
        for i, w in enumerate(doc["witnesses"]):
            lines.append(f"witness {i}:")
            lines.extend("  " + ln for ln in _kv_lines(w))
        return "\n".join(lines)
    if "points" in doc:  # ray path
        head = _kv_lines(doc, skip=("points",))
        rows = [
            {"potential": p["potential"], "re": p["c"]["re"], "im": p["c"]["im"]}
            for p in doc["points"]
        ]
        return "\n".join(head + _table_rows(rows, ["potential", "re", "im"]))
    if "status" in doc and "landing" in doc:
        return "\n".join(_kv_lines(doc))
    if "angles" in doc:
        rows = [
            {**r, "candidates": " ".join(r["candidates"])} for r in doc["angles"]
        ]
        return "\n".join(
            _table_rows(rows, ["angle", "preperiod", "period", "candidates"])
        )
    if "rows" in doc or "poly" in doc or "P" in doc:  # bivariate families
        inner_doc = doc.get("P") or doc.get("poly") or doc
        lines = _kv_lines(doc, skip=("P", "poly", "rows"))
        if "rows" in inner_doc:
            outer, inner = inner_doc["outer"], inner_doc["inner"]
            for i, row in enumerate(inner_doc["rows"]):
                lines.append(f"{outer}^{i}".ljust(8) + f"[{', '.join(row)}] in {inner}")
        return "\n".join(lines)
    if "coeffs" in doc:
        lines = _kv_lines(doc, skip=("coeffs",))
        lines.extend(_poly_terms(doc))
        return "\n".join(lines)
    return "\n".join(_kv_lines(doc))


# ---------------------------------------------------------------------------
# entry point


def _exit_for(doc: dict) -> int:
    if "verdict" in doc:
        return {
            "pass": EXIT_OK,
            "not_applicable": EXIT_OK,
            "parabolic_collision": EXIT_OK,
            "incomplete": EXIT_CAP,
            "fail": EXIT_FAIL,
        }[doc["verdict"]]
    if "status" in doc and "landing" in doc:
        return EXIT_OK if doc["status"] == "matched" else EXIT_FAIL
    return EXIT_OK


def _emit(doc: dict, fmt: str) -> None:
    if fmt == "table":
        print(render_table(doc))
    else:
        print(_dumps(doc))


def _error_doc(kind: str, detail: str) -> dict:
    return {"error": {"kind": kind, "detail": detail}}


def _absorb_rational_values(argv: list) -> list:
    # argparse treats "-1/4" as an option string, not a value; fold the
    # token after --c into --c=... so negative rationals parse
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--c" and i + 1 < len(argv):
            out.append("--c=" + argv[i + 1])
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    try:
        # die silently at 128+SIGPIPE when a downstream consumer closes
        # early (unicrit ... | head), like any other pipeline tool
        signal.signal(signal.SIGPIPE, signal.SIG_DFL)
    except (AttributeError, ValueError):
        pass
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    argv = _absorb_rational_values(argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except UsageError as exc:
        _emit(_error_doc("usage", str(exc)), "json")
        return EXIT_USAGE

    fmt = getattr(ns, "format", "json")
    try:
        doc = ns.handler(ns)
    except UsageError as exc:
        _emit(_error_doc("usage", str(exc)), fmt)
        return EXIT_USAGE
    except DegreeCapError as exc:
        _emit(_error_doc("degree-cap", str(exc)), fmt)
        return EXIT_CAP
    except PrecisionExhaustedError as exc:
        _emit(_error_doc("precision-exhausted", str(exc)), fmt)
        return EXIT_CAP
    except SpecialCaseError as exc:
        _emit({"note": {"kind": "special-case", "detail": str(exc)}}, fmt)
        return EXIT_OK
    except ParabolicCollisionError as exc:
        _emit(_error_doc("parabolic-collision", str(exc)), fmt)
        return EXIT_FAIL
    except (RayTraceError, NonConvergenceError) as exc:
        _emit(_error_doc("numeric", str(exc)), fmt)
        return EXIT_FAIL
    except ValueError as exc:
        _emit(_error_doc("usage", str(exc)), fmt)
        return EXIT_USAGE
    except OSError as exc:
        _emit(_error_doc("filesystem", str(exc)), fmt)
        return EXIT_FAIL

    _emit(doc, fmt)
    return _exit_for(doc)


if __name__ == "__main__":
    sys.exit(main())
