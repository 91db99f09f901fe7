"""``latpoly`` command line.

Data rows go to ``--out`` (or stdout) as CSV or JSON; every row carries the
run's manifest id.  Human-readable summaries and PASS/FAIL lines go to
stderr.  Exit status: 0 ok, 1 usage error, 2 a check failed, 3 a resource
limit aborted the run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from .. import adsorption as ads
from ..constructions import verify as ver
from ..enumeration.ensembles import (
    CONSTRAINTS,
    CONTAINS_ORIGIN,
    EnsembleSpec,
    count,
    enumerate_ensemble,
    span_stats,
    surface_profile,
)
from ..errors import InvalidConfiguration, LatpolyError, ResourceLimitExceeded
from ..lattice import ANIMAL, TREE, Walk
from ..sampling import (
    PERM,
    ROSENBLUTH,
    sample_trees_mcmc,
    sample_walks,
    span_condition_report,
)
from .manifest import LOG_CONVENTION, RunManifest, code_version
from .tables import TableStore

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_RESOURCE = 0, 1, 2, 3
MCMC = "mcmc"
VERIFIERS = ("marks", "concat", "bridge", "zeta", "single-contact", "supermult")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def default_threads() -> int:
    env = os.environ.get("LATPOLY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def parse_grid(text: str) -> list:
    """``a,b,c`` or ``lo:hi:count`` (inclusive, evenly spaced)."""
    if ":" in text:
        lo, hi, k = text.split(":")
        return [float(x) for x in np.linspace(float(lo), float(hi), int(k))]
    return [float(x) for x in text.split(",") if x.strip()]


def parse_ints(text: str) -> list:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part.strip():
            out.append(int(part))
    return out


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", choices=(TREE, ANIMAL, "walk"), default=TREE)
    common.add_argument("--dim", type=int, default=2)
    common.add_argument("--n", type=int, default=4, help="size, or the largest size for scans")
    common.add_argument("--constraint", choices=CONSTRAINTS, default=CONTAINS_ORIGIN)
    common.add_argument("--animal-convention", choices=("site", "subgraph"), default="site")
    common.add_argument("--beta", type=float)
    common.add_argument("--beta-grid", type=parse_grid)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--manifest-dir", default="latpoly-runs")
    common.add_argument("--table", help="count table file used for compute-on-miss")
    common.add_argument("--limit", type=int, help="abort enumeration after this many objects")

    p = _Parser(prog="latpoly", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", parents=[common], help="count (and optionally list) an ensemble")
    e.add_argument("--members", action="store_true", help="emit one row per member")
    pr = sub.add_parser("profile", parents=[common], help="surface-contact profile left_N(k)")
    pr.add_argument("--weighting", choices=("sites", "edges"), default="sites")
    sub.add_parser("spans", parents=[common], help="span histogram and small-span fraction")
    pa = sub.add_parser("partition", parents=[common], help="Z_N(beta) and F_N(beta)")
    pa.add_argument("--surface", choices=(ads.IMPENETRABLE, ads.PENETRABLE), default=ads.IMPENETRABLE)
    pa.add_argument("--weighting", choices=(ads.SITE_CONTACTS, ads.EDGE_CONTACTS), default=ads.SITE_CONTACTS)
    sub.add_parser("growth", parents=[common], help="rigorous one-sided growth-constant bound")
    v = sub.add_parser("verify", parents=[common], help="exhaustive map and identity verifiers")
    v.add_argument("which", choices=VERIFIERS)
    v.add_argument("--max-j", type=int, default=None)
    t1 = sub.add_parser("theorem1", parents=[common], help="finite-N bound chain for impenetrable trees")
    t1.add_argument("--max-j", type=int, default=3)
    t3 = sub.add_parser("theorem3", parents=[common], help="finite-N bound chain for impenetrable walks")
    t3.add_argument("--max-j", type=int, default=2)
    s = sub.add_parser("sample", parents=[common], help="PERM / Rosenbluth / tree MCMC estimates")
    s.add_argument("--method", choices=(PERM, ROSENBLUTH, MCMC), default=PERM)
    s.add_argument("--size", type=int, default=100_000)
    s.add_argument("--bridge", action="store_true")
    sr = sub.add_parser("span-report", parents=[common], help="f_N against N^-delta")
    sr.add_argument("--n-list", type=parse_ints, default=None)
    sr.add_argument("--delta-grid", type=parse_grid, default=[0.0, 0.5, 1.0])
    sr.add_argument("--exact-max", type=int, default=None)
    sr.add_argument("--size", type=int, default=100_000)
    return p


# --------------------------------------------------------------------------
# commands; each returns (rows, payload, passed, rigor)


def _spec(a) -> EnsembleSpec:
    return EnsembleSpec(a.model, a.dim, a.n, a.constraint, a.animal_convention)


def _member_row(obj) -> dict:
    if isinstance(obj, Walk):
        return {"points": json.dumps([list(p) for p in obj.points])}
    return {"sites": json.dumps(sorted(list(x) for x in obj.sites)),
            "edges": json.dumps(sorted([list(a), list(b)] for a, b in obj.edges))}


def cmd_enumerate(a, workers):
    spec = _spec(a)
    base = {"model": a.model, "d": a.dim, "N": a.n, "constraint": a.constraint,
            "convention": a.animal_convention}
    if a.members:
        rows = [{**base, "index": i, **_member_row(m)}
                for i, m in enumerate(enumerate_ensemble(spec, workers, a.limit))]
        n = len(rows)
    else:
        if a.limit is not None:
            n = sum(1 for _ in enumerate_ensemble(spec, workers, a.limit))
        elif a.table:
            n = TableStore(a.table).count(spec, workers)
        else:
            n = count(spec, workers)
        rows = [{**base, "count": n}]
    _say(f"{a.model} d={a.dim} N={a.n} {a.constraint}: {n}")
    return rows, rows, True, {"count": ads.EXACT}


def cmd_profile(a, workers):
    spec = _spec(a)
    if a.table:
        counts = TableStore(a.table).profile(spec, a.weighting, workers)
    else:
        counts = surface_profile(spec, a.weighting, workers).counts
    rows = [{"model": a.model, "d": a.dim, "N": a.n, "constraint": a.constraint,
             "weighting": a.weighting, "k": k, "count": c} for k, c in enumerate(counts)]
    _say(f"profile total {sum(counts)}")
    return rows, rows, True, {"count": ads.EXACT}


def cmd_spans(a, workers):
    st = span_stats(_spec(a), workers)
    rows = [{"model": a.model, "d": a.dim, "N": a.n, "constraint": a.constraint, "span": s,
             "count": c, "threshold": "" if st.threshold is None else st.threshold,
             "fraction": str(st.fraction)} for s, c in st.histogram.items()]
    _say(f"small-span fraction {st.fraction} (threshold {st.threshold})")
    return rows, rows, True, {"fraction": ads.EXACT}


def _betas(a) -> list:
    if a.beta_grid is not None:
        return a.beta_grid
    return [a.beta if a.beta is not None else 0.0]


def cmd_partition(a, workers):
    rows = []
    coeffs = None
    for beta in _betas(a):
        q = ads.PartitionQuery(a.model, a.surface, a.n, beta, a.dim, a.weighting, a.animal_convention)
        val = ads.partition_function(q, workers)
        coeffs = val.coefficients
        rows.append({"model": a.model, "surface": a.surface, "weighting": a.weighting, "d": a.dim,
                     "N": a.n, "beta": beta, "Z": val.z, "F_N": val.log_z / a.n, "rigor": ads.EXACT})
        _say(f"beta={beta}: Z={val.z!r}")
    return rows, {"rows": rows, "coefficients": list(coeffs)}, True, {"Z": ads.EXACT}


def cmd_growth(a, workers):
    g = ads.growth_bracket(a.model, a.dim, a.n, a.animal_convention, workers)
    rows = [{"model": a.model, "d": a.dim, "N": n, "count": g.counts[n], "root": g.point_estimates[n],
             "direction": g.direction, "rigor": ads.RIGOROUS} for n in sorted(g.point_estimates)]
    rows.append({"model": a.model, "d": a.dim, "N": a.n, "count": "", "root": g.bound,
                 "direction": f"best-{g.direction}", "rigor": ads.RIGOROUS})
    if g.ratio_estimate is not None:
        rows.append({"model": a.model, "d": a.dim, "N": a.n, "count": "", "root": g.ratio_estimate,
                     "direction": "ratio", "rigor": ads.ESTIMATE})
    _say(f"{g.direction} bound {g.bound!r}")
    return rows, rows, True, g.labels


def _verifiers(a) -> list:
    d, n = a.dim, a.n
    if a.which == "marks":
        return [ver.verify_marks_tree(d, n, 3 if a.max_j is None else a.max_j),
                ver.verify_marks_walk(d, n, 2 if a.max_j is None else a.max_j)]
    if a.which == "concat":
        return [ver.verify_concat(d), ver.verify_shift(d, n)]
    if a.which == "bridge":
        return [ver.verify_bridge_concat(d, n, n)]
    if a.which == "zeta":
        return [ver.verify_zeta(d, n, 2 if a.max_j is None else a.max_j)]
    if a.which == "single-contact":
        return [ver.verify_single_contact(d, n)]
    return [ver.verify_supermult(d, n)]


_CLAIMS = {
    "attach_marks_tree": "marked trees: injective, detach inverts attach, |T_N^(j)| matches and <= (N+j) t_(N+j)",
    "attach_marks_walk": "marked walks: injective, detach inverts attach, length <= N+2j",
    "tree_concat": "tree concatenation: surface additive, injective, inverse recovers factors",
    "shift_to_star": "small-span shift: lands in D_N, injective",
    "bridge_concat": "bridge concatenation: closed and injective",
    "build_zeta": "zeta bridges: length J+1+2kn, |H| >= k ln^2 n, factors recovered",
    "single_contact": "#{T in T+_N : |H| = 1} = |T+_(N-1)|",
    "supermultiplicativity": "t_N t_M <= t_(N+M) and c_(N+M) <= c_N c_M",
}


def cmd_verify(a, workers):
    reps = _verifiers(a)
    rows = []
    for r in reps:
        verdict = "PASS" if r.passed else "FAIL"
        _say(f"{verdict} {r.map_name} d={a.dim} N<={a.n}: {_CLAIMS.get(r.map_name, '')}")
        if not r.passed:
            _say(f"  witness: {json.dumps(ver.plain(r.witness))}")
        rows.append({"verifier": r.map_name, "d": a.dim, "N": a.n, "domain_size": r.domain_size,
                     "image_size": r.image_size, "injective": r.injective,
                     "verdict": verdict, "rigor": ads.EXACT})
    payload = [json.loads(r.to_json()) for r in reps]
    return rows, payload, all(r.passed for r in reps), {"verdict": ads.EXACT}


def _grid_default(a, default):
    return a.beta_grid if a.beta_grid is not None else ([a.beta] if a.beta is not None else default)


def cmd_theorem1(a, workers):
    grid = _grid_default(a, [-0.5, 0.0, 0.1, 0.2])
    rep = ads.theorem1_bound_report(a.dim, a.n, grid, a.max_j, a.model if a.model != "walk" else TREE,
                                    a.animal_convention, workers)
    rows = [{"table": "marked", **r} for r in rep["marked_counts"]] + \
           [{"table": "partition", **r} for r in rep["rows"]]
    _say(f"{'PASS' if rep['passed'] else 'FAIL'} finite-N desorption chain for trees, N<={a.n}")
    return rows, rep, rep["passed"], {"rows": "per-row"}


def cmd_theorem3(a, workers):
    grid = _grid_default(a, [0.0, 0.1, 0.25, 0.5])
    rep = ads.theorem3_bound_report(a.dim, a.n, grid, a.max_j, workers=workers)
    rows = [{"table": "site-vs-edge", **r} for r in rep["rows"]] + \
           [{"table": "marked", **r} for r in rep["marked_counts"]]
    for entry in rep["assembly"]:
        rows.append({"table": "assembly", "beta": entry["beta"], "epsilon": entry["epsilon"],
                     "geometric_factor": entry.get("geometric_factor", ""), "rigor": ads.ESTIMATE})
    bad = [r for r in rep["rows"] if not r["ok"]]
    _say(f"{'PASS' if rep['passed'] else 'FAIL'} finite-N desorption chain for walks, N<={a.n}"
         + (f" ({len(bad)} site-vs-edge rows violated)" if bad else ""))
    return rows, rep, rep["passed"], {"rows": "per-row"}


def cmd_sample(a, workers):
    if a.method == MCMC:
        run = sample_trees_mcmc(a.dim, a.n, a.seed, a.size)
    else:
        if a.model != "walk":
            raise UsageError("PERM/Rosenbluth sampling is for --model walk; use --method mcmc for trees")
        run = sample_walks(a.dim, a.n, a.method, a.seed, a.size, bridge=a.bridge, threads=workers)
    rows = []
    if run.by_length:
        for name, ests in run.by_length.items():
            for n, est in enumerate(ests, start=1):
                rows.append({"model": run.model, "d": run.d, "N": n, "method": run.method, "seed": run.seed,
                             "quantity": name, "estimate": est.value, "stderr": est.stderr,
                             "n_eff": est.n_eff, "rigor": ads.ESTIMATE})
    else:
        rows = [{**r, "rigor": ads.ESTIMATE} for r in run.rows()]
    for name, est in run.estimates.items():
        _say(f"{name}: {est.value!r} +- {est.stderr!r}")
    return rows, run.to_json(), True, {"estimates": ads.ESTIMATE}


def cmd_span_report(a, workers):
    ns = a.n_list or list(range(2, a.n + 1))
    rep = span_condition_report(a.model, a.dim, ns, a.delta_grid, a.exact_max, a.seed, a.size,
                                a.animal_convention, workers)
    rows = [{"model": a.model, "d": a.dim, **r} for r in rep["rows"]]
    return rows, rep, True, {"rows": "per-row"}


COMMANDS = {
    "enumerate": cmd_enumerate,
    "profile": cmd_profile,
    "spans": cmd_spans,
    "partition": cmd_partition,
    "growth": cmd_growth,
    "verify": cmd_verify,
    "theorem1": cmd_theorem1,
    "theorem3": cmd_theorem3,
    "sample": cmd_sample,
    "span-report": cmd_span_report,
}


# --------------------------------------------------------------------------
# output


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _cell(v):
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, default=str)
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return v


def render_csv(rows: list, mid: str) -> str:
    fields = ["manifest_id"]
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", restval="")
    w.writeheader()
    for r in rows:
        w.writerow({"manifest_id": mid, **{k: _cell(v) for k, v in r.items()}})
    return buf.getvalue()


def render_json(payload, mid: str, command: str) -> str:
    return json.dumps({"manifest_id": mid, "command": command, "result": payload},
                      indent=2, sort_keys=True, default=ver.plain) + "\n"


def _config(a) -> dict:
    cfg = {k: v for k, v in vars(a).items() if k != "command"}
    return json.loads(json.dumps(cfg, default=str))


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        a = build_parser().parse_args(argv)
    except UsageError as exc:
        _say(str(exc))
        return EXIT_USAGE
    workers = a.threads if a.threads is not None else default_threads()
    if workers < 1:
        _say("--threads must be >= 1")
        return EXIT_USAGE
    name = a.command if a.command != "verify" else f"verify {a.which}"
    t0 = time.perf_counter()
    try:
        rows, payload, passed, rigor = COMMANDS[a.command](a, workers)
    except UsageError as exc:
        _say(str(exc))
        return EXIT_USAGE
    except ResourceLimitExceeded as exc:
        _say(f"resource limit: {exc}")
        return EXIT_RESOURCE
    except (InvalidConfiguration, ValueError) as exc:
        _say(f"invalid configuration: {exc}")
        return EXIT_USAGE
    except LatpolyError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    manifest = RunManifest(
        command=name,
        argv=tuple(argv),
        config=_config(a),
        code_version=code_version(),
        animal_convention=a.animal_convention if a.model == ANIMAL else None,
        log_convention=LOG_CONVENTION,
        seeds=(a.seed,),
        rigor=rigor,
        timing={"seconds": round(time.perf_counter() - t0, 6), "threads": workers},
    )
    mid = manifest.id
    text = render_csv(rows, mid) if a.format == "csv" else render_json(payload, mid, name)
    if a.out:
        Path(a.out).parent.mkdir(parents=True, exist_ok=True)
        Path(a.out).write_text(text)
        manifest.write(f"{a.out}.manifest.json")
    else:
        sys.stdout.write(text)
        manifest.write(Path(a.manifest_dir) / f"{mid}.json")
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
