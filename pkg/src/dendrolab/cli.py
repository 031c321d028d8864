"""Command line: zset | verify | window | stats | render.

Every command prints a JSON report on stdout and writes its artifacts into
--out.  Exit status: 0 pass, 1 counterexample, 2 configuration error.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from typing import Callable, Dict, List, Optional, Tuple

from . import mapcore, plotting, probe
from .config import Config, ConfigError, build_config, load_file, parse_natural, parse_rational
from .emit import csv_text, dumps, write_text
from .lattice import VisitLattice
from .mapcore import DendriteMap, Report
from .scales import ScaleTable, build_scale_table
from .space import Point, distance_to_o, format_point, parse_point, truncate

VERIFY = ("claim1", "containment", "window", "fixed-points", "leap-oracle", "admissible")
STATS = ("density", "birkhoff", "near-o", "pair", "complexity", "hitting", "trace")

S = argparse.SUPPRESS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=S, help="JSON config file (flags override it)")
    common.add_argument("--seed", default=S, help="unsigned 64-bit seed for sampled starts")
    common.add_argument("--out", default=S, help="directory for artifacts (default .)")
    common.add_argument("--beta", default=S)
    common.add_argument("--digit-cap", dest="digit_cap", default=S,
                        help="largest decimal size kept as a literal")

    p = argparse.ArgumentParser(prog="dendrolab", parents=[common],
                                description="Desk-scale experiments on a symbolic dendrite map.")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zset", parents=[common], help="scale table as JSON")
    z.add_argument("--kmax", default=S)

    def starts_flags(sp):
        sp.add_argument("--start", action="append", default=S, help="point literal (repeatable)")
        sp.add_argument("--starts", default=S, help="number of seeded random starts")
        sp.add_argument("--region", default=S, choices=("U0", "E0"))
        sp.add_argument("--max-rank", dest="max_rank", default=S)
        sp.add_argument("--horizon", default=S)

    v = sub.add_parser("verify", parents=[common], help="run a model verifier")
    v.add_argument("which", choices=VERIFY)
    starts_flags(v)
    v.add_argument("--depth", default=S)
    v.add_argument("--branches", default=S)
    v.add_argument("--scale", default=S)
    v.add_argument("--pairs", default=S, help="random rank pairs for admissible")

    w = sub.add_parser("window", parents=[common], help="same as verify window")
    starts_flags(w)
    w.add_argument("--scale", default=S)

    st = sub.add_parser("stats", parents=[common], help="orbit statistics")
    st.add_argument("which", choices=STATS)
    starts_flags(st)
    st.add_argument("--checkpoints", default=S, help="comma list; names like M1, N2 allowed")
    st.add_argument("--observable", default=S, choices=("distance_to_o", "indicator_U0", "indicator_Uj"))
    st.add_argument("--j", default=S)
    st.add_argument("--eps", default=S)
    st.add_argument("--delta", default=S)
    st.add_argument("--x", default=S)
    st.add_argument("--y", default=S)
    st.add_argument("--n", default=S, help="comma list of word lengths")
    st.add_argument("--J", default=S, help="coarsening cap")
    st.add_argument("--oracle", action="store_true", default=S)
    st.add_argument("--U", default=S, help="whole | C:<prefix> | ball:<eps>")
    st.add_argument("--V", default=S)
    st.add_argument("--steps", default=S)
    st.add_argument("--precision", default=S)

    r = sub.add_parser("render", parents=[common], help="SVG drawing of a truncation")
    r.add_argument("--depth", default=S)
    r.add_argument("--branches", default=S)
    r.add_argument("--overlay-orbit", dest="overlay_orbit", default=S)
    r.add_argument("--steps", default=S)
    r.add_argument("-o", "--output", default=S)
    return p


class Run:
    """Resolved config plus the objects every command needs."""

    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.table: ScaleTable = build_scale_table(cfg.kmax, cfg.beta, cfg.digit_cap)
        self.fmap = DendriteMap(self.table)

    def horizon(self, default: int) -> int:
        h = default if self.cfg.horizon is None else parse_natural(self.cfg.horizon, self.table)
        if h < 1:
            raise ConfigError("horizon must be positive")
        return h

    def starts(self, default: Optional[List[str]] = None, region: Optional[str] = None) -> List[Point]:
        c = self.cfg
        if c.start:
            return [parse_point(s) for s in c.start]
        if c.starts:
            return mapcore.sample_starts(c.starts, c.seed, region or c.region, c.max_rank)
        return [parse_point(s) for s in default or ["0.0:zeros"]]

    def path(self, name: str) -> str:
        os.makedirs(self.cfg.out, exist_ok=True)
        return os.path.join(self.cfg.out, name)


def parse_region(text: str) -> probe.Region:
    s = text.strip()
    if s == "whole":
        return probe.whole()
    if s.startswith("ball:"):
        return probe.ball(parse_rational(s[5:]))
    if s.startswith("C:") or s.startswith("U"):
        body = s[2:] if s.startswith("C:") else s[1:]
        try:
            return probe.cylinder(*(int(a) for a in body.split(".")))
        except ValueError:
            pass
    raise ConfigError("bad region %r (whole | C:<prefix> | U<j> | ball:<eps>)" % text)


# commands --------------------------------------------------------------------------

Result = Tuple[int, dict]


def cmd_zset(run: Run) -> Result:
    text = run.table.to_json()
    write_text(run.path("zset.json"), text)
    return 0, {"text": text}


def _merge(name: str, reports: List[Report]) -> Report:
    checked = sum(r.checked for r in reports)
    for r in reports:
        if not r.passed:
            return Report(name, False, checked, r.counterexample, r.details)
    details = reports[0].details if len(reports) == 1 else {"runs": str(len(reports))}
    return Report(name, True, checked, details=details)


def cmd_verify(run: Run, which: str) -> Result:
    c = run.cfg
    if which == "claim1":
        rep = mapcore.verify_claim1(c.depth, c.branches, run.fmap.step)
    elif which == "containment":
        starts = run.starts(region="E0")
        h = run.horizon(10_000)
        samples = 10 if len(starts) == 1 else 0
        rep = _merge("containment", [mapcore.verify_containment(p, h, run.fmap, samples) for p in starts])
    elif which == "window":
        K = c.scale
        N_next = run.table.row(K + 1).N
        if not N_next.is_literal:
            raise ConfigError("N_%d is not materialized; the window cannot be reached" % (K + 1))
        starts = run.starts(region="U0") if (c.start or c.starts) else mapcore.sample_starts(100, c.seed)
        h = run.horizon(N_next.value + N_next.value // 20)
        rep = mapcore.verify_disjoint_window(K, starts, h, run.fmap)
    elif which == "fixed-points":
        fixed = mapcore.fixed_points(c.depth, c.branches, run.fmap)
        fix = mapcore.verify_fixation(c.depth, c.branches, run.fmap)
        ok = [format_point(p) for p in fixed] == ["o"]
        details = {"fixed_points": [format_point(p) for p in fixed], "fixation": fix.as_json()}
        cex = None if ok else {"fixed_points": details["fixed_points"]}
        if ok and not fix.passed:
            cex = fix.counterexample
        rep = Report("fixed-points", ok and fix.passed, fix.checked, cex, details)
    elif which == "leap-oracle":
        starts = run.starts(region="U0") if (c.start or c.starts) else mapcore.sample_starts(100, c.seed)
        h = run.horizon(100_000)
        rep = _merge("leap-oracle", [mapcore.leap_oracle(p, h, run.fmap) for p in starts])
    else:
        rep = mapcore.verify_admissibility(VisitLattice(run.table), c.max_rank, c.pairs, c.seed)
    payload = rep.as_json()
    write_text(run.path("verify-%s.json" % which), dumps(payload))
    return (0 if rep.passed else 1), payload


def _fig(run: Run, which: str) -> str:
    return run.path("stats-%s.svg" % which)


def stats_density(run: Run):
    cps = [parse_natural(x, run.table) for x in (run.cfg.checkpoints or ["M1", "N2"])]
    reports = [probe.density_profile(x, cps, run.fmap) for x in run.starts()]
    rows = [(r.start, n, k, q, m) for r in reports
            for n, k, q, m in zip(r.checkpoints, r.counts, r.ratios, r.running_min)]
    first = reports[0]
    plotting.density_figure(first.checkpoints, first.ratios, first.running_min, _fig(run, "density"))
    payload = {"reports": [{"start": r.start, "checkpoints": r.checkpoints, "counts": r.counts,
                            "ratios": r.ratios, "running_min": r.running_min} for r in reports]}
    return 0, payload, (("start", "checkpoint", "count", "ratio", "running_min"), rows)


def stats_birkhoff(run: Run):
    c = run.cfg
    h = run.horizon(2_000_000)
    out = []
    for x in run.starts():
        m = probe.birkhoff(x, c.observable, h, c.j, run.fmap, c.precision)
        out.append((format_point(x), m))
    payload = {"observable": out[0][1].observable, "horizon": h,
               "reports": [{"start": s, "value": m.value, "reference": m.reference,
                            "error_bound": m.error_bound, "shift_bound": m.shift_bound} for s, m in out]}
    rows = [(s, m.observable, h, m.value, m.reference, m.error_bound, m.shift_bound) for s, m in out]
    return 0, payload, (("start", "observable", "horizon", "value", "reference", "error_bound", "shift_bound"), rows)


def stats_near_o(run: Run):
    eps = parse_rational(run.cfg.eps)
    h = run.horizon(2_000_000)
    out = [(format_point(x), probe.near_o_density(x, eps, h, run.fmap)) for x in run.starts()]
    payload = {"eps": eps, "horizon": h, "reports": [{"start": s, "density": d} for s, d in out]}
    return 0, payload, (("start", "eps", "horizon", "density"), [(s, eps, h, d) for s, d in out])


def stats_pair(run: Run):
    c = run.cfg
    x = parse_point(c.x or "0.0:zeros")
    y = parse_point(c.y or "0.0:cycle(1)")
    h = run.horizon(2_000_000)
    r = probe.pair_report(x, y, parse_rational(c.eps), parse_rational(c.delta), h, run.fmap)
    plotting.events_figure(r.separation_events, h, "separation events", _fig(run, "pair"))
    payload = {"x": r.x, "y": r.y, "eps": r.eps, "delta": r.delta, "horizon": r.horizon,
               "joint_near_o": r.joint_near_o, "joint_near_fraction": r.joint_near_fraction,
               "close_count": r.close_count, "close_fraction": r.close_fraction,
               "longest_close_run": r.longest_close_run, "separation_events": r.separation_events}
    return 0, payload, (("separation_event",), [(n,) for n in r.separation_events])


ORACLE_MAX_N = 32


def stats_complexity(run: Run):
    c = run.cfg
    ns = c.n or [16, 64, 256, 1024, 8192]
    h = run.horizon(1 << 17)
    starts = run.starts() if (c.start or c.starts) else probe.standard_sample(c.max_rank)
    rep = probe.word_complexity(starts, ns, c.J, h, run.fmap)
    h_est = ["%.12e" % rep.h_est(i) for i in range(len(ns))]
    code, oracle = 0, None
    if c.oracle:
        small = [n for n in ns if n <= ORACLE_MAX_N]
        naive = probe.word_complexity_naive(starts, small, c.J, h, run.fmap)
        oracle = {}
        for n, w in zip(small, naive.counts):
            match = w == rep.counts[ns.index(n)]
            oracle[str(n)] = {"W_oracle": w, "match": match}
            code = code or (0 if match else 1)
    plotting.complexity_figure(ns, [rep.h_est(i) for i in range(len(ns))], _fig(run, "complexity"))
    payload = {"J": c.J, "horizon": h, "orbits": len(starts), "n": ns, "W": rep.counts,
               "h_est": h_est, "oracle": oracle}
    return code, payload, (("n", "W", "h_est"), list(zip(ns, rep.counts, h_est)))


def stats_hitting(run: Run):
    c = run.cfg
    U, V = parse_region(c.U), parse_region(c.V)
    h = run.horizon(1_100_000)
    starts = run.starts() if (c.start or c.starts) else probe.standard_sample(c.max_rank)
    rep = probe.hitting_profile(U, V, h, starts, run.fmap)
    plotting.events_figure([lo for lo, _ in rep.runs[:5000]], h, "hitting runs (start times)", _fig(run, "hitting"))
    payload = {"U": c.U, "V": c.V, "horizon": h, "starts": len(starts),
               "label": "diagnostic: sampled subset of N(U,V); no thickness claim",
               "hit_count": rep.hit_count, "runs": len(rep.runs),
               "longest_run": rep.longest_run, "largest_miss": rep.largest_miss, "first_hits": rep.hits(50)}
    return 0, payload, (("lo", "hi"), rep.runs)


def stats_trace(run: Run):
    c = run.cfg
    x = run.starts()[0]
    tr = run.fmap.trace(x, c.steps)
    rows, heights = [], []
    for n in range(c.steps + 1):
        p = tr.point_at(n)
        hgt = None if p.is_origin else p.height
        heights.append(hgt)
        rows.append((n, "o" if hgt is None else hgt, p.symbol(1), (not p.is_origin) and hgt == 0,
                     distance_to_o(p, c.precision)))
    plotting.trace_figure(list(range(c.steps + 1)), heights, _fig(run, "trace"))
    payload = {"start": format_point(x), "steps": c.steps, "precision": c.precision, "visits": tr.visits()}
    return 0, payload, (("n", "height", "rank", "in_U0", "distance_to_o"), rows)


STATS_FN: Dict[str, Callable] = {
    "density": stats_density, "birkhoff": stats_birkhoff, "near-o": stats_near_o, "pair": stats_pair,
    "complexity": stats_complexity, "hitting": stats_hitting, "trace": stats_trace,
}


def cmd_stats(run: Run, which: str) -> Result:
    code, payload, (header, rows) = STATS_FN[which](run)
    payload = dict({"stat": which}, **payload)
    write_text(run.path("stats-%s.json" % which), dumps(payload))
    write_text(run.path("stats-%s.csv" % which), csv_text(header, rows))
    return code, payload


def cmd_render(run: Run) -> Result:
    c = run.cfg
    nodes = truncate(c.depth, c.branches)
    highlight: List[tuple] = []
    if c.overlay_orbit:
        p = parse_point(c.overlay_orbit)
        tr = run.fmap.trace(p, c.steps)
        for n in range(c.steps + 1):
            key = tuple(itertools.islice(tr.point_at(n).symbols(), 2))
            if key not in highlight:
                highlight.append(key)
    known = {nd.prefix for nd in nodes}
    shown = [k for k in highlight if k in known]
    path = c.output or run.path("dendrite.svg")
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    plotting.dendrite_figure(nodes, c.branches, shown, path)
    payload = {"svg": path, "nodes": len(nodes), "depth": c.depth, "branches": c.branches,
               "highlighted": [format_point(Point(k)) for k in shown]}
    return 0, payload


# entry point -------------------------------------------------------------------------

def _report_counterexample(command: str, which: str, payload: dict, cfg: Config) -> None:
    cex = payload.get("counterexample") or {}
    print("counterexample: %s" % dumps(cex).strip(), file=sys.stderr)
    start = cex.get("start") if isinstance(cex, dict) else None
    if start:
        horizon = cfg.horizon or (payload.get("details") or {}).get("horizon") or ""
        print("replay: dendrolab %s %s --start '%s'%s" % (
            command, which, start, " --horizon %s" % horizon if horizon else ""), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    which = args.pop("which", "window" if command == "window" else None)
    try:
        file_values = load_file(args.pop("config")) if "config" in args else {}
        cfg = build_config(file_values, args)
        run = Run(cfg)
        if command == "zset":
            code, payload = cmd_zset(run)
            sys.stdout.write(payload["text"])
            return code
        if command in ("verify", "window"):
            code, payload = cmd_verify(run, which)
        elif command == "stats":
            code, payload = cmd_stats(run, which)
        else:
            code, payload = cmd_render(run)
    except (ConfigError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    sys.stdout.write(dumps(payload))
    if code == 1 and command != "stats":
        _report_counterexample("verify", which, payload, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
