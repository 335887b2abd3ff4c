"""Command-line front end.

Exit codes are the machine contract: 0 the relation holds (or the command
succeeded), 1 it does not hold (or ``xcheck`` found a disagreement), 2 an
error or disagreeing engines in ``check``.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import branching, games, linear, lts, oracle
from .dmts import Dmts, chi_embed, modal_refines
from .errors import ModalSpecError, SizeLimit
from .formats import read_system, write_dmts, write_aut, write_text
from .generate import GenParams, random_dmts, random_dmts_pair, random_lts, random_lts_pair
from .lts import Lts
from .relations import SwitchBound

SCHEMA = "modalspec.check/1"
XCHECK_SCHEMA = "modalspec.xcheck/1"
RELATIONS = ("bisim", "sim", "sim-equiv", "modal", "sim-refine", "branching", "linear")
LTS_ONLY = ("bisim", "sim", "sim-equiv")
DMTS_ONLY = ("modal", "sim-refine")


class UsageError(ModalSpecError):
    pass


def _bound(args) -> SwitchBound:
    return SwitchBound.parse(str(args.k) + ("r" if args.ready else ""))


def _relation_size(result):
    if result is None:
        return None
    if hasattr(result, "size"):
        return result.size()
    return len(result)


class Query:
    """One resolved ``check`` request: inputs after embedding plus the engines to run."""

    def __init__(self, args):
        self.rel = args.rel
        self.equiv = args.equiv or args.rel in ("bisim", "sim-equiv")
        self.literal = args.literal_defs
        if self.literal and self.rel != "linear":
            raise UsageError("--literal-defs only applies to --rel linear")
        self.bound = _bound(args) if self.rel in ("branching", "linear") else None
        self.lhs = read_system(args.lhs)
        self.rhs = read_system(args.rhs)
        self.notes = []
        self._coerce()

    def _coerce(self):
        kinds = (isinstance(self.lhs, Lts), isinstance(self.rhs, Lts))
        if self.rel in LTS_ONLY:
            if not all(kinds):
                raise UsageError(f"--rel {self.rel} needs two LTS inputs")
            return
        dmts_wanted = self.rel in DMTS_ONLY or not all(kinds)
        if not dmts_wanted:
            return
        if kinds[0]:
            self.lhs = chi_embed(self.lhs)
            self.notes.append("embedded LHS")
        if kinds[1]:
            self.rhs = chi_embed(self.rhs)
            self.notes.append("embedded RHS")

    @property
    def on_lts(self) -> bool:
        return isinstance(self.lhs, Lts)

    def directions(self):
        if self.equiv and self.rel not in ("bisim", "sim-equiv"):
            return [(self.lhs, self.rhs), (self.rhs, self.lhs)]
        return [(self.lhs, self.rhs)]

    def engines(self) -> dict:
        """name -> callable(x1, x2) returning (verdict, detail dict), for one direction."""
        rel, b = self.rel, self.bound
        out = {}
        if rel == "bisim":
            out["relation"] = lambda x, y: _witness(lts.bisimilar(x, y))
            out["game"] = lambda x, y: _game(games.build_sim_game(x, y, SwitchBound.parse("inf")))
            out["oracle"] = lambda x, y: _plain(
                oracle.recursive_family_check(x, y, "inf") and oracle.recursive_family_check(y, x, "inf"))
        elif rel == "sim":
            out["relation"] = lambda x, y: _witness(lts.simulates(x, y))
            out["oracle"] = lambda x, y: _plain(oracle.recursive_family_check(x, y, 0))
        elif rel == "sim-equiv":
            out["relation"] = lambda x, y: _plain(lts.simulation_equivalent(x, y))
            out["game"] = lambda x, y: _game(games.build_sim_game(x, y, 0))
        elif rel == "modal":
            out["relation"] = lambda x, y: _witness(modal_refines(x, y))
        elif rel == "sim-refine":
            out["relation"] = lambda x, y: _witness(branching.sim_refines(x, y))
            out["oracle"] = lambda x, y: _plain(oracle.recursive_dmts_check(x, y, 0))
        elif rel == "branching" and self.on_lts:
            out["relation"] = lambda x, y: _witness(branching.branching_family(x, y, b))
            if self.equiv:
                out["game"] = lambda x, y: _game(games.build_sim_game(x, y, b))
            out["oracle"] = lambda x, y: _plain(oracle.recursive_family_check(x, y, b))
        elif rel == "branching":
            out["relation"] = lambda x, y: _witness(branching.branching_refines(x, y, b))
            out["game"] = lambda x, y: _game(games.build_spec_game(x, y, b))
            out["oracle"] = lambda x, y: _plain(oracle.recursive_dmts_check(x, y, b))
        elif rel == "linear" and self.on_lts:
            out["relation"] = lambda x, y: _witness(linear.linear_family(x, y, b))
            out["oracle"] = lambda x, y: _plain(oracle.linear_trace_check(x, y, b))
        else:
            lit = self.literal
            out["relation"] = lambda x, y: _witness(linear.linear_refines(x, y, b, literal=lit))
            out["oracle"] = lambda x, y: _plain(oracle.linear_dmts_check(x, y, b, literal=lit))
        return out


def _plain(verdict):
    return bool(verdict), {}


def _witness(result):
    return result is not None, {"witness_size": _relation_size(result)}


def _game(g):
    win, strategy = games.solve_game(g)
    detail = {"positions": len(g), "winner": win}
    if win == games.PLAYER_I:
        # follow the winning strategy against the first listed answer of player II
        naive = games.Strategy(games.PLAYER_II, {p: ms[0] for p, ms in enumerate(g.moves) if ms})
        play = games.distinguishing_play(g, strategy, naive)
        detail["counterexample"] = [g.describe(p) for p in play.positions]
    return win == games.PLAYER_II, detail


def run_check(args) -> dict:
    q = Query(args)
    engines = q.engines()
    if args.engine == "relation":
        engines = {"relation": engines["relation"]}
    elif args.engine == "game":
        if "game" not in engines:
            raise UsageError(f"no game engine for --rel {q.rel} in this direction mode")
        engines = {"game": engines["game"]}
    elif "game" not in engines:
        q.notes.append("no game engine in this direction mode")
    report = {
        "schema": SCHEMA,
        "relation": q.rel,
        "bound": None if q.bound is None else str(q.bound),
        "direction": "equiv" if q.equiv else "refine",
        "lhs": str(args.lhs),
        "rhs": str(args.rhs),
        "notes": q.notes,
        "engines": {},
    }
    for name, fn in engines.items():
        start = time.perf_counter()
        verdict, details = True, []
        try:
            for x, y in q.directions():
                v, d = fn(x, y)
                details.append(d)
                verdict = verdict and v
                if not v:
                    break
        except SizeLimit as e:
            if name == "relation":
                raise
            report["engines"][name] = {"skipped": str(e)}
            continue
        report["engines"][name] = {
            "verdict": verdict,
            "directions": details,
            "wall_time_s": round(time.perf_counter() - start, 6),
        }
    verdicts = {v["verdict"] for v in report["engines"].values() if "verdict" in v}
    report["unanimous"] = len(verdicts) == 1
    report["verdict"] = verdicts.pop() if len(verdicts) == 1 else None
    return report


def _check_text(r) -> str:
    head = r["relation"] + ("" if r["bound"] is None else f" k={r['bound']}")
    lines = [f"{head} ({r['direction']}) {r['lhs']} vs {r['rhs']}"]
    lines += r["notes"]
    for name, e in r["engines"].items():
        if "skipped" in e:
            lines.append(f"  {name}: skipped ({e['skipped']})")
            continue
        extra = []
        for d in e["directions"]:
            if d.get("witness_size") is not None:
                extra.append(f"witness size {d['witness_size']}")
            if "positions" in d:
                extra.append(f"{d['positions']} positions, winner {d['winner']}")
        lines.append(f"  {name}: {'holds' if e['verdict'] else 'fails'}"
                     f" [{'; '.join(extra) or '-'}] {e['wall_time_s']:.4f}s")
        for d in e["directions"]:
            for step in d.get("counterexample", []):
                lines.append(f"    {step}")
    if not r["unanimous"]:
        lines.append("ENGINES DISAGREE")
    else:
        lines.append("holds" if r["verdict"] else "does not hold")
    return "\n".join(lines)


def cmd_check(args) -> int:
    r = run_check(args)
    print(json.dumps(r, indent=2) if args.json else _check_text(r))
    if not r["unanimous"]:
        return 2
    return 0 if r["verdict"] else 1


def cmd_embed(args) -> int:
    i = read_system(args.lts)
    if not isinstance(i, Lts):
        raise UsageError("embed expects an .aut file")
    text = write_dmts(chi_embed(i))
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


MATRIX_BOUNDS = ("0", "0r", "1", "1r", "2", "2r", "inf")


def matrix_rows(i1: Lts, i2: Lts):
    """``(name, lhs refines rhs, rhs refines lhs, equivalent)``; ``None`` cells mark caps."""

    def row(name, fwd, bwd):
        try:
            f, b = fwd(), bwd()
        except SizeLimit:
            return (name, None, None, None)
        return (name, f, b, f and b)

    rows = [
        row("bisim", lambda: lts.bisimilar(i1, i2) is not None,
            lambda: lts.bisimilar(i2, i1) is not None),
        row("sim", lambda: lts.simulates(i1, i2) is not None,
            lambda: lts.simulates(i2, i1) is not None),
    ]
    for b in MATRIX_BOUNDS:
        bound = SwitchBound.parse(b)
        rows.append(row(f"branching k={b}",
                        lambda: branching.branching_family(i1, i2, bound) is not None,
                        lambda: branching.branching_family(i2, i1, bound) is not None))
    for b in MATRIX_BOUNDS:
        bound = SwitchBound.parse(b)
        name = f"linear k={b}" + (" (experimental)" if not bound.finite else "")
        rows.append(row(name,
                        lambda: linear.linear_family(i1, i2, bound) is not None,
                        lambda: linear.linear_family(i2, i1, bound) is not None))
    return rows


def cmd_matrix(args) -> int:
    i1, i2 = read_system(args.lhs), read_system(args.rhs)
    if not (isinstance(i1, Lts) and isinstance(i2, Lts)):
        raise UsageError("matrix expects two .aut files")
    rows = matrix_rows(i1, i2)
    if args.json:
        print(json.dumps({"schema": "modalspec.matrix/1", "rows": [
            {"relation": n, "lhs_rhs": f, "rhs_lhs": b, "equiv": e} for n, f, b, e in rows
        ]}, indent=2))
        return 0

    def cell(v):
        return "cap" if v is None else ("yes" if v else "no")

    width = max(len(r[0]) for r in rows)
    print(f"{'relation':<{width}}  lhs<=rhs  rhs<=lhs  equiv")
    for n, f, b, e in rows:
        print(f"{n:<{width}}  {cell(f):<8}  {cell(b):<8}  {cell(e)}")
    # no ready variant exists at k = inf
    print("ready at k=inf: not defined")
    return 0


def _trial(task):
    kind, relation, params, bounds = task
    if kind == "lts":
        x1, x2 = random_lts_pair(params)
    else:
        x1, x2 = random_dmts_pair(params)
    out = []
    for b in bounds:
        report = oracle.cross_check(x1, x2, SwitchBound.parse(b), relation,
                                    oracle.default_engines(kind, relation))
        out.append((b, report.verdicts))
    return params.seed, out


def run_xcheck(trials, seed, bounds, kind="lts", relation="branching", params=None, workers=1):
    """Cross-check ``trials`` random pairs; returns the deterministic summary document."""
    params = params or GenParams(max_states=6 if kind == "lts" else 5, n_labels=3 if kind == "lts" else 2)
    tasks = [(kind, relation, params.with_seed(seed + t), bounds) for t in range(trials)]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_trial, tasks, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [_trial(t) for t in tasks]
    per_bound = {b: {"trials": 0, "holds": 0, "disagreements": 0} for b in bounds}
    disagreements = []
    for trial_seed, checks in results:
        for b, verdicts in checks:
            s = per_bound[b]
            s["trials"] += 1
            values = set(verdicts.values())
            if len(values) > 1:
                s["disagreements"] += 1
                disagreements.append({"seed": trial_seed, "bound": b, "verdicts": verdicts})
            elif values == {True}:
                s["holds"] += 1
    return {
        "schema": XCHECK_SCHEMA,
        "kind": kind,
        "relation": relation,
        "seed": seed,
        "trials": trials,
        "bounds": per_bound,
        "disagreements": disagreements,
    }


def cmd_xcheck(args) -> int:
    bounds = [b.strip() for b in args.bounds.split(",") if b.strip()]
    for b in bounds:
        SwitchBound.parse(b)
    params = GenParams(
        max_states=args.max_states, n_labels=args.labels, density=args.density, seed=args.seed,
    )
    start = time.perf_counter()
    summary = run_xcheck(args.trials, args.seed, bounds, args.kind, args.relation, params, args.workers)
    if args.json:
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"xcheck {summary['kind']} {summary['relation']} seed={summary['seed']} "
              f"trials={summary['trials']}")
        for b, s in summary["bounds"].items():
            print(f"  k={b}: {s['trials']} trials, {s['holds']} hold, "
                  f"{s['disagreements']} disagreements")
        for d in summary["disagreements"]:
            v = " ".join(f"{k}={'T' if x else 'F'}" for k, x in d["verdicts"].items())
            print(f"  DISAGREE seed={d['seed']} k={d['bound']}: {v}")
    print(f"elapsed {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return 1 if summary["disagreements"] else 0


def cmd_gen(args) -> int:
    params = GenParams(max_states=args.max_states, n_labels=args.labels,
                       density=args.density, seed=args.seed)
    text = write_aut(random_lts(params)) if args.kind == "lts" else write_dmts(random_dmts(params))
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modalspec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide one relation between two systems")
    c.add_argument("lhs")
    c.add_argument("rhs")
    c.add_argument("--rel", choices=RELATIONS, required=True)
    c.add_argument("--k", default="0", help="switch bound: a natural number or 'inf'")
    c.add_argument("--ready", action="store_true")
    c.add_argument("--equiv", action="store_true", help="check both directions")
    c.add_argument("--engine", choices=("relation", "game", "all"), default="relation")
    c.add_argument("--json", action="store_true")
    c.add_argument("--literal-defs", action="store_true",
                   help="even backward levels step into the forward chain (linear DMTS only)")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("embed", help="write the characteristic DMTS of an LTS")
    e.add_argument("lts")
    e.add_argument("out", nargs="?")
    e.set_defaults(func=cmd_embed)

    m = sub.add_parser("matrix", help="verdicts for the whole implemented spectrum")
    m.add_argument("lhs")
    m.add_argument("rhs")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_matrix)

    x = sub.add_parser("xcheck", help="cross-check engines on random pairs")
    x.add_argument("--trials", type=int, default=100)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--bounds", default="0,0r,1,1r,2,2r,inf")
    x.add_argument("--kind", choices=("lts", "dmts"), default="lts")
    x.add_argument("--relation", choices=("branching", "linear"), default="branching")
    x.add_argument("--max-states", type=int, default=6)
    x.add_argument("--labels", type=int, default=3)
    x.add_argument("--density", type=float, default=0.15)
    x.add_argument("--workers", type=int, default=1)
    x.add_argument("--json", action="store_true")
    x.set_defaults(func=cmd_xcheck)

    g = sub.add_parser("gen", help="write a random system")
    g.add_argument("--kind", choices=("lts", "dmts"), default="lts")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-states", type=int, default=5)
    g.add_argument("--labels", type=int, default=2)
    g.add_argument("--density", type=float, default=0.15)
    g.add_argument("out", nargs="?")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModalSpecError, OSError, ValueError) as e:
        if getattr(args, "json", False):
            print(json.dumps({"schema": SCHEMA, "error": str(e)}))
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
