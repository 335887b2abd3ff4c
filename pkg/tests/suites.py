"""Seeded acceptance suites.

Each suite returns ``(report, violations)``.  ``report`` is a list of text
lines that depends only on the seed (no timings), so reruns can be compared
byte for byte.
"""
import numpy as np

from modalspec import branching, linear, lts
from modalspec.cli import main as cli_main, matrix_rows, run_xcheck
from modalspec.dmts import chi_embed, modal_refines, satisfies
from modalspec.generate import (
    GenParams,
    random_dmts_pair,
    random_lts,
    random_lts_pair,
    random_refinement_pair,
    sample_implementation,
)
from modalspec.relations import SwitchBound

# acceptance results, filled by test_acceptance.py: name -> (passed, detail)
ACCEPTANCE = {}

BRANCHING_BOUNDS = ["0", "0r", "1", "1r", "2", "2r", "inf"]
LINEAR_BOUNDS = ["0", "0r", "1", "1r", "2", "2r"]


def _lts_pairs(n, seed, max_states, labels):
    params = GenParams(max_states=max_states, n_labels=labels)
    return [random_lts_pair(params.with_seed(seed + t)) for t in range(n)]


def _tally(report, name, counts):
    for key in sorted(counts):
        report.append(f"{name} {key}: {counts[key]}")


def suite_branching_adequacy(n=500, seed=1000):
    report, bad, holds = [], 0, {b: 0 for b in BRANCHING_BOUNDS}
    for t, (i1, i2) in enumerate(_lts_pairs(n, seed, 6, 3)):
        c1, c2 = chi_embed(i1), chi_embed(i2)
        for b in BRANCHING_BOUNDS:
            bound = SwitchBound.parse(b)
            spec = branching.branching_refines(c1, c2, bound) is not None
            model = branching.equiv_branching(i1, i2, bound)
            holds[b] += model
            if spec != model:
                bad += 1
                report.append(f"disagree seed={seed + t} k={b}")
    _tally(report, "equivalent pairs", holds)
    return report, bad


def suite_linear_adequacy(n=300, seed=2000):
    report, bad, holds = [], 0, {b: 0 for b in LINEAR_BOUNDS}
    for t, (i1, i2) in enumerate(_lts_pairs(n, seed, 5, 3)):
        c1, c2 = chi_embed(i1), chi_embed(i2)
        for b in LINEAR_BOUNDS:
            bound = SwitchBound.parse(b)
            spec = linear.linear_refines(c1, c2, bound) is not None
            model = linear.equiv_linear(i1, i2, bound)
            holds[b] += model
            if spec != model:
                bad += 1
                report.append(f"disagree seed={seed + t} k={b}")
    _tally(report, "equivalent pairs", holds)
    return report, bad


def suite_bisim_adequacy(n=500, seed=3000):
    report, bad, holds = [], 0, 0
    for t, (i1, i2) in enumerate(_lts_pairs(n, seed, 6, 3)):
        c1, c2 = chi_embed(i1), chi_embed(i2)
        fwd = modal_refines(c1, c2) is not None
        bwd = modal_refines(c2, c1) is not None
        bis = lts.bisimilar(i1, i2) is not None
        holds += bis
        if not fwd == bwd == bis:
            bad += 1
            report.append(f"disagree seed={seed + t}")
    report.append(f"bisimilar pairs: {holds}")
    return report, bad


def suite_zero_is_simulation(n=500, seed=4000):
    report, bad, holds = [], 0, 0
    params = GenParams(max_states=5, n_labels=2)
    zero = SwitchBound(0)
    for t in range(n):
        d1, d2 = random_dmts_pair(params.with_seed(seed + t))
        a = branching.branching_refines(d1, d2, zero) is not None
        b = branching.sim_refines(d1, d2) is not None
        holds += a
        if a != b:
            bad += 1
            report.append(f"disagree seed={seed + t}")
    report.append(f"refining pairs: {holds}")
    return report, bad


def suite_game_adequacy(n=200, seed=5000):
    """Three-engine unanimity through the ``xcheck`` command, LTS and DMTS inputs."""
    report, bad = [], 0
    for kind in ("lts", "dmts"):
        s = run_xcheck(n, seed, BRANCHING_BOUNDS, kind=kind, relation="branching")
        for b, c in s["bounds"].items():
            report.append(f"{kind} k={b}: {c['trials']} trials, {c['holds']} hold, "
                          f"{c['disagreements']} disagreements")
        bad += len(s["disagreements"])
        # the exit code is the contract
        code = cli_main(["xcheck", "--trials", "0", "--kind", kind])
        bad += code != 0
    return report, bad


# verdicts recorded for the fixture pairs, each as (lhs <= rhs, rhs <= lhs, equiv);
# confirmed by the oracle in test_fixtures.py
FIXTURE_MATRIX = {
    ("DET", "NDET"): {
        "bisim": (False, False, False),
        "sim": (False, True, False),
        "branching k=0": (False, True, False),
        "branching k=0r": (False, False, False),
        "branching k=1": (False, False, False),
        "branching k=1r": (False, False, False),
        "branching k=2": (False, False, False),
        "branching k=2r": (False, False, False),
        "branching k=inf": (False, False, False),
        "linear k=0": (True, True, True),
        "linear k=0r": (True, False, False),
        "linear k=1": (True, False, False),
        "linear k=1r": (False, False, False),
        "linear k=2": (False, False, False),
        "linear k=2r": (False, False, False),
        "linear k=inf (experimental)": (False, False, False),
    },
    ("P", "Q"): {
        "bisim": (False, False, False),
        "sim": (True, True, True),
        "branching k=0": (True, True, True),
        "branching k=0r": (False, True, False),
        "branching k=1": (False, True, False),
        "branching k=1r": (False, False, False),
        "branching k=2": (False, False, False),
        "branching k=2r": (False, False, False),
        "branching k=inf": (False, False, False),
        "linear k=0": (True, True, True),
        "linear k=0r": (False, True, False),
        "linear k=1": (False, True, False),
        "linear k=1r": (False, False, False),
        "linear k=2": (False, False, False),
        "linear k=2r": (False, False, False),
        "linear k=inf (experimental)": (False, False, False),
    },
    ("LOOP", "I"): {
        "bisim": (False, False, False),
        "sim": (False, True, False),
        "branching k=0": (False, True, False),
        "branching k=0r": (False, False, False),
        "branching k=1": (False, False, False),
        "branching k=1r": (False, False, False),
        "branching k=2": (False, False, False),
        "branching k=2r": (False, False, False),
        "branching k=inf": (False, False, False),
        "linear k=0": (False, True, False),
        "linear k=0r": (False, False, False),
        "linear k=1": (False, False, False),
        "linear k=1r": (False, False, False),
        "linear k=2": (False, False, False),
        "linear k=2r": (False, False, False),
        "linear k=inf (experimental)": (False, False, False),
    },
}


def suite_fixture_matrix(fixtures):
    report, bad = [], 0
    for (a, b), expected in FIXTURE_MATRIX.items():
        rows = {n: (f, g, e) for n, f, g, e in matrix_rows(fixtures[a], fixtures[b])}
        for name, want in expected.items():
            got = rows[name]
            ok = got == want
            bad += not ok
            report.append(f"{a}/{b} {name}: {got} {'ok' if ok else 'expected ' + str(want)}")
        bad += set(rows) != set(expected)
    return report, bad


def suite_modal_soundness(n=100, impls=50, seed=7000):
    report, bad = [], 0
    params = GenParams(max_states=5, n_labels=2)
    sat1 = not_refining = 0
    for t in range(n):
        p = params.with_seed(seed + t)
        d1, d2 = random_refinement_pair(p)
        if modal_refines(d1, d2) is None:
            not_refining += 1
            continue
        rng = np.random.default_rng(p.seed)
        for u in range(impls):
            if u % 2 == 0:
                i = sample_implementation(d1, rng)
                if i is None:
                    i = random_lts(params, rng)
            else:
                i = random_lts(params, rng)
            if satisfies(i, d1):
                sat1 += 1
                if not satisfies(i, d2):
                    bad += 1
                    report.append(f"violation seed={p.seed} implementation={u}")
    bad += not_refining
    report.append(f"pairs={n} non-refining={not_refining} implementations of d1: {sat1}")
    return report, bad


def suite_hierarchy(n=300, seed=8000):
    report, bad = [], 0
    counts = {"truncation": 0, "ready": 0, "branching-linear": 0}
    finite = [SwitchBound(k, r) for k in range(4) for r in (False, True)]
    inf = SwitchBound.parse("inf")
    for t, (i1, i2) in enumerate(_lts_pairs(n, seed, 5, 3)):
        br = {b: branching.branching_family(i1, i2, b) is not None for b in finite + [inf]}
        li = {b: linear.linear_family(i1, i2, b) is not None for b in finite + [inf]}
        for fam, v in (("branching", br), ("linear", li)):
            for k in range(3):
                for r in (False, True):
                    if v[SwitchBound(k + 1, r)] and not v[SwitchBound(k, r)]:
                        bad += 1
                        report.append(f"truncation {fam} seed={seed + t} k={k + 1}{'r' * r}")
                    counts["truncation"] += 1
            for k in range(4):
                if v[SwitchBound(k, True)] and not v[SwitchBound(k)]:
                    bad += 1
                    report.append(f"ready {fam} seed={seed + t} k={k}")
                counts["ready"] += 1
            if v[inf] and not v[SwitchBound(3)]:
                bad += 1
                report.append(f"truncation {fam} seed={seed + t} k=inf")
        for b in finite + [inf]:
            if br[b] and not li[b]:
                bad += 1
                report.append(f"branching-linear seed={seed + t} k={b}")
            counts["branching-linear"] += 1
    _tally(report, "implications checked", counts)
    return report, bad
