"""A tour of the switching spectrum on three small process pairs.

Run with ``python3 demos/spectrum_tour.py``; each ``# %%`` block also runs
as a notebook cell.
"""
# %%
from modalspec import (Lts, SwitchBound, bisimilar, chi_embed, cross_check,
                       equiv_branching, equiv_linear, modal_refines, simulation_equivalent)
from modalspec.cli import matrix_rows

# a.(b+c) against a.b + a.c
det = Lts(4, 0, frozenset({(0, "a", 1), (1, "b", 2), (1, "c", 3)}))
ndet = Lts(5, 0, frozenset({(0, "a", 1), (1, "b", 2), (0, "a", 3), (3, "c", 4)}))
# a + a.b against a.b
p = Lts(4, 0, frozenset({(0, "a", 1), (0, "a", 2), (2, "b", 3)}))
q = Lts(3, 0, frozenset({(0, "a", 1), (1, "b", 2)}))

# %%
# the two ends of the spectrum: trace-like at k=0, bisimulation-like at the top
print("det ~ ndet (bisim):", bisimilar(det, ndet) is not None)
print("p, q simulation equivalent:", simulation_equivalent(p, q))
for k in ("0", "0r", "1", "inf"):
    b = SwitchBound.parse(k)
    print(f"k={k:>3}  branching p=q: {equiv_branching(p, q, b)!s:5}  "
          f"linear det=ndet: {equiv_linear(det, ndet, b) if k != 'inf' else '-'}")

# %%
# whole matrix for one pair: (lhs <= rhs, rhs <= lhs, equivalent)
for name, fwd, bwd, eq in matrix_rows(p, q):
    print(f"{name:30} {fwd!s:6} {bwd!s:6} {eq}")

# %%
# embedded into DMTS, modal refinement both ways coincides with bisimilarity
print("chi(p) <= chi(q):", modal_refines(chi_embed(p), chi_embed(q)) is not None)
print("chi(q) <= chi(q):", modal_refines(chi_embed(q), chi_embed(q)) is not None)

# %%
# three engines on the same query
report = cross_check(p, q, "1", relation="branching")
print(report.line())
