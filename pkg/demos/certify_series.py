"""Brute-force sums against closed forms, with tail bounds.

Run: python3 demos/certify_series.py
"""

from fractions import Fraction

from wellsum import ExactValue, PrecisionContext, formulas, verifier

ctx = PrecisionContext(320)

# A Bessel family: Landau's bound gives a rigorous tail.
fam = formulas.table_family(1, 3)
res = verifier.certify(fam, None, 400, ctx)
print(fam, res.verdict, "diff", float(res.difference), "bound", res.tail_bound, res.bound_kind)

# Slowly decaying rows converge like N^-2; more terms tighten the bound.
for n in (100, 400, 1600):
    partial, bound = verifier.sum_series(formulas.OddBesselSq(1, 2), n, ctx)
    print(n, float(Fraction(1, 3) - Fraction(str(partial))), bound)

# Hypergeometric rows with alpha != beta only get a fitted (heuristic) bound.
res = verifier.certify(formulas.HyperSq(2, Fraction(3, 2), 2), None, 200, ctx)
print(res.family, res.verdict, res.bound_kind, res.notes)

# A wrong closed form is caught.
wrong = formulas.family_closed(fam) + ExactValue(Fraction(1, 10**12))
print("perturbed:", verifier.certify(fam, wrong, 400, ctx).verdict)

# The nine-series identity of the state (1/2, 7/2).
print(verifier.identity24_check(400, ctx).to_dict())

print(verifier.report_markdown([res]))
