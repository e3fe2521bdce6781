"""Generating the series tables from Parseval relations.

Run: python3 demos/tables_walkthrough.py
"""

from fractions import Fraction

from wellsum import formulas, golden

# The simplest state, psi ~ sqrt(x(1-x)).  Its coefficients are odd-n Bessel
# terms, so the Parseval relation is a single Bessel series.
half = Fraction(1, 2)
print(formulas.state_expansion(half, half))
row = formulas.table_entry(1, 1)
print(row.family, "=", row.exact)  # OddBesselSq(1, 2) = 1/3

# alpha - beta = 2 brings in three families at once; the new one is isolated
# by subtracting the rows it depends on.
row = formulas.table_entry(2, 3)
print(row.family, "=", row.exact)
print("  consumes", [str(f) for f in row.consumes])

# Even-n partners come from the all-n relations minus the odd part.
row = formulas.table_entry(4, 1)
print(row.family, "=", row.exact, "via", row.rule)

# Printed values are only compared against.  Table 5 row 7;8 disagrees.
for r in formulas.table(5):
    if not r.match:
        print("row", r.row, "generated", r.exact)
        print("        printed  ", golden.printed_value(5, r.row))

# Integer alpha with half-integer beta goes through the reduced 1F2.
print(formulas.hyper_parameters(1, half))  # ([2], [9/4, 11/4])
print(formulas.parseval_sum_closed(1, half))  # 3675/(2048 pi^2)

# The n^6 moment formula at alpha = beta = 5/2 collapses to 1/35.
print(formulas.moment_route_value(3, 2))
