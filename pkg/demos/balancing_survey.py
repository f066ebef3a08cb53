"""
Which means are balanced?
=========================

The balancing equation asks that m(m(x,u), m(u,y)) = u for u = m(x,y).
Quasi-arithmetic means satisfy it; conjugating or fitting balanced means
keeps it; a generic Matkowski mean breaks it.
"""

from meanlab import Interval, check_property, make_mean
from meanlab.means import ARITHMETIC, Conjugate, ExampleK, Fitted, Matkowski, QuasiArithmetic

iv = Interval(0.5, 2.0)
cases = {
    "arithmetic": ARITHMETIC,
    "geometric": QuasiArithmetic("log(x)"),
    "harmonic": QuasiArithmetic("1/x"),
    "conj(A, exp)": Conjugate(ARITHMETIC, "exp(x)"),
    "fit(A, geometric)": Fitted(ARITHMETIC, QuasiArithmetic("log(x)")),
    "matkowski(x, x+5)": Matkowski("x", "x+5"),
    "matkowski(x, exp x)": Matkowski("x", "exp(x)"),
    "example K, t=1/4": ExampleK("x", 0.25),
}

print(f"{'mean':<22}{'max defect':>14}  verdict")
for name, spec in cases.items():
    rep = check_property(make_mean(spec, iv), "balancing", grid_n=33)
    print(f"{name:<22}{rep.max_defect:>14.3e}  {rep.verdict}")
