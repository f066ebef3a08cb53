"""
Matkowski means: three views of one dichotomy
=============================================

For a Matkowski mean built from f and g, constancy of f - g, symmetry of
the mean, balancing, and being locally quasi-arithmetic with generator
f + g all switch on and off together.
"""

from meanlab import Interval, check_property, local_qa_scan, make_mean, matkowski_criterion
from meanlab.dynamics import reaches_bound
from meanlab.means import Matkowski

iv = Interval(0.5, 2.0)
pairs = [("x", "x+5"), ("log(x)", "log(x)+2"), ("x", "exp(x)"), ("x^3", "x^3+x")]

for f, g in pairs:
    m = make_mean(Matkowski(f, g), iv)
    crit = matkowski_criterion(f, g, iv)
    bal = check_property(m, "balancing", 17)
    radius = local_qa_scan(m, f"{f} + {g}", 1.2)
    print(f"f={f:<8} g={g:<12}"
          f" spread(f-g)={crit.constancy_defect:9.2e}"
          f" symmetry={crit.symmetry_defect:9.2e}"
          f" balancing={bal.max_defect:9.2e}"
          f" local QA everywhere={reaches_bound(m, 1.2, radius)}")
