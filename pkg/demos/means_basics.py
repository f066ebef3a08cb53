"""
Building and evaluating means
=============================

Every mean starts as a small spec object (or a line of the spec
mini-language) and is compiled against an open interval.
"""

import numpy as np

from meanlab import Interval, make_mean, parse_mean_spec
from meanlab.means import Cauchy, Matkowski, QuasiArithmetic

iv = Interval(0.5, 4.0)

# the geometric mean is the quasi-arithmetic mean generated by log
geo = make_mean(QuasiArithmetic("log(x)"), iv)
print("geometric mean of 1 and 4:", geo(1.0, 4.0))

# the same thing from text, as the command line would see it
spec = parse_mean_spec('qa(phi="log(x)")')
print("parsed spec:", spec, "| same mean:", make_mean(spec, iv) is geo)

# a Matkowski mean solves (f+g)(m) = f(x) + g(y); with f=x, g=exp(x) it is not symmetric
mk = make_mean(Matkowski("x", "exp(x)"), Interval(0.0, 2.0))
print("M(0.3, 1.5) =", mk(0.3, 1.5), " M(1.5, 0.3) =", mk(1.5, 0.3))

# a Cauchy mean of (phi^2, phi) falls back onto the quasi-arithmetic mean of phi
c = make_mean(Cauchy("(sqrt(x))^2", "sqrt(x)"), iv)
q = make_mean(QuasiArithmetic("sqrt(x)"), iv)
xs = iv.grid(9)
gap = max(abs(c(a, b) - q(a, b)) for a in xs for b in xs)
print(f"max |Cauchy - QA| on a 9x9 grid: {gap:.2e}")

# every mean sits between min and max
vals = np.array([[geo(a, b) for b in xs] for a in xs])
lo = np.minimum.outer(xs, xs)
hi = np.maximum.outer(xs, xs)
print("mean axiom holds on the grid:", bool(np.all((lo <= vals) & (vals <= hi))))
