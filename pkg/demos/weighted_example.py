"""
A mean that is iteratively quasi-arithmetic but not balanced
============================================================

K puts weight t on the smaller argument.  Replacing the outer K by the
arithmetic mean recovers K(x,y) exactly, yet K itself fails the balancing
and bisymmetry equations.
"""

from fractions import Fraction

from meanlab import Interval, check_property, make_mean
from meanlab.means import ExampleK
from meanlab.properties import bisymmetry_defect

iv = Interval(0.0, 1.0)
k = make_mean(ExampleK("x", 0.25), iv)

print("K(0, 1) =", k(0.0, 1.0))
print("iqa defect (phi = x):", check_property(k, "iqa", 65, phi="x").max_defect)
bal = check_property(k, "balancing", 65)
print(f"balancing defect: {bal.max_defect:.6f} at {bal.argmax}")


# exact rational arithmetic confirms the values above
def kq(x, y, t=Fraction(1, 4)):
    w = t if x <= y else 1 - t
    return w * x + (1 - w) * y


u = kq(0, 1)
print("exact balancing defect at (0,1):", abs(kq(kq(0, u), kq(u, 1)) - u))
x, y, s, v = 0, 1, Fraction(3, 5), Fraction(1, 5)
print("exact bisymmetry defect at (0,1,0.6,0.2):",
      abs(kq(kq(x, y), kq(s, v)) - kq(kq(x, s), kq(y, v))),
      "| floating point:", round(bisymmetry_defect(k, 0.0, 1.0, 0.6, 0.2), 12))
