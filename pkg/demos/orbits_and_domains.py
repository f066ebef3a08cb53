"""
Orbits of psi_v and the decomposition of a pair
===============================================

With L_v(s) = m(m(s,v),v) and R_v(s) = m(s,m(s,v)), the map
psi_v = L_v o R_v^{-1} has v as an attracting fixed point.  For a
balanced mean, any close pair (x, y) can be written as x = R_v0(u0),
y = L_v0(u0), and then m(u0, v0) = m(x, y).
"""

import numpy as np

from meanlab import Interval, decompose, estimate_domain_D, make_mean, run_orbit
from meanlab.means import ARITHMETIC, ExampleK, QuasiArithmetic

# for the arithmetic mean psi_v(s) = (s + 2v)/3, so the orbit shrinks by 1/3 each step
a = make_mean(ARITHMETIC, Interval(-3.0, 3.0))
orbit = run_orbit(a, 0.0, 1.0)
print("first iterates:", np.round(orbit.iterates[:5], 6), "->", orbit.stop_reason,
      f"after {orbit.n_iter} steps")

# D(u) = {v : u in J_v}; for the arithmetic mean on (0,1) it is (max(0,4u-3), min(1,4u))
unit = make_mean(ARITHMETIC, Interval(0.0, 1.0))
for u in (0.1, 0.5, 0.9):
    d = estimate_domain_D(unit, u)
    print(f"D({u}) ~ ({d.lo:.4f}, {d.hi:.4f})   closed form ({max(0, 4*u-3):.4f}, {min(1, 4*u):.4f})")

# decomposition: exact for a balanced mean
geo = make_mean(QuasiArithmetic("log(x)"), Interval(0.5, 4.0))
dec = decompose(geo, 1.2, 1.5)
print(f"geometric: u0={dec.u0:.6f} v0={dec.v0:.6f} mean_check={dec.mean_check:.1e}")

# and visibly wrong for the weighted example, which is not balanced
k = make_mean(ExampleK("x", 0.25), Interval(-1.0, 2.0))
dec = decompose(k, 0.25, 0.75)
print(f"example K: u0={dec.u0:.6f} v0={dec.v0:.6f} mean_check={dec.mean_check:.4f}")
