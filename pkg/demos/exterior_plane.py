"""Support varieties over the exterior algebra on two generators (char 2).

Cutting the plane by lines gives modules of complexity one, and two cuts give
a projective module.  The last part builds a witness of complexity one that
has nonzero Ext^1 into the simple module.

Run: python3 demos/exterior_plane.py
"""

from suppvar.fixtures import fixture
from suppvar.repmod import decompose, direct_sum, simple
from suppvar.variety import (default_hspec, ext_vanishing_check, line_module, pencil_family,
                             periodic_witness, realize_variety, variety_report)

a = fixture("A3")
h = default_hspec(a, cap=8)
k = simple(a, 0)
print(h)

rep = variety_report(h, k, name="k")
print("k:", rep.complexity.label(), "Krull bounds", (rep.krull_dim_lower, rep.krull_dim_upper))

x1, x2 = h.ring.var(0), h.ring.var(1)
for etas in ([x1], [x2], [x1, x2]):
    r = realize_variety(h, etas)
    names = [h.ring.fmt(p) for p in etas]
    print(f"cut by {names}: dim {r.module.dim}, {r.report.complexity.label()}, "
          f"Krull {r.report.krull_dim_lower}..{r.report.krull_dim_upper}, expected {r.expected}")

fam = pencil_family(h, 0, 1)
for m in fam["members"]:
    print("pencil member", m["eta"], "annihilator", m["annihilator"], m["complexity"])

m, n = line_module(h, 0), line_module(h, 1)
print("Ext between two different lines:", ext_vanishing_check(h, m, n)["ext_dims"])
print("summand dims of the sum:", [s.dim for s in decompose(direct_sum(m, n)).summands])

w = periodic_witness(h, k)
print("witness:", w.to_dict())
