"""Periodic modules and the structure of their self-extensions.

Run: python3 demos/periodic_modules.py
"""

from suppvar.fixtures import fixture
from suppvar.growth import complexity, periodic_ext_structure, periodicity
from suppvar.repmod import simple

for name in ("A1", "A2(3)", "A5", "A3"):
    a = fixture(name)
    s = simple(a, 0)
    per = periodicity(s).period
    print(f"{name}: simple has {complexity(s).label()}, period {per}")
    if per:
        rep = periodic_ext_structure(s, 8)
        print("   k[x] part", rep["polynomial_dims"])
        print("   nilpotent part", rep["nilpotent_dims"])
