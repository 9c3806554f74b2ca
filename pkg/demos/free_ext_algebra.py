"""Why finite generation can fail: k<x,y>/(x,y)^2 has a free Ext algebra.

Run: python3 demos/free_ext_algebra.py
"""

from suppvar.cohom import ext_algebra, graded_centre, hh_truncation
from suppvar.fixtures import fixture
from suppvar.variety import default_hspec, fg_diagnostic

a = fixture("A4(2)")
print(a, "with basis", a.labels)

e = ext_algebra(a, 3)
print("Ext algebra dims:", e.dims[:4])             # 1, 2, 4, 8: free on two generators
print("graded centre dims:", graded_centre(e))     # only the scalars

print("HH dims:", hh_truncation(a, 3, products=False).dims)

report = fg_diagnostic(default_hspec(a, cap=3), cap=8)
print("finite generation:", report["verdict"])
print("  Betti numbers of the simple:", report["growth"]["betti"][0])
print("  positive HH classes all restrict to zero:", report["centre"]["positive_restrictions_zero"])
