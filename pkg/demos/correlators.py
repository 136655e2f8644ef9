"""Three ways to the same correlator: closed form, permutation sum, Virasoro."""
from fractions import Fraction

from gbgw.correlators import (n_point_connected, norbury_number, nu_correlator, one_point,
                              one_point_norbury)
from gbgw.virasoro import virasoro_connected

print("one-point functions at nu = 0 against (2g-1)!!(2g-3)!!/(8^g g!)")
for ell in range(5):
    print(f"  l={ell}  {norbury_number([ell])}  {one_point_norbury(ell + 1)}")

print("connected <tau_1 tau_2> with symbolic nu")
poly = n_point_connected([1, 2])
print("  permutation sum:", poly)
print("  Virasoro oracle:", virasoro_connected([1, 2]))
print("  at nu = 1/2     :", poly(Fraction(1, 2)))

print("nu-deformed <tau_1^3>:", nu_correlator([1, 1, 1]))
print("Norbury <tau_1^4>    :", norbury_number([1, 1, 1, 1]))
print("one_point(3)         :", one_point(3))
