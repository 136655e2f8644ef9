"""KdV flows, the first Painleve XXXIV member and its Lax pair."""
from gbgw.kdv import (kdv_residual, lenard_magri, painleve_operator, painleve_residual,
                      tau_u_series, verify_miura, verify_zero_curvature_K1)

for ell in range(1, 4):
    print(f"L_{ell} =", lenard_magri(ell))
print("KdV t_1 flow on tau through level 4:", kdv_residual(1, 4).is_zero())
print("K=1 operator:", painleve_operator(1))
print("K=1 on the tau series:", painleve_residual(1, tau_u_series(6, 1)).is_zero())
print("zero curvature:", verify_zero_curvature_K1())
print("Miura to Painleve II:", verify_miura())
