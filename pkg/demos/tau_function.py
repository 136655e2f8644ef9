"""Solve the Virasoro constraints for tau and look at log tau."""
from gbgw.virasoro import annihilation_check, solve_tau

tau = solve_tau(7)
for mono, coeff in sorted(tau.poly.items(), key=lambda kv: (sum((2 * i + 1) * m for i, m in enumerate(kv[0])), kv[0]))[:8]:
    print(f"  {mono!s:12} {coeff}")

print("L_m tau = 0 for m <= 3:", all(annihilation_check(m, 7) for m in range(4)))
log = tau.log()
print("d^2 log tau / dt_0^2 at 0:", log.correlator([0, 0]))
