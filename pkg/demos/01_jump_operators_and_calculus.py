"""Tour of the finite-scale calculus: jump operators, graininess, delta and
nabla derivatives and integrals, and the exact identities connecting them.

Run:  python demos/01_jump_operators_and_calculus.py
"""

import numpy as np

from deltanabla import (
    GridFunction,
    TimeScale,
    delta_derivative,
    delta_integral,
    dubois_reymond_probe,
    nabla_derivative,
    nabla_integral,
    shift_rho,
    shift_sigma,
)

# A three-point scale: one large gap, one small gap.
ts = TimeScale([1.0, 3.0, 4.0])
print("time scale:", ts)
print()

print("forward jumps sigma(t) and backward jumps rho(t):")
for t in ts:
    print(f"  t={t:g}:  sigma={ts.sigma(t):g}  rho={ts.rho(t):g}  mu={ts.mu(t):g}  nu={ts.nu(t):g}")
print("note sigma(4)=4, rho(1)=1: the endpoints are fixed points,")
print("so mu vanishes at b and nu vanishes at a.")
print()

# Derivatives are difference quotients toward the neighbour.
f = GridFunction.sample(ts, lambda t: t * t)
fd = delta_derivative(f)
fn = nabla_derivative(f)
print("f(t) = t^2:")
print("  delta derivative (on the scale minus b):", dict(zip(fd.scale.points, fd.values)))
print("  nabla derivative (on the scale minus a):", dict(zip(fn.scale.points, fn.values)))
print("for t^2 the delta derivative is t + sigma(t), the nabla one t + rho(t).")
print()

# Integrals are weighted finite sums, so the fundamental theorem is exact.
total = delta_integral(GridFunction(ts, np.append(fd.values, 0.0)))
print(f"delta integral of f^Delta over [a,b) = {total:g}  (equals f(b)-f(a) = {16-1:g})")
print()

# Conversions between the two calculi hold exactly on finite scales.
g = GridFunction(ts, [0.3, -1.2, 0.7])
lhs = delta_integral(g)
rhs = nabla_integral(shift_rho(g))
print(f"integral conversion: delta integral {lhs:.15g} == nabla integral of g o rho {rhs:.15g}")
lhs = nabla_integral(g)
rhs = delta_integral(shift_sigma(g))
print(f"and the mirror image:                {lhs:.15g} == {rhs:.15g}")
print()

# The Dubois-Reymond lemma has exact finite-scale content: a function whose
# integral against every endpoint-vanishing variation is zero must be constant.
const = GridFunction.constant(ts, 2.5)
report = dubois_reymond_probe(const, "delta")
print("Dubois-Reymond probe on a constant:", "all integrals vanish" if report.all_vanish else "?!")

wiggle = GridFunction(ts, [0.0, 1.0, 0.0])
report = dubois_reymond_probe(wiggle, "delta")
print("probe on a non-constant:", report.witness)
