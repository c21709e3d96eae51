"""The piecewise-linear extension of a grid function, its one-sided
directional derivatives, and the three equivalent faces of convexity.

Run:  python demos/02_piecewise_linear_extension.py
"""

import numpy as np

from deltanabla import (
    GridFunction,
    TimeScale,
    directional_derivative,
    epigraph_contains,
    extend,
    is_convex,
    secant_slopes,
)

ts = TimeScale([1.0, 3.0, 4.0])
tent = GridFunction(ts, [0.0, 1.0, 0.0])
fbar = extend(tent)

print("tent function on {1,3,4}:", dict(zip(ts.points, tent.values)))
print("extension samples:")
for t in np.linspace(1.0, 4.0, 7):
    print(f"  fbar({t:.2f}) = {fbar(float(t)):.4f}")
print()

# The directional derivative at a scale point is one-sided: direction u > 0
# reads the slope to the right (u * f^Delta), u < 0 the slope to the left
# (u * f^nabla).  At t=3 the tent rises with slope 1/2 and falls with slope -1.
t = 3.0
for u in (1.0, 2.0, -1.0, -2.0, 0.0):
    closed = directional_derivative(tent, t, u)
    quotient = directional_derivative(tent, t, u, method="quotient") if u else 0.0
    print(f"  D fbar({t:g})({u:+.1f}) = {closed:+.4f}   (limit quotient: {quotient:+.4f})")
print("the quotient mode is exact because the step keeps t + h*u inside one gap.")
print()

# Membership in the convexified graph set is decided through the extension.
print("epigraph membership for the tent:")
for point in [(2.0, 0.5), (2.0, 0.49), (3.5, 1.0)]:
    print(f"  {point}: {epigraph_contains(tent, point)}")
print()

# Convexity of the grid data, of the extension, and of that set coincide;
# the library decides via monotonicity of the secant slopes.
square = GridFunction.sample(TimeScale([0.0, 1.0, 2.0, 3.0]), lambda t: t * t)
print("slopes of t^2 samples:", secant_slopes(square), "-> convex:", is_convex(square))
print("slopes of the tent:   ", secant_slopes(tent), "-> convex:", is_convex(tent))
