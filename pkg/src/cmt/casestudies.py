"""Bundled case-study input files.

``generic3d`` is the three-dimensional system with a rotation pair +-i*l1,
a stable direction -l2 and dense second-order nonlinearities, all
coefficients set to one.  ``protein`` is the two-dimensional
protein-assembly kinetics in its small-parameter limit; its ``basis``
stanza pins the unnormalized eigenvector matrix [[b, 1], [a, 0]] that the
hand derivation of the manifold coefficient uses.
"""

GENERIC3D = """\
# Generic 3-D system: rotation pair +-i*l1, stable -l2,
# dense second-order nonlinearities with unit coefficients.
vars x y z
param l1 = 1
param l2 = 1
equilibrium 0 0 0
dx/dt = l1*y + x^2 + y^2 + z^2 + x*y + y*z + z*x
dy/dt = -l1*x + x^2 + y^2 + z^2 + x*y + y*z + z*x
dz/dt = -l2*z + x^2 + y^2 + z^2 + x*y + y*z + z*x
"""

PROTEIN = """\
# Protein-assembly kinetics, small-parameter limit.
# basis = [[b, 1], [a, 0]]: centre eigenvector (b, a), stable (1, 0),
# kept unnormalized so the manifold coefficient matches the hand result
# a0 = (b^2*c / (a*Xe)) * (1 + b/a).
vars x z
param a = -2
param b = 1
param c = 1
param Xe = 1
equilibrium 0 0
basis 1 1 -2 0
dx/dt = a*Xe*x - b*Xe*z + a*x^2 - b*x*z
dz/dt = c*x^2 + c*x*z
"""

BUNDLED = {
    "generic3d": GENERIC3D,
    "protein": PROTEIN,
}
