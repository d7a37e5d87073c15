"""Mean counts of stationary points and minima of high-dimensional Gaussian landscapes.

Submodules: ``numerics`` (special functions, quadrature, random streams),
``goe`` (GOE sampling and densities), ``tracy_widom`` (F1 via Painleve II),
``sphere`` (isotropic fields on the sphere), ``parabolic`` (stationary fields
in a parabolic well), ``landscape`` (explicit p-spin enumeration) and ``cli``.
"""
__version__ = "0.1.0"
