"""Sub-Riemannian toolkit: symbolic structure analysis and spectral/nodal experiments.

Layers:

- ``subnodal.vf``: exact polynomial vector fields, brackets, flags, dilations,
  nilpotent approximations, privileged coordinates, desingularization.
- ``subnodal.fd``: grids over box domains and sparse symmetric assembly of
  sub-Laplacians and 1D Schroedinger operators.
- ``subnodal.eig``: lowest eigenpairs (LOBPCG default, shift-invert and exact
  translation-block paths), Rayleigh quotients.
- ``subnodal.nodal``: nodal domains, Courant bound checks, sheet counts.
- ``subnodal.geom``: control-metric distance fields, ball-box sandwiches,
  covering dimensions, nodal density statistics.
- ``subnodal.runner``: scenario configs, reports, and the ``subnodal`` CLI.
"""

from . import vf, fd, eig, nodal, geom, runner  # noqa: F401
from ._kernels import KERNEL as kernel_backend  # noqa: F401

__version__ = "0.1.0"
