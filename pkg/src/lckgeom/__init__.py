"""Numerical locally conformally Kähler geometry.

Jets carry derivatives through chart expressions; the geometry, Riemannian and
lcK modules build connections, curvatures and moment maps from them; the
suites check the resulting identities pointwise and by quadrature.
"""

__version__ = "0.1.0"

from .examples import get_example, list_examples  # noqa: E402
from .geometry import Chart, Coordinate, eval_fields, lee_form  # noqa: E402
from .pointwise import LocalGeometry, local_geometry  # noqa: E402

__all__ = ["__version__", "Chart", "Coordinate", "LocalGeometry", "eval_fields", "get_example",
           "lee_form", "list_examples", "local_geometry"]
