"""qll: a numerical laboratory for quasi-local energies on discrete 2-surfaces.

Evaluate Hawking-type energies on star-shaped closed surfaces embedded in
initial data sets (M, g, k), compute the Euler-Lagrange residuals that
characterize area-constrained critical surfaces, check the integral
hypotheses behind positivity statements, and locate critical spheres by
constrained gradient descent.
"""

from .ambient import (AmbientSpace, attach_efield, catalog, constraint_data_at,
                      curvature_at, nabla_k_at)
from .criticality import (best_lambda, first_variation_check, hawking_residual,
                          residual_report, willmore_residual)
from .errors import (CatalogError, ChartDomainError, ConfigError, EmbeddingError,
                     FlowError, GeometryError, HypothesisError, NumericError,
                     QLLError)
from .flow import FlowConfig, FlowState, descent_speed, run_flow
from .functionals import (EnergyReport, brown_york_round, charged_hawking_energy,
                          energy_report, f_integrals, hawking_energy,
                          hawking_functional, lambda_hawking_energy)
from .grids import SphereGrid
from .highdim import (RadialModel, nd_energy_consistency, radial_model,
                      radial_sphere, radial_sweep, unit_sphere_volume)
from .surface import (SurfaceGeometry, SurfaceMesh, coordinate_sphere, ellipsoid,
                      gauss_equation_check, induced_geometry, integrate,
                      load_mesh, round_sphere_with_harmonics, save_mesh,
                      surface_gradient, surface_laplacian, tangential_divergence)

__version__ = "0.1.0"
