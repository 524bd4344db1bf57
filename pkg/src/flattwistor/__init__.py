"""Quadrics without real points and sections of the flat twistor fibration."""
from .errors import *  # noqa: F401,F403
from .projective import (OrientedPlane, ProjectivePoint, fiber_coordinate, is_real_point, lambda_group,
                         point_in_fiber, rho0)
from .quadric import (PencilNormalForm, Quadric, dual, has_real_points, is_smooth, normal_form,
                      random_real_point_free, random_real_point_free_with_phases, random_with_real_zero,
                      relative_det, restrict)
from .grassmannian import (AlphaSurface, BetaSurface, alpha_surface_through, beta_surface_through,
                           random_plane, random_planes, tangent_map)
from .twistor import (holomorphy_residual, holomorphy_sweep, on_quadric_residual, perturbed_section,
                      quadric_section, section_at, wedge_residual)
from .connection import (flat_forms, reduction_torsion_test, verify_bianchi, verify_curvature_zero,
                         verify_structure_equation)
from .oracle import brute_force_has_real_points, brute_force_min

__version__ = "0.1.0"
