"""Rotationally symmetric planes from prescribed radial curvature.

Solve the radial Jacobi equation m'' + K m = 0 for a curvature profile
K(r), then ask geometric questions of the resulting plane: turn angles
of geodesics, which radii are critical for the distance to the origin,
where the poles end, and how to build planes that realize (or refute)
particular behaviors.
"""

from .analysis import (AnalysisReport, NeckReport, critical_ball_radius,
                       half_slope_radius, in_away_set, is_critical, is_pole,
                       neck_bound, pole_ball_radius,
                       radial_inverse_square_diverges, scan_sets)
from .constructions import (BulgeBuild, ConeBuild, FlareBuild, TableBuild,
                            build_bounded_table_plane, build_bulge_plane,
                            build_flared_cone, build_smoothed_cone)
from .curvature import (CurvatureSpec, DropParams, VMReport,
                        check_von_mangoldt, constant, expression, isq,
                        isq_capped, isq_zero, smoothstep, spliced, table)
from .errors import (BuildError, NotVonMangoldt, OutOfWindow, ShootFailure,
                     StarViolation, Undetermined)
from .geodesics import (GeodesicLaunch, GeodesicTrace, is_ray, max_ray_angle,
                        trace, turn_angle, turning_radius)
from .jacobi import (Profile, SlopeReport, SturmReport, TabulatedProfile,
                     TotalCurvatureReport, embed_profile, export_profile_csv,
                     load_profile_csv, slope_at_infinity, solve_jacobi,
                     sturm_compare, total_curvature)
from .oracle import ShootResult, distance_shoot, turn_angle_by_trace
from .quadrature import (IntegralResult, STATUS_CONVERGED,
                         STATUS_DIVERGENT_TAIL, STATUS_DIVERGENT_TANGENCY,
                         STATUS_WINDOW_LIMITED, integrate_turn_rate,
                         turn_rate)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "NeckReport", "critical_ball_radius",
    "half_slope_radius", "in_away_set", "is_critical", "is_pole",
    "neck_bound", "pole_ball_radius", "radial_inverse_square_diverges",
    "scan_sets",
    "BulgeBuild", "ConeBuild", "FlareBuild", "TableBuild",
    "build_bounded_table_plane", "build_bulge_plane", "build_flared_cone",
    "build_smoothed_cone",
    "CurvatureSpec", "DropParams", "VMReport", "check_von_mangoldt",
    "constant", "expression", "isq", "isq_capped", "isq_zero", "smoothstep",
    "spliced", "table",
    "BuildError", "NotVonMangoldt", "OutOfWindow", "ShootFailure",
    "StarViolation", "Undetermined",
    "GeodesicLaunch", "GeodesicTrace", "is_ray", "max_ray_angle", "trace",
    "turn_angle", "turning_radius",
    "Profile", "SlopeReport", "SturmReport", "TabulatedProfile",
    "TotalCurvatureReport", "embed_profile", "export_profile_csv",
    "load_profile_csv", "slope_at_infinity", "solve_jacobi", "sturm_compare",
    "total_curvature",
    "ShootResult", "distance_shoot", "turn_angle_by_trace",
    "IntegralResult", "STATUS_CONVERGED", "STATUS_DIVERGENT_TAIL",
    "STATUS_DIVERGENT_TANGENCY", "STATUS_WINDOW_LIMITED",
    "integrate_turn_rate", "turn_rate",
    "__version__",
]
