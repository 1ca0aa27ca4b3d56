"""Transversal motion planning: planners whose paths meet a hypersurface only transversally."""

from .diffeo import Composite, Diffeomorphism, Identity, Inverted, VerticalShear, diffeo_from_dict
from .geometry import (LinearSegment, MappedSegment, PiecewisePath, PolynomialSegment, concat, constant_path,
                       eval_path, linear_path, map_path, path_derivative, path_from_dict, polyline_path, reverse)
from .harness import CampaignConfig, CampaignReport, cover_check, run_campaign, sample_query
from .hypersurface import (DiagonalLine, Hyperplane, ImplicitHypersurface, Parabola, Sphere, concentric_spheres,
                           diagonal, horizontal_hyperplane, parabola, two_circles, unit_circle)
from .planners import (Contraction, Planner, Query, composite, concentric_spheres_planner, diffeo_transport,
                       hyperplane_planner, parabola_planner, planner_from_contraction, straight_line_planner,
                       tcat_two_circles_contractions, two_circles_planner)
from .scenes import Scene, load_scene, scene_from_dict
from .transversality import (CrossingEvent, DetectionConfig, EventKind, Verdict, certify_semi_transversal,
                             crossing_count_oracle, crossing_margin, find_crossings, smooth_at)

__version__ = "0.1.0"
