"""Chebyshev-Halley root-finding dynamics.

Rational map families, orbit/basin classification, connectivity probing,
quantitative lemma checks, and dynamical/parameter plane rendering.
"""

from .backend import BACKEND, using_compiled
from .dynamics import (
    ClassificationGrid,
    ConnectivityVerdict,
    GridWindow,
    OrbitOutcome,
    ProbeConfig,
    classify_grid,
    classify_orbit,
    classify_parameter_grid,
    component_surrounds,
    connectivity_probe,
    immediate_component,
    in_immediate_basin,
)
from .maps import (
    MapSpec,
    ch_step,
    circle_map,
    conjugate_family_map,
    degenerate_check,
    evaluate,
    evaluate_derivative,
    evaluate_second_derivative,
    family_map,
    free_critical_points,
    newton_map,
    generic_ch_map,
    reciprocal_map,
    roots_of_unity,
    shifted_map,
)
from .poly import Polynomial
from .polyroots import RootSet, cluster_roots, deflate, find_roots, preimages
from .render import Image, Palette, color_grid, default_palette, render_dynamical, render_parameter, write_ppm
from .sphere import INFINITY, ExtendedComplex, MobiusMap, mobius_apply
from .verify import (
    LemmaReport,
    symmetry_report,
    verify_conjugacies,
    verify_critical_value_escape,
    verify_escape_bound_b,
    verify_escape_bound_r,
    verify_segment,
    verify_zero_interval,
)

__version__ = "0.1.0"
