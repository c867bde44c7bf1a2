"""Connection-probability monotonicity in Bernoulli and Pipe-Dust percolation."""

from .errors import BudgetExceeded, InvalidBracket, InvalidParameter, PercolationError
from .graph import (Graph, glue, make_box, make_hexagonal_patch, make_theta,
                    make_tree_glued, make_triangular_patch, norm_of)
from .poly import IntPoly, poly_eval, poly_sub
from .exact import RootBracket, isolate_root, log_ratio_h, theta_closed_form, two_terminal_poly
from .mc import (DisjointSets, Estimate, McConfig, bisect_tau_c, estimate_connection,
                 estimate_F, estimate_F_lattice, estimate_triangle_AB)
from .dust import (DustConfig, PipePoint, dust_connected, estimate_dust_connection,
                   sample_dust, scan_t)
from .analysis import (FMinResult, bound_mid, bound_vertex, f_lambda, g_poly,
                       lambda_of_p, minimize_f, p0, p_of_lambda, theta_threshold,
                       z0_threshold)

__version__ = "0.1.0"
