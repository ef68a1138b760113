"""Cluster characters of affine quivers: Caldero-Chapoton values by point counting,
Chebyshev recursions in delta, seed mutation and positivity checks."""

from .catalog import CatalogEntry, TubeDescriptor, compatible, dim_family, load_quiver, presentation
from .ccmap import ClusterObject, cc_by_dimension, cc_module, cc_object, cc_shifted
from .cheb import ChebPoly, cheb_eval, cheb_F, tube_variable, x_ndelta
from .errors import ClusterError
from .laurent import LaurentPoly, lp_arith, lp_divexact, lp_is_nonneg, lp_substitute, parse
from .quiver import Quiver, Seed, euler_form, express_in_cluster, initial_seed, mutate_seed, mutate_word
from .rep import (
    FqRep,
    RepFamily,
    count_subreps,
    counting_polynomial,
    euler_char,
    ext1_cluster_dim,
    ext1_dim,
    generic_rep,
    hom_dim,
)
from .verify import (
    IdentityReport,
    PositivityReport,
    check_cheb_ladder,
    check_difference_property,
    check_one_dim_multiplication,
    check_positivity,
    gen_basis_elements,
)

__version__ = "0.1.0"
