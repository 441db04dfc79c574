"""weylkit: Weyl-Titchmarsh matrix functions of half-line Dirac and
distributional Schrodinger operators, and reconstruction of the matrix
potential from Weyl data."""
from .dirac_forward import (
    WeylSampleSet,
    compute_weyl_dirac,
    propagate_fundamental,
    stieltjes_measure,
    weyl_identity_residual,
    weyl_solution,
)
from .errors import *  # noqa: F401,F403
from .linalg_core import (
    BoundaryParam,
    conjugate_by_W,
    min_imag_eigenvalue,
    random_boundary_param,
    structure_matrices,
    validate_boundary_param,
)
from .potential import PotentialPath, potential_family
from .reconstruct import (
    ReconstructionConfig,
    line_points,
    reconstruct_from_contractive,
    reconstruct_from_schrodinger,
    reconstruct_pipeline,
    relative_l2_error,
)
from .schrodinger_forward import (
    compute_weyl_schrodinger,
    fundamental_system,
    green_function,
    propagate_quasi,
    schrodinger_identity_residual,
)
from .weyl_transform import (
    boundary_transform,
    contractive_to_dirac,
    dirac_to_contractive,
    schrodinger_to_contractive,
    susy_partner,
)

__version__ = "0.1.0"
