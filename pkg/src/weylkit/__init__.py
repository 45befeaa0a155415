"""Exact finite models of the localized Weyl calculus.

The package covers the finite Weyl system on ``Z_N^{2d}`` (quantization,
Wigner and ambiguity transforms, Moyal products), modulation-space norms of
vectors and symbols, the Sjostrand-class algebra checks including Wiener
inversion, a magnetic Weyl calculus on sampled periodic grids, and
coadjoint-orbit linear algebra for nilpotent Lie algebras.
"""

__version__ = "0.1.0"

from .kernels import BACKEND
from .phase_space import (
    DimensionError,
    FinitePhaseSpace,
    PhasePoint,
    Side,
    SideError,
    SymbolGrid,
    fourier_array,
    inv_sym_fourier,
    sym_fourier,
    symplectic_form,
)
from .weyl_core import StateVector, Window, WeylSystem, discrete_gaussian, random_state
from .modspace import (
    INF,
    SplitSpec,
    beta_profile,
    mixed_norm,
    sjostrand_norm,
    sym_mod_norm,
    symbol_table,
    vec_mod_norm,
)
from .algebra import (
    Check,
    Contour,
    UnitalSymbol,
    wiener_invert_contour,
    wiener_invert_direct,
)
from .magnetic import MagneticSystem, Polynomial, SampledLineGrid, VectorPotential, landau_demo
from .kirillov import Functional, LieAlgebraData, bch_multiply, isotropy, jump_indices, predual, validate
from .suites import ACCEPTANCE, SUITES, run_suite

__all__ = [
    "BACKEND",
    "DimensionError",
    "FinitePhaseSpace",
    "PhasePoint",
    "Side",
    "SideError",
    "SymbolGrid",
    "fourier_array",
    "inv_sym_fourier",
    "sym_fourier",
    "symplectic_form",
    "StateVector",
    "Window",
    "WeylSystem",
    "discrete_gaussian",
    "random_state",
    "INF",
    "SplitSpec",
    "beta_profile",
    "mixed_norm",
    "sjostrand_norm",
    "sym_mod_norm",
    "symbol_table",
    "vec_mod_norm",
    "Check",
    "Contour",
    "UnitalSymbol",
    "wiener_invert_contour",
    "wiener_invert_direct",
    "MagneticSystem",
    "Polynomial",
    "SampledLineGrid",
    "VectorPotential",
    "landau_demo",
    "Functional",
    "LieAlgebraData",
    "bch_multiply",
    "isotropy",
    "jump_indices",
    "predual",
    "validate",
    "ACCEPTANCE",
    "SUITES",
    "run_suite",
]
