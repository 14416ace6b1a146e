"""Modulational stability of small periodic traveling waves for nonlocal
dispersive equations of KdV, BBM and regularized Boussinesq type."""

from .dispersion import (
    AssumptionReport,
    DispersionSymbol,
    bbm_symbol,
    boussinesq_symbol,
    builtin_symbol,
    check_assumptions,
    d1_m,
    d2_m,
    eval_m,
    fractional_symbol,
    group_speed,
    parse_symbol,
    phase_speed,
    symbol_from_config,
    whitham_symbol,
)
from .hill import (
    BlochOperator,
    SpectrumSlice,
    assemble,
    assemble_bnesq,
    assemble_scalar,
    collision_scan,
    growth_curve,
    min_collision_k,
    spectrum,
    validate_pencil,
)
from .indices import (
    IndexReport,
    Verdict,
    base_indices,
    critical_wavenumber,
    find_resonances,
    i_bbm,
    i_bnesq,
    i_kdv,
    ind,
)
from .pencil import (
    PencilVerdict,
    QuarticClass,
    QuarticClassification,
    ReducedPencil,
    RescaledCharPoly,
    bnesq_leading_discs,
    build_bbm_pencil,
    build_bnesq_pencil,
    classify_quartic,
    disc1,
    disc2,
    disc_cubic,
    disc_quartic,
    pencil_verdict,
    rescaled_charpoly,
)
from .stokes import (
    EquationKind,
    StokesExpansion,
    WaveSolution,
    bbm_expansion,
    bnesq_expansion,
    expansion_error,
    newton_wave,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
