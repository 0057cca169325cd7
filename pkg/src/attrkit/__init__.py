"""attrkit: attractor-set membership and Chern-character bounds on Calabi-Yau threefold data."""

from .attractor import (
    AttractorSolution,
    SolveOutcome,
    c3_bound,
    c3_bound_ample,
    central_charge,
    charge_map,
    reflexive_sheaf_existence,
    surface_bundle_existence,
    minimize_z_norm,
    solve_positive_rank,
    solve_rank_zero,
    z_norm_sq,
)
from .boundstates import (
    ChargePair,
    bps_bound_condition,
    charge_pair,
    extension_chern,
    guess_bound,
    j_closure,
    large_volume_condition,
    tau_vs,
)
from .catalog import (
    FibrationData,
    SurfaceBoundInput,
    jardim_record,
    monad_chern,
    spectral_c2,
    surface_index_bounds,
    tangent_quintic,
    yoshioka_check,
)
from .chern import (
    ChernRecord,
    MukaiVector,
    bogomolov,
    drezet,
    euler_pairing,
    mukai,
    rescale,
    slope,
    tensor,
    to_even_class,
    twist,
)
from .geometry import (
    EvenClass,
    RationalComplex,
    SurfaceData,
    ThreefoldData,
    ample_positivity_check,
    exp2,
    in_kahler_cone,
    integrate,
    involute,
    load_geometry,
    log_unit,
    preset,
    sqrt_todd,
    wedge,
)
from .pushforward import SurfaceBundleRecord, divisor_chern, grr_push, push_mukai
from .reports import BoundEntry, BoundsReport

__version__ = "0.1.0"
