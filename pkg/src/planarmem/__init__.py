"""Planar-code quantum memory: exact stabilizer verification of
measurement-only encode/decode protocols, a Monte Carlo noisy-storage
experiment with minimum-weight-matching decoding, and analytic bounds."""

from .bounds import (
    BoundResult,
    ConcatParams,
    StorageParams,
    concat_fidelity_lower_bound,
    concat_success_product,
    hofmann_bound,
    storage_success_bound,
)
from .decoder import (
    Correction,
    DefectSet,
    SyndromeHistory,
    extract_defects,
    line_readout,
    match_defects,
    multiline_readout,
)
from .lattice import (
    LatticeGeometry,
    PauliOperator,
    TriangleSplit,
    build_lattice,
    default_split,
    homology_parity,
    logical_x,
    logical_z,
    monotone_paths,
)
from .montecarlo import ExperimentConfig, PauliFrame, RunResult, estimate_success, run_trial
from .protocols import (
    ProtocolSchedule,
    append_rough_row,
    append_smooth_column,
    encode_schedule,
    one_shot_decode,
    one_shot_encode,
    remove_rough_row,
    remove_smooth_column,
    run_schedule,
    teleport_encode_schedule,
)
from .tableau import Tableau, canonical_stabilizers, measure_pauli, prepare_product

__version__ = "0.1.0"
