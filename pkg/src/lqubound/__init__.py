"""Local quantum uncertainty: closed-form lower bound and GA reference.

Public surface: density-matrix construction and validation, the generator
basis with its structure constants, the closed-form bound, the genetic
optimizer, reference state families, and the sweep machinery behind the
``lqu`` command-line tool.
"""

from .errors import (
    DegenerateDirection,
    DegenerateSpectrum,
    DimensionMismatch,
    LquError,
    NoConvergence,
    NotHermitian,
    NotPSD,
    ParamOutOfRange,
    SoundnessError,
    TraceNotOne,
    WrongDimension,
)
from .linalg import (
    HermitianEig,
    hermitian_eigendecompose,
    kron,
    sqrt_psd,
    trace_product,
)
from .lqu_core import (
    DensityMatrix,
    LowerBoundReport,
    closed_form_2xd,
    l_vector,
    lower_bound,
    skew_information,
    w_matrix,
)
from .optimizer import (
    GAConfig,
    OptimizeResult,
    observable_from_params,
    optimize_lqu,
    unitary_from_params,
)
from .states import (
    Channel,
    StateSpec,
    apply_channels,
    bell33,
    dephased_bell33,
    dephasing_channel,
    horodecki33,
    horodecki42,
    identity_channel,
    load_state_file,
    save_state_file,
    validate_density,
    werner,
)
from .su_generators import (
    GeneratorSet,
    SpectrumDecomposition,
    StructureConstants,
    build_generators,
    check_spectrum_invariance,
    generator_basis,
    spectrum_decompose,
    structure_constants,
)
from .sweep import (
    SweepAborted,
    SweepConfig,
    SweepRow,
    default_spectrum,
    load_config,
    parse_spectrum,
    preset_configs,
    run_sweep,
    write_csv,
    write_marker_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "DegenerateDirection",
    "DegenerateSpectrum",
    "DensityMatrix",
    "DimensionMismatch",
    "GAConfig",
    "GeneratorSet",
    "HermitianEig",
    "LowerBoundReport",
    "LquError",
    "NoConvergence",
    "NotHermitian",
    "NotPSD",
    "OptimizeResult",
    "ParamOutOfRange",
    "SoundnessError",
    "SpectrumDecomposition",
    "StateSpec",
    "StructureConstants",
    "SweepAborted",
    "SweepConfig",
    "SweepRow",
    "TraceNotOne",
    "WrongDimension",
    "apply_channels",
    "bell33",
    "build_generators",
    "check_spectrum_invariance",
    "closed_form_2xd",
    "default_spectrum",
    "dephased_bell33",
    "dephasing_channel",
    "generator_basis",
    "hermitian_eigendecompose",
    "horodecki33",
    "horodecki42",
    "identity_channel",
    "kron",
    "l_vector",
    "load_config",
    "load_state_file",
    "lower_bound",
    "observable_from_params",
    "optimize_lqu",
    "parse_spectrum",
    "preset_configs",
    "run_sweep",
    "save_state_file",
    "skew_information",
    "spectrum_decompose",
    "sqrt_psd",
    "structure_constants",
    "trace_product",
    "unitary_from_params",
    "validate_density",
    "w_matrix",
    "werner",
    "write_csv",
    "write_marker_csv",
]
