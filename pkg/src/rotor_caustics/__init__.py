"""Near-resonant quantum kicked rotor: recurring wave focusing and its scaling.

The package simulates a periodically kicked quantum rotor whose kicking
period sits close to a revival of the free rotation. In that regime an
initially uniform wave function repeatedly focuses into sharp caustic
patterns; the library provides the exact Floquet evolution, the matching
classical maps, the pendulum semiclassics that predicts the focusing times
and shapes, the amplitude scaling analysis, and a mean-field variant, plus a
command line driver (``rotor-caustics``).
"""

from ._kernels import backend_name
from .core import (
    AmplitudeField,
    AngleGrid,
    SimParams,
    WaveState,
    angle_grid,
    make_params,
    momentum_values,
    to_angle,
    to_momentum,
    uniform_state,
)
from .errors import (
    ConfigError,
    NoRootError,
    NormalizationError,
    QuadratureError,
    SeparatrixError,
    TailMassError,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "AmplitudeField",
    "AngleGrid",
    "SimParams",
    "WaveState",
    "angle_grid",
    "make_params",
    "momentum_values",
    "to_angle",
    "to_momentum",
    "uniform_state",
    "ConfigError",
    "NoRootError",
    "NormalizationError",
    "QuadratureError",
    "SeparatrixError",
    "TailMassError",
    "ValidationError",
]
