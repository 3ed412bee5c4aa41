"""Exception types shared across the package.

Validation problems (bad parameters, malformed config) are ``ValueError``
subclasses; numeric failures detected at runtime (truncation, non-convergent
quadrature, missing roots) derive from ``RuntimeError``. The CLI maps the two
families to exit codes 1 and 2.
"""


class ValidationError(ValueError):
    """A parameter or configuration value violates its contract."""


class ConfigError(ValidationError):
    """Invalid run configuration; carries the full list of problems."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NormalizationError(ValidationError):
    """A wave state's norm deviates too far from one."""


class SeparatrixError(ValidationError):
    """Pendulum initial angle sits on the separatrix (modulus |k| >= 1)."""


class TailMassError(RuntimeError):
    """Momentum probability leaked into the outer half of the basis."""

    def __init__(self, tail_mass, limit):
        self.tail_mass = tail_mass
        self.limit = limit
        super().__init__(
            f"momentum tail mass {tail_mass:.3e} exceeds {limit:.1e}; "
            "the momentum basis is too small for these parameters"
        )


class NoRootError(RuntimeError):
    """A bracketing root search found no sign change."""


class QuadratureError(RuntimeError):
    """Oscillatory quadrature did not converge under node doubling."""
