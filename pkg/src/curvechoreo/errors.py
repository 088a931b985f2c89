"""Exception hierarchy.

Every error carries a distinct ``exit_code`` so the command line surface can
map failures to documented process exit statuses.
"""

from __future__ import annotations


class ChoreoError(Exception):
    """Base class for all package errors."""

    exit_code = 1
    module = "curvechoreo"

    @property
    def code(self) -> str:
        return f"{self.module}.{type(self).__name__}"


# geometry
class ParallelLines(ChoreoError):
    exit_code = 10
    module = "geometry"


# curves
class EvaluationOutsideDomain(ChoreoError):
    exit_code = 20
    module = "curves"


class NonDifferentiable(ChoreoError):
    exit_code = 21
    module = "curves"


class QuadratureFailure(ChoreoError):
    exit_code = 22
    module = "curves"


class ConditionViolated(ChoreoError):
    exit_code = 23
    module = "curves"


# pair solver
class DomainViolation(ChoreoError):
    exit_code = 30
    module = "pairs"


class RootNotBracketed(ChoreoError):
    exit_code = 31
    module = "pairs"


class CrossingCountUnexpected(ChoreoError):
    exit_code = 32
    module = "pairs"


# choreography
class BranchJump(ChoreoError):
    exit_code = 40
    module = "choreography"


class UniquenessViolated(ChoreoError):
    exit_code = 41
    module = "choreography"


class VanishingJ(ChoreoError):
    exit_code = 42
    module = "choreography"


class TurningPoint(ChoreoError):
    exit_code = 43
    module = "choreography"

    def __init__(self, message: str, sigma: float | None = None):
        super().__init__(message)
        self.sigma = sigma


# verification
class ModulusOutOfRange(ChoreoError):
    exit_code = 50
    module = "verification"


class SingularSeparation(ChoreoError):
    exit_code = 51
    module = "verification"


class RankDeficient(ChoreoError):
    exit_code = 52
    module = "verification"


# cli
class ConfigError(ChoreoError):
    exit_code = 2
    module = "cli"
