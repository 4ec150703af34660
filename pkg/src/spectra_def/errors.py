"""Exception hierarchy.

Every error carries the module that raised it so the command line can report
module-qualified names.
"""

from __future__ import annotations


class SpectraError(Exception):
    module = "spectra_def"

    @property
    def qualified_name(self) -> str:
        return f"{self.module}.{type(self).__name__}"


# exact_linalg
class LinalgError(SpectraError):
    module = "exact_linalg"


class NoSolution(LinalgError):
    pass


class DimensionMismatch(LinalgError):
    pass


class NotContained(LinalgError):
    pass


class UnsupportedScalar(LinalgError):
    pass


# model
class ModelError(SpectraError):
    module = "model"


class SpecError(ModelError):
    """Malformed model description (unknown generator, bad monomial order, ...)."""


class IntegrabilityViolation(ModelError):
    pass


class NotClosed(ModelError):
    pass


class BasisNotClosed(ModelError):
    pass


class ModelClosure(ModelError):
    pass


class FrameNotHolomorphic(ModelError):
    pass


# spectral
class EquivalenceViolation(SpectraError):
    module = "spectral"


# obstruction
class ObstructionError(SpectraError):
    module = "obstruction"


class NoTrivialCanonical(ObstructionError):
    pass


class NoDomainPath(ObstructionError):
    pass


# deformation
class DeformationError(SpectraError):
    module = "deformation"


class HypothesisFailed(DeformationError):
    pass


class NotSolvable(DeformationError):
    pass
