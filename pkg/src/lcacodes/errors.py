from __future__ import annotations


class LcaError(RuntimeError):
    pass


class ShapeError(LcaError, ValueError):
    pass


class SingularMatrixError(LcaError):
    pass


class NotAntisymmetricError(LcaError, ValueError):
    pass


class NotCompletableError(LcaError):
    """Rows cannot be extended to a unimodular basis"""


class RadicandPairingError(LcaError):
    """A product of square-root prefactors was not rational"""


class UndefinedActionError(LcaError):
    """The Moebius action is undefined at this torus"""


class ConstructionError(LcaError):
    pass


class NotSymplecticError(LcaError):
    pass


class NotRealizableError(LcaError):
    """An automorphism that cannot be implemented as a Gaussian-Clifford gate"""


class NotInLatticeError(LcaError):
    pass


class DecodingError(LcaError):
    pass


class VerificationError(LcaError):
    pass


class InputError(LcaError):
    """Malformed user input (files, flags)"""
