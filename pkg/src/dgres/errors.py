"""Exception hierarchy shared by all modules."""


class DGResError(Exception):
    pass


# exact fields
class ReduciblePolynomial(DGResError):
    def __init__(self, factor, message=None):
        self.factor = factor
        super().__init__(message or f"polynomial is reducible; factor {factor}")


class NonMonic(DGResError):
    pass


class DegreeBoundExceeded(DGResError):
    pass


class DivisionByZero(DGResError, ZeroDivisionError):
    pass


class TowerMismatch(DGResError):
    pass


class ScalarSyntaxError(DGResError):
    pass


# linear algebra
class ShapeMismatch(DGResError):
    pass


class NoSolution(DGResError):
    def __init__(self, certificate=None):
        self.certificate = certificate
        super().__init__("linear system is inconsistent")


class NotAComplex(DGResError):
    def __init__(self, degree):
        self.degree = degree
        super().__init__(f"d o d != 0 starting in degree {degree}")


# dg objects
class FieldMismatch(DGResError):
    pass


class ValidationError(DGResError):
    def __init__(self, entity, axiom, witness=None):
        self.entity = entity
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{entity}: axiom '{axiom}' fails at {witness}")


class AlgebraMismatch(DGResError):
    pass


class NotClosed(DGResError):
    pass


class WrongDegree(DGResError):
    pass


class ActionMismatch(DGResError):
    pass


# resolutions
class SizeBoundExceeded(DGResError):
    pass


class WindowNotGuaranteed(DGResError):
    def __init__(self, requested, guaranteed):
        self.requested = requested
        self.guaranteed = guaranteed
        super().__init__(f"window {requested} not covered by guaranteed window {guaranteed}")


# base change
class NotAPrefixTower(DGResError):
    pass


# certificates / cli
class MalformedStep(DGResError):
    def __init__(self, index, reason):
        self.index = index
        self.reason = reason
        super().__init__(f"step {index}: {reason}")


class UnknownReference(DGResError):
    def __init__(self, name, where=None):
        self.name = name
        super().__init__(f"unknown reference '{name}'" + (f" in {where}" if where else ""))


class DocumentSyntaxError(DGResError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(message + loc)


class TamperedReport(DGResError):
    pass


class TransportAnomaly(DGResError):
    pass
