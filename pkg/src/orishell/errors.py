"""Exception hierarchy shared across the package."""


class OrishellError(Exception):
    """Base class for all package errors."""


class MeshError(OrishellError):
    pass


class DanglingNode(MeshError):
    pass


class NonManifoldCrease(MeshError):
    pass


class DegenerateElement(MeshError):
    pass


class NonFlatPanel(MeshError):
    pass


class SingularTransform(OrishellError):
    pass


class CreaseError(OrishellError):
    pass


class ZeroDirector(CreaseError):
    pass


class BarrierOverflow(CreaseError):
    """Fold angle reached +-pi; the barrier energy is infinite there."""


class OverlappingBCs(OrishellError):
    pass


class SingularSystem(OrishellError):
    pass


class RecoveryExhausted(OrishellError):
    pass


class UnknownScene(OrishellError):
    pass


class ParseError(OrishellError):
    pass


class ValidationError(OrishellError):
    pass
