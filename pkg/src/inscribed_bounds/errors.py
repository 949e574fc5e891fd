"""Exception hierarchy shared by all modules."""


class BoundsError(ValueError):
    """Base class for every error raised by this package."""


class DomainError(BoundsError):
    """A parameter lies outside the domain where a formula is defined."""


class DegenerateError(DomainError):
    """Input geometry is degenerate (collinear points, zero denominators...)."""


class ValidationError(BoundsError):
    """Input violates a structural invariant (non-unit vertex, Euler check...)."""


class NoRootError(DomainError):
    """A bracketing root search found no sign change."""


class NotStarShapedError(ValidationError):
    def __init__(self, face_index, signed_volume):
        self.face_index = face_index
        self.signed_volume = signed_volume
        super().__init__(
            f"mesh is not star-shaped w.r.t. the origin: face {face_index} "
            f"has signed facial volume {signed_volume:.3e}"
        )
