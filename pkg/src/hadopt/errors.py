"""Exception types shared across the package."""


class HadoptError(Exception):
    """Base class for all errors raised by hadopt."""


class SpaceMismatchError(HadoptError, TypeError):
    """Points (or descriptors) belong to different kinds of space."""


class UnsupportedSpaceError(HadoptError, NotImplementedError):
    """The operation needs a capability the space does not declare."""


class DomainError(HadoptError, ValueError):
    """An argument lies outside the operation's domain (e.g. t > d(x, y))."""


class ExtensionError(HadoptError):
    """A ray was evaluated past the span the space can extend.

    Attributes
    ----------
    overshoot : float
        How far past the end of the known geodesic the evaluation asked to go.
    iteration : int or None
        Solver iteration that triggered the failure, when raised from a solver.
    """

    def __init__(self, overshoot, message=None, iteration=None):
        self.overshoot = float(overshoot)
        self.iteration = iteration
        if message is None:
            message = f"ray extension beyond geodesic span by {self.overshoot:.6g} is not supported"
        if iteration is not None:
            message = f"iteration {iteration}: {message}"
        super().__init__(message)


class NewickError(HadoptError, ValueError):
    """Malformed Newick text.

    Attributes
    ----------
    offset : int or None
        Byte offset into the input where the problem was detected.
    """

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
