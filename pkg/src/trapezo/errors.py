"""Exception hierarchy shared by all trapezo modules."""


class TrapezoError(Exception):
    """Base class for errors raised by trapezo."""


class NoConvergence(TrapezoError):
    """The shape solver could not bracket or polish the root of g(t) = 1."""


class InvalidStart(TrapezoError):
    """A degeneration path was started outside the realizable region."""


class DegenerateCircle(TrapezoError):
    pass


class NegativeHeight(TrapezoError):
    """A vertex lies outside the hemisphere that is supposed to carry it."""


class NotRealizable(TrapezoError):
    """No trapezohedron without holes has the requested shape."""


class HoledInput(TrapezoError):
    """Gluing was requested for a trapezohedron carrying holes."""
