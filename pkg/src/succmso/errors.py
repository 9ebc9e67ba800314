"""Exception types shared across the library.

Every operation-level failure raises a subclass of SuccmsoError so the CLI
can map it to an exit code and a stable error name.
"""


class SuccmsoError(Exception):
    """Base class for all library errors."""

    @property
    def name(self):
        return type(self).__name__


# circuit
class InputOutOfRange(SuccmsoError):
    pass


class BadParam(SuccmsoError):
    pass


class ParseError(SuccmsoError):
    pass


class TopologyError(SuccmsoError):
    pass


# graph
class PortArityMismatch(SuccmsoError):
    pass


class EmptyWord(SuccmsoError):
    pass


class BadVertex(SuccmsoError):
    pass


class TooLarge(SuccmsoError):
    pass


# sgr
class LabelOutOfRange(SuccmsoError):
    pass


class TooLargeToMaterialize(SuccmsoError):
    pass


# mso
class ScopeError(SuccmsoError):
    pass


class TooLargeForBruteForce(SuccmsoError):
    pass


# treedec
class EmptyDecomposition(SuccmsoError):
    pass


class NotALeaf(SuccmsoError):
    pass


class BadAnchorBags(SuccmsoError):
    pass


# efgame
class EmptyGraph(SuccmsoError):
    pass


class BoundTooLarge(SuccmsoError):
    pass


# reduce
class IndexOutOfRange(SuccmsoError):
    pass


class BadLiteral(SuccmsoError):
    pass


class ValidationError(SuccmsoError):
    """A gadget quadruple failed one of the compiler preconditions.

    ``condition`` is one of COND_I, COND_II, COND_III, PORT_ALIGNMENT.
    """

    def __init__(self, condition, message=""):
        self.condition = condition
        super().__init__(f"{condition}: {message}" if message else condition)


class NotValidated(SuccmsoError):
    pass


class ConstructionFailed(SuccmsoError):
    def __init__(self, condition, message=""):
        self.condition = condition
        super().__init__(f"{condition}: {message}" if message else condition)
