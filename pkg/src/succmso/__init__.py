"""succmso: adjacency-circuit graph representations, MSO model checking,
gadget gluing, tree decompositions, EF games, and the SAT reduction
pipeline tying them together."""

__version__ = "0.1.0"

from .errors import SuccmsoError

__all__ = ["SuccmsoError", "__version__"]
