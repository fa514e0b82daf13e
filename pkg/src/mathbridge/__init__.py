"""Bridge between OpenMath objects and SMT-LIB terms, with extension constructs."""

from .ast import Apply, Attributed, Bind, BoundVar, ErrorTerm, Foreign, Lit, LitKind, Sort, Sym, Symbol, Term, Var
from .errors import MathBridgeError

__all__ = [
    "Apply", "Attributed", "Bind", "BoundVar", "ErrorTerm", "Foreign", "Lit", "LitKind",
    "MathBridgeError", "Sort", "Sym", "Symbol", "Term", "Var",
]
__version__ = "0.1.0"
