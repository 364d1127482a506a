"""Solution families for the four binomial equation shapes."""
from .ansatz import AnsatzSolution, polynomial_ansatz
from .degenerate import degenerate_classify
from .families import (
    Classification,
    Diagnostic,
    Kind,
    Parameter,
    SolutionFamily,
    Status,
    instantiate_family,
)
from .structural import structural_checks
from .theorems import classify

__all__ = [
    "AnsatzSolution", "polynomial_ansatz", "degenerate_classify", "Classification", "Diagnostic",
    "Kind", "Parameter", "SolutionFamily", "Status", "instantiate_family", "structural_checks", "classify",
]
