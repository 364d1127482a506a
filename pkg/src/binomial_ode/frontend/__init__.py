"""Text input, the example corpus, and the command-line interface."""
from .corpus import CorpusRecord, check_record, find_record, load_corpus
from .equations import parse_equation
from .parser import parse_ast, parse_expression, parse_poly, parse_scalar, to_text

__all__ = [
    "CorpusRecord",
    "check_record",
    "find_record",
    "load_corpus",
    "parse_ast",
    "parse_equation",
    "parse_expression",
    "parse_poly",
    "parse_scalar",
    "to_text",
]
