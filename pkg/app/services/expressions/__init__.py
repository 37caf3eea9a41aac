from app.services.expressions.ast_nodes import Node, to_source
from app.services.expressions.evaluator import ExpressionEvaluator, evaluate, parse_expression, parse_vector
from app.services.expressions.parser import ExpressionParser, parse, tokenize

__all__ = [
    "Node",
    "to_source",
    "ExpressionEvaluator",
    "evaluate",
    "parse_expression",
    "parse_vector",
    "ExpressionParser",
    "parse",
    "tokenize",
]
