"""Abstract syntax tree: node structure, construction helpers and the printer."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .diagnostics import SourcePos


class Category(enum.Enum):
    Program = enum.auto()
    Function = enum.auto()
    Parameters = enum.auto()
    Parameter = enum.auto()
    Arguments = enum.auto()
    Call = enum.auto()
    If = enum.auto()
    Add = enum.auto()
    Sub = enum.auto()
    Mul = enum.auto()
    Div = enum.auto()
    Identifier = enum.auto()
    Natural = enum.auto()
    Decimal = enum.auto()
    Integer = enum.auto()
    Double = enum.auto()


class DataType(enum.Enum):
    """Annotation attached to nodes by the semantic checker.

    Only expression nodes ever receive INTEGER or DOUBLE; NO_TYPE marks an
    expression whose type could not be established (an error was reported),
    and UNTYPED is the initial state of every node.
    """

    INTEGER = "integer"
    DOUBLE = "double"
    NO_TYPE = "none"
    UNTYPED = "untyped"


LEXEME_CATEGORIES = frozenset({Category.Identifier, Category.Natural, Category.Decimal})

EXPRESSION_CATEGORIES = frozenset(
    {
        Category.Identifier,
        Category.Natural,
        Category.Decimal,
        Category.Add,
        Category.Sub,
        Category.Mul,
        Category.Div,
        Category.Call,
        Category.If,
    }
)

BINARY_CATEGORIES = frozenset({Category.Add, Category.Sub, Category.Mul, Category.Div})


@dataclass
class Node:
    category: Category
    lexeme: str | None
    pos: SourcePos
    dtype: DataType = DataType.UNTYPED
    children: list[Node] = field(default_factory=list)


def new_node(category: Category, lexeme: str | None, pos: SourcePos) -> Node:
    """Create a leaf node; `lexeme` is required exactly for the categories
    that carry one (Identifier, Natural, Decimal)."""
    if (lexeme is not None) != (category in LEXEME_CATEGORIES):
        raise ValueError(f"category {category.name} and lexeme {lexeme!r} do not agree")
    return Node(category, lexeme, pos)


def add_child(parent: Node, child: Node) -> Node:
    """Append `child` as the new last child of `parent`; returns `parent`."""
    parent.children.append(child)
    return parent


def get_child(parent: Node, index: int) -> Node | None:
    """The index-th child (0-based), or None when out of range."""
    if 0 <= index < len(parent.children):
        return parent.children[index]
    return None


def print_ast(root: Node, with_types: bool = False) -> str:
    """Depth-first listing, one node per line: 2*depth underscores, the
    category name, "(lexeme)" when present, and with `with_types` the
    annotated type (" - integer" or " - double") on typed nodes."""
    lines: list[str] = []

    def show(node: Node, depth: int) -> None:
        text = "_" * (2 * depth) + node.category.name
        if node.lexeme is not None:
            text += f"({node.lexeme})"
        if with_types and node.dtype in (DataType.INTEGER, DataType.DOUBLE):
            text += f" - {node.dtype.value}"
        lines.append(text)
        for child in node.children:
            show(child, depth + 1)

    show(root, 0)
    return "".join(line + "\n" for line in lines)
