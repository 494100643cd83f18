"""Grammar skeleton, program ASTs, concrete evaluation, and program text.

A grammar has exactly one input terminal (the variable x), constant
terminals with finite value pools, and nonterminals produced by ranked
productions s -> f(s_1, ..., s_n).  Programs are rendered as
parenthesized prefix s-expressions, e.g. "(mul (add (id x) 2) 3)".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

from .values import BOTTOM, SORT_DIRECTION, SORT_INT, SORT_STRING, SORT_TOKEN, is_bottom

KIND_INPUT = "input"
KIND_CONST = "const"
KIND_NONTERMINAL = "nonterminal"


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str
    sort: str

    def __repr__(self):
        return f"Symbol({self.name})"


@dataclass(frozen=True)
class Production:
    head: Symbol
    operator: str
    args: tuple

    @property
    def arity(self) -> int:
        return len(self.args)

    def __repr__(self):
        return f"{self.head.name}->{self.operator}/{self.arity}"


@dataclass
class Grammar:
    symbols: tuple
    productions: tuple
    start: Symbol
    # constant pools keyed by terminal symbol name
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        names = [s.name for s in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError("duplicate symbol names")
        inputs = [s for s in self.symbols if s.kind == KIND_INPUT]
        if len(inputs) != 1:
            raise ValueError("grammar needs exactly one input terminal")
        if self.start.kind != KIND_NONTERMINAL:
            raise ValueError("start symbol must be a nonterminal")
        sym_set = set(self.symbols)
        for p in self.productions:
            if p.head not in sym_set or any(a not in sym_set for a in p.args):
                raise ValueError(f"production {p} uses unknown symbols")
        ops = [p.operator for p in self.productions]
        if len(set(ops)) != len(ops):
            raise ValueError("operator names must be unique")
        for s in self.symbols:
            if s.kind == KIND_CONST and s.name not in self.constants:
                raise ValueError(f"missing constant pool for {s.name}")

    @property
    def input_symbol(self) -> Symbol:
        return next(s for s in self.symbols if s.kind == KIND_INPUT)

    def symbol(self, name: str) -> Symbol:
        return next(s for s in self.symbols if s.name == name)

    def production(self, operator: str) -> Production:
        return next(p for p in self.productions if p.operator == operator)

    def productions_for(self, head: Symbol):
        return [p for p in self.productions if p.head == head]


@dataclass(frozen=True)
class Leaf:
    """Terminal leaf; value is None for the input variable."""

    symbol: Symbol
    value: object = None

    @property
    def head(self) -> Symbol:
        return self.symbol


@dataclass(frozen=True)
class Node:
    production: Production
    children: tuple

    def __post_init__(self):
        if len(self.children) != self.production.arity:
            raise ValueError("child count does not match production arity")
        for child, arg in zip(self.children, self.production.args):
            if child.head != arg:
                raise ValueError(
                    f"child head {child.head.name} does not match arg {arg.name}"
                )

    @property
    def head(self) -> Symbol:
        return self.production.head


def ast_size(program) -> int:
    if isinstance(program, Leaf):
        return 1
    return 1 + sum(ast_size(c) for c in program.children)


def iter_nodes(program) -> Iterator:
    """Pre-order traversal."""
    yield program
    if isinstance(program, Node):
        for c in program.children:
            yield from iter_nodes(c)


def eval_concrete(program, input_value, domain):
    """Bottom-up concrete evaluation; BOTTOM propagates from any child."""
    if isinstance(program, Leaf):
        if program.symbol.kind == KIND_INPUT:
            return input_value
        return program.value
    args = [eval_concrete(c, input_value, domain) for c in program.children]
    if any(is_bottom(a) for a in args):
        return BOTTOM
    return domain.eval_op(program.production, args)


def satisfies(program, examples, domain) -> bool:
    return all(eval_concrete(program, e.input, domain) == e.output for e in examples)


@dataclass(frozen=True)
class Example:
    input: object
    output: object


# ---------------------------------------------------------------------------
# program text


def format_constant(symbol: Symbol, value) -> str:
    if symbol.sort == SORT_STRING:
        return json.dumps(value)
    if symbol.sort == SORT_TOKEN:
        # token classes render bare; single-char literal tokens quoted
        return value if value.isalpha() and len(value) > 1 else json.dumps(value)
    return str(value)


def render_program(program) -> str:
    if isinstance(program, Leaf):
        if program.symbol.kind == KIND_INPUT:
            return program.symbol.name
        return format_constant(program.symbol, program.value)
    inner = " ".join(render_program(c) for c in program.children)
    return f"({program.production.operator} {inner})"


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


def _tokenize(text: str):
    tokens = []  # (token, offset)
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        elif ch == '"':
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                elif text[j] == '"':
                    break
                else:
                    j += 1
            if j >= n:
                raise ParseError("unterminated string literal", i)
            tokens.append((text[i : j + 1], i))
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def _parse_leaf(token: str, pos: int, symbol: Symbol, grammar: Grammar) -> Leaf:
    if symbol.kind == KIND_INPUT:
        if token != symbol.name:
            raise ParseError(f"expected input variable {symbol.name}, got {token!r}", pos)
        return Leaf(symbol)
    sort = symbol.sort
    try:
        if sort == SORT_INT:
            value = int(token)
        elif sort in (SORT_STRING, SORT_TOKEN) and token.startswith('"'):
            value = json.loads(token)
        elif sort in (SORT_TOKEN, SORT_DIRECTION):
            value = token
        else:
            raise ValueError
    except ValueError:
        raise ParseError(f"bad {sort} constant {token!r}", pos) from None
    pool = grammar.constants.get(symbol.name)
    if pool is not None and value not in pool:
        raise ParseError(f"constant {token!r} not in pool of {symbol.name}", pos)
    return Leaf(symbol, value)


def parse_program(text: str, grammar: Grammar):
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty program text", 0)

    def parse_expr(idx: int, expected: Optional[Symbol]):
        token, pos = tokens[idx]
        if token == ")":
            raise ParseError("unexpected ')'", pos)
        if token != "(":
            if expected is None:
                # bare top-level leaf: resolve by matching any terminal
                for sym in grammar.symbols:
                    if sym.kind == KIND_NONTERMINAL:
                        continue
                    try:
                        return _parse_leaf(token, pos, sym, grammar), idx + 1
                    except ParseError:
                        continue
                raise ParseError(f"cannot resolve leaf {token!r}", pos)
            if expected.kind == KIND_NONTERMINAL:
                raise ParseError(f"expected application for {expected.name}", pos)
            return _parse_leaf(token, pos, expected, grammar), idx + 1
        if idx + 1 >= len(tokens):
            raise ParseError("unexpected end of input", pos)
        op, op_pos = tokens[idx + 1]
        prod = next((p for p in grammar.productions if p.operator == op), None)
        if prod is None:
            raise ParseError(f"unknown operator {op!r}", op_pos)
        if expected is not None and prod.head != expected:
            raise ParseError(
                f"operator {op!r} produces {prod.head.name}, expected {expected.name}",
                op_pos,
            )
        idx += 2
        children = []
        for arg in prod.args:
            if idx >= len(tokens):
                raise ParseError("unexpected end of input", len(text))
            if tokens[idx][0] == ")":
                raise ParseError(f"too few arguments for {op!r}", tokens[idx][1])
            child, idx = parse_expr(idx, arg)
            children.append(child)
        if idx >= len(tokens):
            raise ParseError("unexpected end of input", len(text))
        if tokens[idx][0] != ")":
            raise ParseError(f"too many arguments for {op!r}", tokens[idx][1])
        return Node(prod, tuple(children)), idx + 1

    program, idx = parse_expr(0, None)
    if idx != len(tokens):
        raise ParseError("trailing tokens after program", tokens[idx][1])
    return program


def enumerate_programs(grammar: Grammar, domain, max_size: int, symbol=None):
    """Yield every well-formed AST of the given head symbol up to max_size.

    Brute force over the grammar; used by baselines and test oracles.
    """
    symbol = symbol or grammar.start

    @lru_cache(maxsize=None)
    def of(sym: Symbol, size: int):
        out = []
        if sym.kind != KIND_NONTERMINAL:
            if size == 1:
                if sym.kind == KIND_INPUT:
                    out.append(Leaf(sym))
                else:
                    out.extend(Leaf(sym, v) for v in grammar.constants[sym.name])
            return tuple(out)
        for prod in grammar.productions_for(sym):
            budget = size - 1
            for split in _compositions(budget, prod.arity):
                parts = [of(a, s) for a, s in zip(prod.args, split)]
                if any(not p for p in parts):
                    continue
                out.extend(
                    Node(prod, combo) for combo in _product(parts)
                )
        return tuple(out)

    for size in range(1, max_size + 1):
        yield from of(symbol, size)


def _compositions(total: int, parts: int):
    """All ways to write total as an ordered sum of `parts` positive ints."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _product(parts):
    if not parts:
        yield ()
        return
    for head in parts[0]:
        for rest in _product(parts[1:]):
            yield (head,) + rest
