"""Shared helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from absynth.grammar import KIND_CONST, KIND_INPUT, KIND_NONTERMINAL, Leaf, Node


@pytest.fixture
def toy_domain():
    from absynth.domains.toy import ToyDomain

    return ToyDomain()


def min_sizes(grammar):
    """Smallest complete-tree size per symbol name (fixpoint)."""
    size = {}
    for s in grammar.symbols:
        if s.kind != KIND_NONTERMINAL:
            size[s.name] = 1
    changed = True
    while changed:
        changed = False
        for p in grammar.productions:
            if all(a.name in size for a in p.args):
                cand = 1 + sum(size[a.name] for a in p.args)
                if cand < size.get(p.head.name, 1 << 30):
                    size[p.head.name] = cand
                    changed = True
    return size


def sample_program(grammar, rng: random.Random, budget: int, symbol=None,
                   _sizes=None):
    """One random well-formed AST of at most `budget` nodes, or None."""
    symbol = symbol or grammar.start
    sizes = _sizes or min_sizes(grammar)
    if symbol.kind == KIND_INPUT:
        return Leaf(symbol)
    if symbol.kind == KIND_CONST:
        return Leaf(symbol, rng.choice(grammar.constants[symbol.name]))
    feasible = [
        p
        for p in grammar.productions_for(symbol)
        if 1 + sum(sizes[a.name] for a in p.args) <= budget
    ]
    if not feasible:
        return None
    prod = rng.choice(feasible)
    remaining = budget - 1
    children = []
    args = list(prod.args)
    for i, arg in enumerate(args):
        # keep enough budget for the minimal trees of the later arguments
        reserve = sum(sizes[a.name] for a in args[i + 1 :])
        hi = remaining - reserve
        child = sample_program(
            grammar, rng, rng.randint(sizes[arg.name], hi), arg, _sizes=sizes
        )
        if child is None:
            return None
        children.append(child)
        remaining -= _tree_size(child)
    return Node(prod, tuple(children))


def _tree_size(ast) -> int:
    if isinstance(ast, Leaf):
        return 1
    return 1 + sum(_tree_size(c) for c in ast.children)
