"""Enumerative baseline with observational-equivalence reduction.

Programs are enumerated per nonterminal in order of AST size.  Two
programs producing the same value vector on the examples are
interchangeable in any context, so each equivalence class keeps a single
representative: the first cost-model-preferred program of minimal size.
Larger programs are then composed from representatives only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .grammar import KIND_CONST, KIND_INPUT, KIND_NONTERMINAL, Leaf, Node, _compositions
from .ranking import CostModel, program_cost, program_key
from .values import is_bottom


@dataclass
class EnumStats:
    programs_enumerated: int = 0
    equivalence_classes: int = 0
    elapsed: float = 0.0


def enum_synthesize(examples, grammar, max_size, domain, cost_model=None,
                    deadline=None):
    """Smallest program consistent with the examples, or None.

    Returns (program, EnumStats).  Raises TimeoutError past `deadline`.
    """
    cost_model = cost_model or CostModel()
    inputs = tuple(e.input for e in examples)
    outputs = tuple(e.output for e in examples)
    start = grammar.start.name
    stats = EnumStats()
    started = time.monotonic()

    # (symbol name, size) -> list of (ast, value vector); representatives only
    bucket = {}
    # symbol name -> value vector -> (size, cost, key) of the representative
    seen = {}

    def order_key(ast):
        return (program_cost(ast, cost_model), program_key(ast, cost_model))

    def admit(name, size, ast, vals):
        stats.programs_enumerated += 1
        if any(is_bottom(v) for v in vals):
            # Bottom on any example poisons every enclosing program
            return None
        classes = seen.setdefault(name, {})
        prior = classes.get(vals)
        if prior is None:
            classes[vals] = (size,) + order_key(ast)
            bucket.setdefault((name, size), []).append((ast, vals))
            stats.equivalence_classes += 1
        elif prior[0] == size and order_key(ast) < prior[1:]:
            # same-size duplicate that the cost model prefers: swap in place
            classes[vals] = (size,) + order_key(ast)
            rows = bucket[(name, size)]
            for i, (_, v) in enumerate(rows):
                if v == vals:
                    rows[i] = (ast, vals)
                    break
        else:
            return None
        if name == start and vals == outputs:
            return ast
        return None

    for sym in grammar.symbols:
        if sym.kind == KIND_INPUT:
            hit = admit(sym.name, 1, Leaf(sym), inputs)
        elif sym.kind == KIND_CONST:
            hit = None
            for v in sorted(grammar.constants[sym.name],
                            key=lambda v: cost_model.leaf_token(Leaf(sym, v))):
                hit = admit(sym.name, 1, Leaf(sym, v), (v,) * len(examples))
                if hit is not None:
                    break
        else:
            continue
        if hit is not None:
            stats.elapsed = time.monotonic() - started
            return hit, stats

    prods = sorted(
        grammar.productions, key=lambda p: cost_model.op_token(p.operator)
    )
    n = len(examples)
    steps = 0
    for size in range(2, max_size + 1):
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("enumeration exceeded the time budget")
        for prod in prods:
            for split in _compositions(size - 1, prod.arity):
                pools = [
                    bucket.get((arg.name, s), ())
                    for arg, s in zip(prod.args, split)
                ]
                if any(not p for p in pools):
                    continue
                for combo in _product(pools):
                    steps += 1
                    if (
                        deadline is not None
                        and steps % 8192 == 0
                        and time.monotonic() > deadline
                    ):
                        raise TimeoutError("enumeration exceeded the time budget")
                    vals = []
                    for j in range(n):
                        v = domain.eval_op(prod, [c[1][j] for c in combo])
                        if is_bottom(v):
                            vals = None
                            break
                        vals.append(v)
                    if vals is None:
                        stats.programs_enumerated += 1
                        continue
                    ast = Node(prod, tuple(c[0] for c in combo))
                    hit = admit(prod.head.name, size, ast, tuple(vals))
                    if hit is not None:
                        stats.elapsed = time.monotonic() - started
                        return hit, stats
            if deadline is not None and time.monotonic() > deadline:
                raise TimeoutError("enumeration exceeded the time budget")

    stats.elapsed = time.monotonic() - started
    return None, stats


def _product(pools):
    if not pools:
        yield ()
        return
    head, rest = pools[0], pools[1:]
    for h in head:
        for r in _product(rest):
            yield (h,) + r
