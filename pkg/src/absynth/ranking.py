"""Minimum-cost program extraction from an automaton.

The automaton is read as a weighted hypergraph whose B-arcs are the
transitions (tails = argument states, head = result state) plus seed
arcs from a dummy source into the leaf states.  A Dijkstra-style pass
labels every state with the lexicographic minimum (cost, node count);
ties beyond that are broken by a deterministic token order, so rank is a
pure function of the automaton and cost model.

The label pass runs in the compiled kernel when the extension built from
_bpath.pyx is available and otherwise in the pure Python fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .grammar import KIND_INPUT, KIND_NONTERMINAL, Leaf, Node

try:  # compiled kernel is optional
    from . import _bpath as _backend

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _bpath_py as _backend

    BACKEND = "pure-python"

from ._bpath_py import INF


@dataclass
class CostModel:
    operator_costs: dict = field(default_factory=dict)
    terminal_costs: dict = field(default_factory=dict)
    default_operator_cost: int = 1
    default_terminal_cost: int = 0
    # operator names in preferred order; unlisted operators come after,
    # ordered by name
    operator_preference: tuple = ()

    def op_cost(self, operator: str) -> int:
        return self.operator_costs.get(operator, self.default_operator_cost)

    def terminal_cost(self, symbol_name: str) -> int:
        return self.terminal_costs.get(symbol_name, self.default_terminal_cost)

    def op_token(self, operator: str):
        try:
            pref = self.operator_preference.index(operator)
        except ValueError:
            pref = len(self.operator_preference)
        return (2, pref, 0, operator)

    def leaf_token(self, leaf: Leaf):
        if leaf.symbol.kind == KIND_INPUT:
            return (0, 0, 0, leaf.symbol.name)
        v = leaf.value
        if isinstance(v, int):
            return (1, 0, v, "")
        if isinstance(v, str):
            return (1, 1, len(v), v)
        return (1, 2, 0, repr(v))


def program_key(program, cost_model: CostModel):
    """Pre-order token tuple; the deterministic tie-break order."""
    if isinstance(program, Leaf):
        return (cost_model.leaf_token(program),)
    key = (cost_model.op_token(program.production.operator),)
    for c in program.children:
        key = key + program_key(c, cost_model)
    return key


def program_cost(program, cost_model: CostModel) -> int:
    if isinstance(program, Leaf):
        return cost_model.terminal_cost(program.symbol.name)
    return cost_model.op_cost(program.production.operator) + sum(
        program_cost(c, cost_model) for c in program.children
    )


def _encode(fta, cost_model: CostModel):
    seed_states, seed_costs = [], []
    for sid in range(fta.num_states):
        if fta.symbols[sid].kind != KIND_NONTERMINAL:
            seed_states.append(sid)
            seed_costs.append(cost_model.terminal_cost(fta.symbols[sid].name))

    t_weight, t_head, t_tail_start, t_tails = [], [], [0], []
    for t in fta.transitions:
        t_weight.append(cost_model.op_cost(t.production.operator))
        t_head.append(t.head)
        t_tails.extend(t.args)
        t_tail_start.append(len(t_tails))

    occ = [[] for _ in range(fta.num_states)]
    for ti, t in enumerate(fta.transitions):
        for a in t.args:
            occ[a].append(ti)
    occ_start, occ_trans = [0], []
    for lst in occ:
        occ_trans.extend(lst)
        occ_start.append(len(occ_trans))
    return (seed_states, seed_costs, t_weight, t_head, t_tail_start,
            t_tails, occ_start, occ_trans)


def rank(fta, cost_model: CostModel = None):
    """Cheapest accepted program, or None when the language is empty."""
    cost_model = cost_model or CostModel()
    if not fta.finals:
        return None
    (seed_states, seed_costs, t_weight, t_head, t_tail_start, t_tails,
     occ_start, occ_trans) = _encode(fta, cost_model)
    cost, nodes = _backend.solve(
        fta.num_states, seed_states, seed_costs,
        t_weight, t_head, t_tail_start, t_tails, occ_start, occ_trans,
    )

    reachable = [s for s in fta.finals if cost[s] < INF]
    if not reachable:
        return None

    memo = {}

    def build(sid):
        """Optimal AST and its token key for one labelled state."""
        if sid in memo:
            return memo[sid]
        if fta.symbols[sid].kind != KIND_NONTERMINAL:
            leaf = min(fta.leaf_asts[sid], key=cost_model.leaf_token)
            out = (leaf, (cost_model.leaf_token(leaf),))
        else:
            best = None
            for t in fta.by_head.get(sid, ()):
                w = cost_model.op_cost(t.production.operator)
                if any(cost[a] >= INF for a in t.args):
                    continue
                if w + sum(cost[a] for a in t.args) != cost[sid]:
                    continue
                if 1 + sum(nodes[a] for a in t.args) != nodes[sid]:
                    continue
                parts = [build(a) for a in t.args]
                key = (cost_model.op_token(t.production.operator),)
                for _, pk in parts:
                    key = key + pk
                ast = Node(t.production, tuple(p for p, _ in parts))
                if best is None or key < best[1]:
                    best = (ast, key)
            assert best is not None, "labelled state without an optimal derivation"
            out = best
        memo[sid] = out
        return out

    candidates = sorted(reachable, key=lambda s: (cost[s], nodes[s]))
    best_label = (cost[candidates[0]], nodes[candidates[0]])
    tied = [s for s in candidates if (cost[s], nodes[s]) == best_label]
    return min((build(s) for s in tied), key=lambda pair: pair[1])[0]
