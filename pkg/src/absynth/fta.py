"""Bottom-up finite tree automata shared by the concrete and abstract engines.

States are interned on (symbol, payload vector); the payload is one
concrete value per example (CFTA) or one abstract value per example
(AFTA).  Construction is a least fixpoint stratified by minimum tree
size, so a state is admitted only when some derivation of at most
max_size nodes reaches it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product

from .abstraction import alpha, alpha_value, apply_transformer, gamma_contains
from .grammar import KIND_CONST, KIND_INPUT, KIND_NONTERMINAL, Leaf, Node, _compositions
from .values import BOTTOM, is_bottom


@dataclass(frozen=True)
class Transition:
    production: object
    args: tuple
    head: int

    def __repr__(self):
        qs = ",".join(f"q{a}" for a in self.args)
        return f"{self.production.operator}({qs}) -> q{self.head}"


class Fta:
    def __init__(self, grammar):
        self.grammar = grammar
        self._intern = {}  # (symbol name, payload) -> id
        self.symbols = []  # id -> Symbol
        self.payloads = []  # id -> payload tuple
        self.min_size = []  # id -> smallest accepted-tree node count
        self.transitions = []
        self.by_key = {}  # (operator, arg ids) -> head id
        self.by_head = {}  # head id -> list of transitions
        self.finals = set()
        self.leaf_ids = {}  # (symbol name, value) -> id
        self.leaf_asts = {}  # id -> list of Leaf (payload collisions allowed)

    @property
    def num_states(self) -> int:
        return len(self.symbols)

    @property
    def num_transitions(self) -> int:
        return len(self.transitions)

    @property
    def size_metric(self) -> int:
        """Sum over transitions of arity + 1."""
        return sum(t.production.arity + 1 for t in self.transitions)

    def intern(self, symbol, payload, size: int):
        key = (symbol.name, payload)
        sid = self._intern.get(key)
        if sid is None:
            sid = len(self.symbols)
            self._intern[key] = sid
            self.symbols.append(symbol)
            self.payloads.append(payload)
            self.min_size.append(size)
        return sid

    def add_leaf(self, leaf: Leaf, payload):
        sid = self.intern(leaf.symbol, payload, 1)
        self.leaf_ids[(leaf.symbol.name, leaf.value)] = sid
        self.leaf_asts.setdefault(sid, []).append(leaf)
        return sid

    def add_transition(self, production, args, head):
        key = (production.operator, args)
        if key not in self.by_key:
            t = Transition(production, args, head)
            self.by_key[key] = head
            self.transitions.append(t)
            self.by_head.setdefault(head, []).append(t)

    def state_of(self, program):
        """Bottom-up rewrite of an AST; None when the run gets stuck."""
        if isinstance(program, Leaf):
            return self.leaf_ids.get((program.symbol.name, program.value))
        child_ids = []
        for c in program.children:
            cid = self.state_of(c)
            if cid is None:
                return None
            child_ids.append(cid)
        return self.by_key.get((program.production.operator, tuple(child_ids)))


def accepts(fta: Fta, program) -> bool:
    sid = fta.state_of(program)
    return sid is not None and sid in fta.finals


def is_empty(fta: Fta) -> bool:
    # every interned state is bottom-up reachable by construction
    return not fta.finals


def dump(fta: Fta) -> str:
    lines = []
    for sid in range(fta.num_states):
        mark = " [final]" if sid in fta.finals else ""
        lines.append(
            f"q{sid}: {fta.symbols[sid].name} {fta.payloads[sid]!r}"
            f" size={fta.min_size[sid]}{mark}"
        )
    for t in fta.transitions:
        lines.append(str(t))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# construction


def _construct(grammar, max_size, leaf_payload, prod_payload, final_test, deadline):
    fta = Fta(grammar)
    # states created at each size, per symbol
    buckets = {}  # (symbol name, size) -> list of ids

    def admit(sid, symbol, size):
        buckets.setdefault((symbol.name, size), []).append(sid)

    seen = set()
    for sym in grammar.symbols:
        if sym.kind == KIND_INPUT:
            payload = leaf_payload(Leaf(sym))
            if payload is not None:
                sid = fta.add_leaf(Leaf(sym), payload)
                if sid not in seen:
                    seen.add(sid)
                    admit(sid, sym, 1)
        elif sym.kind == KIND_CONST:
            for v in grammar.constants[sym.name]:
                leaf = Leaf(sym, v)
                payload = leaf_payload(leaf)
                if payload is None:
                    continue
                sid = fta.add_leaf(leaf, payload)
                if sid not in seen:
                    seen.add(sid)
                    admit(sid, sym, 1)

    steps = 0
    for size in range(2, max_size + 1):
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("automaton construction exceeded the time budget")
        for prod in grammar.productions:
            for split in _compositions(size - 1, prod.arity):
                pools = [
                    buckets.get((arg.name, s), ())
                    for arg, s in zip(prod.args, split)
                ]
                if any(not p for p in pools):
                    continue
                for combo in product(*pools):
                    steps += 1
                    if (
                        deadline is not None
                        and steps % 8192 == 0
                        and time.monotonic() > deadline
                    ):
                        raise TimeoutError(
                            "automaton construction exceeded the time budget"
                        )
                    payload = prod_payload(
                        prod, [fta.payloads[c] for c in combo]
                    )
                    if payload is None:
                        continue
                    key = (prod.head.name, payload)
                    known = fta._intern.get(key)
                    sid = fta.intern(prod.head, payload, size)
                    if known is None:
                        admit(sid, prod.head, size)
                    fta.add_transition(prod, combo, sid)

    start = grammar.start.name
    for sid in range(fta.num_states):
        if fta.symbols[sid].name == start and final_test(fta.payloads[sid]):
            fta.finals.add(sid)
    return fta


def _id_product(pools):
    if not pools:
        yield ()
        return
    head, rest = pools[0], pools[1:]
    for h in head:
        for r in _id_product(rest):
            yield (h,) + r


def construct_cfta(examples, grammar, max_size, domain, deadline=None) -> Fta:
    inputs = tuple(e.input for e in examples)
    outputs = tuple(e.output for e in examples)

    def leaf_payload(leaf):
        if leaf.symbol.kind == KIND_INPUT:
            return inputs
        return (leaf.value,) * len(examples)

    def prod_payload(prod, arg_payloads):
        out = []
        for j in range(len(examples)):
            v = domain.eval_op(prod, [ap[j] for ap in arg_payloads])
            if is_bottom(v):
                return None
            out.append(v)
        return tuple(out)

    return _construct(
        grammar, max_size, leaf_payload, prod_payload,
        lambda payload: payload == outputs, deadline,
    )


def construct_afta(examples, grammar, P, max_size, domain, deadline=None) -> Fta:
    def leaf_payload(leaf):
        out = []
        for e in examples:
            v = e.input if leaf.symbol.kind == KIND_INPUT else leaf.value
            av = alpha_value(leaf.symbol.name, v, P)
            if av.is_false:
                return None
            out.append(av)
        return tuple(out)

    cache = P._cache  # alpha-after-transformer memo, cleared when P grows

    def prod_payload(prod, arg_payloads):
        out = []
        for j in range(len(arg_payloads[0]) if arg_payloads else 0):
            args_j = tuple(ap[j] for ap in arg_payloads)
            key = (prod.operator, args_j)
            av = cache.get(key)
            if av is None:
                av = alpha(apply_transformer(prod, list(args_j), domain), P)
                cache[key] = av
            if av.is_false:
                return None
            out.append(av)
        return tuple(out)

    outputs = [e.output for e in examples]

    def final_test(payload):
        return all(gamma_contains(av, out) for av, out in zip(payload, outputs))

    return _construct(grammar, max_size, leaf_payload, prod_payload, final_test, deadline)


# ---------------------------------------------------------------------------
# pruning and language enumeration


def prune(fta: Fta) -> Fta:
    """Keep only states co-reachable from final states; language preserved."""
    keep = set(fta.finals)
    frontier = list(fta.finals)
    while frontier:
        sid = frontier.pop()
        for t in fta.by_head.get(sid, ()):
            for a in t.args:
                if a not in keep:
                    keep.add(a)
                    frontier.append(a)

    out = Fta(fta.grammar)
    remap = {}
    for sid in sorted(keep):
        nid = out.intern(fta.symbols[sid], fta.payloads[sid], fta.min_size[sid])
        remap[sid] = nid
    for (name_value, sid) in fta.leaf_ids.items():
        if sid in remap:
            out.leaf_ids[name_value] = remap[sid]
    for sid, leaves in fta.leaf_asts.items():
        if sid in remap:
            out.leaf_asts[remap[sid]] = list(leaves)
    for t in fta.transitions:
        if t.head in keep and all(a in keep for a in t.args):
            out.add_transition(t.production, tuple(remap[a] for a in t.args), remap[t.head])
    out.finals = {remap[s] for s in fta.finals}
    return out


def enumerate_accepted(fta: Fta, max_size: int, cap: int = None):
    """Yield every accepted AST of at most max_size nodes.

    Both automaton kinds are deterministic, so each AST is produced once.
    """
    memo = {}

    def exact(sid, size):
        key = (sid, size)
        if key in memo:
            return memo[key]
        out = []
        if fta.symbols[sid].kind != KIND_NONTERMINAL:
            if size == 1:
                out.extend(fta.leaf_asts.get(sid, ()))
        else:
            for t in fta.by_head.get(sid, ()):
                for split in _compositions(size - 1, t.production.arity):
                    parts = [exact(a, s) for a, s in zip(t.args, split)]
                    if any(not p for p in parts):
                        continue
                    for combo in _id_product([range(len(p)) for p in parts]):
                        out.append(
                            Node(t.production, tuple(p[i] for p, i in zip(parts, combo)))
                        )
        memo[key] = out
        return out

    produced = 0
    for size in range(1, max_size + 1):
        for sid in sorted(fta.finals):
            for ast in exact(sid, size):
                yield ast
                produced += 1
                if cap is not None and produced >= cap:
                    return
