"""Synthesis loop: abstract automaton, rank, counterexample, refine.

Each iteration builds an abstract automaton over the current predicate
set, extracts the cheapest candidate, and either returns it (when it
satisfies the examples) or constructs a proof of incorrectness whose
atoms refine the abstraction.  The proof is a per-node annotation
satisfying three checks: leaves entail their annotation, transformers
propagate annotations, and the root annotation excludes the wrong
output.  Every proof is verified before use.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from .abstraction import (
    F_ID,
    FALSE,
    REL_EQ,
    Predicate,
    alpha,
    alpha_value,
    apply_transformer,
    conj,
    conjunctions_up_to,
    entails,
    gamma_contains,
    meet,
    simplify,
)
from .fta import accepts, construct_afta, is_empty
from .grammar import (
    KIND_INPUT,
    Leaf,
    Node,
    eval_concrete,
    iter_nodes,
    render_program,
    satisfies,
)
from .ranking import rank
from .values import BOTTOM, is_bottom

log = logging.getLogger(__name__)


@dataclass
class LearnConfig:
    max_ast_size: int = 20
    strengthen_k: int = 2
    max_iterations: int = 200
    timeout_ms: Optional[int] = None
    trace: bool = False

    def __post_init__(self):
        if self.strengthen_k < 1:
            raise ValueError("strengthen_k must be >= 1")


@dataclass
class Iteration:
    index: int
    candidate: object
    candidate_text: str
    num_states: int
    num_transitions: int
    counterexample: object
    new_atoms: int
    t_afta: float
    t_rank: float
    t_proof: float


@dataclass
class LearnResult:
    status: str  # solved | no-program | iteration-cap | timeout
    program: object
    iterations: list = field(default_factory=list)
    num_states: int = 0
    num_transitions: int = 0
    t_total: float = 0.0

    @property
    def t_afta(self):
        return sum(i.t_afta for i in self.iterations)

    @property
    def t_rank(self):
        return sum(i.t_rank for i in self.iterations)

    @property
    def t_proof(self):
        return sum(i.t_proof for i in self.iterations)


class AbstractionError(RuntimeError):
    """Raised when an internal soundness or progress guarantee fails."""


@dataclass
class Proof:
    program: object  # private copy with unique node objects
    annotations: dict  # id(node) -> AbstractValue
    counterexample: object

    def annotation(self, node):
        return self.annotations[id(node)]

    def atoms(self):
        out = set()
        for av in self.annotations.values():
            out.update(av.atoms)
        return out


def find_counterexample(program, examples, domain):
    """First example the program fails; Bottom counts as a mismatch."""
    for e in examples:
        if eval_concrete(program, e.input, domain) != e.output:
            return e
    raise ValueError("program satisfies every example")


def _fresh(program):
    """Rebuild with distinct node objects so per-occurrence ids are unique."""
    if isinstance(program, Leaf):
        return Leaf(program.symbol, program.value)
    return Node(program.production, tuple(_fresh(c) for c in program.children))


def _leaf_value(leaf, e_in):
    return e_in if leaf.symbol.kind == KIND_INPUT else leaf.value


def eval_abstract(program, e_in, P, domain):
    """Per Fig. abstract-eval: alpha at leaves, alpha after transformers."""
    if isinstance(program, Leaf):
        return alpha_value(program.symbol.name, _leaf_value(program, e_in), P)
    args = [eval_abstract(c, e_in, P, domain) for c in program.children]
    return alpha(apply_transformer(program.production, args, domain), P)


def _annotate_eval(program, e_in, P, domain, varphi, conc):
    if isinstance(program, Leaf):
        v = _leaf_value(program, e_in)
        av = alpha_value(program.symbol.name, v, P)
    else:
        vals, avs = [], []
        for c in program.children:
            _annotate_eval(c, e_in, P, domain, varphi, conc)
            vals.append(conc[id(c)])
            avs.append(varphi[id(c)])
        v = BOTTOM if any(is_bottom(x) for x in vals) else domain.eval_op(
            program.production, vals
        )
        av = alpha(apply_transformer(program.production, avs, domain), P)
    varphi[id(program)] = av
    conc[id(program)] = v


def _identity(symbol_name, value):
    return conj([Predicate(symbol_name, (F_ID,), REL_EQ, value)])


def strengthen_root(subject, value, varphi, wrong_output, universe, k):
    """Weakest conjunction over universe atoms of `value` that, joined
    with varphi, excludes the wrong output."""
    atoms = universe.relevant_atoms(subject, value)
    candidates = conjunctions_up_to(atoms, k)

    def valid(psi):
        return not gamma_contains(meet(varphi, psi), wrong_output)

    valid_cands = [c for c in candidates if valid(c)]
    if not valid_cands:
        # always valid: value != wrong_output
        return _identity(subject, value)
    maximal = [
        c
        for c in valid_cands
        if not any(
            entails(c, d) and not entails(d, c) for d in valid_cands if d is not c
        )
    ]
    return min(maximal, key=_candidate_order)


def _candidate_order(av):
    return (len(av.atoms), tuple(a.sort_key() for a in av.atoms))


def strengthen_children(production, child_values, child_varphis, parent_av,
                        universe, k, domain):
    """Pareto-optimal tuple of strengthenings for the children of a node.

    Coordinate ascent from the concrete-equality tuple (valid by
    transformer precision): each slot is weakened to the entails-maximal
    valid candidate while the others stay fixed, until no slot moves.
    Monotone transformers make the fixpoint pareto-optimal.
    """
    n = production.arity
    names = [a.name for a in production.args]
    cands = [
        conjunctions_up_to(universe.relevant_atoms(names[i], child_values[i]), k)
        for i in range(n)
    ]
    psi = [_identity(names[i], child_values[i]) for i in range(n)]

    def arg(i, c):
        return simplify(meet(child_varphis[i], c))

    def valid(psis):
        out = apply_transformer(production, [arg(i, psis[i]) for i in range(n)], domain)
        return entails(out, parent_av)

    if not valid(psi):
        raise AbstractionError(
            "transformer precision violated: equality tuple is not a valid"
            f" strengthening for {production.operator}"
        )

    changed = True
    while changed:
        changed = False
        for i in range(n):
            valid_here = []
            for c in cands[i]:
                if not entails(psi[i], c):
                    continue
                trial = list(psi)
                trial[i] = c
                if valid(trial):
                    valid_here.append(c)
            maximal = [
                c
                for c in valid_here
                if not any(
                    entails(c, d) and not entails(d, c)
                    for d in valid_here
                    if d is not c
                )
            ]
            best = min(maximal, key=_candidate_order)
            if best != psi[i]:
                psi[i] = best
                changed = True
    return psi


def construct_proof(program, example, P, universe, k, domain):
    """Proof of incorrectness for a spurious program on one example."""
    prog = _fresh(program)
    varphi, conc = {}, {}
    _annotate_eval(prog, example.input, P, domain, varphi, conc)

    annotations = {}
    root_value = conc[id(prog)]
    if is_bottom(root_value):
        # fallback: equality annotations, False where evaluation failed
        for v in iter_nodes(prog):
            c = conc[id(v)]
            annotations[id(v)] = (
                FALSE if is_bottom(c) else _identity(v.head.name, c)
            )
        return Proof(prog, annotations, example)

    psi = strengthen_root(
        prog.head.name, root_value, varphi[id(prog)], example.output, universe, k
    )
    annotations[id(prog)] = simplify(meet(varphi[id(prog)], psi))

    worklist = [prog]
    while worklist:
        v = worklist.pop(0)
        if isinstance(v, Leaf):
            continue
        psis = strengthen_children(
            v.production,
            [conc[id(c)] for c in v.children],
            [varphi[id(c)] for c in v.children],
            annotations[id(v)],
            universe,
            k,
            domain,
        )
        for child, p in zip(v.children, psis):
            annotations[id(child)] = simplify(meet(varphi[id(child)], p))
            worklist.append(child)
    return Proof(prog, annotations, example)


def verify_proof(proof: Proof, domain) -> None:
    """The three proof checks; raises AbstractionError on any failure."""
    e = proof.counterexample
    for v in iter_nodes(proof.program):
        I_v = proof.annotation(v)
        if isinstance(v, Leaf):
            fact = _identity(v.symbol.name, _leaf_value(v, e.input))
            if not entails(fact, I_v):
                raise AbstractionError(f"leaf check failed at {v}: {fact} !=> {I_v}")
        else:
            out = apply_transformer(
                v.production, [proof.annotation(c) for c in v.children], domain
            )
            if not entails(out, I_v):
                raise AbstractionError(
                    f"transformer check failed at {v.production.operator}:"
                    f" {out} !=> {I_v}"
                )
    if gamma_contains(proof.annotation(proof.program), e.output):
        raise AbstractionError("root annotation does not exclude the wrong output")


def extract_predicates(proof: Proof):
    return proof.atoms()


def learn(examples, domain, config: LearnConfig = None, P0=None, universe=None,
          cost_model=None) -> LearnResult:
    cfg = config or LearnConfig()
    P = (P0 or domain.initial_predicates()).copy()
    universe = universe or domain.universe()
    cost_model = cost_model or domain.cost_model()
    grammar = domain.grammar
    started = time.monotonic()
    deadline = (
        started + cfg.timeout_ms / 1000.0 if cfg.timeout_ms is not None else None
    )

    result = LearnResult(status="iteration-cap", program=None)
    previous = None
    for index in range(1, cfg.max_iterations + 1):
        t0 = time.monotonic()
        try:
            afta = construct_afta(
                examples, grammar, P, cfg.max_ast_size, domain, deadline=deadline
            )
        except TimeoutError:
            result.status = "timeout"
            break
        t_afta = time.monotonic() - t0
        result.num_states = afta.num_states
        result.num_transitions = afta.num_transitions

        if previous is not None and accepts(afta, previous):
            raise AbstractionError(
                "progress violated: refined automaton still accepts "
                + render_program(previous)
            )

        if is_empty(afta):
            result.status = "no-program"
            result.iterations.append(
                Iteration(index, None, "", afta.num_states, afta.num_transitions,
                          None, 0, t_afta, 0.0, 0.0)
            )
            break

        t0 = time.monotonic()
        candidate = rank(afta, cost_model)
        t_rank = time.monotonic() - t0

        if satisfies(candidate, examples, domain):
            result.status = "solved"
            result.program = candidate
            result.iterations.append(
                Iteration(index, candidate, render_program(candidate),
                          afta.num_states, afta.num_transitions, None, 0,
                          t_afta, t_rank, 0.0)
            )
            if cfg.trace:
                log.info("iteration %d: %s (solved)", index, render_program(candidate))
            break

        t0 = time.monotonic()
        cex = find_counterexample(candidate, examples, domain)
        proof = construct_proof(candidate, cex, P, universe, cfg.strengthen_k, domain)
        verify_proof(proof, domain)
        new_atoms = P.add_atoms(extract_predicates(proof))
        t_proof = time.monotonic() - t0

        result.iterations.append(
            Iteration(index, candidate, render_program(candidate),
                      afta.num_states, afta.num_transitions, cex, new_atoms,
                      t_afta, t_rank, t_proof)
        )
        if cfg.trace:
            log.info(
                "iteration %d: %s spurious on %r -> %r, %d new atoms, |Q|=%d |D|=%d",
                index, render_program(candidate), cex.input, cex.output,
                new_atoms, afta.num_states, afta.num_transitions,
            )
        if new_atoms == 0:
            raise AbstractionError(
                "refinement stalled: proof added no predicates for spurious "
                + render_program(candidate)
            )
        previous = candidate
        if deadline is not None and time.monotonic() > deadline:
            result.status = "timeout"
            break

    result.t_total = time.monotonic() - started
    return result
