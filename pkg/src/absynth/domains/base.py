"""Contract every DSL instantiation fulfills.

A domain bundles a grammar, concrete operator semantics, the abstract
transformer table, the predicate universe, the initial abstraction, and
the ranking cost model.  Some domains mine constant pools from the
examples, so plugins are built per task via for_examples.
"""

from __future__ import annotations

from ..abstraction import F_ID, REL_EQ, Predicate, PredicateSet, Universe
from ..grammar import KIND_CONST, KIND_INPUT
from ..ranking import CostModel


class Domain:
    name = "?"
    grammar = None

    @classmethod
    def for_examples(cls, examples):
        return cls()

    def eval_op(self, production, args):
        raise NotImplementedError

    def transform_atoms(self, production, atoms):
        """Transformer table row for one atom tuple (None entries = True).

        Return None when no row matches; the dispatcher defaults to True.
        All-equality tuples never reach here (handled exactly upstream).
        """
        return None

    def universe(self) -> Universe:
        """Default: identity-equality atoms for every symbol."""
        return Universe(families={(s.name, F_ID) for s in self.grammar.symbols})

    def initial_predicates(self) -> PredicateSet:
        """Default abstraction: true, x = c atoms, and t = [[t]] atoms."""
        P = PredicateSet()
        for s in self.grammar.symbols:
            if s.kind == KIND_INPUT:
                P.families.add((s.name, F_ID))
            elif s.kind == KIND_CONST:
                P.atoms.update(
                    Predicate(s.name, (F_ID,), REL_EQ, v)
                    for v in self.grammar.constants[s.name]
                )
        return P

    def cost_model(self) -> CostModel:
        return CostModel()

    # benchmark JSON values
    def parse_value(self, obj):
        return obj

    def value_to_json(self, v):
        return v
