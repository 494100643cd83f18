"""Toy arithmetic DSL: n := id(x) | n + t | n * t with t in {2, 3}.

Small enough to enumerate exhaustively, which makes it the golden-test
domain for the whole pipeline.  The abstract table covers the interval
predicates 0<n<=4 and 0<n<=8 besides plain equalities.
"""

from __future__ import annotations

from ..abstraction import (
    F_ID,
    REL_EQ,
    REL_INTERVAL,
    Predicate,
    Universe,
    conj,
)
from ..grammar import Grammar, Production, Symbol
from ..grammar import KIND_CONST, KIND_INPUT, KIND_NONTERMINAL
from ..ranking import CostModel
from ..values import SORT_INT
from .base import Domain

X = Symbol("x", KIND_INPUT, SORT_INT)
T = Symbol("t", KIND_CONST, SORT_INT)
N = Symbol("n", KIND_NONTERMINAL, SORT_INT)

GRAMMAR = Grammar(
    symbols=(X, T, N),
    productions=(
        Production(N, "id", (X,)),
        Production(N, "add", (N, T)),
        Production(N, "mul", (N, T)),
    ),
    start=N,
    constants={"t": (2, 3)},
)

LE4 = Predicate("n", (F_ID,), REL_INTERVAL, 4)
LE8 = Predicate("n", (F_ID,), REL_INTERVAL, 8)


class ToyDomain(Domain):
    name = "toy"
    grammar = GRAMMAR

    def eval_op(self, production, args):
        op = production.operator
        if op == "id":
            return args[0]
        if op == "add":
            return args[0] + args[1]
        if op == "mul":
            return args[0] * args[1]
        raise ValueError(f"unknown operator {op}")

    def transform_atoms(self, production, atoms):
        op = production.operator
        if op not in ("add", "mul"):
            return None
        p1, p2 = atoms
        # rows are keyed on an interval left atom and an equality right
        # atom; everything else defaults upstream
        if (
            p1 is None
            or p2 is None
            or p1.relation != REL_INTERVAL
            or p2.relation != REL_EQ
            or p2.feature != (F_ID,)
        ):
            return None
        c = p2.constant
        if p1.constant == 4:
            if op == "add":
                if c == 0:
                    return conj([LE4])
                if 0 < c <= 4:
                    return conj([LE8])
            else:
                if c == 1:
                    return conj([LE4])
                if c == 2:
                    return conj([LE8])
            return None
        if p1.constant == 8:
            if (op == "add" and c == 0) or (op == "mul" and c == 1):
                return conj([LE8])
            return None
        return None

    def universe(self) -> Universe:
        return Universe(
            families={("x", F_ID), ("t", F_ID), ("n", F_ID)},
            fixed_atoms={LE4, LE8},
        )

    def cost_model(self) -> CostModel:
        return CostModel(operator_preference=("add", "mul", "id"))

    def parse_value(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise ValueError(f"toy values are integers, got {obj!r}")
        return obj
