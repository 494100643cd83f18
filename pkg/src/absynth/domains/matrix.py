"""Tensor-reshaping DSL with MATLAB-style column-major semantics.

    t := id(x) | reshape(t, v) | permute(t, v) | fliplr(t) | flipud(t)
    v := vec2(k, k) | cons(k, v)

Tensors are modeled as (arr, size) with arr in column-major order: the
2x3 matrix [1,2,3;4,5,6] is arr=[1,4,2,5,3,6], size=[2,3].  reshape
keeps the linear order and requires a size product match; permute takes
a permutation of 1..numDims; fliplr/flipud require 2-D input.
"""

from __future__ import annotations

import math

import numpy as np

from ..abstraction import (
    F_ID,
    F_LEN,
    F_NDIMS,
    F_NELEMS,
    REL_EQ,
    FALSE,
    Predicate,
    Universe,
    conj,
)
from ..grammar import Grammar, Production, Symbol
from ..grammar import KIND_CONST, KIND_INPUT, KIND_NONTERMINAL
from ..ranking import CostModel
from ..values import BOTTOM, SORT_INT, SORT_INTVEC, SORT_TENSOR, Tensor
from .base import Domain

MAX_VEC_LEN = 4
MAX_K = 20

X = Symbol("x", KIND_INPUT, SORT_TENSOR)
T = Symbol("t", KIND_NONTERMINAL, SORT_TENSOR)
V = Symbol("v", KIND_NONTERMINAL, SORT_INTVEC)
K = Symbol("k", KIND_CONST, SORT_INT)


def _to_numpy(t: Tensor):
    return np.asarray(t.arr).reshape(t.size, order="F")


def _from_numpy(a) -> Tensor:
    return Tensor(arr=tuple(int(v) for v in a.flatten(order="F")), size=tuple(a.shape))


class MatrixDomain(Domain):
    name = "matrix"

    def __init__(self, examples=()):
        pool = set(range(1, MAX_VEC_LEN + 1))
        for e in examples:
            n = e.input.num_elems
            pool.update(d for d in range(1, min(n, MAX_K) + 1) if n % d == 0)
        self.grammar = Grammar(
            symbols=(X, T, V, K),
            productions=(
                Production(T, "id", (X,)),
                Production(T, "reshape", (T, V)),
                Production(T, "permute", (T, V)),
                Production(T, "fliplr", (T,)),
                Production(T, "flipud", (T,)),
                Production(V, "vec2", (K, K)),
                Production(V, "cons", (K, V)),
            ),
            start=T,
            constants={"k": tuple(sorted(pool))},
        )

    @classmethod
    def for_examples(cls, examples):
        return cls(examples)

    def eval_op(self, production, args):
        op = production.operator
        if op == "id":
            return args[0]
        if op == "vec2":
            return (args[0], args[1])
        if op == "cons":
            v = (args[0],) + args[1]
            return v if len(v) <= MAX_VEC_LEN else BOTTOM
        if op == "reshape":
            t, v = args
            if math.prod(v) != t.num_elems:
                return BOTTOM
            return Tensor(arr=t.arr, size=tuple(v))
        if op == "permute":
            t, v = args
            if sorted(v) != list(range(1, t.num_dims + 1)):
                return BOTTOM
            return _from_numpy(np.transpose(_to_numpy(t), [i - 1 for i in v]))
        if op in ("fliplr", "flipud"):
            t = args[0]
            if t.num_dims != 2:
                return BOTTOM
            flip = np.fliplr if op == "fliplr" else np.flipud
            return _from_numpy(flip(_to_numpy(t)))
        raise ValueError(f"unknown operator {op}")

    def transform_atoms(self, production, atoms):
        op = production.operator
        if op in ("fliplr", "flipud"):
            (p,) = atoms
            if p is not None and p.feature[0] in (F_NDIMS, F_NELEMS):
                return conj([p])
            return None
        if op == "cons":
            p1, p2 = atoms
            if (
                p1 is not None
                and p2 is not None
                and p1.feature == (F_ID,)
                and p2.feature == (F_LEN,)
            ):
                n = p2.constant + 1
                if n > MAX_VEC_LEN:
                    return FALSE
                return conj([Predicate("v", (F_LEN,), REL_EQ, n)])
            return None
        if op == "permute":
            p1, _ = atoms
            if p1 is not None and p1.feature[0] in (F_NDIMS, F_NELEMS):
                return conj([p1])
            return None
        if op == "reshape":
            p1, p2 = atoms
            if p1 is not None and p1.feature == (F_NDIMS,) and p2 is not None:
                if p2.feature == (F_LEN,):
                    return conj([Predicate("t", (F_NDIMS,), REL_EQ, p2.constant)])
                if p2.feature == (F_ID,):
                    return conj(
                        [Predicate("t", (F_NDIMS,), REL_EQ, len(p2.constant))]
                    )
            if p1 is not None and p1.feature == (F_NELEMS,):
                return conj([p1])
            if (
                p1 is not None
                and p1.feature == (F_ID,)
                and p2 is not None
                and p2.feature == (F_LEN,)
            ):
                return conj(
                    [Predicate("t", (F_NELEMS,), REL_EQ, p1.constant.num_elems)]
                )
            return None
        return None

    def initial_predicates(self):
        P = super().initial_predicates()  # true, x=c, k=c
        # dimension vectors stay concrete: the vector space is tiny and
        # no table row can exclude a mismatched reshape shape, so an
        # abstract vector state would force one refinement per shape
        P.families.add(("v", F_ID))
        return P

    def universe(self) -> Universe:
        return Universe(
            families={
                ("x", F_ID),
                ("t", F_ID), ("t", F_NDIMS), ("t", F_NELEMS),
                ("v", F_ID), ("v", F_LEN),
                ("k", F_ID),
            }
        )

    def cost_model(self) -> CostModel:
        return CostModel(
            operator_preference=(
                "id", "reshape", "permute", "fliplr", "flipud", "vec2", "cons",
            )
        )

    def parse_value(self, obj):
        if (
            not isinstance(obj, dict)
            or "size" not in obj
            or "arr_col_major" not in obj
        ):
            raise ValueError(
                "matrix values are {size: [...], arr_col_major: [...]}"
            )
        return Tensor(arr=tuple(obj["arr_col_major"]), size=tuple(obj["size"]))

    def value_to_json(self, v):
        return {"size": list(v.size), "arr_col_major": list(v.arr)}
