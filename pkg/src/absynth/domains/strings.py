"""String-transformation DSL.

    e := str(f) | concat(f, e)
    f := conststr(l) | substr(x, p, p)
    p := pos(x, tau, k, d) | constpos(r)

Positions are 0-based; substr takes the half-open range [p1, p2) and is
Bottom when the bounds are unordered or out of range.  pos finds the
start or end of the k-th maximal run of a token (negative k counts from
the last run).  Constant pools are mined from the examples, so the
plugin is built per task.
"""

from __future__ import annotations

from ..abstraction import (
    F_CHAR,
    F_ID,
    F_LEN,
    REL_EQ,
    Predicate,
    Universe,
    conj,
)
from ..grammar import Grammar, Production, Symbol
from ..grammar import KIND_CONST, KIND_INPUT, KIND_NONTERMINAL
from ..ranking import CostModel
from ..values import BOTTOM, SORT_DIRECTION, SORT_INT, SORT_STRING, SORT_TOKEN
from .base import Domain

TOKEN_CLASSES = {
    "Digits": str.isdigit,
    "Alphabets": str.isalpha,
    "Alphanumeric": str.isalnum,
    "Whitespace": str.isspace,
    "Uppercase": str.isupper,
    "Lowercase": str.islower,
}

K_RANGE = tuple(k for k in range(-3, 4) if k != 0)
R_RANGE = tuple(range(0, 21))
MAX_CONST_LEN = 8
MAX_CONST_POOL = 50

X = Symbol("x", KIND_INPUT, SORT_STRING)
E = Symbol("e", KIND_NONTERMINAL, SORT_STRING)
F = Symbol("f", KIND_NONTERMINAL, SORT_STRING)
P_ = Symbol("p", KIND_NONTERMINAL, SORT_INT)
TAU = Symbol("tau", KIND_CONST, SORT_TOKEN)
K = Symbol("k", KIND_CONST, SORT_INT)
R = Symbol("r", KIND_CONST, SORT_INT)
D = Symbol("d", KIND_CONST, SORT_DIRECTION)
L = Symbol("l", KIND_CONST, SORT_STRING)


def token_runs(token: str, s: str):
    """Maximal non-overlapping runs of a token, left to right."""
    pred = TOKEN_CLASSES.get(token)
    if pred is None:  # single-character literal token
        pred = lambda c: c == token
    runs, i, n = [], 0, len(s)
    while i < n:
        if pred(s[i]):
            j = i
            while j < n and pred(s[j]):
                j += 1
            runs.append((i, j))
            i = j
        else:
            i += 1
    return runs


def _common_substrings(outputs):
    if not outputs:
        return []
    base = min(outputs, key=len)
    subs = {
        base[i:j]
        for i in range(len(base))
        for j in range(i + 1, min(len(base), i + MAX_CONST_LEN) + 1)
    }
    common = [s for s in subs if all(s in out for out in outputs)]
    common.sort(key=lambda s: (len(s), s))
    return common[:MAX_CONST_POOL]


class StringDomain(Domain):
    name = "string"

    def __init__(self, examples=()):
        inputs = [e.input for e in examples]
        outputs = [e.output for e in examples]
        literal_tokens = sorted({c for s in inputs for c in s})
        self.tokens = tuple(TOKEN_CLASSES) + tuple(literal_tokens)
        consts = _common_substrings(outputs)
        # positions beyond the longest input can never resolve inside a
        # substring, so the constant-position pool stops there
        max_r = min(R_RANGE[-1], max((len(s) for s in inputs), default=R_RANGE[-1]))
        self.grammar = Grammar(
            symbols=(X, E, F, P_, TAU, K, R, D, L),
            productions=(
                Production(E, "str", (F,)),
                Production(E, "concat", (F, E)),
                Production(F, "conststr", (L,)),
                Production(F, "substr", (X, P_, P_)),
                Production(P_, "pos", (X, TAU, K, D)),
                Production(P_, "constpos", (R,)),
            ),
            start=E,
            constants={
                "tau": self.tokens,
                "k": K_RANGE,
                "r": tuple(range(0, max_r + 1)),
                "d": ("Start", "End"),
                "l": tuple(consts) if consts else ("",),
            },
        )

    @classmethod
    def for_examples(cls, examples):
        return cls(examples)

    def eval_op(self, production, args):
        op = production.operator
        if op == "str":
            return args[0]
        if op == "concat":
            return args[0] + args[1]
        if op == "conststr":
            return args[0]
        if op == "substr":
            x, p1, p2 = args
            if 0 <= p1 <= p2 <= len(x):
                return x[p1:p2]
            return BOTTOM
        if op == "constpos":
            return args[0]
        if op == "pos":
            x, tau, k, d = args
            runs = token_runs(tau, x)
            idx = k - 1 if k > 0 else len(runs) + k
            if not (0 <= idx < len(runs)):
                return BOTTOM
            return runs[idx][0] if d == "Start" else runs[idx][1]
        raise ValueError(f"unknown operator {op}")

    def transform_atoms(self, production, atoms):
        op = production.operator
        if op == "str":
            (p,) = atoms
            if p is None or p.feature[0] not in (F_LEN, F_CHAR):
                return None
            return conj([Predicate("e", p.feature, p.relation, p.constant)])
        if op != "concat":
            return None
        p1, p2 = atoms
        if p1 is None:
            return None
        f1 = p1.feature[0]
        if f1 == F_CHAR:
            # a character of the first part survives at the same index
            return conj([Predicate("e", p1.feature, REL_EQ, p1.constant)])
        if p2 is None:
            return None
        f2 = p2.feature[0]
        if f1 == F_LEN and f2 == F_LEN:
            return conj([Predicate("e", (F_LEN,), REL_EQ, p1.constant + p2.constant)])
        if f1 == F_LEN and f2 == F_CHAR:
            i = p1.constant + p2.feature[1]
            return conj([Predicate("e", (F_CHAR, i), REL_EQ, p2.constant)])
        if f1 == F_LEN and f2 == F_ID:
            c = p2.constant
            out = [Predicate("e", (F_LEN,), REL_EQ, p1.constant + len(c))]
            out.extend(
                Predicate("e", (F_CHAR, p1.constant + j), REL_EQ, c[j])
                for j in range(len(c))
            )
            return conj(out)
        if f1 == F_ID and f2 == F_LEN:
            c = p1.constant
            out = [Predicate("e", (F_LEN,), REL_EQ, len(c) + p2.constant)]
            out.extend(
                Predicate("e", (F_CHAR, j), REL_EQ, c[j]) for j in range(len(c))
            )
            return conj(out)
        if f1 == F_ID and f2 == F_CHAR:
            c = p1.constant
            out = [Predicate("e", (F_CHAR, len(c) + p2.feature[1]), REL_EQ, p2.constant)]
            out.extend(
                Predicate("e", (F_CHAR, j), REL_EQ, c[j]) for j in range(len(c))
            )
            return conj(out)
        return None

    def universe(self) -> Universe:
        return Universe(
            families={
                ("e", F_ID), ("e", F_LEN), ("e", F_CHAR),
                ("f", F_ID), ("f", F_LEN), ("f", F_CHAR),
                ("p", F_ID), ("x", F_ID), ("tau", F_ID), ("k", F_ID),
                ("r", F_ID), ("d", F_ID), ("l", F_ID),
            }
        )

    def initial_predicates(self):
        P = super().initial_predicates()  # true, x=c, const equalities
        P.families.update({("e", F_LEN), ("f", F_LEN), ("p", F_ID)})
        return P

    def cost_model(self) -> CostModel:
        return CostModel(
            operator_preference=(
                "str", "concat", "substr", "conststr", "constpos", "pos",
            )
        )

    def parse_value(self, obj):
        if not isinstance(obj, str):
            raise ValueError(f"string values expected, got {obj!r}")
        return obj
