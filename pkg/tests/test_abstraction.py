import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from absynth.abstraction import (
    FALSE,
    TRUE,
    F_CHAR,
    F_ID,
    F_LEN,
    REL_EQ,
    REL_INTERVAL,
    Predicate,
    PredicateSet,
    alpha,
    alpha_value,
    apply_transformer,
    atom_entails_atom,
    atom_holds,
    conj,
    conjunctions_up_to,
    entails,
    gamma_contains,
    meet,
    simplify,
)
from absynth.domains.strings import StringDomain
from absynth.domains.toy import LE4, LE8, ToyDomain
from absynth.grammar import Example, eval_concrete
from absynth.values import BOTTOM, is_bottom

from conftest import sample_program


def eq(s, c):
    return Predicate(s, (F_ID,), REL_EQ, c)


# --- atoms -----------------------------------------------------------------


def test_atom_holds():
    assert atom_holds(eq("n", 3), 3)
    assert not atom_holds(eq("n", 3), 4)
    assert atom_holds(LE4, 4) and not atom_holds(LE4, 5)
    assert not atom_holds(LE4, 0)  # interval is strict below
    assert not atom_holds(LE4, BOTTOM)
    assert atom_holds(Predicate("e", (F_LEN,), REL_EQ, 2), "ab")
    assert atom_holds(Predicate("e", (F_CHAR, 1), REL_EQ, "b"), "ab")
    assert not atom_holds(Predicate("e", (F_CHAR, 5), REL_EQ, "b"), "ab")


def test_atom_entailment():
    assert atom_entails_atom(eq("n", 3), LE4)
    assert not atom_entails_atom(eq("n", 5), LE4)
    assert atom_entails_atom(LE4, LE8)
    assert not atom_entails_atom(LE8, LE4)
    assert atom_entails_atom(eq("e", "ab"), Predicate("e", (F_LEN,), REL_EQ, 2))
    assert atom_entails_atom(eq("e", "ab"), Predicate("e", (F_CHAR, 0), REL_EQ, "a"))


# --- conjunctions ----------------------------------------------------------


def test_conj_canonical_and_interned():
    a = conj([LE8, LE4])
    b = conj([LE4, LE8, LE4])
    assert a is b  # sorted, deduplicated, interned
    assert conj([]) is TRUE


def test_conj_keeps_entailed_atoms():
    # alpha over {0<n<=4, 0<n<=8} at n=3 must keep both conjuncts; the
    # canonical form does not absorb weaker atoms
    a = conj([LE4, LE8])
    assert a.atoms == (LE4, LE8)


def test_conj_contradictions():
    assert conj([eq("n", 1), eq("n", 2)]) is FALSE
    assert conj([eq("n", 5), LE4]) is FALSE  # identity decides the interval
    assert set(conj([eq("n", 3), LE4]).atoms) == {LE4, eq("n", 3)}


def test_conj_rejects_mixed_subjects():
    with pytest.raises(ValueError, match="mixes subjects"):
        conj([eq("n", 1), eq("t", 1)])


def test_simplify_drops_entailed_atoms():
    assert simplify(conj([LE4, LE8])).atoms == (LE4,)
    assert simplify(conj([eq("n", 3), LE4, LE8])).atoms == (eq("n", 3),)
    assert simplify(TRUE) is TRUE
    assert simplify(FALSE) is FALSE


def test_meet():
    assert meet(TRUE, conj([LE4])) is conj([LE4])
    assert meet(conj([LE4]), FALSE) is FALSE
    assert meet(conj([LE4]), conj([LE8])) is conj([LE4, LE8])
    assert meet(conj([eq("n", 1)]), conj([eq("n", 2)])) is FALSE


# --- lattice properties ----------------------------------------------------

toy_atoms = st.sampled_from(
    [LE4, LE8] + [eq("n", c) for c in (1, 2, 3, 4, 5, 8, 9)]
)
toy_values = st.lists(toy_atoms, max_size=3).map(conj)


@settings(max_examples=300, deadline=None)
@given(toy_values)
def test_entails_reflexive(a):
    assert entails(a, a)
    assert entails(FALSE, a)
    assert entails(a, TRUE)


@settings(max_examples=300, deadline=None)
@given(toy_values, toy_values, toy_values)
def test_entails_transitive(a, b, c):
    if entails(a, b) and entails(b, c):
        assert entails(a, c)


@settings(max_examples=300, deadline=None)
@given(toy_values, toy_values)
def test_meet_is_lower_bound(a, b):
    m = meet(a, b)
    assert entails(m, a) and entails(m, b)
    assert meet(a, b) == meet(b, a)


@settings(max_examples=300, deadline=None)
@given(toy_values, st.integers(-2, 12))
def test_entails_implies_gamma_subset(a, v):
    b = conj([q for q in a.atoms if atom_holds(q, v)]) if not a.is_false else a
    # b is weaker than a by construction wherever a holds on v
    if gamma_contains(a, v):
        assert gamma_contains(b, v)


@settings(max_examples=300, deadline=None)
@given(toy_values, st.integers(-2, 12))
def test_simplify_preserves_meaning(a, v):
    assert gamma_contains(simplify(a), v) == gamma_contains(a, v)


# --- predicate sets and alpha ----------------------------------------------


def toy_P():
    P = ToyDomain().initial_predicates()
    P.add_atoms([LE4, LE8])
    return P


def test_alpha_value_soundness_and_precision():
    P = toy_P()
    av = alpha_value("n", 3, P)
    assert gamma_contains(av, 3)
    # keeps both intervals, not just the tighter one
    assert LE4 in av.atoms and LE8 in av.atoms
    assert alpha_value("n", BOTTOM, P) is FALSE


def test_alpha_of_conjunction():
    P = toy_P()
    assert alpha(conj([eq("n", 3)]), P) == conj([LE4, LE8])
    assert alpha(conj([LE4]), P) == conj([LE4, LE8])  # interval widens
    assert alpha(conj([LE8]), P) == conj([LE8])
    assert alpha(FALSE, P) is FALSE
    assert alpha(TRUE, P) is TRUE


def test_alpha_is_weaker_than_argument():
    P = toy_P()
    for v in range(1, 10):
        phi = conj([eq("n", v)])
        assert entails(phi, alpha(phi, P))


def test_predicate_set_cache_cleared_on_growth():
    P = toy_P()
    before = alpha_value("n", 9, P)
    assert before is TRUE  # nothing in P holds at 9
    added = P.add_atoms([Predicate("n", (F_ID,), REL_INTERVAL, 9)])
    assert added == 1
    after = alpha_value("n", 9, P)
    assert not after.is_true


def test_add_atoms_counts_only_new():
    P = toy_P()
    assert P.add_atoms([LE4]) == 0


# --- transformer dispatch --------------------------------------------------


def test_transformer_exact_on_identity_tuples():
    d = ToyDomain()
    add = d.grammar.production("add")
    out = apply_transformer(add, [conj([eq("n", 1)]), conj([eq("t", 2)])], d)
    assert out == conj([eq("n", 3)])


def test_transformer_table_row():
    d = ToyDomain()
    add = d.grammar.production("add")
    mul = d.grammar.production("mul")
    assert apply_transformer(add, [conj([LE4]), conj([eq("t", 2)])], d) == conj([LE8])
    assert apply_transformer(mul, [conj([LE4]), conj([eq("t", 2)])], d) == conj([LE8])
    assert apply_transformer(mul, [conj([LE8]), conj([eq("t", 2)])], d) is TRUE


def test_transformer_false_short_circuit():
    d = ToyDomain()
    add = d.grammar.production("add")
    assert apply_transformer(add, [FALSE, conj([eq("t", 2)])], d) is FALSE


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 9))
def test_transformer_soundness_toy(seed, x):
    """gamma(transformer(alpha args)) contains the concrete result."""
    d = ToyDomain()
    P = toy_P()
    rng = random.Random(seed)
    prog = sample_program(d.grammar, rng, rng.randint(4, 10))
    assert prog is not None
    args = [eval_concrete(c, x, d) for c in prog.children]
    if any(is_bottom(a) for a in args):
        return
    concrete = d.eval_op(prog.production, args)
    abstract_args = [
        alpha_value(c.head.name, eval_concrete(c, x, d), P) for c in prog.children
    ]
    out = apply_transformer(prog.production, abstract_args, d)
    assert gamma_contains(out, concrete)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_transformer_soundness_string(seed):
    d = StringDomain([Example("John Smith", "John")])
    P = d.initial_predicates()
    rng = random.Random(seed)
    prog = sample_program(d.grammar, rng, rng.randint(3, 12))
    args = [eval_concrete(c, "John Smith", d) for c in prog.children]
    if any(is_bottom(a) for a in args):
        return
    concrete = d.eval_op(prog.production, args)
    if is_bottom(concrete):
        return
    abstract_args = [
        alpha_value(c.head.name, v, P) for c, v in zip(prog.children, args)
    ]
    out = apply_transformer(prog.production, abstract_args, d)
    assert gamma_contains(out, concrete)


def test_conjunctions_up_to():
    out = conjunctions_up_to([LE4, LE8], 2)
    assert out[0] is TRUE
    assert conj([LE4]) in out and conj([LE8]) in out and conj([LE4, LE8]) in out
    assert len(out) == 4
