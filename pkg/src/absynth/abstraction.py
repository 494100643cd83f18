"""Predicate abstraction: atoms, conjunctions, alpha, entailment, transformers.

Abstract values are True, False, or a canonical conjunction of atomic
predicates f(s) op c over a single subject symbol.  Entailment is
syntactic and sound but incomplete; the abstraction function alpha keeps
every atom of the predicate set entailed by its argument.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, product

from .values import BOTTOM, Tensor, is_bottom

log = logging.getLogger(__name__)

# feature tags
F_ID = "id"
F_LEN = "len"
F_CHAR = "char"
F_NDIMS = "ndims"
F_NELEMS = "nelems"

REL_EQ = "eq"
REL_INTERVAL = "interval"  # 0 < value <= constant


@dataclass(frozen=True)
class Predicate:
    subject: str
    feature: tuple  # ("id",) | ("len",) | ("char", i) | ("ndims",) | ("nelems",)
    relation: str
    constant: object

    def sort_key(self):
        return (
            self.subject,
            self.feature[0],
            self.feature[1] if len(self.feature) > 1 else -1,
            self.relation,
            repr(self.constant),
        )

    def __repr__(self):
        s = self.subject
        if self.relation == REL_INTERVAL:
            return f"0<{s}<={self.constant}"
        tag = self.feature[0]
        if tag == F_ID:
            return f"{s}={self.constant!r}"
        if tag == F_CHAR:
            return f"{s}[{self.feature[1]}]={self.constant!r}"
        return f"{tag}({s})={self.constant!r}"


def feature_value(feature: tuple, v):
    """Evaluate a feature on a concrete value; None if inapplicable."""
    tag = feature[0]
    if tag == F_ID:
        return v
    if tag == F_LEN:
        return len(v) if isinstance(v, (str, tuple)) else None
    if tag == F_CHAR:
        i = feature[1]
        if isinstance(v, str) and 0 <= i < len(v):
            return v[i]
        return None
    if tag == F_NDIMS:
        return v.num_dims if isinstance(v, Tensor) else None
    if tag == F_NELEMS:
        return v.num_elems if isinstance(v, Tensor) else None
    raise ValueError(f"unknown feature {feature}")


def atom_holds(p: Predicate, v) -> bool:
    if is_bottom(v):
        return False
    fv = feature_value(p.feature, v)
    if fv is None:
        return False
    if p.relation == REL_EQ:
        return fv == p.constant
    return isinstance(fv, int) and 0 < fv <= p.constant


def atom_entails_atom(p: Predicate, q: Predicate) -> bool:
    if p == q:
        return True
    if p.subject != q.subject:
        return False
    if p.feature == (F_ID,) and p.relation == REL_EQ:
        return atom_holds(q, p.constant)
    if (
        p.relation == REL_INTERVAL
        and q.relation == REL_INTERVAL
        and p.feature == q.feature
    ):
        return p.constant <= q.constant
    if p.relation == REL_EQ and q.relation == REL_INTERVAL and p.feature == q.feature:
        return isinstance(p.constant, int) and 0 < p.constant <= q.constant
    return False


class AbstractValue:
    """True, False, or a sorted duplicate-free conjunction of atoms.

    Instances are interned by conj(), so equality degenerates to object
    identity on values built through the public constructors.
    """

    __slots__ = ("atoms", "_false", "_hash")

    def __init__(self, atoms=(), false=False):
        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "_false", false)
        object.__setattr__(self, "_hash", hash((self.atoms, false)))

    @property
    def is_true(self) -> bool:
        return not self._false and not self.atoms

    @property
    def is_false(self) -> bool:
        return self._false

    def single_identity(self):
        """The constant c if this value is exactly one atom s = c."""
        if len(self.atoms) == 1:
            (a,) = self.atoms
            if a.feature == (F_ID,) and a.relation == REL_EQ:
                return a.constant
        return None

    def identity_constant(self):
        """The constant of an identity atom inside the conjunction, if any."""
        for a in self.atoms:
            if a.feature == (F_ID,) and a.relation == REL_EQ:
                return a.constant
        return None

    def __eq__(self, other):
        return (
            isinstance(other, AbstractValue)
            and self._false == other._false
            and self.atoms == other.atoms
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self._false:
            return "false"
        if not self.atoms:
            return "true"
        return " & ".join(repr(a) for a in self.atoms)


TRUE = AbstractValue()
FALSE = AbstractValue(false=True)

_interned = {(): TRUE}


def conj(atoms) -> AbstractValue:
    """Canonical conjunction: sorted, duplicate-free, contradiction -> False."""
    unique = tuple(sorted(set(atoms), key=Predicate.sort_key))
    cached = _interned.get(unique)
    if cached is not None:
        return cached
    out = _canonicalize(unique)
    _interned[unique] = out
    return out


def _canonicalize(unique):
    subjects = {a.subject for a in unique}
    if len(subjects) > 1:
        raise ValueError(f"conjunction mixes subjects {subjects}")
    # identity atom makes every other atom decidable
    for a in unique:
        if a.feature == (F_ID,) and a.relation == REL_EQ:
            if any(not atom_holds(b, a.constant) for b in unique if b is not a):
                return FALSE
    # distinct constants on the same feature are unsatisfiable
    eq_feats = {}
    for a in unique:
        if a.relation == REL_EQ:
            if eq_feats.setdefault(a.feature, a.constant) != a.constant:
                return FALSE
    return AbstractValue(unique)


def meet(a: AbstractValue, b: AbstractValue) -> AbstractValue:
    if a.is_false or b.is_false:
        return FALSE
    if a.is_true:
        return b
    if b.is_true:
        return a
    return conj(a.atoms + b.atoms)


def simplify(a: AbstractValue) -> AbstractValue:
    """Drop atoms entailed by another atom of the conjunction.

    Distinct atoms never entail each other mutually (entailment between
    atoms is antisymmetric for the supported forms), so a plain filter
    is canonical.
    """
    if a.is_false or a.is_true:
        return a
    kept = [
        q
        for q in a.atoms
        if not any(p != q and atom_entails_atom(p, q) for p in a.atoms)
    ]
    return conj(kept)


def gamma_contains(phi: AbstractValue, v) -> bool:
    if phi.is_false or is_bottom(v):
        return False
    return all(atom_holds(a, v) for a in phi.atoms)


def entails(phi1: AbstractValue, phi2: AbstractValue) -> bool:
    if phi1.is_false or phi2.is_true:
        return True
    if phi2.is_false:
        return phi1.is_false
    if phi1.is_true:
        return False
    return all(
        any(atom_entails_atom(p, q) for p in phi1.atoms) for q in phi2.atoms
    )


# ---------------------------------------------------------------------------
# predicate sets and universes

_FAMILY_TAGS = (F_ID, F_LEN, F_CHAR, F_NDIMS, F_NELEMS)


def instantiate_family(subject: str, tag: str, value):
    """Equality atoms of one family grounded at a concrete value."""
    if tag == F_CHAR:
        if not isinstance(value, str):
            return []
        return [
            Predicate(subject, (F_CHAR, i), REL_EQ, ch) for i, ch in enumerate(value)
        ]
    fv = feature_value((tag,), value)
    if fv is None:
        return []
    return [Predicate(subject, (tag,), REL_EQ, fv)]


@dataclass
class PredicateSet:
    """Current abstraction P: explicit atoms plus lazy equality families.

    A family (subject, tag) stands for every atom tag(subject) = c; atoms
    are grounded on demand from the concrete witness values seen during
    abstraction.  True is implicitly a member.
    """

    atoms: set = field(default_factory=set)
    families: set = field(default_factory=set)
    # alpha memo, cleared whenever the set grows
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def copy(self) -> "PredicateSet":
        return PredicateSet(set(self.atoms), set(self.families))

    def add_atoms(self, atoms) -> int:
        before = len(self.atoms)
        self.atoms.update(atoms)
        added = len(self.atoms) - before
        if added:
            self._cache.clear()
        return added

    def candidates(self, subject: str, witness, extra_atoms=()) -> list:
        """Atoms of P that could be entailed by a value with this witness.

        witness is the identity constant when one is known, else None.
        extra_atoms lets callers offer atoms already at hand (e.g. a
        transformer output); those count as members of P when their
        family is, even though lazy families cannot be grounded without
        an identity witness.
        """
        cands = [p for p in self.atoms if p.subject == subject]
        if witness is not None:
            for subj, tag in self.families:
                if subj == subject:
                    cands.extend(instantiate_family(subject, tag, witness))
        cands.extend(
            a
            for a in extra_atoms
            if a.subject == subject
            and a.relation == REL_EQ
            and (subject, a.feature[0]) in self.families
        )
        return cands


@dataclass
class Universe:
    """Finite-by-instantiation universe U of atoms per symbol.

    families ground equality atoms from seed values; fixed_atoms are the
    closed-form members (e.g. the toy interval predicates).
    """

    families: set = field(default_factory=set)
    fixed_atoms: set = field(default_factory=set)

    def relevant_atoms(self, subject: str, value) -> list:
        """All universe atoms (beyond True) holding on a concrete value."""
        out = []
        for subj, tag in sorted(self.families):
            if subj == subject:
                out.extend(instantiate_family(subject, tag, value))
        out.extend(
            p
            for p in self.fixed_atoms
            if p.subject == subject and atom_holds(p, value)
        )
        return sorted(set(out), key=Predicate.sort_key)


def alpha(phi, P: PredicateSet) -> AbstractValue:
    """Strongest conjunction over P entailed by phi (an AbstractValue)."""
    if phi.is_false:
        return FALSE
    if phi.is_true:
        return TRUE
    cached = P._cache.get(phi)
    if cached is not None:
        return cached
    subject = phi.atoms[0].subject
    witness = phi.identity_constant()
    cands = P.candidates(subject, witness, extra_atoms=phi.atoms)
    # a candidate q is entailed iff phi contains q itself, phi pins the
    # value and q holds on it, or an atom on q's feature is tight enough
    phi_set = set(phi.atoms)
    kept = []
    for q in cands:
        if q in phi_set or (witness is not None and atom_holds(q, witness)):
            kept.append(q)
        elif q.relation == REL_INTERVAL:
            if any(
                p.feature == q.feature and atom_entails_atom(p, q)
                for p in phi.atoms
            ):
                kept.append(q)
    out = conj(kept)
    P._cache[phi] = out
    return out


def alpha_value(subject: str, value, P: PredicateSet) -> AbstractValue:
    """alpha of the equality s = value."""
    if is_bottom(value):
        return FALSE
    key = (subject, value)
    cached = P._cache.get(key)
    if cached is not None:
        return cached
    out = conj(
        p for p in P.candidates(subject, value) if atom_holds(p, value)
    )
    P._cache[key] = out
    return out


# ---------------------------------------------------------------------------
# abstract transformer dispatch

_defaulted_pairs = set()


def apply_transformer(production, args, domain) -> AbstractValue:
    """Sound post-operator for one production over abstract arguments.

    All-identity argument tuples use the exact concrete rule; other atom
    tuples go through the domain's transformer table; unlisted tuples
    default to True (logged once per shape).  Results depend only on the
    production and arguments, so they are memoized on the domain.
    """
    if any(a.is_false for a in args):
        return FALSE
    cache = domain.__dict__.setdefault("_transformer_cache", {})
    key = (production.operator, tuple(args))
    cached = cache.get(key)
    if cached is not None:
        return cached

    # expand each argument into its atom list; None stands for True
    expansions = [[None] if a.is_true else list(a.atoms) for a in args]

    atoms = []
    out = None
    for tup in product(*expansions):
        r = _transform_tuple(production, tup, domain)
        if r.is_false:
            out = FALSE
            break
        atoms.extend(r.atoms)
    if out is None:
        out = conj(atoms)
    cache[key] = out
    return out


def _transform_tuple(production, tup, domain) -> AbstractValue:
    if all(
        p is not None and p.feature == (F_ID,) and p.relation == REL_EQ for p in tup
    ):
        value = domain.eval_op(production, [p.constant for p in tup])
        if is_bottom(value):
            return FALSE
        return conj([Predicate(production.head.name, (F_ID,), REL_EQ, value)])
    out = domain.transform_atoms(production, tup)
    if out is None:
        shape = (
            production.operator,
            tuple(None if p is None else (p.feature[0], p.relation) for p in tup),
        )
        if shape not in _defaulted_pairs:
            _defaulted_pairs.add(shape)
            log.debug("no transformer rule for %s; defaulting to true", shape)
        return TRUE
    return out


def conjunctions_up_to(atoms, k: int):
    """All conjunctions of at most k atoms (True included), deterministic."""
    atoms = sorted(set(atoms), key=Predicate.sort_key)
    out = [TRUE]
    for r in range(1, k + 1):
        for combo in combinations(atoms, r):
            c = conj(combo)
            if not c.is_false and c not in out:
                out.append(c)
    return out
