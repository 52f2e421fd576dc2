"""Finite free algebras and interpolation.

Elements of the free algebra on m generators are normal forms over the
alphabet {s_τ x_i : τ in the monoid, i < m}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .decision import (DecoratedVar, NormalForm, ValidityResult, _witness_unit, decide_equation,
                       normalize)
from .errors import SignatureError
from .perm import SA, SAD, TA, Transformation, decompose, enumerate_monoid
from .setalg import SetAlgebra
from .terms import (Bottom, Diag, Not, Signature, Term, Top, Var, apply_word, conj, disj,
                    eval_array, leq, term_vars)

ALPHABET_CAP = 24


class FreeAlgebra:
    def __init__(self, sig: Signature, gens: int, cap: int = ALPHABET_CAP):
        if sig.kind == SAD:
            raise SignatureError("free algebras are built for TA and SA only")
        if gens < 0:
            raise ValueError("number of generators must be >= 0")
        self.sig = sig
        self.gens = gens
        self.monoid = enumerate_monoid(sig.dim, sig.kind)
        size = gens * len(self.monoid)
        if size > cap:
            raise ValueError(f"alphabet of {size} decorated variables exceeds the cap of {cap}")
        self.alphabet = tuple(sorted(DecoratedVar(tau=t, var=i) for i in range(gens) for t in self.monoid))

    def __repr__(self):
        return f"FreeAlgebra({self.sig.kind}_{self.sig.dim}, gens={self.gens})"

    def generator(self, i: int) -> NormalForm:
        if not 0 <= i < self.gens:
            raise IndexError(f"no generator x{i}")
        return NormalForm.literal(DecoratedVar(tau=Transformation.identity(self.sig.dim), var=i))

    def element(self, t: Term) -> NormalForm:
        if any(v >= self.gens for v in term_vars(t)):
            raise ValueError("term uses a variable outside the generators")
        return normalize(t, self.sig)

    def top(self) -> NormalForm:
        return NormalForm.const(True)

    def bottom(self) -> NormalForm:
        return NormalForm.const(False)

    def table(self, x: NormalForm) -> np.ndarray:
        """Truth table of ``x`` over the full alphabet (one bit per atom)."""
        return x.expand(self.alphabet)

    def from_table(self, arr: np.ndarray) -> NormalForm:
        return NormalForm(self.alphabet, np.asarray(arr, dtype=bool))

    def atoms(self) -> Iterator[NormalForm]:
        """Minterms over the alphabet in row order."""
        k = len(self.alphabet)
        for r in range(1 << k):
            arr = np.zeros(1 << k, dtype=bool)
            arr[r] = True
            yield NormalForm(self.alphabet, arr)


def build_free(sig: Signature, gens: int, cap: int = ALPHABET_CAP) -> FreeAlgebra:
    return FreeAlgebra(sig, gens, cap)


@dataclass
class FreeStats:
    alphabet: int
    atoms: int
    checked: int
    exhaustive: bool

    @property
    def cardinality(self) -> int:
        return 1 << self.atoms

    def to_json(self):
        out = {"alphabet": self.alphabet, "atoms": self.atoms, "cardinality_log2": self.atoms, "checked": self.checked}
        if self.atoms <= 64:
            out["cardinality"] = self.cardinality
        return out


def literal_term(v: DecoratedVar, kind: str) -> Term:
    """The term s_τ x_i (via a shortest generator word for τ) or a diagonal."""
    if v.diag is not None:
        return Diag(*v.diag)
    return apply_word(decompose(v.tau, kind), Var(v.var))


def stats(h: FreeAlgebra, exhaustive_limit: int = 20, samples: int = 1 << 14,
          seed: int = 0, chunk: int = 1 << 12) -> FreeStats:
    """Count atoms by realizing every minterm at the identity point.

    Row r of the alphabet gives the canonical assignment X_i = {τ : bit (τ,i)}
    in ℘(S_n) or ℘(^n n); the literal terms are then evaluated through
    ``eval_array`` and the minterm is nonzero iff every literal takes its
    prescribed value at the identity point.
    """
    k = len(h.alphabet)
    kind = TA if h.sig.kind == TA else SA
    alg = SetAlgebra(_witness_unit(h.sig.dim, kind), kind)
    ident = alg.unit.index(tuple(range(h.sig.dim)))
    col = np.array([alg.unit.index(v.tau.images) for v in h.alphabet])
    terms = [literal_term(v, kind) for v in h.alphabet]
    exhaustive = k <= exhaustive_limit
    rng = np.random.default_rng(seed)
    total = 1 << k if exhaustive else samples
    realized = 0
    for start in range(0, total, chunk):
        if exhaustive:
            rows = np.arange(start, min(total, start + chunk), dtype=np.int64)
        else:
            rows = rng.integers(0, 1 << k, size=min(chunk, total - start), dtype=np.int64)
        bits = ((rows[:, None] >> np.arange(k)[None, :]) & 1).astype(bool)
        arrays = {i: np.zeros((len(rows), alg.size), dtype=bool) for i in range(h.gens)}
        for a, v in enumerate(h.alphabet):
            arrays[v.var][:, col[a]] = bits[:, a]
        ok = np.ones(len(rows), dtype=bool)
        for a, t in enumerate(terms):
            ok &= eval_array(t, arrays, alg, (len(rows),))[:, ident] == bits[:, a]
        realized += int(ok.sum())
    atoms = realized if exhaustive else (k and (1 << k) * realized // total)
    return FreeStats(alphabet=k, atoms=atoms, checked=total, exhaustive=exhaustive)


def subst_action(h: FreeAlgebra, x: NormalForm, t: Transformation) -> NormalForm:
    if t.dim != h.sig.dim:
        raise ValueError("dimension mismatch")
    if h.sig.kind == TA and not t.is_permutation:
        raise SignatureError("replacements are not in the TA signature")
    return x.relabel(t)


def term_of_normal_form(nf: NormalForm, sig: Signature) -> Term:
    """A DNF term (one disjunct per true row) whose normal form is ``nf``."""
    if nf.is_const():
        return Top() if nf.is_const(True) else Bottom()
    kind = TA if sig.kind == TA else SA
    lits = [literal_term(v, kind) for v in nf.vars]
    disjuncts = []
    for r in np.flatnonzero(nf.array()):
        disjuncts.append(conj([lit if r >> k & 1 else Not(lit) for k, lit in enumerate(lits)]))
    return disj(disjuncts)


class InterpolationError(ValueError):
    def __init__(self, message: str, result: ValidityResult | None = None, statement=None):
        self.result = result
        self.statement = statement
        super().__init__(message)


@dataclass
class InterpolationResult:
    interpolant: Term
    normal_form: NormalForm
    shared: tuple[int, ...]
    lower: ValidityResult  # a <= b
    upper: ValidityResult  # b <= c

    def to_json(self):
        from .terms import print_term

        return {
            "interpolant": print_term(self.interpolant),
            "shared": [f"x{i}" for i in self.shared],
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
        }


def interpolate(a: Term, c: Term, sig: Signature, shared: Iterable[int] | None = None) -> InterpolationResult:
    """Uniform interpolant of a valid a <= c: eliminate the private variables of ``a``."""
    if sig.kind == SAD:
        raise SignatureError("interpolation is implemented for TA and SA")
    premise = decide_equation(leq(a, c), sig)
    if not premise.valid:
        raise InterpolationError("a <= c is not valid", premise, leq(a, c))
    common = set(term_vars(a)) & set(term_vars(c)) if shared is None else set(shared)
    nf = normalize(a, sig)
    b_nf = nf.exists({v for v in nf.vars if v.var not in common})
    b = term_of_normal_form(b_nf, sig)
    lower = decide_equation(leq(a, b), sig)
    upper = decide_equation(leq(b, c), sig)
    if not (lower.valid and upper.valid):
        failed = (upper, leq(b, c)) if lower.valid else (lower, leq(a, b))
        raise InterpolationError("no interpolant over the given shared variables", *failed)
    return InterpolationResult(b, b_nf, tuple(sorted(common)), lower, upper)
