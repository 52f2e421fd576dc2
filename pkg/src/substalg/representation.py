"""Finite algebras given by atom tables, and their representations as set algebras.

Every finite Boolean algebra is ℘(At), so an element is an int bitmask over
atoms.  A substitution is stored as the image of each atom; this forces
additivity, and the remaining Boolean-endomorphism conditions (disjoint
images covering 1) are checked as instances of the endomorphism schemas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .axioms import instantiate_axioms
from .decision import QuasiEquation, brute_force_check
from .errors import AxiomViolation, SignatureError
from .perm import SA, SAD, TA, Letter, Transformation, decompose, enumerate_monoid, generators
from .setalg import MAX_POINTS, DenseSet, SetAlgebra, Unit, small_algebra
from .terms import (And, Bottom, Diag, Equation, Not, Or, Signature, SubstR, SubstT, Term, Top,
                    Var, apply_word, term_vars)

ENDO_SCHEMAS = {"2": "T", "3": "T", "2R": "R", "3R": "R"}


def _bits(mask: int) -> Iterable[int]:
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


class FiniteAlgebra:
    """A finite BAO of signature ``kind`` and dimension ``dim``.

    ``tables[letter][a]`` is the image of atom ``a`` (a bitmask); ``diagonals``
    maps pairs (i, j) with i != j to bitmasks.  ``labels`` optionally names
    the atoms (for set algebras, the block of points each atom stands for).
    """

    def __init__(self, kind: str, dim: int, natoms: int, tables: dict, diagonals: dict | None = None,
                 labels: Sequence | None = None, validate: bool = True):
        self.kind = kind
        self.dim = dim
        self.natoms = natoms
        self.letters = generators(dim, kind)
        missing = [g for g in self.letters if g not in tables]
        if missing:
            raise ValueError(f"missing tables for {', '.join(map(str, missing))}")
        self.tables = {g: tuple(int(m) for m in tables[g]) for g in self.letters}
        self.diagonals = {}
        if kind == SAD:
            diagonals = diagonals or {}
            for i, j in itertools.permutations(range(dim), 2):
                self.diagonals[(i, j)] = int(diagonals.get((i, j), diagonals.get((j, i))))
        self.labels = list(labels) if labels is not None else None
        self._subst_cache: dict[Transformation, tuple[int, ...]] = {}
        self.violations = self.check_axioms()
        if validate and self.violations:
            raise AxiomViolation(self.violations)

    # -- elements ---------------------------------------------------------
    @property
    def top(self) -> int:
        return (1 << self.natoms) - 1

    @property
    def bottom(self) -> int:
        return 0

    def atoms(self) -> list[int]:
        return [1 << a for a in range(self.natoms)]

    def elements(self) -> Iterable[int]:
        if self.natoms > 16:
            raise ValueError("refusing to enumerate more than 2^16 elements")
        return range(1 << self.natoms)

    def complement(self, x: int) -> int:
        return self.top & ~x

    def subst(self, t: Letter | Transformation, x: int) -> int:
        if isinstance(t, Letter):
            table = self.tables[t if t.kind == "R" or t.i < t.j else Letter("T", t.j, t.i)]
        else:
            table = self.subst_table(t)
        out = 0
        for a in _bits(x):
            out |= table[a]
        return out

    def subst_table(self, t: Transformation) -> tuple[int, ...]:
        """Atom images of s_t, computed along a generator word for t."""
        table = self._subst_cache.get(t)
        if table is None:
            if self.kind == TA and not t.is_permutation:
                raise SignatureError("replacements are not in the TA signature")
            word = decompose(t, TA if self.kind == TA else SA)
            table = tuple(1 << a for a in range(self.natoms))
            for letter in reversed(word.letters):
                table = tuple(self.subst(letter, m) for m in table)
            self._subst_cache[t] = table
        return table

    def diagonal(self, i: int, j: int) -> int:
        if self.kind != SAD:
            raise SignatureError("diagonal elements need the SAD signature")
        return self.top if i == j else self.diagonals[(i, j)]

    def eval(self, t: Term, assignment: dict[int, int]) -> int:
        match t:
            case Var(i):
                return assignment[i]
            case Top():
                return self.top
            case Bottom():
                return 0
            case Diag(i, j):
                return self.diagonal(i, j)
            case Not(a):
                return self.complement(self.eval(a, assignment))
            case And(a, b):
                return self.eval(a, assignment) & self.eval(b, assignment)
            case Or(a, b):
                return self.eval(a, assignment) | self.eval(b, assignment)
            case SubstT(_, _, a) | SubstR(_, _, a):
                return self.subst(t.letter, self.eval(a, assignment))
        raise TypeError(f"not a term: {t!r}")

    # -- axioms -------------------------------------------------------------
    def check_axioms(self) -> list[tuple[str, str, int | None]]:
        """Failing axiom instances as (schema, equation, atom or None).

        Boolean axioms hold in ℘(At).  Word equations in x0 are additive on both
        sides and vanish at 0, so checking them on atoms suffices.
        """
        failures = []
        for g in self.letters:
            table = self.tables[g]
            joined, overlap = 0, False
            for m in table:
                overlap |= bool(joined & m)
                joined |= m
            kind_tag = "T" if g.kind == "T" else "R"
            if overlap:
                failures.append(("2" if kind_tag == "T" else "2R", f"{g} preserves meets", None))
            if joined != self.top:
                failures.append(("3" if kind_tag == "T" else "3R", f"{g} preserves complements", None))
        for inst in instantiate_axioms(Signature(self.dim, self.kind)):
            if inst.schema.startswith("B") or inst.schema in ENDO_SCHEMAS:
                continue
            eq = inst.equation
            vs = term_vars(eq.lhs) | term_vars(eq.rhs)
            if not vs:
                if self.eval(eq.lhs, {}) != self.eval(eq.rhs, {}):
                    failures.append((inst.schema, str(eq), None))
                continue
            for a in range(self.natoms):
                env = {0: 1 << a}
                if self.eval(eq.lhs, env) != self.eval(eq.rhs, env):
                    failures.append((inst.schema, str(eq), a))
                    break
        return failures

    def to_json(self):
        return {
            "signature": self.kind,
            "dim": self.dim,
            "atoms": self.natoms,
            "tables": {str(g): [format(m, "x") for m in self.tables[g]] for g in self.letters},
            **({"diagonals": {f"d[{i},{j}]": format(m, "x") for (i, j), m in sorted(self.diagonals.items()) if i < j}}
               if self.kind == SAD else {}),
        }

    def __repr__(self):
        return f"FiniteAlgebra({self.kind}_{self.dim}, atoms={self.natoms})"


# ---------------------------------------------------------------------------
# Constructors

def two_element(dim: int, kind: str = TA) -> FiniteAlgebra:
    tables = {g: (1,) for g in generators(dim, kind)}
    diags = {p: 1 for p in itertools.permutations(range(dim), 2)}
    return FiniteAlgebra(kind, dim, 1, tables, diags if kind == SAD else None)


def from_set_algebra(alg: SetAlgebra) -> FiniteAlgebra:
    """℘(V) as a finite algebra; atom k is the k-th point of the unit."""
    return generated_subalgebra(alg, [], discrete=True)


def generated_subalgebra(alg: SetAlgebra, gens: Sequence[DenseSet], discrete: bool = False) -> FiniteAlgebra:
    """The subalgebra generated by ``gens``, via partition refinement of the unit.

    Atoms are the classes of the coarsest partition refining the generators
    (and diagonals) that is stable under p -> p∘g for every generator g.
    """
    unit = alg.unit
    n = alg.dim
    letters = generators(n, alg.kind)
    maps = [unit.point_map(g.transformation(n)) for g in letters]
    if discrete:
        labels = np.arange(unit.size)
    else:
        cols = [g.to_array() for g in gens]
        if alg.kind == SAD:
            cols += [alg.diagonal_array(i, j) for i, j in itertools.combinations(range(n), 2)]
        keys = np.stack(cols, axis=1) if cols else np.zeros((unit.size, 0), dtype=bool)
        _, labels = np.unique(keys, axis=0, return_inverse=True)
        labels = labels.reshape(-1)
        while True:
            sig = np.stack([labels] + [labels[m] for m in maps], axis=1)
            _, new = np.unique(sig, axis=0, return_inverse=True)
            new = new.reshape(-1)
            if new.max(initial=-1) == labels.max(initial=-1):
                break
            labels = new
    natoms = int(labels.max(initial=-1)) + 1
    blocks = [DenseSet.from_array(unit, labels == b) for b in range(natoms)]
    tables = {}
    for g, m in zip(letters, maps):
        img = [0] * natoms
        # point p lies in s_g(block b) iff p∘g lies in b
        for p, target in enumerate(m):
            img[labels[target]] |= 1 << int(labels[p])
        tables[g] = img
    diags = None
    if alg.kind == SAD:
        diags = {}
        for i, j in itertools.permutations(range(n), 2):
            d = alg.diagonal_array(i, j)
            diags[(i, j)] = sum(1 << b for b in range(natoms) if d[labels == b].all())
    return FiniteAlgebra(alg.kind, n, natoms, tables, diags, labels=blocks)


def from_free(h) -> FiniteAlgebra:
    """The free algebra as atom tables; atom r is the minterm of alphabet row r."""
    from .free import FreeAlgebra

    assert isinstance(h, FreeAlgebra)
    k = len(h.alphabet)
    if k > 10:
        raise ValueError("free algebra too large to tabulate")
    n = h.sig.dim
    tables = {}
    for g in generators(n, h.sig.kind):
        t = g.transformation(n)
        img = []
        for atom in h.atoms():
            arr = h.table(atom.relabel(t))
            img.append(sum(1 << int(r) for r in np.flatnonzero(arr)))
        tables[g] = img
    return FiniteAlgebra(h.sig.kind, n, 1 << k, tables, labels=list(range(1 << k)))


def relativize_Rl(A: FiniteAlgebra, b: int) -> FiniteAlgebra:
    """Rl_b A: elements below b, substitutions s(x)·b.  Axioms re-checked, not assumed."""
    if b == 0:
        raise ValueError("cannot relativize to 0")
    keep = list(_bits(b))
    pos = {a: k for k, a in enumerate(keep)}

    def restrict(m: int) -> int:
        return sum(1 << pos[a] for a in _bits(m & b))

    tables = {g: [restrict(A.tables[g][a]) for a in keep] for g in A.letters}
    diags = {p: restrict(m) for p, m in A.diagonals.items()} if A.kind == SAD else None
    labels = [A.labels[a] for a in keep] if A.labels is not None else keep
    return FiniteAlgebra(A.kind, A.dim, len(keep), tables, diags, labels=labels, validate=False)


@dataclass
class Frame:
    """States and, for each generator letter, accessibility pairs (t, s)."""

    dim: int
    kind: str
    states: list
    relations: dict  # Letter -> iterable of (t, s)


def frame_of_unit(unit: Unit, kind: str = TA) -> Frame:
    """The functional frame: (t, s) in R_g iff t = s∘g."""
    n = unit.dim
    states = unit.sequences()
    rel = {}
    for g in generators(n, kind):
        pm = unit.point_map(g.transformation(n))
        rel[g] = [(states[int(pm[k])], states[k]) for k in range(unit.size) if pm[k] >= 0]
    return Frame(n, kind, states, rel)


def complex_algebra(frame: Frame) -> FiniteAlgebra:
    """Cm: s_g(X) = {s : some t in X has (t, s) in R_g}.  Axioms are reported."""
    idx = {s: k for k, s in enumerate(frame.states)}
    tables = {}
    for g in generators(frame.dim, frame.kind):
        img = [0] * len(frame.states)
        for t, s in frame.relations.get(g, ()):
            img[idx[t]] |= 1 << idx[s]
        tables[g] = img
    diags = None
    if frame.kind == SAD:
        diags = {(i, j): sum(1 << k for k, s in enumerate(frame.states) if s[i] == s[j])
                 for i, j in itertools.permutations(range(frame.dim), 2)}
    return FiniteAlgebra(frame.kind, frame.dim, len(frame.states), tables, diags,
                         labels=list(frame.states), validate=False)


# ---------------------------------------------------------------------------
# Representations

@dataclass
class Representation:
    source: FiniteAlgebra
    target: SetAlgebra
    images: np.ndarray  # (natoms, |V|) bool: image of each atom

    def map(self, x: int) -> DenseSet:
        arr = np.zeros(self.target.size, dtype=bool)
        for a in _bits(x):
            arr |= self.images[a]
        return DenseSet.from_array(self.target.unit, arr)

    def _map_array(self, x: int) -> np.ndarray:
        arr = np.zeros(self.target.size, dtype=bool)
        for a in _bits(x):
            arr |= self.images[a]
        return arr

    def preimage_atom(self, point) -> int | None:
        """Generating atom of the ultrafilter {x : point in map(x)}, if principal."""
        k = self.target.unit.index(point)
        hits = np.flatnonzero(self.images[:, k])
        return int(hits[0]) if len(hits) == 1 else None

    def verify(self, injective: bool = True, meets: bool = False, samples: int = 1000, seed: int = 0) -> dict:
        """Check the homomorphism laws on atoms (which suffices by additivity) and more."""
        A, V = self.source, self.target
        im = self.images
        counts = im.sum(axis=0)
        report = {
            "boolean": bool((counts == 1).all()) if A.natoms else V.size == 0,
            "atom_cover": bool((counts >= 1).all()),
        }
        subst_ok = True
        n = A.dim
        for g in A.letters:
            t = g.transformation(n)
            for a in range(A.natoms):
                if not np.array_equal(self._map_array(A.tables[g][a]), V.subst_array(im[a], t)):
                    subst_ok = False
                    break
        report["substitutions"] = subst_ok
        if A.kind == SAD:
            report["diagonals"] = all(
                np.array_equal(self._map_array(A.diagonal(i, j)), V.diagonal_array(i, j))
                for i, j in itertools.permutations(range(n), 2))
        if injective:
            report["injective"] = bool(im.any(axis=1).all())
        report["principal_preimages"] = all(
            self.preimage_atom(V.unit.sequence(int(c))) is not None for c in V.unit.points)
        if meets:
            report["meets"] = check_meets(self, samples=samples, seed=seed)
        report["ok"] = all(v for k, v in report.items() if k != "principal_preimages") and \
            (report["principal_preimages"] or not meets)
        return report

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "atom_images": [DenseSet.from_array(self.target.unit, row).to_hex() for row in self.images],
        }


def check_meets(rep: Representation, samples: int = 1000, seed: int = 0) -> bool:
    """map(∏Y) = ⋂ map(Y) over all subsets Y of elements (≤ 16 elements), else
    over all atom subsets plus ``samples`` random element subsets."""
    A = rep.source
    nel = 1 << A.natoms
    full = (1 << rep.target.size) - 1
    img_bits = {}

    def img(x):
        v = img_bits.get(x)
        if v is None:
            v = img_bits[x] = rep.map(x).bits
        return v

    if nel <= 16:
        elems = list(range(nel))
        meet = [A.top] * (1 << nel)
        inter = [full] * (1 << nel)
        for s in range(1, 1 << nel):
            low = (s & -s).bit_length() - 1
            rest = s & (s - 1)
            meet[s] = meet[rest] & elems[low]
            inter[s] = inter[rest] & img(elems[low])
            if img(meet[s]) != inter[s]:
                return False
        return img(A.top) == full
    rng = np.random.default_rng(seed)
    if A.natoms <= 16:
        for s in range(1 << A.natoms):
            m, acc = A.top, full
            for a in _bits(s):
                m &= 1 << a
                acc &= img(1 << a)
            if img(m) != acc:
                return False
    else:
        # every set of two or more atoms meets to 0 and contains a pair, so all
        # atom subsets are covered by: top, singletons and pairwise disjointness
        if img(A.top) != full or img(0) != 0:
            return False
        seen = 0
        for a in range(A.natoms):
            if seen & img(1 << a):
                return False
            seen |= img(1 << a)
    for _ in range(samples):
        k = int(rng.integers(1, 5))
        ys = [int(sum(1 << a for a in range(A.natoms) if rng.random() < 0.7)) for _ in range(k)]
        m, acc = A.top, full
        for y in ys:
            m &= y
            acc &= img(y)
        if img(m) != acc:
            return False
    return True


def _point_unit(n: int, kind: str) -> Unit:
    if kind == TA:
        codes = [Unit(n, n, []).code(p.images) for p in enumerate_monoid(n, TA)]
        return Unit(n, n, codes)
    return Unit(n, n)


def _require_valid(A: FiniteAlgebra):
    bad = A.violations if A.violations is not None else A.check_axioms()
    if bad:
        raise AxiomViolation(bad)


def ultrafilter_rep(A: FiniteAlgebra, atom: int) -> Representation:
    """h(z) = {ξ : atom <= s_ξ z} into ℘(S_n) (TA) or ℘(^n n) (SA, SAD)."""
    _require_valid(A)
    if not 0 <= atom < A.natoms:
        raise IndexError("no such atom")
    kind = A.kind
    unit = _point_unit(A.dim, TA if kind == TA else SA)
    target = SetAlgebra(unit, kind)
    images = np.zeros((A.natoms, unit.size), dtype=bool)
    for k, seq in enumerate(unit.sequences()):
        table = A.subst_table(Transformation(seq))
        for z in range(A.natoms):
            images[z, k] = bool(table[z] >> atom & 1)
    return Representation(A, target, images)


def _disjoint_union_rep(A: FiniteAlgebra) -> Representation:
    n = A.dim
    kind = A.kind
    monoid = enumerate_monoid(n, TA if kind == TA else SA)
    base = n * max(A.natoms, 1)
    if base ** n > MAX_POINTS:
        raise ValueError(f"disjoint union needs {base}^{n} codes, above the bound {MAX_POINTS}")
    probe = Unit(n, base, [])
    pts = [(a, xi, probe.code([n * a + xi(k) for k in range(n)])) for a in range(A.natoms) for xi in monoid]
    unit = Unit(n, base, [c for _, _, c in pts])
    target = SetAlgebra(unit, kind)
    images = np.zeros((A.natoms, unit.size), dtype=bool)
    for a, xi, code in pts:
        col = unit.index(code)
        table = A.subst_table(xi)
        for z in range(A.natoms):
            images[z, col] = bool(table[z] >> a & 1)
    return Representation(A, target, images)


def complete_rep(A: FiniteAlgebra) -> Representation:
    """V = disjoint union of one copy of S_n per atom, each carrying the
    ultrafilter representation at that atom."""
    if A.kind != TA:
        raise SignatureError("complete_rep handles TA; use atom_sum_criterion for SA")
    _require_valid(A)
    return _disjoint_union_rep(A)


@dataclass
class AtomSumResult:
    holds: bool
    witness: Transformation | None = None
    representation: Representation | None = None
    report: dict | None = None


def atom_sum_criterion(A: FiniteAlgebra, b: int | None = None, build: bool = True) -> AtomSumResult:
    """Whether the join of s_τ x over atoms x <= b equals b for every τ in ^n n."""
    if A.kind == TA:
        raise SignatureError("the atom-sum criterion concerns SA algebras")
    b = A.top if b is None else b
    below = [a for a in range(A.natoms) if b >> a & 1]
    for tau in enumerate_monoid(A.dim, SA):
        table = A.subst_table(tau)
        joined = 0
        for a in below:
            joined |= table[a]
        if joined != b:
            return AtomSumResult(False, tau)
    if not build or b == 0:
        return AtomSumResult(True)
    sub = relativize_Rl(A, b) if b != A.top else A
    if sub.violations:
        return AtomSumResult(True, report={"ok": False, "violations": sub.violations})
    rep = _disjoint_union_rep(sub)
    return AtomSumResult(True, representation=rep, report=rep.verify(meets=sub.natoms <= 4))


# ---------------------------------------------------------------------------
# Diagonals

@dataclass
class DiagonalQuotient:
    classes: tuple[int, ...]
    representation: Representation | None
    checks: dict = field(default_factory=dict)


def diagonal_quotient_rep(A: FiniteAlgebra, atom: int) -> DiagonalQuotient:
    """Ultrafilter representation followed by the quotient of the base by
    i ~ j iff d_ij lies in the ultrafilter.  Outcomes are reported."""
    if A.kind != SAD:
        raise SignatureError("diagonal quotient needs the SAD signature")
    _require_valid(A)
    n = A.dim
    rel = [[i == j or bool(A.diagonal(i, j) >> atom & 1) for j in range(n)] for i in range(n)]
    cls, labels = {}, []
    for i in range(n):
        rep_i = next(j for j in range(n) if rel[i][j])
        labels.append(cls.setdefault(rep_i, len(cls)))
    k = len(cls)
    base_rep = ultrafilter_rep(A, atom)
    src = base_rep.target.unit
    unit = Unit(n, k)
    target = SetAlgebra(unit, SAD)
    seqs = src.sequences()
    proj = np.array([unit.code([labels[v] for v in s]) for s in seqs])
    images = np.zeros((A.natoms, unit.size), dtype=bool)
    well_defined = True
    for z in range(A.natoms):
        for c in range(unit.size):
            vals = base_rep.images[z, proj == unit.points[c]]
            if vals.size and vals.min() != vals.max():
                well_defined = False
            images[z, c] = bool(vals.any())
    rep = Representation(A, target, images)
    checks = {
        "equivalence": all(rel[i][j] == rel[j][i] for i in range(n) for j in range(n)) and all(
            not (rel[i][j] and rel[j][l]) or rel[i][l] for i in range(n) for j in range(n) for l in range(n)),
        "well_defined": well_defined,
        "base": k,
        "unchanged": k == n,
    }
    checks.update(rep.verify(injective=False))
    return DiagonalQuotient(tuple(labels), rep, checks)


# ---------------------------------------------------------------------------
# The non-variety certificate

def _e(n: int, i: int) -> tuple[int, ...]:
    return tuple(0 if k == i else 1 for k in range(n))


def disjoint_transpositions(n: int) -> Transformation:
    """Product of the disjoint transpositions [0,1][2,3]... (last index fixed when n is odd)."""
    im = list(range(n))
    for a in range(0, n - 1, 2):
        im[a], im[a + 1] = a + 1, a
    return Transformation(tuple(im))


def sigma_quasi_equation(f: Transformation) -> QuasiEquation:
    sx = apply_word(decompose(f, TA), Var(0))
    return QuasiEquation((Equation(sx, Not(Var(0))),), Equation(Bottom(), Top()))


@dataclass
class NonVarietyCertificate:
    n: int
    unit: Unit
    f: Transformation
    X: DenseSet
    construction: str  # "e_i" or "S_n"
    counterexample_holds: bool
    e_i_construction_holds: bool
    small_algebras: dict
    seed: int

    @property
    def ok(self) -> bool:
        return self.counterexample_holds and all(v["holds"] for v in self.small_algebras.values())

    def replay(self) -> bool:
        """Recompute every verdict from the set-algebra operations."""
        alg = SetAlgebra(self.unit, TA)
        if (alg.subst(self.X, self.f) == ~self.X) != self.counterexample_holds:
            return False
        samples = max((v.get("samples", 0) for v in self.small_algebras.values()), default=0)
        return _nv_small(self.n, self.f, samples, self.seed) == self.small_algebras

    def to_json(self):
        return {
            "n": self.n,
            "construction": self.construction,
            "unit": self.unit.to_json(),
            "f": list(self.f.images),
            "X": self.X.to_hex(),
            "S_f(X) = -X": self.counterexample_holds,
            "e_i_construction_holds": self.e_i_construction_holds,
            "small_algebras": self.small_algebras,
            "seed": self.seed,
            "ok": self.ok,
        }


def _nv_small(n: int, f: Transformation, samples: int, seed: int, budget: int = 1 << 16) -> dict:
    qe = sigma_quasi_equation(f)
    out = {}
    for k in range(n + 1):
        alg = small_algebra(n, k, TA)
        pm = alg.unit.point_map(f)
        consts = [alg.unit.index((c,) * n) for c in range(k)]
        lemma = all(int(pm[c]) == c for c in consts)
        # with a nonempty base some constant point is fixed by s_f, so S_f(Y) != -Y
        entry = {"constant_point_lemma": lemma and (k > 0 or alg.size == 0)}
        if samples or 2 ** alg.size <= budget:
            res = brute_force_check(qe, alg, budget=budget, samples=samples, seed=seed)
            entry["search"] = res.method
            if res.method == "sampled":
                entry["samples"] = samples
            entry["holds"] = not res.invalid and entry["constant_point_lemma"]
        else:
            entry["holds"] = entry["constant_point_lemma"]
        out[f"A_{n}{k}"] = entry
    return out


def non_variety_certificate(n: int, samples: int = 10_000, seed: int = 0) -> NonVarietyCertificate:
    """A permutable unit whose full algebra refutes σ, while every A_nk models σ.

    The e_i construction with f a product of disjoint transpositions is tried
    first.  For odd n it cannot work (q -> q∘f pairs X with -X, so |G| would
    be even), and the unit S_n with f = [0,1] and X the even permutations is
    used instead.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    f = disjoint_transpositions(n)
    g_unit = Unit(n, 2, [Unit(n, 2, []).code(_e(n, i)) for i in range(n)])
    B = SetAlgebra(g_unit, TA)
    X = B.element([_e(n, i) for i in range(1, n, 2)])
    ei_holds = B.subst(X, f) == ~X
    construction = "e_i"
    if not ei_holds:
        construction = "S_n"
        f = Transformation.transposition(n, 0, 1)
        g_unit = _point_unit(n, TA)
        B = SetAlgebra(g_unit, TA)
        X = B.element([p.images for p in enumerate_monoid(n, TA) if p.length() % 2 == 0])
    holds = B.subst(X, f) == ~X and B.size > 0
    small = _nv_small(n, f, samples if n > 2 else 0, seed)
    return NonVarietyCertificate(n, g_unit, f, X, construction, holds, ei_holds, small, seed)
