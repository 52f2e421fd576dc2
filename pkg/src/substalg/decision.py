"""Normal forms and decision procedures.

Substitutions are pushed to the leaves, giving Boolean combinations of
decorated variables ``s_τ x_i`` (and diagonals).  At the identity point of
℘(^n n) distinct decorated variables take independent values, so an equation
holds in the variety iff both sides compile to the same Boolean function.
The independence claim is cross-checked against brute force in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import SignatureError
from .perm import SA, SAD, TA, Transformation, compose, enumerate_monoid
from .setalg import DenseSet, SetAlgebra, Unit, small_algebra
from .terms import (And, Bottom, Diag, Equation, Formula, Not, Or, QuasiEquation, Signature,
                    SubstR, SubstT, Term, Top, Var, check_term, eval_array, eval_term,
                    has_diagonals, term_vars, translate)

MAX_DECORATED = 24
DEFAULT_BUDGET = 1 << 20
DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 0

Statement = Union[Equation, QuasiEquation]


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class DecoratedVar:
    """``s_tau x_var`` or, when ``diag`` is set, the diagonal d[i,j] with i < j."""

    tau: Transformation | None = None
    var: int | None = None
    diag: tuple[int, int] | None = None

    @property
    def key(self):
        if self.diag is not None:
            return (1, self.diag[0], self.diag[1], ())
        return (0, self.var, 0, self.tau.images)

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        if self.diag is not None:
            return f"d[{self.diag[0]},{self.diag[1]}]"
        return f"p_{self.tau},{self.var}"

    def to_json(self):
        if self.diag is not None:
            return {"diag": list(self.diag)}
        return {"tau": list(self.tau.images), "var": self.var}


def dvar(tau, var: int) -> DecoratedVar:
    tau = tau if isinstance(tau, Transformation) else Transformation(tuple(tau))
    return DecoratedVar(tau=tau, var=var)


def ddiag(i: int, j: int) -> DecoratedVar:
    return DecoratedVar(diag=(min(i, j), max(i, j)))


# ---------------------------------------------------------------------------
# Boolean circuits over decorated variables

def _push(t: Term, sigma: Transformation):
    """Circuit for s_sigma(t) with substitutions moved onto the leaves."""
    match t:
        case Var(i):
            return ("v", DecoratedVar(tau=sigma, var=i))
        case Top():
            return ("c", True)
        case Bottom():
            return ("c", False)
        case Diag(i, j):
            a, b = sigma(i), sigma(j)
            return ("c", True) if a == b else ("v", ddiag(a, b))
        case Not(a):
            return ("not", _push(a, sigma))
        case And(a, b):
            return ("and", _push(a, sigma), _push(b, sigma))
        case Or(a, b):
            return ("or", _push(a, sigma), _push(b, sigma))
        case SubstT(_, _, a) | SubstR(_, _, a):
            return _push(a, compose(sigma, t.letter.transformation(sigma.dim)))
    raise TypeError(f"not a term: {t!r}")


def _circuit_vars(c, acc: set):
    if c[0] == "v":
        acc.add(c[1])
    elif c[0] != "c":
        for sub in c[1:]:
            _circuit_vars(sub, acc)
    return acc


def var_column(k: int, nvars: int) -> np.ndarray:
    """Value of variable k in each row of a truth table over ``nvars`` variables."""
    return np.tile(np.repeat(np.array([False, True]), 1 << k), 1 << (nvars - k - 1))


CHUNK_BITS = 20


def _circuit_order(circuits, cap: int = MAX_DECORATED) -> list[DecoratedVar]:
    vs = set()
    for c in circuits:
        _circuit_vars(c, vs)
    order = sorted(vs)
    if len(order) > cap:
        raise BudgetExceeded(f"{len(order)} decorated variables exceed the cap of {cap}")
    return order


_WORD_MASKS = [sum(1 << b for b in range(64) if b >> k & 1) for k in range(6)]


def _full_word(low: int) -> int:
    return (1 << (1 << low)) - 1 if low < 6 else (1 << 64) - 1


def _packed_column(k: int, low: int) -> np.ndarray:
    """Variable k over 2**low rows, 64 rows per little-endian uint64 word."""
    nwords = max(1, (1 << low) >> 6)
    if k < 6:
        word = _WORD_MASKS[k] & _full_word(low)
        return np.full(nwords, word, dtype="<u8")
    idx = np.arange(nwords, dtype=np.int64)
    return np.where(idx >> (k - 6) & 1, np.uint64(0xFFFFFFFFFFFFFFFF), np.uint64(0)).astype("<u8")


def _eval_packed(c, cols: dict, nwords: int, full: np.uint64, memo: dict) -> np.ndarray:
    key = id(c)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    op = c[0]
    if op == "v":
        out = cols[c[1]]
    elif op == "c":
        out = np.full(nwords, full if c[1] else 0, dtype="<u8")
    elif op == "not":
        out = _eval_packed(c[1], cols, nwords, full, memo) ^ full
    else:
        a = _eval_packed(c[1], cols, nwords, full, memo)
        b = _eval_packed(c[2], cols, nwords, full, memo)
        out = a & b if op == "and" else a | b
    memo[key] = (c, out)
    return out


def _packed_chunks(circuits, order):
    """Evaluate the circuits on consecutive blocks of 2**CHUNK_BITS rows, bit-packed."""
    k = len(order)
    low = min(k, CHUNK_BITS)
    nwords = max(1, (1 << low) >> 6)
    full = np.uint64(_full_word(low))
    base_cols = [_packed_column(j, low) for j in range(low)]
    ones = np.full(nwords, full, dtype="<u8")
    zeros = np.zeros(nwords, dtype="<u8")
    for block in range(1 << (k - low)):
        cols = dict(zip(order, base_cols))
        for j in range(low, k):
            cols[order[j]] = ones if block >> (j - low) & 1 else zeros
        memo: dict = {}
        yield block << low, 1 << low, [_eval_packed(c, cols, nwords, full, memo) for c in circuits]


def _unpack(words: np.ndarray, size: int) -> np.ndarray:
    return np.unpackbits(words.astype("<u8").view(np.uint8), bitorder="little")[:size].astype(bool)


def _chunks(circuits, order):
    """Like ``_packed_chunks`` but yields bool arrays."""
    for start, size, arrs in _packed_chunks(circuits, order):
        yield start, [_unpack(a, size) for a in arrs]


def _tables(circuits, cap: int = MAX_DECORATED):
    order = _circuit_order(circuits, cap)
    parts = [arrs for _, arrs in _chunks(circuits, order)]
    return order, [np.concatenate([p[i] for p in parts]) for i in range(len(circuits))]


# ---------------------------------------------------------------------------
# Normal forms

class NormalForm:
    """A Boolean function over an ordered list of decorated variables.

    Row r of ``table`` assigns variable k the bit k of r.  After
    canonicalization every listed variable influences the function, so two
    normal forms denote the same function iff they are equal.
    """

    __slots__ = ("vars", "table", "_arr")

    def __init__(self, vars: Sequence[DecoratedVar], table, canonical: bool = True):
        vars = tuple(vars)
        arr = table if isinstance(table, np.ndarray) else None
        if arr is None:
            from .setalg import bits_to_array

            arr = bits_to_array(int(table), 1 << len(vars))
        if arr.shape != (1 << len(vars),):
            raise ValueError("table size does not match the variables")
        order = sorted(range(len(vars)), key=lambda k: vars[k].key)
        if order != list(range(len(vars))):
            arr = _permute(arr, order)
            vars = tuple(vars[k] for k in order)
        if canonical:
            vars, arr = _drop_inert(vars, arr)
        self.vars = vars
        self._arr = arr
        from .setalg import array_to_bits

        self.table = array_to_bits(arr)

    def array(self) -> np.ndarray:
        return self._arr

    @classmethod
    def const(cls, value: bool) -> NormalForm:
        return cls((), np.array([value]))

    @classmethod
    def literal(cls, v: DecoratedVar) -> NormalForm:
        return cls((v,), np.array([False, True]))

    def __eq__(self, other):
        return isinstance(other, NormalForm) and self.vars == other.vars and self.table == other.table

    def __hash__(self):
        return hash((self.vars, self.table))

    def __repr__(self):
        return f"NormalForm(vars=[{', '.join(map(str, self.vars))}], table={self.table:#x})"

    def is_const(self, value: bool | None = None) -> bool:
        if self.vars:
            return False
        return value is None or bool(self._arr[0]) == value

    # Boolean operations
    def _binary(self, other: NormalForm, op):
        vs = tuple(sorted(set(self.vars) | set(other.vars)))
        a = self.expand(vs)
        b = other.expand(vs)
        return NormalForm(vs, op(a, b))

    def __and__(self, other):
        return self._binary(other, np.logical_and)

    def __or__(self, other):
        return self._binary(other, np.logical_or)

    def __xor__(self, other):
        return self._binary(other, np.logical_xor)

    def __invert__(self):
        return NormalForm(self.vars, ~self._arr, canonical=False)

    def leq(self, other: NormalForm) -> bool:
        return (self & ~other).is_const(False)

    def expand(self, new_vars: Sequence[DecoratedVar]) -> np.ndarray:
        """This table over a superset of its variables."""
        pos = {v: k for k, v in enumerate(new_vars)}
        return _substitute(self._arr, [("var", pos[v]) for v in self.vars], len(new_vars))

    def exists(self, drop) -> NormalForm:
        """Eliminate the variables in ``drop`` by or-ing their cofactors."""
        arr, vars = self._arr, list(self.vars)
        for k in range(len(vars) - 1, -1, -1):
            if vars[k] in drop:
                shaped = arr.reshape(-1, 2, 1 << k)
                arr = (shaped[:, 0, :] | shaped[:, 1, :]).reshape(-1)
                del vars[k]
        return NormalForm(vars, arr)

    def relabel(self, sigma: Transformation) -> NormalForm:
        """Normal form of s_sigma applied to this function."""
        images = []
        for v in self.vars:
            if v.diag is not None:
                a, b = sigma(v.diag[0]), sigma(v.diag[1])
                images.append(True if a == b else ddiag(a, b))
            else:
                images.append(DecoratedVar(tau=compose(sigma, v.tau), var=v.var))
        return self.substitute(images)

    def substitute(self, images) -> NormalForm:
        """Replace variable k by ``images[k]`` (a DecoratedVar or a bool)."""
        new_vars = sorted({im for im in images if isinstance(im, DecoratedVar)})
        pos = {v: k for k, v in enumerate(new_vars)}
        mapping = [("var", pos[im]) if isinstance(im, DecoratedVar) else ("const", bool(im)) for im in images]
        return NormalForm(new_vars, _substitute(self._arr, mapping, len(new_vars)))

    def value(self, assignment) -> bool:
        """Evaluate at ``assignment``: a mapping or callable DecoratedVar -> bool."""
        get = assignment if callable(assignment) else assignment.__getitem__
        row = sum(1 << k for k, v in enumerate(self.vars) if get(v))
        return bool(self._arr[row])

    def to_json(self):
        return {"vars": [v.to_json() for v in self.vars], "table": format(self.table, "x")}


def _permute(arr: np.ndarray, order: list[int]) -> np.ndarray:
    # new variable k is old variable order[k]
    mapping = [None] * len(order)
    for new, old in enumerate(order):
        mapping[old] = ("var", new)
    return _substitute(arr, mapping, len(order))


def _substitute(arr: np.ndarray, mapping, nnew: int) -> np.ndarray:
    rows = np.arange(1 << nnew, dtype=np.int64)
    idx = np.zeros(1 << nnew, dtype=np.int64)
    for k, (kind, val) in enumerate(mapping):
        if kind == "var":
            idx |= ((rows >> val) & 1) << k
        elif val:
            idx |= 1 << k
    return arr[idx]


def _drop_inert(vars, arr):
    vars = list(vars)
    for k in range(len(vars) - 1, -1, -1):
        shaped = arr.reshape(-1, 2, 1 << k)
        if np.array_equal(shaped[:, 0, :], shaped[:, 1, :]):
            arr = shaped[:, 0, :].reshape(-1)
            del vars[k]
    return tuple(vars), np.ascontiguousarray(arr)


def normalize(t: Term, sig: Signature) -> NormalForm:
    check_term(t, sig)
    order, (table,) = _tables([_push(t, Transformation.identity(sig.dim))])
    return NormalForm(order, table)


# ---------------------------------------------------------------------------
# Verdicts and countermodels

@dataclass
class Countermodel:
    algebra: SetAlgebra
    assignment: dict[int, DenseSet]
    witness: tuple[int, ...]

    def replay(self, stmt: Statement) -> bool:
        """True iff this model genuinely refutes ``stmt`` at the witness point."""
        if isinstance(stmt, Equation):
            stmt = QuasiEquation((), stmt)
        for prem in stmt.premises:
            if eval_term(prem.lhs, self.assignment, self.algebra) != eval_term(prem.rhs, self.assignment, self.algebra):
                return False
        lhs = eval_term(stmt.conclusion.lhs, self.assignment, self.algebra)
        rhs = eval_term(stmt.conclusion.rhs, self.assignment, self.algebra)
        return (self.witness in lhs) != (self.witness in rhs)

    def to_json(self):
        return {
            "algebra": self.algebra.to_json(),
            "assignment": {f"x{k}": v.to_hex() for k, v in sorted(self.assignment.items())},
            "witness": list(self.witness),
        }

    @classmethod
    def from_json(cls, data: dict) -> Countermodel:
        alg = SetAlgebra.from_json(data["algebra"])
        assignment = {int(k.lstrip("x")): DenseSet.from_hex(alg.unit, v) for k, v in data["assignment"].items()}
        return cls(alg, assignment, tuple(data["witness"]))


@dataclass
class ValidityResult:
    status: str  # valid | invalid | unknown
    method: str  # normal-form | partition | exhaustive | sampled | budget
    countermodel: Countermodel | None = None
    seed: int | None = None
    detail: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    @property
    def invalid(self) -> bool:
        return self.status == "invalid"

    def to_json(self):
        return {
            "status": self.status,
            "method": self.method,
            "countermodel": self.countermodel.to_json() if self.countermodel else None,
            "seed": self.seed,
            **({"detail": self.detail} if self.detail else {}),
        }


def _all_vars(stmt: Statement) -> list[int]:
    if isinstance(stmt, Equation):
        stmt = QuasiEquation((), stmt)
    vs = set()
    for e in stmt.premises + (stmt.conclusion,):
        vs |= term_vars(e.lhs) | term_vars(e.rhs)
    return sorted(vs)


def _witness_unit(n: int, kind: str) -> Unit:
    if kind == TA:
        return Unit(n, n, [Unit(n, n, []).code(p.images) for p in enumerate_monoid(n, TA)])
    return Unit(n, n)


def decide_equation(eq: Equation, sig: Signature, cap: int = MAX_DECORATED) -> ValidityResult:
    """Equational validity in TA_n / SA_n by normal-form comparison."""
    if has_diagonals(eq.lhs) or has_diagonals(eq.rhs):
        raise SignatureError("equation mentions diagonals; use decide_with_diagonals")
    check_term(eq.lhs, sig)
    check_term(eq.rhs, sig)
    ident = Transformation.identity(sig.dim)
    circuits = [_push(eq.lhs, ident), _push(eq.rhs, ident)]
    try:
        order = _circuit_order(circuits, cap)
    except BudgetExceeded as exc:
        return ValidityResult("unknown", "budget", detail={"reason": str(exc)})
    row = None
    for start, size, (lt, rt) in _packed_chunks(circuits, order):
        diff = lt ^ rt
        if diff.any():
            row = start + int(np.argmax(_unpack(diff, size)))
            break
    if row is None:
        return ValidityResult("valid", "normal-form", detail={"decorated_vars": len(order)})
    kind = TA if sig.kind == TA else SA
    alg = SetAlgebra(_witness_unit(sig.dim, kind), kind)
    members = {i: [] for i in _all_vars(eq)}
    for k, v in enumerate(order):
        if row >> k & 1:
            members[v.var].append(v.tau.images)
    assignment = {i: alg.element(pts) for i, pts in members.items()}
    cm = Countermodel(alg, assignment, tuple(range(sig.dim)))
    return ValidityResult("invalid", "normal-form", cm, detail={"decorated_vars": len(order), "row": row})


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length n, in lexicographic order."""

    def rec(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            yield from rec(prefix + [b], max(top, b))

    yield from rec([0], 0)


def decide_with_diagonals(eq: Equation, sig: Signature, cap: int = MAX_DECORATED) -> ValidityResult:
    """Semantic validity over square set algebras with diagonals.

    For every kernel partition of a point q, decorated variables whose
    sequences q∘τ coincide are identified and diagonal bits are fixed; the
    two sides must then agree on every assignment to the remaining classes.
    """
    if sig.kind != SAD:
        sig = Signature(sig.dim, SAD)
    check_term(eq.lhs, sig)
    check_term(eq.rhs, sig)
    n = sig.dim
    ident = Transformation.identity(n)
    try:
        order, (lt, rt) = _tables([_push(eq.lhs, ident), _push(eq.rhs, ident)], cap)
    except BudgetExceeded as exc:
        return ValidityResult("unknown", "budget", detail={"reason": str(exc)})
    diff = lt ^ rt
    checked = 0
    for q in set_partitions(n):
        classes: dict = {}
        fixed = 0
        cls_of = []
        for k, v in enumerate(order):
            if v.diag is not None:
                if q[v.diag[0]] == q[v.diag[1]]:
                    fixed |= 1 << k
                cls_of.append(None)
            else:
                key = (v.var, tuple(q[v.tau(m)] for m in range(n)))
                cls_of.append(classes.setdefault(key, len(classes)))
        nc = len(classes)
        assign = np.arange(1 << nc, dtype=np.int64)
        rows = np.full(1 << nc, fixed, dtype=np.int64)
        for k, c in enumerate(cls_of):
            if c is not None:
                rows |= ((assign >> c) & 1) << k
        checked += 1 << nc
        bad = diff[rows]
        if bad.any():
            a = int(np.argmax(bad))
            k_blocks = max(q) + 1
            alg = SetAlgebra(Unit(n, k_blocks), SAD)
            members = {i: [] for i in _all_vars(eq)}
            for key, c in classes.items():
                if a >> c & 1:
                    members[key[0]].append(key[1])
            assignment = {i: alg.element(pts) for i, pts in members.items()}
            cm = Countermodel(alg, assignment, q)
            return ValidityResult("invalid", "partition", cm, detail={"kernel": list(q)})
    return ValidityResult("valid", "partition", detail={"decorated_vars": len(order), "rows_checked": checked})


def decide(eq: Equation, sig: Signature, cap: int = MAX_DECORATED) -> ValidityResult:
    """Route to decide_equation or decide_with_diagonals by signature."""
    if sig.kind == SAD:
        return decide_with_diagonals(eq, sig, cap)
    return decide_equation(eq, sig, cap)


# ---------------------------------------------------------------------------
# Brute force over concrete algebras

def _as_quasi(stmt: Statement) -> QuasiEquation:
    return stmt if isinstance(stmt, QuasiEquation) else QuasiEquation((), stmt)


def _assignment_batches(nvars: int, npoints: int, exhaustive: bool, samples: int,
                        rng: np.random.Generator, chunk: int = 1 << 14):
    if exhaustive:
        total = 1 << (nvars * npoints)
        for start in range(0, total, chunk):
            r = np.arange(start, min(total, start + chunk), dtype=np.int64)
            shifts = np.arange(nvars * npoints, dtype=np.int64)
            bits = ((r[:, None] >> shifts[None, :]) & 1).astype(bool)
            yield start, bits.reshape(len(r), nvars, npoints)
    else:
        done = 0
        while done < samples:
            b = min(chunk, samples - done)
            yield done, rng.random((b, nvars, npoints)) < 0.5
            done += b


def brute_force_check(stmt: Statement, alg: SetAlgebra, budget: int = DEFAULT_BUDGET,
                      samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> ValidityResult:
    """Evaluate directly over all (or ``samples`` random) assignments in ``alg``."""
    qe = _as_quasi(stmt)
    vs = _all_vars(qe)
    npts = alg.size
    space_log2 = len(vs) * npts
    exhaustive = space_log2 <= max(budget, 1).bit_length() - 1
    method = "exhaustive" if exhaustive else "sampled"
    rng = np.random.default_rng(seed)
    for _, batch in _assignment_batches(len(vs), npts, exhaustive, samples, rng):
        shape = (batch.shape[0],)
        arrays = {v: batch[:, k, :] for k, v in enumerate(vs)}
        ok = np.ones(shape, dtype=bool)
        for prem in qe.premises:
            ok &= (eval_array(prem.lhs, arrays, alg, shape) == eval_array(prem.rhs, arrays, alg, shape)).all(axis=-1)
        if not ok.any():
            continue
        lhs = eval_array(qe.conclusion.lhs, arrays, alg, shape)
        rhs = eval_array(qe.conclusion.rhs, arrays, alg, shape)
        bad = (lhs != rhs) & ok[:, None]
        if bad.any():
            b, p = np.argwhere(bad)[0]
            assignment = {v: DenseSet.from_array(alg.unit, batch[b, k, :]) for k, v in enumerate(vs)}
            witness = alg.unit.sequence(int(alg.unit.points[p]))
            cm = Countermodel(alg, assignment, witness)
            return ValidityResult("invalid", method, cm, seed=None if exhaustive else seed)
    if exhaustive:
        return ValidityResult("valid", method)
    return ValidityResult("unknown", method, seed=seed, detail={"samples": samples})


def decide_quasi_equation(qe: Statement, sig: Signature, budget: int = DEFAULT_BUDGET,
                          samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> ValidityResult:
    """Check a quasi-equation in every small algebra A_nk, k <= n."""
    qe = _as_quasi(qe)
    for e in qe.premises + (qe.conclusion,):
        check_term(e.lhs, sig)
        check_term(e.rhs, sig)
    sampled = []
    for k in range(sig.dim + 1):
        alg = small_algebra(sig.dim, k, sig.kind)
        res = brute_force_check(qe, alg, budget, samples, seed)
        if res.invalid:
            res.detail["algebra"] = f"A_{sig.dim}{k}"
            return res
        if res.status == "unknown":
            sampled.append(k)
    if sampled:
        return ValidityResult("unknown", "sampled", seed=seed,
                              detail={"sampled_algebras": [f"A_{sig.dim}{k}" for k in sampled], "samples": samples})
    return ValidityResult("valid", "exhaustive")


def decide_formula(f: Formula, sig: Signature, cap: int = MAX_DECORATED) -> ValidityResult:
    """φ is valid iff its translation equals 1; countermodels come with a Kripke model."""
    eq = Equation(translate(f), Top())
    res = decide(eq, sig, cap) if not has_diagonals(eq.lhs) else decide_with_diagonals(eq, sig, cap)
    if res.invalid:
        from .kripke import countermodel_to_kripke

        model, w = countermodel_to_kripke(res.countermodel)
        res.detail["kripke"] = {"model": model.to_json(), "witness": list(w)}
    return res
