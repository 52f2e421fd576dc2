"""Terms, modal formulas, their parser/printer, translation and evaluation.

Term grammar::

    t ::= x<k> | 0 | 1 | d[i,j] | ~t | s[i,j] t | s[i/j] t | t & t | t | t | (t)

Formula grammar::

    f ::= p<k> | 0 | 1 | d[i,j] | !f | <i,j> f | [i,j] f | <i/j> f | [i/j] f
        | f & f | f | f | f -> f | f <-> f | (f)

``~``, ``!`` and the substitution/modal prefixes bind tightest, then ``&``,
then ``|``; ``->`` is right associative and ``<->`` binds loosest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ParseError, SignatureError
from .perm import KINDS, SA, SAD, TA, Letter, R, SubstWord, T, Transformation
from .setalg import DenseSet, SetAlgebra


@dataclass(frozen=True)
class Signature:
    dim: int
    kind: str = TA

    def __post_init__(self):
        if self.dim < 2:
            raise SignatureError("dimension must be at least 2")
        if self.kind not in KINDS:
            raise SignatureError(f"unknown signature {self.kind!r}; expected one of {KINDS}")

    @property
    def replacements(self) -> bool:
        return self.kind != TA

    @property
    def diagonals(self) -> bool:
        return self.kind == SAD


# ---------------------------------------------------------------------------
# Terms

class Term:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, eq=True)
class Var(Term):
    index: int


@dataclass(frozen=True, eq=True)
class Top(Term):
    pass


@dataclass(frozen=True, eq=True)
class Bottom(Term):
    pass


@dataclass(frozen=True, eq=True)
class Not(Term):
    arg: Term


@dataclass(frozen=True, eq=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True, eq=True)
class Or(Term):
    left: Term
    right: Term


@dataclass(frozen=True, eq=True)
class SubstT(Term):
    i: int
    j: int
    arg: Term

    @property
    def letter(self) -> Letter:
        return T(self.i, self.j)


@dataclass(frozen=True, eq=True)
class SubstR(Term):
    i: int
    j: int
    arg: Term

    @property
    def letter(self) -> Letter:
        return R(self.i, self.j)


@dataclass(frozen=True, eq=True)
class Diag(Term):
    i: int
    j: int


def subst(letter: Letter, arg: Term) -> Term:
    return SubstT(letter.i, letter.j, arg) if letter.kind == "T" else SubstR(letter.i, letter.j, arg)


def apply_word(word: SubstWord | Sequence[Letter], arg: Term) -> Term:
    letters = word.letters if isinstance(word, SubstWord) else tuple(word)
    for letter in reversed(letters):
        arg = subst(letter, arg)
    return arg


def conj(terms: Sequence[Term]) -> Term:
    if not terms:
        return Top()
    out = terms[0]
    for t in terms[1:]:
        out = And(out, t)
    return out


def disj(terms: Sequence[Term]) -> Term:
    if not terms:
        return Bottom()
    out = terms[0]
    for t in terms[1:]:
        out = Or(out, t)
    return out


def term_vars(t: Term) -> set[int]:
    match t:
        case Var(i):
            return {i}
        case Not(a) | SubstT(_, _, a) | SubstR(_, _, a):
            return term_vars(a)
        case And(a, b) | Or(a, b):
            return term_vars(a) | term_vars(b)
    return set()


def term_size(t: Term) -> int:
    match t:
        case Not(a) | SubstT(_, _, a) | SubstR(_, _, a):
            return 1 + term_size(a)
        case And(a, b) | Or(a, b):
            return 1 + term_size(a) + term_size(b)
    return 1


def has_diagonals(t: Term) -> bool:
    match t:
        case Diag():
            return True
        case Not(a) | SubstT(_, _, a) | SubstR(_, _, a):
            return has_diagonals(a)
        case And(a, b) | Or(a, b):
            return has_diagonals(a) or has_diagonals(b)
    return False


def check_term(t: Term, sig: Signature):
    """Raise if ``t`` uses an index or operator outside ``sig``."""
    match t:
        case SubstT(i, j, a) | SubstR(i, j, a):
            _check_pair(i, j, sig)
            if isinstance(t, SubstR) and not sig.replacements:
                raise SignatureError("replacement s[i/j] is not in the TA signature")
            check_term(a, sig)
        case Diag(i, j):
            if not sig.diagonals:
                raise SignatureError("diagonal d[i,j] needs the SAD signature")
            if not (0 <= i < sig.dim and 0 <= j < sig.dim):
                raise SignatureError(f"diagonal index out of range for dimension {sig.dim}")
        case Not(a):
            check_term(a, sig)
        case And(a, b) | Or(a, b):
            check_term(a, sig)
            check_term(b, sig)


def _check_pair(i, j, sig):
    if not (0 <= i < sig.dim and 0 <= j < sig.dim):
        raise SignatureError(f"index out of range for dimension {sig.dim}: {i},{j}")
    if i == j:
        raise SignatureError(f"substitution indices must differ: {i},{j}")


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{print_term(self.lhs)} = {print_term(self.rhs)}"


@dataclass(frozen=True)
class QuasiEquation:
    premises: tuple[Equation, ...]
    conclusion: Equation

    def __str__(self):
        return " ; ".join(map(str, self.premises)) + " => " + str(self.conclusion)


def leq(a: Term, b: Term) -> Equation:
    """a ≤ b as the equation a & ~b = 0."""
    return Equation(And(a, Not(b)), Bottom())


# ---------------------------------------------------------------------------
# Formulas

class Formula:
    __slots__ = ()

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Prop(Formula):
    index: int


@dataclass(frozen=True)
class FTop(Formula):
    pass


@dataclass(frozen=True)
class FBot(Formula):
    pass


@dataclass(frozen=True)
class FDiag(Formula):
    i: int
    j: int


@dataclass(frozen=True)
class Neg(Formula):
    arg: Formula


@dataclass(frozen=True)
class Conj(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Disj(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Dia(Formula):
    letter: Letter
    arg: Formula


@dataclass(frozen=True)
class Box(Formula):
    letter: Letter
    arg: Formula


def check_formula(f: Formula, sig: Signature):
    check_term(translate(f), sig)


def translate(f: Formula) -> Term:
    """Formula to term; both modalities of a tag become the substitution operator."""
    match f:
        case Prop(i):
            return Var(i)
        case FTop():
            return Top()
        case FBot():
            return Bottom()
        case FDiag(i, j):
            return Diag(i, j)
        case Neg(a):
            return Not(translate(a))
        case Conj(a, b):
            return And(translate(a), translate(b))
        case Disj(a, b):
            return Or(translate(a), translate(b))
        case Imp(a, b):
            return Or(Not(translate(a)), translate(b))
        case Iff(a, b):
            ta, tb = translate(a), translate(b)
            return Or(And(ta, tb), And(Not(ta), Not(tb)))
        case Dia(letter, a) | Box(letter, a):
            return subst(letter, translate(a))
    raise TypeError(f"not a formula: {f!r}")


def translate_back(t: Term) -> Formula:
    match t:
        case Var(i):
            return Prop(i)
        case Top():
            return FTop()
        case Bottom():
            return FBot()
        case Diag(i, j):
            return FDiag(i, j)
        case Not(a):
            return Neg(translate_back(a))
        case And(a, b):
            return Conj(translate_back(a), translate_back(b))
        case Or(a, b):
            return Disj(translate_back(a), translate_back(b))
        case SubstT(_, _, a) | SubstR(_, _, a):
            return Dia(t.letter, translate_back(a))
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Printing

def print_term(t: Term, prec: int = 0) -> str:
    match t:
        case Var(i):
            return f"x{i}"
        case Top():
            return "1"
        case Bottom():
            return "0"
        case Diag(i, j):
            return f"d[{i},{j}]"
        case Not(a):
            return "~" + print_term(a, 3)
        case SubstT(i, j, a):
            return f"s[{i},{j}] " + print_term(a, 3)
        case SubstR(i, j, a):
            return f"s[{i}/{j}] " + print_term(a, 3)
        case And(a, b):
            s = print_term(a, 2) + " & " + print_term(b, 3)
            return f"({s})" if prec > 2 else s
        case Or(a, b):
            s = print_term(a, 1) + " | " + print_term(b, 2)
            return f"({s})" if prec > 1 else s
    raise TypeError(f"not a term: {t!r}")


def _tag(letter: Letter, box: bool) -> str:
    sep = "," if letter.kind == "T" else "/"
    o, c = ("[", "]") if box else ("<", ">")
    return f"{o}{letter.i}{sep}{letter.j}{c}"


def print_formula(f: Formula, prec: int = 0) -> str:
    def wrap(s, level):
        return f"({s})" if prec > level else s

    match f:
        case Prop(i):
            return f"p{i}"
        case FTop():
            return "1"
        case FBot():
            return "0"
        case FDiag(i, j):
            return f"d[{i},{j}]"
        case Neg(a):
            return "!" + print_formula(a, 5)
        case Dia(letter, a):
            return _tag(letter, False) + " " + print_formula(a, 5)
        case Box(letter, a):
            return _tag(letter, True) + " " + print_formula(a, 5)
        case Conj(a, b):
            return wrap(print_formula(a, 4) + " & " + print_formula(b, 5), 4)
        case Disj(a, b):
            return wrap(print_formula(a, 3) + " | " + print_formula(b, 4), 3)
        case Imp(a, b):
            return wrap(print_formula(a, 3) + " -> " + print_formula(b, 2), 2)
        case Iff(a, b):
            return wrap(print_formula(a, 1) + " <-> " + print_formula(b, 2), 1)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<subst>s\s*\[\s*(?P<si>\d+)\s*(?P<ssep>[,/])\s*(?P<sj>\d+)\s*\])
  | (?P<diag>d\s*\[\s*(?P<di>\d+)\s*,\s*(?P<dj>\d+)\s*\])
  | (?P<var>x(?P<vi>\d+))
  | (?P<prop>p(?P<pi>\d+))
  | (?P<iff><->)
  | (?P<dia><\s*(?P<ai>\d+)\s*(?P<asep>[,/])\s*(?P<aj>\d+)\s*>)
  | (?P<box>\[\s*(?P<bi>\d+)\s*(?P<bsep>[,/])\s*(?P<bj>\d+)\s*\])
  | (?P<imp>->)
  | (?P<qimp>=>)
  | (?P<op>[=;~!&|()01e])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    value: object
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        # lastgroup is the innermost named group; map back to the outer one
        for outer in ("subst", "diag", "var", "prop", "dia", "box", "iff", "imp", "qimp", "op", "ws"):
            if m.group(outer) is not None:
                kind = outer
                break
        if kind == "subst":
            value = (int(m["si"]), m["ssep"], int(m["sj"]))
        elif kind == "diag":
            value = (int(m["di"]), int(m["dj"]))
        elif kind == "var":
            value = int(m["vi"])
        elif kind == "prop":
            value = int(m["pi"])
        elif kind == "dia":
            value = (int(m["ai"]), m["asep"], int(m["aj"]))
        elif kind == "box":
            value = (int(m["bi"]), m["bsep"], int(m["bj"]))
        else:
            value = m.group(0)
        if kind != "ws":
            if kind == "op":
                kind = value
            toks.append(_Tok(kind, value, pos))
        pos = m.end()
    toks.append(_Tok("eof", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.k = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.k]

    def next(self) -> _Tok:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}, found {self.tok.kind!r}")
        return self.next()

    def fail(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.tok.pos if pos is None else pos, self.text)

    def done(self):
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.kind!r}")

    def letter(self, tok: _Tok) -> Letter:
        i, sep, j = tok.value
        if i >= self.sig.dim or j >= self.sig.dim:
            self.fail(f"index out of range for dimension {self.sig.dim}", tok.pos)
        if i == j:
            self.fail("substitution indices must differ", tok.pos)
        if sep == "/":
            if not self.sig.replacements:
                self.fail("replacement not in signature TA", tok.pos)
            return R(i, j)
        return T(i, j)

    def diag(self, tok: _Tok):
        i, j = tok.value
        if not self.sig.diagonals:
            self.fail(f"diagonal not in signature {self.sig.kind}", tok.pos)
        if i >= self.sig.dim or j >= self.sig.dim:
            self.fail(f"index out of range for dimension {self.sig.dim}", tok.pos)
        return i, j

    # terms
    def term(self) -> Term:
        left = self.term_and()
        while self.tok.kind == "|":
            self.next()
            left = Or(left, self.term_and())
        return left

    def term_and(self) -> Term:
        left = self.term_unary()
        while self.tok.kind == "&":
            self.next()
            left = And(left, self.term_unary())
        return left

    def term_unary(self) -> Term:
        tok = self.tok
        if tok.kind == "~":
            self.next()
            return Not(self.term_unary())
        if tok.kind == "subst":
            self.next()
            return subst(self.letter(tok), self.term_unary())
        if tok.kind == "var":
            self.next()
            return Var(tok.value)
        if tok.kind == "0":
            self.next()
            return Bottom()
        if tok.kind == "1":
            self.next()
            return Top()
        if tok.kind == "diag":
            self.next()
            return Diag(*self.diag(tok))
        if tok.kind == "(":
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        self.fail(f"expected a term, found {tok.kind!r}")

    def equation(self) -> Equation:
        lhs = self.term()
        self.expect("=")
        return Equation(lhs, self.term())

    def quasi(self) -> QuasiEquation:
        premises = []
        if self.tok.kind != "qimp":
            premises.append(self.equation())
            while self.tok.kind == ";":
                self.next()
                premises.append(self.equation())
        self.expect("qimp")
        return QuasiEquation(tuple(premises), self.equation())

    # formulas
    def formula(self) -> Formula:
        left = self.f_imp()
        while self.tok.kind == "iff":
            self.next()
            left = Iff(left, self.f_imp())
        return left

    def f_imp(self) -> Formula:
        left = self.f_or()
        if self.tok.kind == "imp":
            self.next()
            return Imp(left, self.f_imp())
        return left

    def f_or(self) -> Formula:
        left = self.f_and()
        while self.tok.kind == "|":
            self.next()
            left = Disj(left, self.f_and())
        return left

    def f_and(self) -> Formula:
        left = self.f_unary()
        while self.tok.kind == "&":
            self.next()
            left = Conj(left, self.f_unary())
        return left

    def f_unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "!":
            self.next()
            return Neg(self.f_unary())
        if tok.kind in ("dia", "box"):
            self.next()
            letter = self.letter(tok)
            arg = self.f_unary()
            return Dia(letter, arg) if tok.kind == "dia" else Box(letter, arg)
        if tok.kind == "prop":
            self.next()
            return Prop(tok.value)
        if tok.kind == "0":
            self.next()
            return FBot()
        if tok.kind == "1":
            self.next()
            return FTop()
        if tok.kind == "diag":
            self.next()
            return FDiag(*self.diag(tok))
        if tok.kind == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        self.fail(f"expected a formula, found {tok.kind!r}")

    def word(self) -> SubstWord:
        if self.tok.kind == "e":
            self.next()
            return SubstWord(self.sig.dim, ())
        letters = []
        while self.tok.kind == "subst":
            letters.append(self.letter(self.next()))
        if not letters:
            self.fail("expected a word of s[i,j] / s[i/j] letters or 'e'")
        return SubstWord(self.sig.dim, tuple(letters))


def _sig(sig: Signature | int) -> Signature:
    return sig if isinstance(sig, Signature) else Signature(sig, SAD)


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(text, _sig(sig))
    t = p.term()
    p.done()
    return t


def parse_equation(text: str, sig: Signature) -> Equation:
    p = _Parser(text, _sig(sig))
    eq = p.equation()
    p.done()
    return eq


def parse_quasi_equation(text: str, sig: Signature) -> QuasiEquation:
    p = _Parser(text, _sig(sig))
    qe = p.quasi()
    p.done()
    return qe


def parse_statement(text: str, sig: Signature) -> Equation | QuasiEquation:
    """An equation, or a quasi-equation when ``=>`` occurs."""
    return parse_quasi_equation(text, sig) if "=>" in text else parse_equation(text, sig)


def parse_formula(text: str, sig: Signature) -> Formula:
    p = _Parser(text, _sig(sig))
    f = p.formula()
    p.done()
    return f


def parse_word(text: str, sig: Signature | int) -> SubstWord:
    if isinstance(sig, int):
        sig = Signature(sig, SA)
    p = _Parser(text, sig)
    w = p.word()
    p.done()
    return w


# ---------------------------------------------------------------------------
# Evaluation

Assignment = Mapping[int, DenseSet]


def _letter_map(letter: Letter, n: int) -> Transformation:
    return letter.transformation(n)


def eval_array(t: Term, arrays: Mapping[int, np.ndarray], alg: SetAlgebra, shape: tuple[int, ...]) -> np.ndarray:
    """Evaluate on boolean arrays of shape ``shape + (|V|,)`` (a batch of assignments)."""
    full = shape + (alg.size,)

    def ev(t):
        match t:
            case Var(i):
                if i not in arrays:
                    raise KeyError(f"no value assigned to x{i}")
                return arrays[i]
            case Top():
                return np.ones(full, dtype=bool)
            case Bottom():
                return np.zeros(full, dtype=bool)
            case Diag(i, j):
                if alg.kind != SAD:
                    raise SignatureError("diagonal evaluated outside SAD")
                return np.broadcast_to(alg.diagonal_array(i, j), full)
            case Not(a):
                return ~ev(a)
            case And(a, b):
                return ev(a) & ev(b)
            case Or(a, b):
                return ev(a) | ev(b)
            case SubstT(_, _, a) | SubstR(_, _, a):
                tr = _letter_map(t.letter, alg.dim)
                alg.check_transformation(tr)
                return alg.subst_array(ev(a), tr)
        raise TypeError(f"not a term: {t!r}")

    return ev(t)


def eval_term(t: Term, assignment: Assignment, alg: SetAlgebra) -> DenseSet:
    arrays = {}
    for k, v in assignment.items():
        idx = int(k[1:]) if isinstance(k, str) else int(k)
        if v.unit != alg.unit:
            raise ValueError(f"value of x{idx} is not an element of the algebra")
        arrays[idx] = v.to_array()
    return DenseSet.from_array(alg.unit, eval_array(t, arrays, alg, ()))


# ---------------------------------------------------------------------------
# Random syntax (test and demo corpora)

def random_term(rng: np.random.Generator, sig: Signature, nvars: int = 2, depth: int = 4) -> Term:
    """A random term of height at most ``depth`` over x0..x{nvars-1}."""
    letters = [T(i, j) for i in range(sig.dim) for j in range(sig.dim) if i != j]
    if sig.replacements:
        letters += [R(i, j) for i in range(sig.dim) for j in range(sig.dim) if i != j]

    def leaf():
        r = rng.random()
        if sig.diagonals and r < 0.15:
            i, j = rng.integers(sig.dim, size=2)
            return Diag(int(i), int(j))
        if r < 0.06:
            return Top() if rng.random() < 0.5 else Bottom()
        return Var(int(rng.integers(nvars)))

    def gen(d):
        if d <= 1:
            return leaf()
        r = rng.random()
        if r < 0.15:
            return leaf()
        if r < 0.5:
            return subst(letters[int(rng.integers(len(letters)))], gen(d - 1))
        if r < 0.65:
            return Not(gen(d - 1))
        if r < 0.83:
            return And(gen(d - 1), gen(d - 1))
        return Or(gen(d - 1), gen(d - 1))

    return gen(depth)


def random_formula(rng: np.random.Generator, sig: Signature, nvars: int = 2, depth: int = 4,
                   core: bool = False) -> Formula:
    """A random formula; ``core`` restricts to the fragment translate_back produces."""
    letters = [T(i, j) for i in range(sig.dim) for j in range(sig.dim) if i != j]
    if sig.replacements:
        letters += [R(i, j) for i in range(sig.dim) for j in range(sig.dim) if i != j]

    def gen(d):
        if d <= 1 or rng.random() < 0.15:
            if rng.random() < 0.06:
                return FTop() if rng.random() < 0.5 else FBot()
            return Prop(int(rng.integers(nvars)))
        r = rng.random()
        letter = letters[int(rng.integers(len(letters)))]
        if r < 0.25:
            return Dia(letter, gen(d - 1))
        if r < 0.35 and not core:
            return Box(letter, gen(d - 1))
        if r < 0.5:
            return Neg(gen(d - 1))
        if r < 0.65:
            return Conj(gen(d - 1), gen(d - 1))
        if r < 0.8 or core:
            return Disj(gen(d - 1), gen(d - 1))
        if r < 0.9:
            return Imp(gen(d - 1), gen(d - 1))
        return Iff(gen(d - 1), gen(d - 1))

    return gen(depth)
