"""Transformations of {0..n-1}, substitution words and their evaluation.

Composition is right-to-left: ``(a @ b)(k) == a(b(k))``.  With this
convention ``S_a(S_b(X)) == S_{a @ b}(X)`` for the set-algebra operators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import SignatureError

TA, SA, SAD = "TA", "SA", "SAD"
KINDS = (TA, SA, SAD)

# enumerate_monoid bounds
MAX_PERM_DIM = 6
MAX_MAP_DIM = 4


@dataclass(frozen=True, order=True)
class Transformation:
    """A total self-map of ``range(dim)``; ``images[k]`` is the image of k."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n == 0:
            raise ValueError("dimension must be positive")
        if any(not 0 <= v < n for v in self.images):
            raise ValueError(f"images out of range: {self.images}")

    @property
    def dim(self) -> int:
        return len(self.images)

    @property
    def is_permutation(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k]

    def __matmul__(self, other: Transformation) -> Transformation:
        return compose(self, other)

    def inverse(self) -> Transformation:
        if not self.is_permutation:
            raise ValueError("only permutations are invertible")
        inv = [0] * self.dim
        for k, v in enumerate(self.images):
            inv[v] = k
        return Transformation(tuple(inv))

    def length(self) -> int:
        """Coxeter length (number of inversions) of a permutation."""
        im = self.images
        return sum(1 for a in range(len(im)) for b in range(a + 1, len(im)) if im[a] > im[b])

    @classmethod
    def identity(cls, n: int) -> Transformation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Transformation:
        im = list(range(n))
        im[i], im[j] = j, i
        return cls(tuple(im))

    @classmethod
    def replacement(cls, n: int, i: int, j: int) -> Transformation:
        """The map [i/j]: sends i to j, fixes everything else."""
        im = list(range(n))
        im[i] = j
        return cls(tuple(im))

    def __str__(self):
        return "(" + ",".join(map(str, self.images)) + ")"


def compose(a: Transformation, b: Transformation) -> Transformation:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return Transformation(tuple(a.images[v] for v in b.images))


@dataclass(frozen=True, order=True)
class Letter:
    """A generator letter: ``kind`` is 'T' (transposition) or 'R' (replacement)."""

    kind: str
    i: int
    j: int

    def __post_init__(self):
        if self.kind not in ("T", "R"):
            raise ValueError(f"bad letter kind {self.kind!r}")
        if self.i == self.j or self.i < 0 or self.j < 0:
            raise ValueError(f"bad letter indices {self.i}, {self.j}")

    def transformation(self, n: int) -> Transformation:
        if max(self.i, self.j) >= n:
            raise ValueError(f"letter {self} out of range for dimension {n}")
        if self.kind == "T":
            return Transformation.transposition(n, self.i, self.j)
        return Transformation.replacement(n, self.i, self.j)

    def __str__(self):
        sep = "," if self.kind == "T" else "/"
        return f"s[{self.i}{sep}{self.j}]"


def T(i: int, j: int) -> Letter:
    return Letter("T", i, j)


def R(i: int, j: int) -> Letter:
    return Letter("R", i, j)


@dataclass(frozen=True)
class SubstWord:
    dim: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for letter in self.letters:
            if max(letter.i, letter.j) >= self.dim:
                raise ValueError(f"letter {letter} out of range for dimension {self.dim}")

    @property
    def transposition_only(self) -> bool:
        return all(l.kind == "T" for l in self.letters)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other: SubstWord) -> SubstWord:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return SubstWord(self.dim, self.letters + other.letters)

    def __str__(self):
        return " ".join(map(str, self.letters)) if self.letters else "e"

    @classmethod
    def parse(cls, text: str, dim: int) -> SubstWord:
        """Parse ``s[i,j] s[i/j] ...`` (or ``e`` for the empty word)."""
        from .terms import parse_word

        return parse_word(text, dim)


def hat(w: SubstWord) -> Transformation:
    result = Transformation.identity(w.dim)
    for letter in reversed(w.letters):
        result = compose(letter.transformation(w.dim), result)
    return result


def words_equal_by_axioms(w1: SubstWord, w2: SubstWord) -> bool:
    """Decide derivability of ``w1 = w2`` via the presentation: equal iff same hat."""
    if w1.dim != w2.dim:
        raise ValueError("dimension mismatch")
    return hat(w1) == hat(w2)


def generators(n: int, kind: str) -> list[Letter]:
    """Generator letters in the fixed order used for lexicographic tie-breaking."""
    letters = [T(i, j) for i in range(n) for j in range(i + 1, n)]
    if kind != TA:
        letters += [R(i, j) for i in range(n) for j in range(n) if i != j]
    return letters


def enumerate_monoid(n: int, kind: str = TA, bound: int | None = None) -> list[Transformation]:
    """All permutations (TA) or all self-maps (SA/SAD) of ``range(n)``, lexicographic."""
    if kind not in KINDS:
        raise SignatureError(f"unknown signature {kind!r}")
    limit = bound if bound is not None else (MAX_PERM_DIM if kind == TA else MAX_MAP_DIM)
    if n > limit:
        raise ValueError(f"dimension {n} exceeds enumeration bound {limit}")
    return list(_monoid(n, kind == TA))


@lru_cache(maxsize=None)
def _monoid(n: int, perms: bool) -> tuple[Transformation, ...]:
    if perms:
        seqs = itertools.permutations(range(n))
    else:
        seqs = itertools.product(range(n), repeat=n)
    return tuple(Transformation(s) for s in seqs)


@lru_cache(maxsize=None)
def _distances(n: int, kind: str) -> dict[Transformation, int]:
    # hat(w l) = hat(w) @ l, so BFS from the identity by right multiplication
    gens = [g.transformation(n) for g in generators(n, kind)]
    ident = Transformation.identity(n)
    dist = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for t in frontier:
            for g in gens:
                u = compose(t, g)
                if u not in dist:
                    dist[u] = dist[t] + 1
                    nxt.append(u)
        frontier = nxt
    return dist


def decompose(t: Transformation, kind: str = SA) -> SubstWord:
    """Lexicographically least shortest word whose hat is ``t``."""
    n = t.dim
    if kind == TA and not t.is_permutation:
        raise SignatureError(f"{t} is not a permutation; replacements are not in TA")
    gkind = TA if kind == TA else SA
    dist = _distances(n, gkind)
    if t not in dist:
        raise SignatureError(f"{t} is not generated by the {gkind} letters")
    gens = generators(n, gkind)
    gen_maps = [g.transformation(n) for g in gens]
    remaining = dist[t]
    targets = {t}
    word = []
    while remaining:
        # the word is l1 w' with hat = l1 @ hat(w'); keep every possible hat(w')
        for letter, g in zip(gens, gen_maps):
            cands = {p for p, d in dist.items() if d == remaining - 1 and compose(g, p) in targets}
            if cands:
                word.append(letter)
                targets = cands
                break
        remaining -= 1
    return SubstWord(n, tuple(word))


# ---------------------------------------------------------------------------
# Relations and proof traces

def _adj(a: int) -> Letter:
    return T(a, a + 1)


@dataclass(frozen=True)
class Step:
    axiom: str
    position: int
    word: SubstWord


@dataclass(frozen=True)
class ProofTrace:
    start: SubstWord
    end: SubstWord
    steps: tuple[Step, ...] = field(default=())

    def reversed(self) -> ProofTrace:
        words = [self.start] + [s.word for s in self.steps]
        steps = []
        for k in range(len(self.steps) - 1, -1, -1):
            steps.append(Step(self.steps[k].axiom, self.steps[k].position, words[k]))
        return ProofTrace(self.end, self.start, tuple(steps))

    def then(self, other: ProofTrace) -> ProofTrace:
        if self.end != other.start:
            raise ValueError("traces do not chain")
        return ProofTrace(self.start, other.end, self.steps + other.steps)

    def to_json(self) -> dict:
        return {
            "start": str(self.start),
            "end": str(self.end),
            "steps": [{"axiom": s.axiom, "position": s.position, "word": str(s.word)} for s in self.steps],
        }


@lru_cache(maxsize=None)
def relation_instances(n: int, kind: str = TA) -> tuple[tuple[str, tuple[Letter, ...], tuple[Letter, ...]], ...]:
    """Word relations (id, lhs, rhs) from the defining schemas, as letter strings.

    Besides 4, 5, 6 (adjacent Coxeter relations) and S1..S11 this includes
    ``T1`` (s[j,i] = s[i,j]) and ``T2`` (s[i,j] s[j,k] s[i,j] = s[i,k]); those
    tie non-adjacent transposition letters to the adjacent generators.
    """
    from .axioms import word_relations

    return tuple(word_relations(n, kind))


@lru_cache(maxsize=None)
def _relations_by_axiom(n: int, kind: str) -> dict[str, tuple[tuple[tuple, tuple], ...]]:
    out: dict[str, list] = {}
    for rid, lhs, rhs in relation_instances(n, kind):
        out.setdefault(rid, []).extend([(lhs, rhs), (rhs, lhs)])
    return {k: tuple(v) for k, v in out.items()}


def replay(trace: ProofTrace, kind: str = SA) -> bool:
    """Check every step is one relation instance (either direction) and hat is kept."""
    n = trace.start.dim
    rels = _relations_by_axiom(n, kind)
    cur = trace.start
    h = hat(cur)
    for step in trace.steps:
        prev, new, pos = cur.letters, step.word.letters, step.position
        ok = any(
            prev[pos:pos + len(lhs)] == lhs and prev[:pos] + rhs + prev[pos + len(lhs):] == new
            for lhs, rhs in rels.get(step.axiom, ())
        )
        if not ok or hat(step.word) != h:
            return False
        cur = step.word
    return cur == trace.end


class _Rewriter:
    """Mutable word with a log of relation applications."""

    def __init__(self, word: SubstWord):
        self.n = word.dim
        self.start = word
        self.letters = list(word.letters)
        self.steps: list[Step] = []

    def apply(self, axiom: str, pos: int, length: int, replacement: Sequence[Letter]):
        self.letters[pos:pos + length] = list(replacement)
        self.steps.append(Step(axiom, pos, SubstWord(self.n, tuple(self.letters))))

    def trace(self) -> ProofTrace:
        return ProofTrace(self.start, SubstWord(self.n, tuple(self.letters)), tuple(self.steps))


def _prefix_perm(letters: Sequence[Letter], upto: int, n: int) -> list[int]:
    # image sequence of hat(letters[:upto]); right-multiplying by [a,a+1] swaps positions a, a+1
    im = list(range(n))
    for letter in letters[:upto]:
        a = letter.i
        im[a], im[a + 1] = im[a + 1], im[a]
    return im


def _has_right_descent(letters, upto, n, a) -> bool:
    im = _prefix_perm(letters, upto, n)
    return im[a] > im[a + 1]


def _end_with(rw: _Rewriter, upto: int, a: int):
    """Braid-move the reduced prefix ``letters[:upto]`` until it ends with s_a.

    Precondition: s_a is a right descent of the prefix.
    """
    last = rw.letters[upto - 1].i
    if last == a:
        return
    if abs(last - a) >= 2:
        # prefix = u' t with t, s commuting: s is a descent of u'
        _end_with(rw, upto - 1, a)
        rw.apply("5", upto - 2, 2, [_adj(last), _adj(a)])
        return
    # adjacent: end with t s t, then braid to s t s
    _end_with(rw, upto - 1, a)
    _end_with(rw, upto - 2, last)
    rw.apply("6", upto - 3, 3, [_adj(a), _adj(last), _adj(a)])


def _canonical_adjacent(im: Sequence[int]) -> list[int]:
    """Bubble-sort word (adjacent indices) for the permutation with image sequence ``im``."""
    im = list(im)
    out = []
    while True:
        for a in range(len(im) - 1):
            if im[a] > im[a + 1]:
                im[a], im[a + 1] = im[a + 1], im[a]
                out.append(a)
                break
        else:
            break
    return out[::-1]


def canonical_word(t: Transformation) -> SubstWord:
    """Bubble-sort normal form of a permutation over adjacent transpositions."""
    if not t.is_permutation:
        raise SignatureError("canonical Coxeter words exist only for permutations")
    return SubstWord(t.dim, tuple(_adj(a) for a in _canonical_adjacent(t.images)))


def coxeter_normal_form(w: SubstWord) -> tuple[SubstWord, ProofTrace]:
    """Rewrite a transposition word to its canonical form, recording every step."""
    if not w.transposition_only:
        raise SignatureError("coxeter_normal_form needs a transposition-only word")
    n = w.dim
    rw = _Rewriter(w)

    # 1. orient letters and expand non-adjacent transpositions
    pos = 0
    while pos < len(rw.letters):
        letter = rw.letters[pos]
        i, j = letter.i, letter.j
        if i > j:
            rw.apply("T1", pos, 1, [T(j, i)])
        elif j > i + 1:
            rw.apply("T2", pos, 1, [T(i, i + 1), T(i + 1, j), T(i, i + 1)])
        else:
            pos += 1

    # 2. reduce: keep a reduced prefix; cancel a letter that is a descent of it
    k = 0
    while k < len(rw.letters):
        a = rw.letters[k].i
        if k > 0 and _has_right_descent(rw.letters, k, n, a):
            _end_with(rw, k, a)
            rw.apply("4", k - 1, 2, [])
            k -= 1
        else:
            k += 1

    # 3. braid-move the reduced word to the canonical one, right to left
    target = _canonical_adjacent(hat(w).images)
    for upto in range(len(target), 0, -1):
        _end_with(rw, upto, target[upto - 1])

    trace = rw.trace()
    assert trace.end == canonical_word(hat(w))
    return trace.end, trace


def prove(w1: SubstWord, w2: SubstWord) -> ProofTrace | None:
    """A derivation of ``w1 = w2`` for transposition words, or None if hats differ."""
    if hat(w1) != hat(w2):
        return None
    _, t1 = coxeter_normal_form(w1)
    _, t2 = coxeter_normal_form(w2)
    return t1.then(t2.reversed())


def rewrite_closure(start: SubstWord, kind: str = SA, max_len: int = 6) -> set[tuple[Letter, ...]]:
    """All words reachable from ``start`` by relation instances, through words
    of at most ``max_len`` letters."""
    rels = relation_instances(start.dim, kind)
    moves = [(l, r) for _, l, r in rels] + [(r, l) for _, l, r in rels]
    seen = {start.letters}
    frontier = [start.letters]
    while frontier:
        nxt = []
        for word in frontier:
            for lhs, rhs in moves:
                m = len(lhs)
                if len(word) - m + len(rhs) > max_len:
                    continue
                for p in range(len(word) - m + 1):
                    if word[p:p + m] == lhs:
                        new = word[:p] + rhs + word[p + m:]
                        if new not in seen:
                            seen.add(new)
                            nxt.append(new)
        frontier = nxt
    return seen


def derivable(w1: SubstWord, w2: SubstWord, kind: str = SA, max_len: int | None = None) -> bool:
    """Bounded search: are ``w1`` and ``w2`` connected by relation instances?

    Intermediate words are limited to ``max_len`` letters (default: longest
    input plus two).  A False answer only means no derivation within the bound.
    """
    if max_len is None:
        max_len = max(len(w1), len(w2)) + 2
    return w2.letters in rewrite_closure(w1, kind, max_len)


def all_words(n: int, letters: Iterable[Letter], max_len: int) -> list[SubstWord]:
    letters = list(letters)
    out = []
    for length in range(max_len + 1):
        for combo in itertools.product(letters, repeat=length):
            out.append(SubstWord(n, combo))
    return out
