"""Instances of the equation schemas for a given signature and dimension.

Schema ids:

* ``B1``..``B10``  a fixed equational basis for Boolean algebras
* ``2``, ``3``     transpositions are Boolean endomorphisms
* ``4``, ``5``, ``6``  involution, commutation, braid (adjacent transpositions)
* ``T1``, ``T2``   s[j,i] = s[i,j] and s[i,j] s[j,k] s[i,j] = s[i,k]
* ``2R``, ``3R``   replacements are Boolean endomorphisms
* ``S1``..``S11``  transposition/replacement interaction (``S6a``/``S6b`` split S6)
* ``D1``..``D4``   diagonals

In the S-schemas the replacement written s^j_i is ``s[j/i]``, the operator
of the map sending j to i.  S11 reads ``s[j/i] s[i,j] x = s[j/i] x``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .perm import SA, TA, Letter, T, generators
from .terms import Equation, Signature, SubstR, SubstT, Term, Var, parse_equation


@dataclass(frozen=True)
class AxiomInstance:
    schema: str
    equation: Equation

    def __str__(self):
        return f"[{self.schema}] {self.equation}"


BOOLEAN = [
    ("B1", "x0 & x1 = x1 & x0"),
    ("B2", "x0 | x1 = x1 | x0"),
    ("B3", "x0 & (x1 & x2) = (x0 & x1) & x2"),
    ("B4", "x0 | (x1 | x2) = (x0 | x1) | x2"),
    ("B5", "x0 & (x0 | x1) = x0"),
    ("B6", "x0 | (x0 & x1) = x0"),
    ("B7", "x0 & (x1 | x2) = (x0 & x1) | (x0 & x2)"),
    ("B8", "x0 | (x1 & x2) = (x0 | x1) & (x0 | x2)"),
    ("B9", "x0 & ~x0 = 0"),
    ("B10", "x0 | ~x0 = 1"),
]

# (id, template, number of distinct indices)
TRANSPOSITION = [
    ("2", "s[{i},{j}] (x0 & x1) = s[{i},{j}] x0 & s[{i},{j}] x1", 2),
    ("3", "s[{i},{j}] ~x0 = ~s[{i},{j}] x0", 2),
    ("4", "s[{i},{j}] s[{i},{j}] x0 = x0", 2),
    ("T1", "s[{j},{i}] x0 = s[{i},{j}] x0", 2),
    ("T2", "s[{i},{j}] s[{j},{k}] s[{i},{j}] x0 = s[{i},{k}] x0", 3),
]

REPLACEMENT = [
    ("2R", "s[{i}/{j}] (x0 & x1) = s[{i}/{j}] x0 & s[{i}/{j}] x1", 2),
    ("3R", "s[{i}/{j}] ~x0 = ~s[{i}/{j}] x0", 2),
    ("S1", "s[{k},{l}] s[{j}/{i}] s[{k},{l}] x0 = s[{j}/{i}] x0", 4),
    ("S2", "s[{j},{k}] s[{j}/{i}] s[{j},{k}] x0 = s[{k}/{i}] x0", 3),
    ("S3", "s[{k},{i}] s[{j}/{i}] s[{k},{i}] x0 = s[{j}/{k}] x0", 3),
    ("S4", "s[{i},{j}] s[{j}/{i}] s[{i},{j}] x0 = s[{i}/{j}] x0", 2),
    ("S5", "s[{j}/{i}] s[{k}/{l}] x0 = s[{k}/{l}] s[{j}/{i}] x0", 4),
    ("S6a", "s[{j}/{i}] s[{k}/{i}] x0 = s[{k}/{i}] s[{j}/{i}] x0", 3),
    ("S6b", "s[{j}/{i}] s[{k}/{i}] x0 = s[{j}/{i}] s[{k}/{j}] x0", 3),
    ("S7", "s[{j}/{i}] s[{i}/{k}] x0 = s[{j}/{k}] s[{i},{j}] x0", 3),
    ("S8", "s[{j}/{i}] s[{j}/{k}] x0 = s[{j}/{k}] x0", 3),
    ("S9", "s[{j}/{i}] s[{j}/{i}] x0 = s[{j}/{i}] x0", 2),
    ("S10", "s[{j}/{i}] s[{i}/{j}] x0 = s[{j}/{i}] x0", 2),
    ("S11", "s[{j}/{i}] s[{i},{j}] x0 = s[{j}/{i}] x0", 2),
]


def _distinct(n: int, r: int):
    return itertools.permutations(range(n), r)


def _fill(template: str, idx) -> str:
    names = "ijkl"
    return template.format(**dict(zip(names, idx)))


def instantiate_axioms(sig: Signature) -> list[AxiomInstance]:
    """Every index instance of the schemas for ``sig``, tagged with its schema id."""
    n = sig.dim
    out = [AxiomInstance(sid, parse_equation(text, sig)) for sid, text in BOOLEAN]
    seen = set()

    def add(sid, text):
        eq = parse_equation(text, sig)
        if (sid, eq) not in seen:
            seen.add((sid, eq))
            out.append(AxiomInstance(sid, eq))

    for sid, template, r in TRANSPOSITION:
        for idx in _distinct(n, r):
            if sid in ("2", "3", "4", "T1") and idx[0] > idx[1]:
                continue
            add(sid, _fill(template, idx))
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            add("5", f"s[{i},{i + 1}] s[{j},{j + 1}] x0 = s[{j},{j + 1}] s[{i},{i + 1}] x0")
    for i in range(n - 2):
        add("6", f"s[{i},{i + 1}] s[{i + 1},{i + 2}] s[{i},{i + 1}] x0 = "
                 f"s[{i + 1},{i + 2}] s[{i},{i + 1}] s[{i + 1},{i + 2}] x0")
    if sig.replacements:
        for sid, template, r in REPLACEMENT:
            for idx in _distinct(n, r):
                add(sid, _fill(template, idx))
    if sig.diagonals:
        for i in range(n):
            add("D1", f"d[{i},{i}] = 1")
        for i, j in _distinct(n, 2):
            add("D2", f"d[{i},{j}] = d[{j},{i}]")
        for i, j, k in itertools.product(range(n), repeat=3):
            add("D3", f"d[{i},{k}] & d[{k},{j}] & d[{i},{j}] = d[{i},{k}] & d[{k},{j}]")
        for g in generators(n, SA):
            t = g.transformation(n)
            for i, j in _distinct(n, 2):
                a, b = t(i), t(j)
                rhs = "1" if a == b else f"d[{a},{b}]"
                add("D4", f"{g} d[{i},{j}] = {rhs}")
    return out


def _word_of(t: Term) -> tuple[Letter, ...] | None:
    letters = []
    while isinstance(t, (SubstT, SubstR)):
        letters.append(t.letter)
        t = t.arg
    return tuple(letters) if isinstance(t, Var) else None


def word_relations(n: int, kind: str = TA):
    """Relation instances between generator words: (schema id, lhs letters, rhs letters).

    The ``4`` relation is included for both orientations of each transposition.
    """
    sig = Signature(n, SA if kind == TA else kind)
    wanted = {"4", "5", "6", "T1", "T2"}
    if kind != TA:
        wanted |= {f"S{k}" for k in range(1, 12)} | {"S6a", "S6b"}
    rels = []
    for inst in instantiate_axioms(sig):
        if inst.schema not in wanted:
            continue
        lhs, rhs = _word_of(inst.equation.lhs), _word_of(inst.equation.rhs)
        if lhs is not None and rhs is not None:
            rels.append((inst.schema, lhs, rhs))
    for i, j in _distinct(n, 2):
        if i > j:
            rels.append(("4", (T(i, j), T(i, j)), ()))
    return rels
