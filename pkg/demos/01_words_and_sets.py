"""Substitution words, their transformations, and how they act on sets of points.

Run with ``python3 demos/01_words_and_sets.py``.
"""

# %% Words and transformations
# A word is read right to left: hat(l1 ... lk) = l1 ∘ ... ∘ lk.
from substalg import Signature, decompose, hat
from substalg.perm import SA, SAD, TA, coxeter_normal_form, enumerate_monoid, replay
from substalg.terms import parse_word

w = parse_word("s[0,1] s[1,2]", 3)
print(w, "->", hat(w))
print("transformations of ^3 3 reachable with transpositions:", len(enumerate_monoid(3, TA)))
print("... and with replacements too:", len(enumerate_monoid(3, SA)))

# %% Proofs between words
# Two transposition words with the same transformation are joined by a chain of
# relation rewrites; the trace can be replayed independently.
w1 = parse_word("s[0,1] s[1,2] s[0,1]", 3)
w2 = parse_word("s[1,2] s[0,1] s[1,2]", 3)
nf1, t1 = coxeter_normal_form(w1)
nf2, t2 = coxeter_normal_form(w2)
print("normal forms:", nf1, "|", nf2)
proof = t1.then(t2.reversed())
print("w1 = w2 by", [s.axiom for s in proof.steps], "replays:", replay(proof, TA))
print("shortest SA word for (0,0,2):", decompose(hat(parse_word("s[1/0]", 3)), SA))

# %% Sets of points
# S_t(X) = {q : q ∘ t ∈ X}. On ^2 2 the swap s[0,1] exchanges (0,1) and (1,0).
from substalg.perm import Transformation
from substalg.setalg import SetAlgebra, Unit, small_algebra

alg = SetAlgebra(Unit(2, 2), SA)
X = alg.element([(0, 1)])
print("X =", X.sequences())
print("s[0,1] X =", alg.subst(X, Transformation((1, 0))).sequences())
print("s[0/1] X =", alg.subst(X, Transformation((1, 1))).sequences())
print("diagonal d01 =", SetAlgebra(Unit(2, 2), SAD).diagonal(0, 1).sequences())

# %% Evaluating terms
from substalg.terms import eval_term, parse_term

t = parse_term("x0 & ~s[0,1] x0", Signature(2, TA))
print(t, "=", eval_term(t, {0: X}, small_algebra(2, 2)).sequences())
