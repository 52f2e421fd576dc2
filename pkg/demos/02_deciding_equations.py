"""Deciding equations, quasi-equations and modal formulas.

Run with ``python3 demos/02_deciding_equations.py``.
"""

# %% Equations
# Substitutions are pushed down to the variables; what remains is a Boolean
# comparison over decorated variables s_t x_i.
from substalg.decision import decide, decide_quasi_equation, normalize
from substalg.perm import SA, SAD, TA
from substalg.terms import Signature, parse_equation, parse_quasi_equation, parse_term

ta3 = Signature(3, TA)
for text in ["s[0,1] s[1,2] s[0,1] x0 = s[0,2] x0", "s[0,1] s[1,2] x0 = s[1,2] s[0,1] x0"]:
    res = decide(parse_equation(text, ta3), ta3)
    print(f"{text:45s} {res.status} ({res.method})")

nf = normalize(parse_term("s[0,1] (x0 & ~x1)", ta3), ta3)
print("normal form variables:", [str(v) for v in nf.vars], "table:", bin(nf.table))

# %% Countermodels
# A refutation comes with a concrete set algebra, an assignment and a point.
eq = parse_equation("s[0,1] s[1,2] x0 = s[1,2] s[0,1] x0", ta3)
cm = decide(eq, ta3).countermodel
print("unit:", cm.algebra.unit.sequences())
print("x0 =", cm.assignment[0].sequences(), "at", cm.witness, "replays:", cm.replay(eq))

# %% Replacements and diagonals
sa2 = Signature(2, SA)
print(decide(parse_equation("s[0/1] s[0,1] x0 = s[0/1] x0", sa2), sa2).status)
sad2 = Signature(2, SAD)
for text in ["d[0,1] & s[0,1] x0 = d[0,1] & x0", "s[0/1] d[0,1] = 1", "d[0,1] = 0"]:
    print(f"{text:35s}", decide(parse_equation(text, sad2), sad2).status)

# %% Quasi-equations
# These are checked directly in the small algebras A_nk; no normal forms here.
qe = parse_quasi_equation("s[0,1] x0 = ~x0 => 0 = 1", Signature(2, TA))
print(qe, "->", decide_quasi_equation(qe, Signature(2, TA)).status)
print("same at n=3:", decide_quasi_equation(parse_quasi_equation("s[0,1] x0 = ~x0 => 0 = 1", ta3), ta3).status)

# %% Modal formulas
# <t> p is the substitution s_t applied to p; countermodels become Kripke models.
from substalg.decision import decide_formula
from substalg.kripke import KripkeModel, satisfies
from substalg.terms import parse_formula

f = parse_formula("p0 -> <0,1> p0", Signature(2, TA))
res = decide_formula(f, Signature(2, TA))
k = res.detail["kripke"]
print(res.status, k)
print("holds at the witness?", satisfies(KripkeModel.from_json(k["model"]), tuple(k["witness"]), f))
print("[0/1] p0 <-> <0/1> p0:", decide_formula(parse_formula("[0/1] p0 <-> <0/1> p0", sa2), sa2).status)
