"""Free algebras, interpolation and set representations.

Run with ``python3 demos/03_free_algebras_and_representations.py``.
"""

# %% Free algebras
# Atoms of Fr_m are the realizable rows of the truth table over the decorated
# variables s_t x_i, so |Fr_m| = 2^atoms.
from substalg.free import build_free, interpolate, stats
from substalg.perm import SA, TA
from substalg.terms import Signature, parse_term, print_term

for kind, n, m in [(TA, 2, 1), (TA, 2, 2), (SA, 2, 1), (TA, 3, 1)]:
    st = stats(build_free(Signature(n, kind), m))
    print(f"Fr_{m} {kind}_{n}: {st.atoms} atoms over an alphabet of {st.alphabet}")

# %% Interpolation
# For valid a <= c the private variables of a are projected away.
sig = Signature(3, TA)
a = parse_term("s[0,1] x0 & x1", sig)
c = parse_term("s[0,1] x0 | x2", sig)
res = interpolate(a, c, sig)
print("interpolant:", print_term(res.interpolant), "| bounds:", res.lower.status, res.upper.status)

# %% Complete representations
# complete_rep sends an atomic algebra into sets of sequences over n copies of
# its atoms and checks homomorphism, injectivity, atom cover and meets.
from substalg.representation import complete_rep, from_free, generated_subalgebra
from substalg.setalg import small_algebra

A = from_free(build_free(Signature(2, TA), 1))
rep = complete_rep(A)
print({k: v for k, v in rep.verify(meets=True).items() if isinstance(v, bool)})

alg = small_algebra(3, 3)
B = generated_subalgebra(alg, [alg.element([(0, 1, 2), (1, 1, 0)])])
print("subalgebra of A_33 with", B.natoms, "atoms ->", complete_rep(B).verify(meets=True)["ok"])

# %% The representable algebras are not a variety
from substalg.representation import non_variety_certificate

for n in (2, 3):
    cert = non_variety_certificate(n)
    print(n, cert.construction, "f =", cert.f, "X =", cert.X.sequences(), "ok:", cert.ok)
