"""Acceptance checks A1-A9.

Each test carries a ``criterion`` mark; the summary hook in conftest prints one
PASS/FAIL line per criterion at the end of the run.
"""

import itertools
import time

import numpy as np
import pytest

from corpus import mutate, rewrite
from substalg.axioms import instantiate_axioms
from substalg.decision import (NormalForm, brute_force_check, decide_equation, decide_formula,
                               decide_quasi_equation, normalize)
from substalg.free import build_free, interpolate, stats, term_of_normal_form
from substalg.kripke import KripkeModel, countermodel_to_kripke, satisfies, translation_agrees
from substalg.perm import (SA, SAD, TA, R, T, all_words, coxeter_normal_form, decompose, enumerate_monoid, hat,
                           replay, rewrite_closure)
from substalg.representation import complete_rep, from_free, generated_subalgebra, non_variety_certificate
from substalg.report import discrepancy_flags, free_algebra_rows
from substalg.setalg import DenseSet, SetAlgebra, Unit, classify_unit, permutable_closure, small_algebra
from substalg.terms import (And, Bottom, Equation, Iff, Not, Or, Signature, SubstT, Var, apply_word, conj, disj,
                            leq, random_formula, random_term, term_vars, translate, translate_back)


def depth(t):
    kids = [getattr(t, a) for a in ("arg", "left", "right") if hasattr(t, a)]
    return 1 + max((depth(k) for k in kids), default=0)


# ---------------------------------------------------------------------------
# A1

@pytest.mark.criterion("A1")
def test_a1_axiom_soundness(record):
    t0 = time.perf_counter()
    counts = {}
    for n, kinds, samples in [(2, (TA, SA, SAD), None), (3, (TA, SA), 10_000)]:
        for kind in kinds:
            alg = small_algebra(n, n, kind)
            insts = instantiate_axioms(Signature(n, kind))
            for inst in insts:
                nvars = len(term_vars(inst.equation.lhs) | term_vars(inst.equation.rhs))
                if samples is None:
                    res = brute_force_check(inst.equation, alg, budget=1 << 20)
                    assert res.method == "exhaustive"
                    if nvars == 1:
                        assert alg.size <= 4  # 16 assignments
                    assert res.valid, str(inst)
                else:
                    res = brute_force_check(inst.equation, alg, budget=1, samples=samples, seed=11)
                    assert res.method == "sampled" and not res.invalid, str(inst)
                    assert res.detail.get("samples", samples) >= 10_000
            counts[f"{kind}_{n}"] = len(insts)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    record(f"{sum(counts.values())} instances {counts}, 0 failures, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# A2

def _pair_mismatches(canon, hats):
    c = np.unique(np.array([hash(x) for x in canon]), return_inverse=True)[1]
    h = np.unique(np.array([hash(x) for x in hats]), return_inverse=True)[1]
    return int(np.count_nonzero((c[:, None] == c[None, :]) != (h[:, None] == h[None, :])))


@pytest.mark.criterion("A2")
def test_a2_presentation_adequacy(record):
    t0 = time.perf_counter()
    words = all_words(3, [T(0, 1), T(0, 2), T(1, 2)], 5)
    assert len(words) == 364
    canon, hats = [], []
    for w in words:
        c, trace = coxeter_normal_form(w)
        assert replay(trace, TA)
        canon.append(c.letters)
        hats.append(hat(w).images)
    ta_bad = _pair_mismatches(canon, hats)
    assert ta_bad == 0

    letters = [T(0, 1), T(1, 0), R(0, 1), R(1, 0)]
    words = all_words(2, letters, 4)
    closures = {}
    canon, hats = [], []
    for w in words:
        t = hat(w)
        if t not in closures:
            closures[t] = rewrite_closure(decompose(t, SA), SA, 6)
        # a word keeps itself as canonical form unless rewriting reaches the BFS representative
        canon.append(decompose(t, SA).letters if w.letters in closures[t] else w.letters)
        hats.append(t.images)
    sa_bad = _pair_mismatches(canon, hats)
    assert sa_bad == 0
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    record(f"TA_3: 364 words, 66066 pairs; SA_2: {len(words)} words; 0 mismatches, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# A3

def equation_corpus(sig, seed, count=200):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        t = random_term(rng, sig, 2, int(rng.integers(2, 7)))
        r = rng.random()
        if r < 0.45:
            u = rewrite(t, rng, sig, steps=3)
        elif r < 0.8:
            u = mutate(rewrite(t, rng, sig, steps=2), rng, sig)
        else:
            u = random_term(rng, sig, 2, int(rng.integers(1, 7)))
        if depth(t) <= 6 and depth(u) <= 6:
            out.append(Equation(t, u))
    return out


@pytest.mark.criterion("A3")
@pytest.mark.parametrize("kind", [TA, SA])
def test_a3_decision_matches_oracle(kind, record):
    t0 = time.perf_counter()
    sig = Signature(2, kind)
    alg = small_algebra(2, 2, kind)
    verdicts = {"valid": 0, "invalid": 0}
    for eq in equation_corpus(sig, seed=100 + len(kind)):
        d = decide_equation(eq, sig)
        b = brute_force_check(eq, alg)
        q = decide_quasi_equation(eq, sig)
        assert b.method == "exhaustive" and q.method == "exhaustive"
        assert d.status == b.status == q.status, str(eq)
        if d.invalid:
            assert d.countermodel.replay(eq)
        verdicts[d.status] += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 120
    record(f"{kind}: 200 equations ({verdicts['valid']} valid, {verdicts['invalid']} invalid), "
           f"0 disagreements, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# A4

@pytest.mark.criterion("A4")
def test_a4_non_variety(record):
    t0 = time.perf_counter()
    used = []
    for n in (2, 3, 4):
        cert = non_variety_certificate(n, samples=10_000, seed=0)
        doc = cert.to_json()
        assert doc["S_f(X) = -X"] and cert.ok and cert.replay()
        for name, row in doc["small_algebras"].items():
            assert row["holds"] and row["constant_point_lemma"], name
            if n == 2:
                assert row["search"] == "exhaustive"
            elif row["search"] == "sampled":
                assert row["samples"] >= 10_000
        used.append(f"n={n}:{cert.construction}")
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    record(f"{', '.join(used)}, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# A5

@pytest.mark.criterion("A5")
def test_a5_free_algebra_counts(record):
    t0 = time.perf_counter()
    expected = [((TA, 2, 1), 4), ((TA, 2, 2), 16), ((SA, 2, 1), 16), ((TA, 3, 1), 64)]
    got = []
    for (kind, n, m), atoms in expected:
        st = stats(build_free(Signature(n, kind), m))
        assert st.exhaustive and st.atoms == atoms
        got.append(f"Fr_{m} {kind}_{n}=(2^{st.atoms},{st.atoms})")
    rows = free_algebra_rows(3)
    flag = next(f for f in discrepancy_flags(3, rows, []) if f["id"] == "free-algebra-bound")
    assert flag["confirmed"] and rows[0]["exceeds_bound"]
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    record(f"{', '.join(got)}, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# A6

def _random_generators(alg, rng):
    k = int(rng.integers(0, 3))
    gens = []
    for _ in range(k):
        density = rng.choice([0.1, 0.3, 0.5])
        bits = sum(1 << p for p in range(alg.size) if rng.random() < density)
        gens.append(DenseSet(alg.unit, bits))
    return gens


@pytest.mark.criterion("A6")
def test_a6_complete_representation(record):
    rng = np.random.default_rng(6)
    cases = [("Fr_1 TA_2", from_free(build_free(Signature(2, TA), 1)))]
    for k in range(20):
        alg = small_algebra(2, 2) if k % 2 == 0 else small_algebra(3, 3)
        A = generated_subalgebra(alg, _random_generators(alg, rng))
        cases.append((f"sub A_{alg.dim}{alg.dim} #{k}", A))
    small = 0
    for name, A in cases:
        r = complete_rep(A).verify(meets=True, samples=1000)
        assert r["ok"] and r["injective"] and r["atom_cover"] and r["meets"], name
        small += A.natoms <= 4
    sizes = sorted({A.natoms for _, A in cases})
    record(f"{len(cases)} algebras, atoms {sizes}, {small} with <= 16 elements, 0 failures")


# ---------------------------------------------------------------------------
# A7

def _implication(rng, sig):
    """a over {x0, x1}, c over {x0, x2}, with a <= c valid and both private vars essential."""
    while True:
        a = And(random_term(rng, sig, 2, 3), random_term(rng, sig, 2, 3))
        c = Or(random_term(rng, sig, 1, 3), random_term(rng, sig, 3, 3))
        if 1 in term_vars(c) or not decide_equation(leq(a, c), sig).valid:
            continue
        na, nc = normalize(a, sig), normalize(c, sig)
        if {v.var for v in na.vars} == {0, 1} and {v.var for v in nc.vars} == {0, 2}:
            return a, c


def _least(a, b_nf, sig):
    """b is least above a among shared-vocabulary elements iff each minterm of b meets a."""
    rows = np.flatnonzero(b_nf.array())
    for r in rows:
        one = np.zeros(len(b_nf.array()), dtype=bool)
        one[r] = True
        m = term_of_normal_form(NormalForm(b_nf.vars, one, canonical=False), sig)
        if decide_equation(Equation(And(a, m), Bottom()), sig).valid:
            return False
    return True


@pytest.mark.criterion("A7")
def test_a7_interpolation(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    done = lub = 0
    for n, kind in itertools.product((2, 3), (TA, SA)):
        sig = Signature(n, kind)
        for _ in range(25):
            a, c = _implication(rng, sig)
            res = interpolate(a, c, sig)
            assert term_vars(res.interpolant) <= {0}
            assert res.lower.valid and res.upper.valid
            assert decide_equation(leq(a, res.interpolant), sig).valid
            assert decide_equation(leq(res.interpolant, c), sig).valid
            if done % 5 == 0:
                assert _least(a, res.normal_form, sig)
                lub += 1
            done += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 120
    record(f"{done} implications, {lub} least-bound checks, 0 failures, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# A8

def _units_n2():
    for u in (0, 1, 2):
        pts = list(itertools.product(range(u), repeat=2))
        for r in range(len(pts) + 1):
            for sub in itertools.combinations(pts, r):
                unit = classify_unit(2, u, sub) if u else Unit(2, 0)
                if unit.permutable and len(unit) == r:
                    yield unit


@pytest.mark.criterion("A8")
def test_a8_translation_on_all_small_models(record):
    rng = np.random.default_rng(8)
    f_sad = [random_formula(rng, Signature(2, SAD), 1, 5) for _ in range(15)] + \
            [random_formula(rng, Signature(2, SAD), 2, 4) for _ in range(5)]
    f_ta = [random_formula(rng, Signature(2, TA), 1, 5) for _ in range(15)] + \
           [random_formula(rng, Signature(2, TA), 2, 4) for _ in range(5)]
    models = checks = 0
    units = list(_units_n2())
    for unit in units:
        forms = f_sad if unit.dipermutable else f_ta
        for nprops in (1, 2):
            for bits in itertools.product(range(1 << len(unit)), repeat=nprops):
                m = KripkeModel(unit, {k: DenseSet(unit, b) for k, b in enumerate(bits)})
                models += 1
                for f in forms:
                    if max((int(p) for p in _props(f)), default=0) < nprops:
                        assert translation_agrees(m, f)
                        checks += 1
    record(f"n=2: {len(units)} units, {models} models, {checks} checks")


def _props(f):
    return term_vars(translate(f))


@pytest.mark.criterion("A8")
def test_a8_translation_on_random_models(record):
    rng = np.random.default_rng(9)
    for k in range(100):
        kind = SA if k % 2 else TA
        seeds = [tuple(int(v) for v in rng.integers(3, size=3)) for _ in range(int(rng.integers(1, 4)))]
        unit = permutable_closure(3, 3, seeds, kind)
        alg = SetAlgebra(unit, TA)
        m = KripkeModel(unit, {p: alg.random_element(rng) for p in range(2)})
        sig = Signature(3, SAD if unit.dipermutable else TA)
        for _ in range(5):
            assert translation_agrees(m, random_formula(rng, sig, 2, 5))
    record("n=3, u=3: 100 random models x 5 formulas")


@pytest.mark.criterion("A8")
def test_a8_countermodels_and_axioms(record):
    rng = np.random.default_rng(10)
    invalid = 0
    for n, kind in itertools.product((2, 3), (TA, SA, SAD)):
        sig = Signature(n, kind)
        for _ in range(15):
            f = random_formula(rng, sig, 2, 4)
            res = decide_formula(f, sig)
            if res.invalid:
                m, w = countermodel_to_kripke(res.countermodel)
                assert not satisfies(m, w, f)
                k = res.detail["kripke"]
                assert not satisfies(KripkeModel.from_json(k["model"]), tuple(k["witness"]), f)
                invalid += 1
    axioms = 0
    for n, kind in [(2, TA), (2, SA), (2, SAD), (3, TA), (3, SA), (3, SAD)]:
        sig = Signature(n, kind)
        for inst in instantiate_axioms(sig):
            f = Iff(translate_back(inst.equation.lhs), translate_back(inst.equation.rhs))
            assert decide_formula(f, sig).valid, str(inst)
            axioms += 1
    record(f"{invalid} countermodels replayed, {axioms} axiom formulas valid")


# ---------------------------------------------------------------------------
# A9

def _balanced(op, items):
    while len(items) > 1:
        items = [op(items[k], items[k + 1]) if k + 1 < len(items) else items[k] for k in range(0, len(items), 2)]
    return items[0]


def _xor(a, b):
    return Or(And(a, Not(b)), And(Not(a), b))


@pytest.mark.criterion("A9")
def test_a9_performance_envelope(record):
    sig = Signature(4, SA)
    perms = enumerate_monoid(4, SA)
    lits = [apply_word(decompose(p, SA), Var(0)) for p in perms[:24]]
    xor = _balanced(_xor, lits)
    cases = {
        "xor=xor'": Equation(xor, _balanced(_xor, lits[::-1])),
        "conj<=disj": leq(conj(lits), disj(lits)),
        "xor=0": Equation(xor, Bottom()),
    }
    # all of S_4 applied to x0: transpositions keep the 24 decorated variables closed
    ta = Signature(4, TA)
    rng = np.random.default_rng(12)
    s4 = [apply_word(decompose(p, TA), Var(0)) for p in enumerate_monoid(4, TA)]
    mixed = _balanced(lambda a, b: Or(And(a, b), SubstT(0, 1, Not(a))), [s4[int(k)] for k in rng.permutation(24)])
    cases["mixed TA_4"] = Equation(mixed, rewrite(mixed, rng, ta, 1))
    times = {}
    for name, eq in cases.items():
        t0 = time.perf_counter()
        res = decide_equation(eq, ta if "TA" in name else sig)
        times[name] = time.perf_counter() - t0
        assert res.status in ("valid", "invalid")
        assert times[name] < 10, name
    over = [apply_word(decompose(p, SA), Var(0)) for p in perms[:25]]
    t0 = time.perf_counter()
    res = decide_equation(Equation(disj(over), conj(over)), sig)
    t_over = time.perf_counter() - t0
    assert res.status == "unknown" and res.method == "budget" and t_over < 10
    record(", ".join(f"{k} {v:.2f}s" for k, v in times.items()) + f"; 25 vars -> unknown(budget) in {t_over:.2f}s")
