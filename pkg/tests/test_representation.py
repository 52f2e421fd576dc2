import numpy as np
import pytest

from substalg.errors import AxiomViolation, SignatureError
from substalg.free import build_free
from substalg.perm import SA, SAD, TA, T, Transformation
from substalg.representation import (FiniteAlgebra, Frame, atom_sum_criterion, check_meets, complete_rep,
                                     complex_algebra, diagonal_quotient_rep, disjoint_transpositions, frame_of_unit,
                                     from_free, from_set_algebra, generated_subalgebra, non_variety_certificate,
                                     relativize_Rl, two_element, ultrafilter_rep)
from substalg.setalg import DenseSet, SetAlgebra, Unit, classify_unit, small_algebra
from substalg.terms import Signature


@pytest.fixture(scope="module")
def fr1():
    return from_free(build_free(Signature(2, TA), 1))


def test_free_algebra_tables(fr1):
    assert fr1.natoms == 4 and not fr1.violations
    # atoms are alphabet rows: bit 0 is s_Id x0, bit 1 is s_[0,1] x0; s01 swaps them
    assert fr1.tables[T(0, 1)] == (1, 4, 2, 8)


def test_ultrafilter_rep_examples(fr1):
    rep = ultrafilter_rep(fr1, 3)
    x0 = 0b1010  # rows with bit 0 set
    assert rep.map(x0) == rep.target.top()
    assert rep.target.size == 2
    # one ultrafilter gives a homomorphism, not an embedding
    r = rep.verify(injective=False)
    assert r["ok"] and r["substitutions"]
    assert not rep.verify()["injective"]
    two = two_element(2)
    rep2 = ultrafilter_rep(two, 0)
    assert rep2.map(1) == rep2.target.top() and rep2.map(0) == rep2.target.bottom()


def test_ultrafilter_hom_law_exhaustive(fr1):
    for atom in range(fr1.natoms):
        rep = ultrafilter_rep(fr1, atom)
        sw = Transformation((1, 0))
        for z in fr1.elements():
            assert rep.map(fr1.subst(T(0, 1), z)) == rep.target.subst(rep.map(z), sw)


def test_complete_rep_examples(fr1):
    a22 = from_set_algebra(small_algebra(2, 2))
    rep = complete_rep(a22)
    assert rep.verify(meets=True)["ok"]
    rep = complete_rep(fr1)
    assert rep.target.size == 8
    r = rep.verify(meets=True)
    assert r["ok"] and r["atom_cover"] and r["principal_preimages"] and r["meets"]
    with pytest.raises(SignatureError):
        complete_rep(from_set_algebra(small_algebra(2, 2, SA)))


def test_complete_rep_on_generated_subalgebras():
    rng = np.random.default_rng(7)
    for n, k in [(2, 2), (3, 2), (3, 3)]:
        alg = small_algebra(n, k)
        for _ in range(3):
            gens = [alg.random_element(rng) for _ in range(int(rng.integers(1, 3)))]
            A = generated_subalgebra(alg, gens)
            for g in gens:
                # each generator is a union of atoms
                assert sum(len(b) for b in A.labels if b <= g) == len(g)
            rep = complete_rep(A)
            assert rep.verify(meets=True, samples=200)["ok"]


def test_meets_detect_a_broken_map(fr1):
    rep = complete_rep(fr1)
    broken = rep.__class__(rep.source, rep.target, rep.images.copy())
    broken.images[0] |= broken.images[1]
    assert not check_meets(broken)
    assert not broken.verify()["boolean"]


def test_invalid_tables_are_rejected():
    tables = {T(0, 1): (1, 1)}
    with pytest.raises(AxiomViolation):
        FiniteAlgebra(TA, 2, 2, tables)
    bad = FiniteAlgebra(TA, 2, 2, tables, validate=False)
    assert bad.violations
    with pytest.raises(AxiomViolation):
        complete_rep(bad)


def test_atom_sum_criterion():
    a22 = from_set_algebra(small_algebra(2, 2, SA))
    res = atom_sum_criterion(a22)
    assert res.holds and res.report["ok"]
    assert atom_sum_criterion(two_element(2, SA)).holds
    g = a22.labels.index(DenseSet.from_points(small_algebra(2, 2, SA).unit, [(0, 1)]))
    h = a22.labels.index(DenseSet.from_points(small_algebra(2, 2, SA).unit, [(1, 0)]))
    res = atom_sum_criterion(a22, (1 << g) | (1 << h), build=False)
    assert not res.holds and res.witness is not None
    with pytest.raises(SignatureError):
        atom_sum_criterion(two_element(2, TA))


def test_relativization():
    alg = small_algebra(2, 2, SA)
    a22 = from_set_algebra(alg)
    diag = alg.element([(0, 0), (1, 1)])
    b = sum(1 << k for k, blk in enumerate(a22.labels) if blk <= diag)
    rl = relativize_Rl(a22, b)
    assert rl.natoms == 2 and not rl.violations
    assert relativize_Rl(a22, 1).natoms == 1
    with pytest.raises(ValueError):
        relativize_Rl(a22, 0)
    # a b that is not closed under the replacements breaks the axioms
    g = sum(1 << k for k, blk in enumerate(a22.labels) if blk <= alg.element([(0, 1), (1, 0)]))
    assert relativize_Rl(a22, g).violations


def test_complex_algebras():
    unit = Unit(2, 2)
    cm = complex_algebra(frame_of_unit(unit, SAD))
    direct = from_set_algebra(SetAlgebra(unit, SAD))
    assert cm.tables == direct.tables and cm.diagonals == direct.diagonals
    empty = complex_algebra(Frame(2, TA, [], {}))
    assert empty.natoms == 0 and empty.top == 0
    s2 = classify_unit(2, 2, [(0, 1), (1, 0)])
    assert complex_algebra(frame_of_unit(s2, TA)).tables == from_set_algebra(SetAlgebra(s2, TA)).tables


def test_diagonal_quotient():
    alg = small_algebra(2, 2, SAD)
    A = from_set_algebra(alg)
    distinct = next(k for k, blk in enumerate(A.labels) if blk.sequences() == [(1, 0)])
    const = next(k for k, blk in enumerate(A.labels) if blk.sequences() == [(0, 0)])
    q = diagonal_quotient_rep(A, distinct)
    assert q.checks["unchanged"] and q.checks["equivalence"] and q.checks["well_defined"]
    assert q.checks["substitutions"] and q.checks["diagonals"]
    q = diagonal_quotient_rep(A, const)
    assert q.checks["base"] == 1 and q.classes == (0, 0)
    with pytest.raises(SignatureError):
        diagonal_quotient_rep(from_set_algebra(small_algebra(2, 2)), 0)


def test_non_variety_n2():
    cert = non_variety_certificate(2)
    assert cert.construction == "e_i"
    assert cert.f == Transformation((1, 0))
    assert cert.unit.sequences() == [(1, 0), (0, 1)]
    assert cert.X.sequences() == [(1, 0)]
    assert cert.ok and cert.replay()
    assert cert.small_algebras["A_22"]["search"] == "exhaustive"


def test_non_variety_odd_n_uses_fallback():
    cert = non_variety_certificate(3, samples=500)
    assert not cert.e_i_construction_holds
    assert cert.construction == "S_n" and cert.ok and cert.replay()
    assert disjoint_transpositions(3) == Transformation((1, 0, 2))
    with pytest.raises(ValueError):
        non_variety_certificate(1)


def test_certificate_replay_detects_tampering():
    cert = non_variety_certificate(2)
    cert.counterexample_holds = False
    assert not cert.replay()


def test_meets_on_many_atoms_use_pairwise_disjointness():
    alg = small_algebra(3, 3)
    A = from_set_algebra(alg)
    assert A.natoms > 16
    rep = complete_rep(A)
    assert check_meets(rep, samples=50)
    broken = rep.__class__(rep.source, rep.target, rep.images.copy())
    broken.images[3] |= broken.images[4]
    assert not check_meets(broken, samples=0)
