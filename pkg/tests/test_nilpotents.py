import random

import numpy as np
import pytest

from ringlab.algebras import (
    Algebra,
    direct_sum,
    matrix_algebra,
    triangular_algebra,
    truncated_poly,
    zero_mult_algebra,
)
from ringlab.errors import BudgetExceeded, Budgets
from ringlab.nilpotents import (
    InnerAutomorphism,
    commutators_in_n2span,
    fn2_span,
    inner_automorphisms,
    is_invariant,
    n2_span,
    nil_report,
    nilpotency_index,
    nilpotent_elements,
    nilpotent_span,
    nilpotent_units,
    scalar_multiple_units,
    sq_zero_units,
    square_zero_elements,
    vandermonde_bracket_check,
    zero_product_balanced,
)
from ringlab.samplers import invariant_orbit_closure
from ringlab.subspaces import (
    Subspace,
    bracket_space,
    center,
    commutator_subspace,
    span,
    whole_space,
    zero_space,
)


def test_square_zero_m2f2(m2f2):
    scan = square_zero_elements(m2f2)
    found = sorted(tuple(int(c) for c in r) for r in scan.rows)
    assert found == [(0, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 0), (1, 1, 1, 1)]
    assert scan.exhaustive
    # E12 + E21 squares to the identity, not zero
    s = m2f2.element([0, 1, 1, 0])
    assert not (s * s).is_zero()


def test_square_zero_trunc(f3t2):
    scan = square_zero_elements(f3t2)
    assert sorted(tuple(map(int, r)) for r in scan.rows) == [(0, 0), (0, 1), (0, 2)]
    f3 = truncated_poly(1, 3)
    assert n2_span(f3).space.is_zero()


def test_nilpotent_span_goldens(m2f3, t2f2):
    ns = nilpotent_span(m2f3)
    assert ns.space == commutator_subspace(m2f3)  # sl2 = trace zero
    tri = nilpotent_span(t2f2)
    assert tri.space == span(t2f2, [t2f2.element([0, 1, 0])])  # strict upper corner
    f2 = truncated_poly(1, 2)
    assert nilpotent_span(f2).space.is_zero()


def test_nilpotency_index(m2f3, f3t3):
    assert nilpotency_index(m2f3, m2f3.basis_element(1)) == 2
    assert nilpotency_index(m2f3, m2f3.zero_element()) == 1
    assert nilpotency_index(m2f3, m2f3.unit_element()) is None
    t = f3t3.basis_element(1)
    assert nilpotency_index(f3t3, t) == 3


def test_fn2_goldens(m2f3, m2f5, f3t3):
    fn = fn2_span(m2f3)
    assert fn.exhaustive
    assert fn.space == commutator_subspace(m2f3)
    assert m2f3.basis_element(1) in fn.space  # E12 = E12*E22 with E22*E12 = 0
    assert fn2_span(m2f5).space == commutator_subspace(m2f5)
    # commutative: zy = 0 iff yz = 0, so the span is zero
    assert fn2_span(f3t3).space.is_zero()


def test_fn2_witnesses_replay(m2f3, m2f2):
    for a in (m2f3, m2f2):
        fn = fn2_span(a)
        assert len(fn.witnesses) == fn.space.dim
        for y, z in fn.witnesses:
            yz = a.mul_coords(y, z)
            zy = a.mul_coords(z, y)
            assert not zy.any()
            assert a.mul_coords(yz, yz).tolist() == [0] * a.dim  # (yz)^2 = y(zy)z = 0
            assert fn.space.contains_row(yz)


def test_fn2_subset_of_n2(m2f2, m2f3, m2f5, t2f3):
    for a in (m2f2, m2f3, m2f5, t2f3):
        rep = nil_report(a)
        assert rep.fn2_span <= rep.n2_span
        assert rep.n2_span <= rep.n_span
        assert rep.fn2_span <= commutator_subspace(a)


def test_fn2_sampled_is_certified_subspan():
    big = direct_sum(matrix_algebra(2, 3), matrix_algebra(2, 3))
    fn = fn2_span(big, Budgets().pairs)  # 3^16 pairs exceeds the budget
    assert not fn.exhaustive
    assert fn.space == commutator_subspace(big)  # sampled generators already span
    for y, z in fn.witnesses:
        assert not big.mul_coords(z, y).any()


def test_inner_automorphisms_gl2(m2f2):
    auts = inner_automorphisms(m2f2)
    assert len(auts) == 6  # |GL2(F2)|
    x = m2f2.element([1, 1, 0, 1])
    for aut in auts:
        y = aut.apply(x)
        back = InnerAutomorphism(aut.unitization, aut.u_inv, aut.u).apply(y)
        assert back == x


def test_inner_automorphism_budget(m2f5):
    with pytest.raises(BudgetExceeded):
        inner_automorphisms(m2f5, budget=100)


def test_sq_zero_units_action(m2f3):
    auts = sq_zero_units(m2f3)
    assert len(auts) == len(square_zero_elements(m2f3).rows)
    # u = 1 + E12: conjugation of E21 is (1+E12)E21(1-E12)
    e12 = m2f3.basis_element(1).coords
    aut = [t for t in auts if (t.u == (m2f3.unit.coords + e12) % 3).all()][0]
    e21 = m2f3.basis_element(2)
    u = m2f3.element(aut.u)
    uinv = m2f3.element(aut.u_inv)
    assert aut.apply(e21) == u * e21 * uinv


def test_nilpotent_units(f3t3):
    auts = nilpotent_units(f3t3)
    amb = f3t3
    for aut in auts:
        prod = amb.mul_coords(aut.u, aut.u_inv)
        assert (prod == amb.unit.coords).all()
    # x = t has index 3: u = 1 + t + t^2
    t = f3t3.basis_element(1).coords
    target = (f3t3.unit.coords + t + f3t3.mul_coords(t, t)) % 3
    assert any((aut.u == target).all() for aut in auts)


def test_zero_mult_conjugation_trivial(z2f3):
    auts = inner_automorphisms(z2f3)
    rows = np.eye(2, dtype=np.int64)
    for aut in auts:
        assert (aut.apply_rows(rows) == rows).all()


def test_is_invariant(m2f3):
    auts = inner_automorphisms(m2f3)
    assert is_invariant(commutator_subspace(m2f3), auts)[0]
    assert is_invariant(center(m2f3), auts)[0]
    ok, witness = is_invariant(span(m2f3, [m2f3.basis_element(0)]), auts)
    assert not ok and witness is not None
    aut, row = witness
    conj = aut.apply_rows(row[None, :])[0]
    assert not span(m2f3, [m2f3.basis_element(0)]).contains_row(conj)


def test_span_invariance_under_all_inner(m2f2, m2f3, t2f3):
    # conjugation preserves square-zero, nilpotent, and factorizable elements
    for a in (m2f2, m2f3, t2f3):
        auts = inner_automorphisms(a)
        rep = nil_report(a)
        for space in (rep.n2_span, rep.n_span, rep.fn2_span):
            assert is_invariant(space, auts)[0]


def test_zpb_goldens(m2f3, f3t2, z2f3):
    assert zero_product_balanced(m2f3).balanced
    res = zero_product_balanced(f3t2)
    assert not res.balanced
    assert (0, 1, 0) in res.defect_triples  # x=1, y=t, z=1: t(x)1 - 1(x)t escapes
    assert res.defect_basis.shape[0] >= 1
    assert zero_product_balanced(z2f3).balanced


def test_zpb_budget():
    big = direct_sum(matrix_algebra(2, 3), matrix_algebra(2, 3))
    with pytest.raises(BudgetExceeded):
        zero_product_balanced(big, Budgets().pairs)


def test_commutators_in_n2span(m2f3, m2f5, f3t3, m2f2):
    assert commutators_in_n2span(m2f3)
    assert commutators_in_n2span(m2f5)
    assert commutators_in_n2span(f3t3)  # vacuous: [R,R] = 0
    assert commutators_in_n2span(m2f2)
    both = direct_sum(truncated_poly(1, 2), matrix_algebra(2, 2))
    assert commutators_in_n2span(both)


def test_vandermonde_gates(m2f2, m2f3):
    z = zero_space(m2f3)
    ok, reason = vandermonde_bracket_check(z, m2f3.zero_element())
    assert ok is True and "0" in reason
    # p = 2, k = 2: skipped (needs three field elements), never failed
    x2 = m2f2.basis_element(1)
    verdict, reason = vandermonde_bracket_check(whole_space(m2f2), x2)
    assert verdict is None and "three" in reason
    # k - 1 >= p: skipped
    f2t3 = truncated_poly(3, 2)
    t = f2t3.basis_element(1)
    verdict, reason = vandermonde_bracket_check(whole_space(f2t3), t)
    assert verdict is None and "distinct" in reason
    with pytest.raises(ValueError, match="nilpotent"):
        vandermonde_bracket_check(whole_space(m2f3), m2f3.unit_element())


def test_vandermonde_predicted_true_on_orbit_closures():
    # index-3 nilpotent over F5: k-1 = 2 < 5
    m3f5 = matrix_algebra(3, 5)
    x = m3f5.element(
        (np.eye(3, 3, 1, dtype=np.int64)).reshape(-1)  # E12 + E23
    )
    assert nilpotency_index(m3f5, x) == 3
    rng = random.Random(17)
    auts = scalar_multiple_units(m3f5, x)
    for _ in range(5):
        rows = [[rng.randrange(5) for _ in range(9)] for _ in range(2)]
        v = invariant_orbit_closure(Subspace(m3f5, np.asarray(rows)), auts)
        verdict, reason = vandermonde_bracket_check(v, x)
        assert verdict is True


def test_vandermonde_m2f3_square_zero(m2f3):
    # k = 2 over F3: the square-zero argument applies (field has 3 elements)
    x = m2f3.basis_element(1)
    rng = random.Random(18)
    auts = scalar_multiple_units(m2f3, x)
    for _ in range(10):
        rows = [[rng.randrange(3) for _ in range(4)] for _ in range(2)]
        v = invariant_orbit_closure(Subspace(m2f3, np.asarray(rows)), auts)
        verdict, _ = vandermonde_bracket_check(v, x)
        assert verdict is True


def test_sampled_scan_flag():
    m3f3 = matrix_algebra(3, 3)  # 3^9 elements
    scan = square_zero_elements(m3f3, budget=2**10)
    assert not scan.exhaustive
    for r in scan.rows:
        assert not m3f3.mul_coords(r, r).any()
