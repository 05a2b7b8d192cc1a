import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from periodcoh.complexes import ChainMap, CochainComplex, cohomology, find_homotopy, verify_chain_map
from periodcoh.exactla import Matrix, determinant, rational_solve
from periodcoh.modcat import QQ, QZ, ZZ, Zmod
from periodcoh.periodic import (
    PeriodizationInstance,
    TruncationBudgetError,
    W_on_kernels,
    S_after_W_restricts,
    W_operator,
    S_operator,
    build_one_minus_Dhat,
    factorial_kernel_vector,
    holim_complex,
    is_kernel_vector,
    kernel_basis,
    lim1_sequence_check,
    periodize_ring,
    random_instance,
    s2_periodized_action,
    safe_degrees,
    verify_periodicity,
    z_instance,
)
from periodcoh.towers import Tower

TABLE = {
    "Z": ("0", "FINITE_ADELES_MOD_Q"),
    "Q": ("Q_GROUP", "0"),
    "Q/Z": ("FINITE_ADELES", "0"),
}
FOUR = (ZZ, QQ, QZ, Zmod(6))


def kempner(n):
    """Smallest k with n | k!."""
    k = 1
    while factorial(k) % n:
        k += 1
    return k


@pytest.mark.parametrize("ring", (ZZ, QQ, QZ), ids=str)
def test_table_rows(ring):
    _, t = periodize_ring(ring, 10, 6)
    assert (t.even.symbol, t.odd.symbol) == TABLE[str(ring)]
    assert t.periodic_consistent


@pytest.mark.parametrize("n", (2, 3, 4, 5, 6, 12))
def test_table_rows_mod_n(n):
    _, t = periodize_ring(Zmod(n), 10, 6)
    assert (t.even.symbol, t.odd.symbol) == ("0", "0")
    assert (t.even.pretty, t.odd.pretty) == ("0", "0")


def test_pretty_labels():
    _, t = periodize_ring(ZZ, 10, 6)
    assert t.odd.pretty == "A_f^Q/Q"
    _, t = periodize_ring(QZ, 10, 6)
    assert t.even.pretty == "A_f^Q"


def test_rational_answer_is_stable_in_depth():
    for depth in range(2, 9):
        _, t = periodize_ring(QQ, depth + 2, depth)
        assert (t.even.symbol, t.odd.symbol) == ("Q_GROUP", "0")


@pytest.mark.parametrize("n", (2, 3, 4, 5, 6, 12))
def test_mod_n_answer_is_stable_from_the_kempner_depth(n):
    for depth in range(max(2, kempner(n)), 8):
        _, t = periodize_ring(Zmod(n), depth + 2, depth)
        assert (t.even.symbol, t.odd.symbol) == ("0", "0")


def test_truncation_budget():
    with pytest.raises(TruncationBudgetError):
        z_instance(QQ, 4, 4)
    z_instance(QQ, 5, 4)


def test_finite_cone_cohomology_over_z():
    # finite stage: ker Φ is the last level, coker Φ vanishes
    inst = z_instance(ZZ, 8, 4)
    H = holim_complex(inst)
    assert str(cohomology(H, 0)) == "Z"
    assert str(cohomology(H, 1)) == "0"
    assert list(safe_degrees(inst)) == [0, 1, 2, 3, 4, 5, 6, 7, 8]


def test_factorial_kernel_vector():
    inst = z_instance(QQ, 10, 6)
    v = factorial_kernel_vector(inst, 0)
    assert is_kernel_vector(inst, 0, v)
    assert len(kernel_basis(inst, 0)) == 1
    assert kernel_basis(inst, 1) == []
    # W maps the degree 2 class onto the degree 0 class
    src = [factorial_kernel_vector(inst, 2)]
    assert W_on_kernels(inst, 2, src, [v]).tolist() == [[1]]
    assert S_after_W_restricts(inst, 2, src[0])


def last_coordinate_lift(ring, N):
    """Kernel vector of the depth-N factorial tower whose last coordinate is 1.

    Stacking Φ on top of the last-coordinate projection gives a unimodular
    matrix, so ker Φ maps isomorphically onto the last level.
    """
    A = Tower.factorial(ring, N).equalizer_matrix()
    B = Matrix.block([[A], [Matrix(1, N + 1, [0] * N + [1])]])
    assert determinant(B) in (1, -1)
    x = rational_solve(B, [0] * N + [1])
    assert all(Fraction(c).denominator == 1 for c in x)
    return x


@pytest.mark.parametrize("ring", (ZZ, QZ), ids=str)
def test_kernel_restriction_is_multiplication(ring):
    # in last coordinates, forgetting the top level is x -> (N+1) x
    for N in range(2, 9):
        assert last_coordinate_lift(ring, N + 1)[N] == N + 1


@pytest.mark.parametrize("ring", FOUR, ids=str)
def test_periodicity_identities(ring):
    proof = verify_periodicity(z_instance(ring, 8, 6))
    assert proof.ok, proof.checks
    assert not proof.vacuous
    lo, hi = proof.window
    assert proof.safe_window == (lo + 3, hi - 3)


def test_W_and_S_are_chain_maps():
    inst = z_instance(QQ, 6, 3)
    assert verify_chain_map(W_operator(inst))
    assert verify_chain_map(S_operator(inst))


def test_zero_operator_control():
    # with D = 0 the finite holim keeps the top level, so the identity is not
    # null-homotopic and the homotopy search must fail
    base = z_instance(QQ, 4, 2)
    inst = PeriodizationInstance(base.X, {}, 2)
    H = holim_complex(inst)
    zero = ChainMap(H, H, 0, {})
    assert find_homotopy(ChainMap.identity(H), zero) is None


def test_one_minus_Dhat_shapes():
    inst = z_instance(ZZ, 6, 3)
    phis = build_one_minus_Dhat(inst)
    assert phis[0].matrix.shape == (3, 4)


@pytest.mark.parametrize("ring", FOUR, ids=str)
def test_routes_agree_on_z_model(ring):
    assert all(r.agree for r in lim1_sequence_check(z_instance(ring, 8, 4)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_routes_agree_on_random_instances(seed):
    inst = random_instance(random.Random(seed))
    assert all(r.agree for r in lim1_sequence_check(inst))


def test_random_instances_have_differentials():
    rng = random.Random(7)
    insts = [random_instance(rng) for _ in range(20)]
    assert sum(any(not m.is_zero() for m in i.X.differentials.values()) for i in insts) >= 10
    with pytest.raises(ValueError):
        random_instance(rng, width=13)


def test_s2_periodized_action():
    M, (e1, ew) = s2_periodized_action(10, 6)
    assert M.tolist() == [[1, 0], [1, 1]]


def test_d_must_be_a_chain_map():
    X = CochainComplex(QQ, 0, 2, {0: 1, 1: 1, 2: 1}, {0: Matrix.from_rows([[1]])})
    with pytest.raises(ValueError):
        PeriodizationInstance(X, {2: Matrix.from_rows([[1]])}, 1)
