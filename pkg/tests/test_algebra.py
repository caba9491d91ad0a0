"""Matchgate blocks, Majorana operators, rotations, and Givens factorization."""

import numpy as np
import pytest

from matchgates import randgen
from matchgates.algebra import (
    FERMIONIC_SWAP,
    GXX,
    LOCAL_OPS,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PLANES,
    PlaneRotation,
    fermionic_swap,
    givens_factor,
    is_matchgate,
    jordan_wigner,
    make_matchgate,
    matchgate_of_rotation,
    plane_rotation,
    rotation_of_matchgate,
    split_matchgate,
)


def test_make_matchgate_places_blocks_on_parity_subspaces():
    g = make_matchgate(PAULI_Z, PAULI_X)
    assert np.allclose(g, FERMIONIC_SWAP)
    a, b = split_matchgate(g)
    assert np.allclose(a, PAULI_Z)
    assert np.allclose(b, PAULI_X)


def test_make_matchgate_rejects_determinant_mismatch():
    with pytest.raises(ValueError):
        make_matchgate(np.eye(2), PAULI_X)  # det +1 vs det -1


def test_make_matchgate_accepts_matched_determinants():
    g = make_matchgate(PAULI_Z, PAULI_X)  # both det -1
    assert is_matchgate(g)


def test_double_flip_gate_is_a_matchgate():
    assert is_matchgate(GXX)
    assert np.allclose(GXX, np.kron(PAULI_X, PAULI_X))


def test_fermionic_swap_is_an_involution():
    w = fermionic_swap()
    assert np.allclose(w @ w, np.eye(4))
    assert np.allclose(w, make_matchgate(PAULI_Z, PAULI_X))


def test_fermionic_swap_action_on_basis_states():
    w = fermionic_swap()
    assert np.allclose(w @ np.eye(4)[3], -np.eye(4)[3])  # |11> -> -|11>
    assert np.allclose(w @ np.eye(4)[1], np.eye(4)[2])  # |01> -> |10>


def test_majorana_operators_anticommute(rng):
    n = 3
    cs = [jordan_wigner(n, j) for j in range(1, 2 * n + 1)]
    for j, cj in enumerate(cs):
        for l, cl in enumerate(cs):
            anti = cj @ cl + cl @ cj
            expected = 2.0 * np.eye(2**n) if j == l else np.zeros((2**n, 2**n))
            assert np.abs(anti - expected).max() <= 1e-12


def test_majorana_operators_are_hermitian_and_square_to_identity():
    for j in range(1, 7):
        c = jordan_wigner(3, j)
        assert np.abs(c - c.conj().T).max() <= 1e-12
        assert np.abs(c @ c - np.eye(8)).max() <= 1e-12


def test_rotation_of_swap_gate_is_the_pair_exchange_permutation():
    r = rotation_of_matchgate(FERMIONIC_SWAP)
    expected = np.zeros((4, 4))
    expected[0, 2] = expected[1, 3] = expected[2, 0] = expected[3, 1] = 1.0
    assert np.abs(r - expected).max() <= 1e-12


def test_rotation_of_double_flip_gate_is_diagonal_signs():
    r = rotation_of_matchgate(GXX)
    assert np.abs(r - np.diag([1.0, -1.0, -1.0, 1.0])).max() <= 1e-12


def test_rotation_is_special_orthogonal(rng):
    from matchgates.circuits import complex_from_reals

    for _ in range(20):
        p = randgen.random_matchgate_params(rng)
        g = make_matchgate(complex_from_reals(p[:8]), complex_from_reals(p[8:]))
        r = rotation_of_matchgate(g)
        assert np.abs(r.T @ r - np.eye(4)).max() <= 1e-10
        assert abs(np.linalg.det(r) - 1.0) <= 1e-10


def test_rotation_map_is_a_homomorphism(rng):
    from matchgates.circuits import complex_from_reals

    for _ in range(10):
        p1 = randgen.random_matchgate_params(rng)
        p2 = randgen.random_matchgate_params(rng)
        g1 = make_matchgate(complex_from_reals(p1[:8]), complex_from_reals(p1[8:]))
        g2 = make_matchgate(complex_from_reals(p2[:8]), complex_from_reals(p2[8:]))
        lhs = rotation_of_matchgate(g2 @ g1)
        rhs = rotation_of_matchgate(g2) @ rotation_of_matchgate(g1)
        assert np.abs(lhs - rhs).max() <= 1e-9


def test_rotation_round_trip_up_to_global_phase(rng):
    from matchgates.circuits import complex_from_reals

    for _ in range(10):
        p = randgen.random_matchgate_params(rng)
        g = make_matchgate(complex_from_reals(p[:8]), complex_from_reals(p[8:]))
        v = matchgate_of_rotation(rotation_of_matchgate(g))
        assert abs(abs(np.trace(g.conj().T @ v)) - 4.0) <= 1e-7


def test_rotation_surjectivity_round_trip(rng):
    for _ in range(25):
        r = randgen.random_so(4, rng)
        back = rotation_of_matchgate(matchgate_of_rotation(r))
        assert np.abs(back - r).max() <= 1e-8


def test_matchgate_of_rotation_output_is_a_matchgate(rng):
    for _ in range(10):
        r = randgen.random_so(4, rng)
        assert is_matchgate(matchgate_of_rotation(r))


def test_local_op_basis_and_plane_table():
    assert np.allclose(LOCAL_OPS[0], np.kron(PAULI_X, np.eye(2)))
    assert np.allclose(LOCAL_OPS[1], np.kron(PAULI_Y, np.eye(2)))
    assert np.allclose(LOCAL_OPS[2], np.kron(PAULI_Z, PAULI_X))
    assert np.allclose(LOCAL_OPS[3], np.kron(PAULI_Z, PAULI_Y))
    assert PLANES == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def test_givens_factor_reproduces_random_rotations(rng):
    for d in (2, 3, 4, 6, 8):
        r = randgen.random_so(d, rng)
        factors = givens_factor(r)
        assert len(factors) <= d * (d - 1) // 2
        check = np.eye(d)
        for f in factors:
            check = f.matrix(d) @ check
        assert np.abs(check - r).max() <= 1e-10


def test_givens_factor_angles_are_bounded():
    rng = np.random.default_rng(5)
    for _ in range(20):
        r = randgen.random_so(5, rng)
        for f in givens_factor(r):
            assert np.isfinite(f.theta)
            assert abs(f.theta) <= np.pi + 1e-12


def test_givens_factor_handles_sign_pairs():
    # Diagonal sign patterns with det +1 need the pi-rotation fallback.
    r = np.diag([-1.0, -1.0, 1.0, 1.0])
    factors = givens_factor(r)
    check = np.eye(4)
    for f in factors:
        check = f.matrix(4) @ check
    assert np.abs(check - r).max() <= 1e-10


def test_givens_factor_rejects_reflections():
    with pytest.raises(ValueError):
        givens_factor(np.diag([1.0, 1.0, 1.0, -1.0]))


def test_plane_rotation_convention():
    r = plane_rotation(4, 1, 3, 0.3)
    assert r[2, 0] == pytest.approx(np.sin(0.3))
    assert r[0, 2] == pytest.approx(-np.sin(0.3))
    assert PlaneRotation(1, 3, 0.3).matrix(4) == pytest.approx(r)
