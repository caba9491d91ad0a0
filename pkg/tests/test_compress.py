"""Compilation of matchgate circuits into exponentially narrower general circuits."""

import numpy as np
import pytest

from matchgates import randgen
from matchgates.circuits import GateApp, MatchgateCircuit
from matchgates.compress import (
    MAX_LABEL_DISTANCE,
    ControlPattern,
    _mcx,
    _rot2,
    _toffoli,
    align_conjugation,
    compress_circuit,
    compress_gate_stream,
    gray,
    gray_converter_circuit,
    gray_to_index,
    lambda_r_decompose,
    pad_to_power_of_two,
)
from matchgates.oracle import expectation_z, run_statevector
from matchgates.simulate import simulate_expectation
from matchgates.standardize import standardize

from conftest import dense_unitary


# ----- Gray labels -----------------------------------------------------------


def test_gray_sequence_for_three_bits():
    labels = [gray(i, 3) for i in range(8)]
    assert labels == ["000", "001", "011", "010", "110", "111", "101", "100"]


def test_adjacent_gray_labels_differ_in_one_bit():
    for mu in (2, 3, 4, 5):
        for i in range((1 << mu) - 1):
            a, b = gray(i, mu), gray(i + 1, mu)
            assert sum(x != y for x, y in zip(a, b)) == 1


def test_gray_labelling_is_a_bijection():
    labels = [gray(i, 4) for i in range(16)]
    assert len(set(labels)) == 16
    for i, label in enumerate(labels):
        assert gray_to_index(label) == i


def test_gray_index_range_is_checked():
    with pytest.raises(ValueError):
        gray(8, 3)
    with pytest.raises(ValueError):
        gray(-1, 3)


def test_plane_partners_stay_within_the_label_distance_budget():
    # Two-level rotations produced from 4x4 factors touch dimension pairs
    # (base+a, base+b) with a < b <= 4 over an even base; their Gray labels
    # must stay within the bounded-distance alignment budget.
    mu = 5
    for base in range(0, (1 << mu) - 4 + 1, 2):
        for a in range(1, 5):
            for b in range(a + 1, 5):
                la, lb = gray(base + a - 1, mu), gray(base + b - 1, mu)
                assert sum(x != y for x, y in zip(la, lb)) <= MAX_LABEL_DISTANCE


# ----- Binary <-> Gray relabeling circuit ------------------------------------


def test_converter_is_empty_for_one_bit():
    assert gray_converter_circuit(1) == []
    with pytest.raises(ValueError):
        gray_converter_circuit(0)


def test_converter_maps_binary_labels_to_gray_labels():
    mu = 3
    u = dense_unitary(gray_converter_circuit(mu), mu)
    for i in range(1 << mu):
        col = u[:, i]
        target = int(gray(i, mu), 2)
        assert col[target] == pytest.approx(1.0)
        assert np.abs(col).sum() == pytest.approx(1.0)


def test_converter_composed_with_its_reverse_is_identity():
    mu = 4
    gates = gray_converter_circuit(mu)
    u = dense_unitary(gates + gates[::-1], mu)
    assert np.abs(u - np.eye(1 << mu)).max() <= 1e-12


# ----- Alignment conjugation --------------------------------------------------


def test_alignment_of_distance_one_labels_needs_no_gates():
    gates, pattern = align_conjugation("0100", "0110")
    assert gates == []
    assert pattern.target == 3
    assert pattern.controls == ((1, 0), (2, 1), (4, 0))


def test_alignment_four_bit_example():
    gates, pattern = align_conjugation("0101", "1000")
    assert gates == [
        GateApp("x", (2,)),
        GateApp("x", (4,)),
        GateApp("cu1", (1, 2), gates[2].params),
        GateApp("cu1", (1, 4), gates[3].params),
    ]
    assert pattern == ControlPattern(1, ((2, 0), (3, 0), (4, 0)))


def test_alignment_conjugation_behaves_on_basis_states(rng):
    mu = 4
    for _ in range(40):
        ia, ib = rng.choice(1 << mu, size=2, replace=False)
        la, lb = format(ia, f"0{mu}b"), format(ib, f"0{mu}b")
        gates, pattern = align_conjugation(la, lb)
        u = dense_unitary(gates, mu)
        for label in (la, lb):
            col = u[:, int(label, 2)]
            hit = int(np.argmax(np.abs(col)))
            assert col[hit] == pytest.approx(1.0)  # permutation, no signs
            out = format(hit, f"0{mu}b")
            # Target bit keeps the label's own value; every control is met.
            assert out[pattern.target - 1] == label[pattern.target - 1]
            for line, val in pattern.controls:
                assert out[line - 1] == str(val)


def test_alignment_rejects_degenerate_labels():
    with pytest.raises(ValueError):
        align_conjugation("0101", "0101")
    with pytest.raises(ValueError):
        align_conjugation("01", "011")


# ----- Multi-controlled rotations ---------------------------------------------


def _expected_controlled(pattern: ControlPattern, rot: np.ndarray, width: int):
    """Dense controlled-rotation on `width` lines, ancilla untouched."""
    dim = 1 << width
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bits = format(i, f"0{width}b")
        if all(bits[l - 1] == str(v) for l, v in pattern.controls):
            t = pattern.target - 1
            for new_bit in (0, 1):
                j = int(bits[:t] + str(new_bit) + bits[t + 1 :], 2)
                out[j, i] += rot[new_bit, int(bits[t])]
        else:
            out[i, i] = 1.0
    return out


def test_toffoli_network_is_exact():
    u = dense_unitary(_toffoli(1, 2, 3), 3)
    expected = np.eye(8, dtype=complex)
    expected[6:, 6:] = [[0, 1], [1, 0]]
    assert np.abs(u - expected).max() <= 1e-12


def test_multi_controlled_x_with_one_dirty_scratch_line():
    for r in (3, 4, 5):
        controls = tuple(range(1, r + 1))
        target = r + 1
        scratch = r + 2
        gates = _mcx(controls, target, (scratch,))
        u = dense_unitary(gates, r + 2)
        pattern = ControlPattern(target, tuple((c, 1) for c in controls))
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        expected = _expected_controlled(pattern, x, r + 2)
        # Exact on every scratch state, i.e. the scratch line is restored.
        assert np.abs(u - expected).max() <= 1e-12


def test_zero_and_one_control_rotations_are_single_gates():
    rot = _rot2(0.7)
    no_controls = lambda_r_decompose(ControlPattern(1, ()), rot, ancilla=2)
    assert [g.kind for g in no_controls] == ["u1"]
    one_control = lambda_r_decompose(ControlPattern(2, ((1, 1),)), rot, ancilla=3)
    assert [g.kind for g in one_control] == ["cu1"]
    assert one_control[0].lines == (1, 2)


def test_controlled_rotation_decomposition_is_exact(rng):
    for r in range(0, 6):
        for trial in range(3):
            theta = float(rng.uniform(-np.pi, np.pi))
            values = tuple(int(v) for v in rng.integers(0, 2, r))
            perm = rng.permutation(r + 2) + 1
            target = int(perm[0])
            lines = tuple(int(p) for p in perm[1 : r + 1])
            ancilla = int(perm[r + 1])
            pattern = ControlPattern(
                target, tuple(sorted(zip(lines, values)))
            )
            rot = _rot2(theta)
            gates = lambda_r_decompose(pattern, rot, ancilla)
            width = r + 2
            u = dense_unitary(gates, width)
            expected = _expected_controlled(pattern, rot, width)
            assert np.abs(u - expected).max() <= 1e-10


def test_controlled_rotation_gate_count_is_quadratically_bounded():
    rot = _rot2(0.3)
    worst = 0.0
    for r in range(1, 9):
        pattern = ControlPattern(r + 1, tuple((l, 1) for l in range(1, r + 1)))
        count = len(lambda_r_decompose(pattern, rot, ancilla=r + 2))
        worst = max(worst, count / r**2)
    assert worst <= 10.0


def test_ancilla_collisions_are_rejected():
    rot = _rot2(0.4)
    pattern = ControlPattern(1, ((2, 1), (3, 1), (4, 0)))
    with pytest.raises(ValueError):
        lambda_r_decompose(pattern, rot, ancilla=1)
    with pytest.raises(ValueError):
        lambda_r_decompose(pattern, rot, ancilla=3)


def test_non_rotation_blocks_are_rejected():
    with pytest.raises(ValueError):
        lambda_r_decompose(
            ControlPattern(1, ()), np.array([[0.0, 1.0], [1.0, 0.0]]), ancilla=2
        )


# ----- Full compilation --------------------------------------------------------


def test_padding_to_power_of_two_widths(rng):
    c3 = randgen.random_matchgate_circuit(3, 9, rng)
    padded = pad_to_power_of_two(c3)
    assert padded.width == 4
    assert padded.input == c3.input + "0"
    assert padded.allow_idle
    c4 = randgen.random_matchgate_circuit(4, 9, rng)
    assert pad_to_power_of_two(c4) == c4
    c5 = randgen.random_matchgate_circuit(5, 9, rng)
    assert pad_to_power_of_two(c5).width == 8


def test_compression_requires_the_standard_form(rng):
    c = randgen.random_matchgate_circuit(4, 8, rng, input_bits="0100", measure_line=1)
    with pytest.raises(ValueError):
        compress_circuit(c)
    k2 = randgen.random_matchgate_circuit(4, 8, rng, input_bits="0000", measure_line=2)
    with pytest.raises(ValueError):
        compress_circuit(k2)
    c6 = randgen.random_matchgate_circuit(6, 8, rng, input_bits="000000", measure_line=1)
    with pytest.raises(ValueError):
        compress_circuit(c6)


def test_compressed_width_is_logarithmic(rng):
    for n in (2, 4, 8, 16, 32):
        c = randgen.random_matchgate_circuit(
            n, 4, rng, input_bits="0" * n, measure_line=1
        )
        out = compress_circuit(c)
        mu = int(np.log2(2 * n))
        assert out.width == mu + 2
        assert out.flavor == "qc"
        assert out.input == "0" * (mu + 2)


def test_gate_stream_matches_the_one_shot_compiler(rng):
    c = randgen.random_matchgate_circuit(4, 6, rng, input_bits="0000", measure_line=1)
    streamed = tuple(compress_gate_stream(c))
    assert streamed == compress_circuit(c).gates
    assert streamed[0] == GateApp("h", (1,))
    assert streamed[-1] == GateApp("h", (1,))


def test_trivial_rotations_compile_to_the_bare_interference_frame():
    # Zero-angle rotations factor away entirely, leaving h, S, S^-1, h: the
    # compiled circuit must then read out +1 like the identity circuit.
    gates = tuple(GateApp("rot", (k,), (1.0, 0.0)) for k in (1, 2, 3))
    c = MatchgateCircuit(4, gates, "0000", measure_line=1)
    out = compress_circuit(c)
    assert expectation_z(run_statevector(out), 1) == pytest.approx(1.0, abs=1e-12)


def test_compressed_circuit_reproduces_the_expectation(rng):
    for _ in range(4):
        c = randgen.random_matchgate_circuit(
            4, 12, rng, input_bits="0000", measure_line=1
        )
        want = simulate_expectation(c)
        out = compress_circuit(c)
        got = expectation_z(run_statevector(out), 1)
        assert abs(want - got) <= 1e-8


def test_compression_composes_with_the_standardizer(rng):
    c = randgen.random_matchgate_circuit(4, 10, rng, input_bits="1010", measure_line=3)
    out = compress_circuit(standardize(c))
    want = simulate_expectation(c)
    got = expectation_z(run_statevector(out), 1)
    assert abs(want - got) <= 1e-8
