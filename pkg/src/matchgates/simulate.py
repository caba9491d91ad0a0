"""Polynomial-time simulation of matchgate circuits.

A width-n matchgate circuit with gates U_N ... U_1 induces the SO(2n)
rotation R = R_N ... R_1, each R_t acting on the four Majorana dimensions
(2k-1 .. 2k+2) of its line pair.  For basis input x the readout is

    <Z_k(x)> = (R S(x) R^T)[2k, 2k-1]        (1-based dimensions)

where S(x) is the antisymmetric pairing matrix of the input.  The fast path
never forms R: it pulls the two basis vectors e_{2k-1}, e_{2k} backwards
through the gate list in O(N + n) time and applies S(x) sparsely.
"""

from __future__ import annotations

import numpy as np

from . import algebra
from .circuits import (
    GuardError,
    MatchgateCircuit,
    complex_from_reals,
    validate_or_raise,
)

REFERENCE_MAX_WIDTH = 64

# Rotation of the fermionic swap W: exchange dimensions (1, 2) <-> (3, 4).
_ROT_W = np.array(
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
)
# Rotation of G(X, X).
_ROT_GXX = np.diag([1.0, -1.0, -1.0, 1.0])


def s_matrix(x: str) -> np.ndarray:
    """The 2n x 2n input pairing matrix S(x) for a bit string x.

    Per line k with sign s_k = (-1)^{x_k}:  S[2k, 2k-1] = s_k and
    S[2k-1, 2k] = -s_k (1-based).  S is antisymmetric, orthogonal, and
    S^{-1} = S^T = -S.
    """
    bits = _parse_bits(x)
    n = bits.size
    s = np.zeros((2 * n, 2 * n))
    signs = 1.0 - 2.0 * bits
    s[2 * np.arange(n) + 1, 2 * np.arange(n)] = signs
    s[2 * np.arange(n), 2 * np.arange(n) + 1] = -signs
    return s


def _parse_bits(x) -> np.ndarray:
    if isinstance(x, str):
        if set(x) - {"0", "1"}:
            raise ValueError(f"input must be a bit string, got {x!r}")
        return np.array([int(c) for c in x], dtype=float)
    return np.asarray(x, dtype=float)


def gate_rotation(gate) -> np.ndarray:
    """The 4x4 rotation induced by one mg-flavor gate application."""
    kind = gate.kind
    if kind == "w":
        return _ROT_W.copy()
    if kind == "gxx":
        return _ROT_GXX.copy()
    if kind == "rot":
        a, b = algebra.PLANES[int(gate.params[0]) - 1]
        r = np.eye(4)
        c, s = np.cos(gate.params[1]), np.sin(gate.params[1])
        # rot stores exp(+(theta/2) c'_a c'_b), whose rotation carries
        # [a, b] = +sin(theta): the transpose of the plane_rotation convention.
        r[a - 1, a - 1] = c
        r[b - 1, b - 1] = c
        r[a - 1, b - 1] = s
        r[b - 1, a - 1] = -s
        return r
    if kind == "mg":
        a = complex_from_reals(gate.params[:8])
        b = complex_from_reals(gate.params[8:])
        return algebra.rotation_of_matchgate(algebra.make_matchgate(a, b))
    raise ValueError(f"not an mg-flavor gate: {kind!r}")


_MG_CHUNK = 4096


def _transposed_rotations(circuit: MatchgateCircuit) -> tuple[np.ndarray, np.ndarray]:
    """Per-gate transposed rotations (T, 4, 4) plus 0-based window offsets (T,).

    Explicit `mg` gates are batched through one einsum per chunk; the named
    kinds are filled from closed forms.
    """
    T = len(circuit.gates)
    rots = np.empty((T, 4, 4))
    offs = np.empty(T, dtype=np.int64)
    mg_idx: list[int] = []
    for t, g in enumerate(circuit.gates):
        offs[t] = 2 * g.lines[0] - 2
        kind = g.kind
        if kind == "w":
            rots[t] = _ROT_W  # symmetric: equals its transpose
        elif kind == "gxx":
            rots[t] = _ROT_GXX
        elif kind == "rot":
            rots[t] = gate_rotation(g).T
        else:
            mg_idx.append(t)

    c = np.stack(algebra.LOCAL_OPS)
    gates = circuit.gates
    for lo in range(0, len(mg_idx), _MG_CHUNK):
        chunk = mg_idx[lo : lo + _MG_CHUNK]
        flat = np.fromiter(
            (v for t in chunk for v in gates[t].params), float, count=16 * len(chunk)
        ).reshape(len(chunk), 16)
        z = flat[:, 0::2] + 1j * flat[:, 1::2]  # (C, 8): a row-major, then b
        us = np.zeros((len(chunk), 4, 4), dtype=complex)
        us[:, 0, 0], us[:, 0, 3], us[:, 3, 0], us[:, 3, 3] = z[:, 0], z[:, 1], z[:, 2], z[:, 3]
        us[:, 1, 1], us[:, 1, 2], us[:, 2, 1], us[:, 2, 2] = z[:, 4], z[:, 5], z[:, 6], z[:, 7]
        # R[t][j, l] = (1/4) Re tr(U^dag c'_j U c'_l) via four batched matmuls
        # (M_j = U^dag c'_j U; the trace against c'_l is a 16-term contraction),
        # then store the transpose (swap j/l).
        udag = us.conj().transpose(0, 2, 1)
        m = np.stack([udag @ (c[j] @ us) for j in range(4)], axis=1)
        rots[chunk] = 0.25 * np.einsum("tjpq,lqp->tlj", m, c, optimize=True).real
    return rots, offs


def _pair_columns(circuit: MatchgateCircuit, k: int) -> np.ndarray:
    """Columns (R^T e_{2k-1}, R^T e_{2k}) via reverse propagation, O(N + n)."""
    n = circuit.width
    rots, offs = _transposed_rotations(circuit)
    x = np.zeros((2 * n, 2))
    x[2 * k - 2, 0] = 1.0
    x[2 * k - 1, 1] = 1.0
    offlist = offs.tolist()
    for t in range(len(offlist) - 1, -1, -1):
        w = offlist[t]
        x[w : w + 4] = rots[t] @ x[w : w + 4]
    return x


def _apply_s_sparse(v: np.ndarray, bits: np.ndarray) -> np.ndarray:
    signs = 1.0 - 2.0 * bits
    out = np.empty_like(v)
    out[0::2] = -signs * v[1::2]
    out[1::2] = signs * v[0::2]
    return out


def simulate_expectation(circuit: MatchgateCircuit, k: int | None = None) -> float:
    """<Z_k> on the circuit's basis input, in O(N + n) after validation."""
    validate_or_raise(circuit)
    if k is None:
        k = circuit.measure_line
    if not 1 <= k <= circuit.width:
        raise ValueError(f"line {k} out of range 1..{circuit.width}")
    x = _pair_columns(circuit, k)
    bits = _parse_bits(circuit.input)
    sv = _apply_s_sparse(x[:, 0], bits)
    return float(x[:, 1] @ sv)


def simulate_expectation_reference(circuit: MatchgateCircuit, k: int | None = None) -> float:
    """Reference path: accumulate the dense 2n x 2n rotation, then read one entry."""
    validate_or_raise(circuit)
    if circuit.width > REFERENCE_MAX_WIDTH:
        raise GuardError(
            f"width {circuit.width} exceeds the reference-path guard of {REFERENCE_MAX_WIDTH}"
        )
    if k is None:
        k = circuit.measure_line
    if not 1 <= k <= circuit.width:
        raise ValueError(f"line {k} out of range 1..{circuit.width}")
    n = circuit.width
    r = np.eye(2 * n)
    for g in circuit.gates:
        w = 2 * g.lines[0] - 2
        r[w : w + 4, :] = gate_rotation(g) @ r[w : w + 4, :]
    s = s_matrix(circuit.input)
    return float(r[2 * k - 1] @ s @ r[2 * k - 2])


def circuit_rotation(circuit: MatchgateCircuit) -> np.ndarray:
    """The full SO(2n) rotation R = R_N ... R_1 of the circuit."""
    validate_or_raise(circuit)
    if circuit.width > REFERENCE_MAX_WIDTH:
        raise GuardError(
            f"width {circuit.width} exceeds the reference-path guard of {REFERENCE_MAX_WIDTH}"
        )
    n = circuit.width
    r = np.eye(2 * n)
    for g in circuit.gates:
        w = 2 * g.lines[0] - 2
        r[w : w + 4, :] = gate_rotation(g) @ r[w : w + 4, :]
    return r


def output_distribution(
    circuit: MatchgateCircuit, k: int | None = None, method: str = "fast"
) -> tuple[float, float]:
    """(p0, p1) of measuring the chosen line in the computational basis.

    Overshoots of |<Z>| beyond 1 by at most 1e-6 are clamped; anything larger
    signals an internal error and raises.
    """
    if method == "fast":
        z = simulate_expectation(circuit, k)
    elif method == "reference":
        z = simulate_expectation_reference(circuit, k)
    else:
        raise ValueError(f"unknown method {method!r}")
    if abs(z) > 1.0 + 1e-6:
        raise RuntimeError(f"expectation {z} out of [-1, 1] beyond tolerance")
    z = min(1.0, max(-1.0, z))
    p1 = (1.0 - z) / 2.0
    return 1.0 - p1, p1
