"""Compile a general circuit into an exponentially wider matchgate circuit.

An m-qubit general circuit, measured in Z on line 1, is converted in three
steps:

  1. a gadget `w` on lines (1, m+1) of an (m+1)-qubit register makes the
     line-1 readout of the original circuit appear as the expectation of a
     *real* observable of the widened circuit, so complex amplitudes can be
     traded for one extra qubit;
  2. every gate, and the gadget itself, is turned real ("realified"): a
     unitary U on K qubits becomes the real orthogonal
     Re(U) (x) 1  -  Im(U) (x) YT on K+1 rebits, where YT = [[0, 1], [-1, 0]]
     and the extra rebit B is shared by all gates;
  3. the resulting real orthogonal operator on m+2 rebits, dimension
     2n = 2^{m+3}, is realized as the rotation of a width-n matchgate
     circuit: it is factored into plane rotations, each of which lifts to a
     short ladder of fermionic swaps around one local plane rotation gate.

The output width is n = 2^{m+2} / 2 = 2^{m+1}, i.e. exactly 2^{m+1} lines.
Exponential by design; guarded at EXPAND_MAX_WIDTH input qubits.

Rebit register layout (width m + 2): lines 1..m carry the original qubits,
line m+1 is the realification rebit B, line m+2 (least significant) is the
gadget rebit A.  The matchgate circuit's rotation is assembled as
V_hat^T . Z_A, where V_hat is the realified widened circuit and Z_A flips
the sign of every odd rotation dimension pair; the transpose and the Z_A
layer together make the matchgate readout reproduce <Z_1> exactly rather
than up to sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .circuits import (
    GateApp,
    GeneralCircuit,
    GuardError,
    MatchgateCircuit,
    gate_matrix,
    reals_from_complex,
    validate_or_raise,
)

EXPAND_MAX_WIDTH = 4

# YT = iY: the real rotation by which realification represents multiplication
# by -i on the extra rebit.
YTILDE = np.array([[0.0, 1.0], [-1.0, 0.0]])

# v = |+><+| (x) 1 + |-><-| (x) YT, then swap the pair: the two-qubit gadget
# making Re and Im parts of the line-1 amplitudes separately observable.
_PLUS = np.array([[0.5, 0.5], [0.5, 0.5]])
_MINUS = np.array([[0.5, -0.5], [-0.5, 0.5]])
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=float
)
W_GADGET = _SWAP @ (np.kron(_PLUS, np.eye(2)) + np.kron(_MINUS, YTILDE))


def append_w_gadget(circuit: GeneralCircuit) -> GeneralCircuit:
    """Widen by one qubit and append the readout gadget on lines (1, m+1).

    Requires an all-zero input (fold basis inputs into x gates first).
    """
    validate_or_raise(circuit)
    if circuit.input.strip("0"):
        raise ValueError("gadget step expects an all-zero input")
    m = circuit.width
    gadget = GateApp("u2", (1, m + 1), reals_from_complex(W_GADGET))
    return GeneralCircuit(m + 1, circuit.gates + (gadget,), "0" * (m + 1))


@dataclass(frozen=True)
class RealGate:
    """A real orthogonal gate on a few rebits (det +1, orthogonality 1e-9)."""

    matrix: np.ndarray = field(repr=False)
    lines: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.lines)
        if not 1 <= k <= 3:
            raise ValueError(f"rebit arity must be 1..3, got {k}")
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (2**k, 2**k):
            raise ValueError(f"matrix shape {m.shape} does not match {k} rebits")
        dev = np.abs(m.T @ m - np.eye(2**k)).max()
        if dev > 1e-9:
            raise ValueError(f"matrix not orthogonal (deviation {dev:.3g})")
        object.__setattr__(self, "matrix", m)


def realify_gate(u: np.ndarray, lines: tuple[int, ...]) -> RealGate:
    """The real orthogonal gate Re(u) (x) 1 - Im(u) (x) YT.

    `u` acts on the rebits lines[:-1]; the last entry of `lines` is the
    shared rebit B carrying the new least significant tensor slot.  The
    result always lands in SO (determinant +1, equal to |det u|^2), which
    is asserted rather than corrected.
    """
    u = np.asarray(u, dtype=complex)
    k = len(lines) - 1
    if u.shape != (2**k, 2**k):
        raise ValueError(f"unitary shape {u.shape} does not match {k} qubits + B")
    dev = np.abs(u.conj().T @ u - np.eye(2**k)).max()
    if dev > 1e-9:
        raise ValueError(f"input not unitary (deviation {dev:.3g})")
    out = np.kron(u.real, np.eye(2)) - np.kron(u.imag, YTILDE)
    if np.linalg.det(out) < 0.0:
        raise RuntimeError("realified gate left SO; its determinant should be +1")
    return RealGate(out, tuple(lines))


def _permute_to_sorted(u: np.ndarray, lines: tuple[int, ...]) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reorder a gate's tensor factors so its line list is ascending."""
    order = tuple(sorted(range(len(lines)), key=lambda i: lines[i]))
    if order == tuple(range(len(lines))):
        return u, lines
    j = len(lines)
    t = u.reshape((2,) * (2 * j))
    perm = list(order) + [j + o for o in order]
    t = t.transpose(perm)
    return t.reshape(2**j, 2**j), tuple(lines[i] for i in order)


def two_level_to_matchgates(a: int, b: int, rot: np.ndarray, n: int) -> list[GateApp]:
    """Matchgates realizing a plane rotation of dimensions (a, b) of SO(2n).

    `rot` is the 2x2 block [[c, -s], [s, c]] (dimension a first).  When both
    dimensions fall inside one line pair's window a single local rotation
    gate suffices; otherwise a ladder of fermionic swaps walks dimension b
    down into a's window and back out.
    """
    if not 1 <= a < b <= 2 * n:
        raise ValueError(f"bad dimension pair ({a}, {b}) for {n} lines")
    c, s = float(rot[0, 0]), float(rot[1, 0])
    if abs(rot[0, 1] + s) > 1e-12 or abs(rot[1, 1] - c) > 1e-12:
        raise ValueError("expected a 2x2 rotation [[c, -s], [s, c]]")
    theta = math.atan2(s, c)

    def local_rot(k: int, la: int, lb: int) -> GateApp:
        plane = algebra.PLANES.index((la, lb)) + 1
        # The rot gate's own convention carries [la, lb] = +sin, so realizing
        # plane_rotation(la, lb, theta) needs the opposite angle.
        return GateApp("rot", (k,), (float(plane), -theta))

    ka = (a + 1) // 2
    kb = (b + 1) // 2
    if kb <= ka + 1:
        k = min(ka, n - 1)
        off = 2 * k - 2
        return [local_rot(k, a - off, b - off)]

    # Swap ladder: W on (k, k+1) exchanges dimension pairs without signs, so
    # dimension b rides up from pair kb to pair ka+1, rotates, and rides back.
    ladder = [GateApp("w", (k,)) for k in range(kb - 1, ka, -1)]
    b_up = 2 * ka + 1 if b % 2 == 1 else 2 * ka + 2
    off = 2 * ka - 2
    core = local_rot(ka, a - off, b_up - off)
    return ladder + [core] + ladder[::-1]


def _two_level_rot2(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _global_dim(local_dim: int, gate_lines: tuple[int, ...], spectators: tuple[int, ...], assignment: int, width: int) -> int:
    """1-based rotation dimension of a basis label split across gate lines
    (carrying the bits of local_dim - 1, MSB first) and spectator lines
    (carrying the bits of `assignment`, MSB first, lines ascending)."""
    j = len(gate_lines)
    index = 0
    for pos, line in enumerate(gate_lines):
        bit = (local_dim - 1) >> (j - 1 - pos) & 1
        index |= bit << (width - line)
    ns = len(spectators)
    for pos, line in enumerate(spectators):
        bit = assignment >> (ns - 1 - pos) & 1
        index |= bit << (width - line)
    return index + 1


def expand_circuit(circuit: GeneralCircuit, width_guard: int = EXPAND_MAX_WIDTH) -> MatchgateCircuit:
    """Compile an m-qubit general circuit to a 2^{m+1}-line matchgate circuit.

    The result runs on the all-zero input and reproduces the source
    circuit's <Z_1> (on its basis input) as its own <Z_1>.
    """
    validate_or_raise(circuit)
    m = circuit.width
    if m > width_guard:
        raise GuardError(
            f"expanding {m} qubits needs 2^{m + 1} lines; guard is {width_guard} qubits"
        )

    # Fold the basis input into x gates, then append the readout gadget.
    prefix = [GateApp("x", (q + 1,)) for q, c in enumerate(circuit.input) if c == "1"]
    widened = append_w_gadget(
        GeneralCircuit(m, tuple(prefix) + circuit.gates, "0" * m)
    )

    rebits = m + 2  # + realification rebit B (line m+1) + gadget rebit A (last)
    n = 2 ** (rebits - 1)
    out: list[GateApp] = []

    # The Z_A layer: sign-flip of both dimensions of every odd-indexed pair,
    # written as pi-rotations in the planes (4t-2, 4t).
    pi_rot = _two_level_rot2(math.pi)
    for t in range(1, n // 2 + 1):
        out.extend(two_level_to_matchgates(4 * t - 2, 4 * t, pi_rot, n))

    # V_hat^T: the realified gates, transposed, in reverse order.
    for g in reversed(widened.gates):
        u = gate_matrix(g)
        lines = tuple(l if l <= m else m + 2 for l in g.lines) + (m + 1,)
        rg = realify_gate(u, lines)
        real, lines = _permute_to_sorted(rg.matrix.T, rg.lines)
        spectators = tuple(q for q in range(1, rebits + 1) if q not in lines)
        for f in algebra.givens_factor(real):
            rot = _two_level_rot2(f.theta)
            for sigma in range(2 ** len(spectators)):
                da = _global_dim(f.a, lines, spectators, sigma, rebits)
                db = _global_dim(f.b, lines, spectators, sigma, rebits)
                # Sorted lines make the dim order monotone in the local order.
                assert da < db
                out.extend(two_level_to_matchgates(da, db, rot, n))

    result = MatchgateCircuit(n, tuple(out), "0" * n, 1)
    validate_or_raise(result)
    return result
