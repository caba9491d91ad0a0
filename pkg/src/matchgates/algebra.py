"""Matchgate algebra and the rotation picture of two-qubit matchgates.

A matchgate G(A, B) is a two-qubit unitary that acts as A on the even-parity
subspace span{|00>, |11>} and as B on the odd-parity subspace span{|01>, |10>},
with det A = det B.  Conjugation by such a gate rotates the four local
quadratic operators

    c'_1 = X(x)1,  c'_2 = Y(x)1,  c'_3 = Z(x)X,  c'_4 = Z(x)Y

among themselves:  G^dag c'_j G = sum_l R[j, l] c'_l  with R in SO(4).  This
module provides both directions of that correspondence plus the Givens
factorization used to split a rotation into plane rotations.

Conventions (used consistently across the package):
  * lines, dimension indices and operator indices are 1-based,
  * a plane rotation in plane (a, b), a < b, by angle theta has entries
    [a, a] = [b, b] = cos(theta), [b, a] = +sin(theta), [a, b] = -sin(theta),
  * a gate sequence is listed in application order: [g1, g2, ...] means g1
    acts first, so the composite matrix is ... @ g2 @ g1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_UNITARY = 1e-9
TOL_DET_MATCH = 1e-9
TOL_ORTHOGONAL = 1e-9
OMIT_ANGLE = 1e-12
REPRODUCE_TOL = 1e-10

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# c'_1 .. c'_4 in the fixed order above; mutually anticommuting, squaring to 1.
LOCAL_OPS = (
    np.kron(PAULI_X, np.eye(2)),
    np.kron(PAULI_Y, np.eye(2)),
    np.kron(PAULI_Z, PAULI_X),
    np.kron(PAULI_Z, PAULI_Y),
)

# The six planes of SO(4), in the order used by the text format's `rot` gate.
PLANES = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

# Products c'_a c'_b for each plane; each squares to -1.
PLANE_PRODUCTS = tuple(LOCAL_OPS[a - 1] @ LOCAL_OPS[b - 1] for a, b in PLANES)

# Fermionic swap W = G(Z, X): real, symmetric, W^2 = 1.  Its rotation is the
# unsigned permutation exchanging (1, 2) with (3, 4).
FERMIONIC_SWAP = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
    ],
    dtype=complex,
)

# G(X, X) = X(x)X: flips both qubits; rotation diag(1, -1, -1, 1).
GXX = np.kron(PAULI_X, PAULI_X)


def make_matchgate(a: np.ndarray, b: np.ndarray, tol: float = TOL_DET_MATCH) -> np.ndarray:
    """Assemble G(A, B) from the even-subspace block A and odd block B.

    Raises ValueError if either block is not unitary or the determinants
    disagree beyond `tol`.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError("matchgate blocks must be 2x2")
    for name, m in (("a", a), ("b", b)):
        dev = np.abs(m.conj().T @ m - np.eye(2)).max()
        if dev > TOL_UNITARY:
            raise ValueError(f"block {name} is not unitary (deviation {dev:.3g})")
    gap = abs(np.linalg.det(a) - np.linalg.det(b))
    if gap > tol:
        raise ValueError(f"determinant mismatch between blocks ({gap:.3g})")
    g = np.zeros((4, 4), dtype=complex)
    g[0, 0], g[0, 3] = a[0, 0], a[0, 1]
    g[3, 0], g[3, 3] = a[1, 0], a[1, 1]
    g[1, 1], g[1, 2] = b[0, 0], b[0, 1]
    g[2, 1], g[2, 2] = b[1, 0], b[1, 1]
    return g


def split_matchgate(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Extract the (A, B) blocks of a 4x4 matrix laid out as a matchgate."""
    g = np.asarray(g, dtype=complex)
    a = np.array([[g[0, 0], g[0, 3]], [g[3, 0], g[3, 3]]])
    b = np.array([[g[1, 1], g[1, 2]], [g[2, 1], g[2, 2]]])
    return a, b


def fermionic_swap() -> np.ndarray:
    """The swap-with-sign matchgate: exchanges two lines and negates the
    doubly-occupied component.  Equals make_matchgate(Z, X); an involution."""
    return FERMIONIC_SWAP.copy()


def is_matchgate(g: np.ndarray, tol: float = TOL_DET_MATCH) -> bool:
    """True if g is unitary, supported on the two parity blocks, det A = det B."""
    g = np.asarray(g, dtype=complex)
    if g.shape != (4, 4):
        return False
    if np.abs(g.conj().T @ g - np.eye(4)).max() > TOL_UNITARY:
        return False
    mask = np.ones((4, 4), dtype=bool)
    for i, j in ((0, 0), (0, 3), (3, 0), (3, 3), (1, 1), (1, 2), (2, 1), (2, 2)):
        mask[i, j] = False
    if np.abs(g[mask]).max() > tol:
        return False
    a, b = split_matchgate(g)
    return bool(abs(np.linalg.det(a) - np.linalg.det(b)) <= tol)


def jordan_wigner(n: int, j: int) -> np.ndarray:
    """The j-th of the 2n Majorana operators on n qubits, as a dense matrix.

    c_{2k-1} = Z^(k-1) (x) X (x) 1...,  c_{2k} = Z^(k-1) (x) Y (x) 1...
    Line 1 is the leftmost tensor factor.
    """
    if not 1 <= j <= 2 * n:
        raise ValueError(f"operator index {j} out of range for {n} lines")
    k = (j + 1) // 2
    head = PAULI_X if j % 2 == 1 else PAULI_Y
    op = np.eye(1, dtype=complex)
    for _ in range(k - 1):
        op = np.kron(op, PAULI_Z)
    op = np.kron(op, head)
    for _ in range(n - k):
        op = np.kron(op, np.eye(2))
    return op


def rotation_of_matchgate(g: np.ndarray) -> np.ndarray:
    """The SO(4) rotation induced by conjugation with the matchgate g.

    R[j, l] = (1/4) Re tr( (g^dag c'_j g) c'_l ).
    """
    g = np.asarray(g, dtype=complex)
    r = np.zeros((4, 4))
    for j in range(4):
        m = g.conj().T @ LOCAL_OPS[j] @ g
        for l in range(4):
            r[j, l] = np.trace(m @ LOCAL_OPS[l]).real / 4.0
    return r


def rotations_of_matchgates(gs: np.ndarray) -> np.ndarray:
    """Batched rotation_of_matchgate: (T, 4, 4) complex -> (T, 4, 4) real."""
    gs = np.asarray(gs, dtype=complex)
    c = np.stack(LOCAL_OPS)
    return 0.25 * np.einsum("tba,jbc,tcd,lda->tjl", gs.conj(), c, gs, c).real


def plane_rotation(d: int, a: int, b: int, theta: float) -> np.ndarray:
    """Dense d x d rotation by theta in the (a, b) plane (1-based, a < b)."""
    if not 1 <= a < b <= d:
        raise ValueError(f"bad plane ({a}, {b}) for dimension {d}")
    r = np.eye(d)
    c, s = np.cos(theta), np.sin(theta)
    r[a - 1, a - 1] = c
    r[b - 1, b - 1] = c
    r[b - 1, a - 1] = s
    r[a - 1, b - 1] = -s
    return r


@dataclass(frozen=True)
class PlaneRotation:
    """A rotation by `theta` in the coordinate plane (a, b), a < b."""

    a: int
    b: int
    theta: float

    def matrix(self, d: int) -> np.ndarray:
        return plane_rotation(d, self.a, self.b, self.theta)


def rotation_generator_exponential(plane: int, theta: float) -> np.ndarray:
    """exp(+(theta/2) c'_a c'_b) for the given plane index (1..6).

    Closed form: cos(theta/2) 1 + sin(theta/2) c'_a c'_b, since the product
    squares to -1.  Its induced rotation moves e_a toward +e_b by theta under
    the transpose-side convention, i.e. R[a, b] = +sin(theta).
    """
    if not 1 <= plane <= 6:
        raise ValueError(f"plane index {plane} out of range 1..6")
    half = theta / 2.0
    return np.cos(half) * np.eye(4) + np.sin(half) * PLANE_PRODUCTS[plane - 1]


def _check_special_orthogonal(r: np.ndarray, tol: float) -> None:
    dev = np.abs(r.T @ r - np.eye(r.shape[0])).max()
    if dev > tol:
        raise ValueError(f"matrix is not orthogonal (deviation {dev:.3g})")
    if np.linalg.det(r) < 0.0:
        raise ValueError("matrix has determinant -1, not a rotation")


def givens_factor(r: np.ndarray, omit: float = OMIT_ANGLE) -> list[PlaneRotation]:
    """Factor a d x d special-orthogonal matrix into plane rotations.

    Returns at most d(d-1)/2 factors in application order, i.e.
    r = F_K @ ... @ F_1 for the returned list [F_1, ..., F_K].  Angles lie in
    [-pi, pi]; factors with |theta| <= omit are dropped.  The factorization is
    checked to reproduce r to within 1e-10 (max entry), else RuntimeError.
    """
    r = np.asarray(r, dtype=float)
    d = r.shape[0]
    if r.shape != (d, d) or d < 1:
        raise ValueError("expected a square matrix")
    _check_special_orthogonal(r, TOL_ORTHOGONAL)

    m = r.copy()
    applied: list[tuple[int, int, float]] = []  # rotations pre-multiplied onto m

    def rotate(a: int, b: int, phi: float) -> None:
        c, s = np.cos(phi), np.sin(phi)
        ra = m[a - 1].copy()
        rb = m[b - 1].copy()
        m[a - 1] = c * ra - s * rb
        m[b - 1] = s * ra + c * rb
        applied.append((a, b, phi))

    for j in range(1, d):
        hits = 0
        for i in range(j + 1, d + 1):
            if abs(m[i - 1, j - 1]) > omit:
                phi = np.arctan2(-m[i - 1, j - 1], m[j - 1, j - 1])
                rotate(j, i, phi)
                m[i - 1, j - 1] = 0.0
                hits += 1
        if m[j - 1, j - 1] < 0.0:
            # Column already triangular but with a negative pivot: flip the
            # (j, j+1) plane by pi.  Only reachable when no elimination fired,
            # so the factor count stays within d(d-1)/2.
            rotate(j, j + 1, np.pi)

    # m is now upper triangular and orthogonal with positive diagonal, hence 1.
    factors = [
        PlaneRotation(a, b, -phi)
        for a, b, phi in reversed(applied)
        if abs(phi) > omit
    ]

    check = np.eye(d)
    for f in factors:
        check = f.matrix(d) @ check
    dev = np.abs(check - r).max()
    if dev > REPRODUCE_TOL:
        raise RuntimeError(f"givens factorization failed to reproduce input ({dev:.3g})")
    return factors


def matchgate_of_rotation(r: np.ndarray, tol: float = TOL_ORTHOGONAL) -> np.ndarray:
    """A matchgate whose induced rotation equals the given SO(4) matrix.

    The inverse direction of rotation_of_matchgate, fixed up to global phase;
    this construction returns the product of plane-rotation exponentials
    exp(-(theta/2) c'_a c'_b), which lands in the real phase branch.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (4, 4):
        raise ValueError("expected a 4x4 rotation")
    _check_special_orthogonal(r, tol)
    g = np.eye(4, dtype=complex)
    for f in givens_factor(r):
        plane = PLANES.index((f.a, f.b)) + 1
        g = rotation_generator_exponential(plane, -f.theta) @ g
    return g
