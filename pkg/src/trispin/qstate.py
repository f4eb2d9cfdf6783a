"""Complex amplitude algebra for one and three spin-1/2 particles.

States are plain complex numpy vectors: shape (2,) for a single qubit
(|1>, |1b>) = (spin up, spin down), shape (8,) for three qubits.  The
three-particle basis |ijk> is indexed by 4*b(i) + 2*b(j) + b(k) with
b(1) = 0 and b(1b) = 1, so particle 1 is the most significant bit:

    0 |111>   1 |11b>   2 |1b1>   3 |1bb>
    4 |b11>   5 |b1b>   6 |bb1>   7 |bbb>

('b' stands for a bar, i.e. spin down.)  All constructors normalize and
all values are treated as immutable once built.
"""
from __future__ import annotations

import numpy as np

NORM_TOL = 1e-12

BASIS_LABELS = ("111", "11b", "1b1", "1bb", "b11", "b1b", "bb1", "bbb")

KET_UP = np.array([1.0, 0.0], dtype=complex)
KET_DOWN = np.array([0.0, 1.0], dtype=complex)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


def index_of(label: str) -> int:
    """Basis index of a label like '1b1' (particle 1 first)."""
    if len(label) != 3 or any(c not in "1b" for c in label):
        raise ValueError(f"bad basis label {label!r}")
    return sum((1 << (2 - n)) for n, c in enumerate(label) if c == "b")


def label_of(index: int) -> str:
    if not 0 <= index < 8:
        raise ValueError(f"basis index {index} out of range 0..7")
    return BASIS_LABELS[index]


def basis_ket(label: str) -> np.ndarray:
    """The basis state |ijk> as an 8-vector."""
    v = np.zeros(8, dtype=complex)
    v[index_of(label)] = 1.0
    return v


def norm(x) -> float:
    return float(np.linalg.norm(x))


def normalize(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    n = np.linalg.norm(x)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return x / n


def require_normalized(x, tol: float = NORM_TOL, what: str = "state") -> np.ndarray:
    """Return x as a complex array, rejecting norms off unity by more than tol."""
    x = np.asarray(x, dtype=complex)
    if abs(np.vdot(x, x).real - 1.0) > tol:
        raise ValueError(f"{what} is not normalized: |{what}|^2 = {np.vdot(x, x).real!r}")
    return x


def qubit(up: complex, down: complex) -> np.ndarray:
    """Single-particle spin state from (up, down) amplitudes, normalized."""
    return normalize(np.array([up, down], dtype=complex))


def tensor3(a, b, c) -> np.ndarray:
    """Product state a (x) b (x) c of three normalized single-particle states."""
    a = require_normalized(a, what="first factor")
    b = require_normalized(b, what="second factor")
    c = require_normalized(c, what="third factor")
    return np.kron(np.kron(a, b), c)


def inner(x, y) -> complex:
    """Inner product <x|y>, conjugate-linear in the first argument."""
    return complex(np.vdot(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)))


def probabilities(x) -> np.ndarray:
    """Outcome probabilities P_ijk = |amplitude|^2 over the 8 basis states."""
    x = require_normalized(x)
    return np.abs(x) ** 2


def marginals(x):
    """Single-particle and pair outcome probabilities.

    Returns
    -------
    singles : (3, 2) array
        singles[p] = (P_up, P_down) for particle p (0-based).
    pairs : dict
        pairs[(p, q)] for p < q is a 2x2 array with [a, b] entry the
        probability that particle p shows outcome a and q shows b
        (0 = up, 1 = down).
    """
    pr = probabilities(x).reshape(2, 2, 2)
    singles = np.stack([pr.sum(axis=tuple(k for k in range(3) if k != p)) for p in range(3)])
    pairs = {}
    for p in range(3):
        for q in range(p + 1, 3):
            other = next(k for k in range(3) if k not in (p, q))
            pairs[(p, q)] = pr.sum(axis=other)
    return singles, pairs
