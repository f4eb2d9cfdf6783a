"""Coupling of three spin-1/2 angular momenta and the cyclic invariant Z.

The operators (J1 + J2 + J3)^2, J1z + J2z + J3z and

    Z = (J1 x J2) . J3

commute pairwise, so their simultaneous eigenbasis |j m zeta> resolves
the full 8-dimensional space.  Z is invariant under cyclic permutations
of the particles and changes sign under each transposition, which is
what singles out this basis: the familiar maximally entangled states sit
in it directly.  Its spectrum is {0 (x4), +sqrt3/4 (x2), -sqrt3/4 (x2)}.

The zeta labels attached to the catalog below are the numerically
computed eigenvalues of Z on the stated amplitude patterns (the tests
re-derive them from the operator).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import PAULI, inner, require_normalized

_ZETA = np.sqrt(3.0) / 4.0
_W = np.exp(2j * np.pi / 3)  # primitive cube root of unity


def _site_op(site: int, op) -> np.ndarray:
    mats = [np.eye(2, dtype=complex)] * 3
    mats[site] = op
    return np.kron(np.kron(mats[0], mats[1]), mats[2])


def build_operators():
    """The commuting triple (J^2, Jz, Z) as 8x8 matrices."""
    J = [[_site_op(s, 0.5 * PAULI[c]) for c in range(3)] for s in range(3)]
    Jtot = [J[0][c] + J[1][c] + J[2][c] for c in range(3)]
    J2 = sum(Jc @ Jc for Jc in Jtot)
    Jz = Jtot[2]
    Z = np.zeros((8, 8), dtype=complex)
    for (a, b, c), sign in (
        ((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
        ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1),
    ):
        Z += sign * J[0][a] @ J[1][b] @ J[2][c]
    return J2, Jz, Z


@dataclass(frozen=True)
class ZEigenLabel:
    """Eigenvalue triple (j, m, zeta) of (J^2, Jz, Z); J^2 eigenvalue is j(j+1)."""

    j: float
    m: float
    zeta: float

    def __str__(self):
        return f"|j={self.j:g} m={self.m:+g} zeta={self.zeta:+.6f}>"


def _cat_state(*terms) -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    for idx, amp in terms:
        v[idx] = amp
    return v / np.linalg.norm(v)


def catalog() -> tuple[tuple[ZEigenLabel, np.ndarray], ...]:
    """The eight simultaneous eigenstates of (J^2, Jz, Z) with their labels.

    Quartet with j = 3/2 (zeta = 0), then the two j = 1/2 doublets whose
    relative phases e^{+-i 2pi/3} select zeta = +-sqrt3/4.  Basis indices
    follow qstate's encoding (particle 1 = most significant bit).
    """
    rows = (
        (ZEigenLabel(1.5, +1.5, 0.0), _cat_state((0, 1))),
        (ZEigenLabel(1.5, -1.5, 0.0), _cat_state((7, 1))),
        (ZEigenLabel(1.5, +0.5, 0.0), _cat_state((4, 1), (2, 1), (1, 1))),
        (ZEigenLabel(1.5, -0.5, 0.0), _cat_state((3, 1), (5, 1), (6, 1))),
        (ZEigenLabel(0.5, +0.5, +_ZETA), _cat_state((4, _W), (2, _W.conjugate()), (1, 1))),
        (ZEigenLabel(0.5, +0.5, -_ZETA), _cat_state((4, _W.conjugate()), (2, _W), (1, 1))),
        (ZEigenLabel(0.5, -0.5, +_ZETA), _cat_state((3, _W), (5, _W.conjugate()), (6, 1))),
        (ZEigenLabel(0.5, -0.5, -_ZETA), _cat_state((3, _W.conjugate()), (5, _W), (6, 1))),
    )
    return rows


@dataclass(frozen=True)
class Classification:
    """Expansion of a state over the (J^2, Jz, Z) eigenbasis."""

    labels: tuple[ZEigenLabel, ...]
    coefficients: np.ndarray
    dominant_index: int
    ambiguous: bool

    @property
    def dominant(self) -> ZEigenLabel | None:
        return None if self.ambiguous else self.labels[self.dominant_index]


def classify(state, tie_tol: float = 1e-12) -> Classification:
    """Coefficients <jm zeta|state> over the catalog, plus the dominant row."""
    state = require_normalized(state)
    rows = catalog()
    coeff = np.array([inner(vec, state) for _, vec in rows])
    mags = np.abs(coeff)
    order = np.argsort(mags)[::-1]
    ambiguous = bool(mags[order[0]] - mags[order[1]] <= tie_tol)
    return Classification(
        labels=tuple(lab for lab, _ in rows),
        coefficients=coeff,
        dominant_index=int(order[0]),
        ambiguous=ambiguous,
    )


def permutation_matrix(perm) -> np.ndarray:
    """8x8 matrix sending |x1 x2 x3> to the state whose slot k holds x_perm[k]."""
    perm = tuple(perm)
    if sorted(perm) != [1, 2, 3]:
        raise ValueError(f"perm must be a permutation of (1, 2, 3), got {perm}")
    P = np.zeros((8, 8), dtype=complex)
    for src in range(8):
        bits = ((src >> 2) & 1, (src >> 1) & 1, src & 1)
        new = tuple(bits[p - 1] for p in perm)
        dst = (new[0] << 2) | (new[1] << 1) | new[2]
        P[dst, src] = 1.0
    return P


def permutation_action(perm, state) -> np.ndarray:
    """Permute the tensor slots of a 3-particle state."""
    state = require_normalized(state)
    return permutation_matrix(perm) @ state


def parity(perm) -> int:
    perm = tuple(perm)
    inversions = sum(
        1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else +1


def check_z_parity(perm, tol: float = 1e-12) -> int:
    """Sign of Z under the slot permutation, verified as an operator identity.

    Asserts P^dag Z P = sign(perm) Z entrywise within tol and returns
    the sign: +1 for cyclic permutations, -1 for transpositions.
    """
    _, _, Z = build_operators()
    P = permutation_matrix(perm)
    sign = parity(perm)
    resid = np.abs(P.conj().T @ Z @ P - sign * Z).max()
    if resid > tol:
        raise AssertionError(f"Z parity identity violated for perm {perm}: residual {resid}")
    return sign
