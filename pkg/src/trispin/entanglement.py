"""Reduced density matrices and entanglement measures for 3-qubit pure states.

The pair density matrix comes from writing the state against the traced
particle's (|1>, |1b>) factor,

    |psi> = (f0|11> + f1|11b> + f2|1b1> + f3|1b1b>)|1>
          + (g0|1b1b> + g1|1b1> + g2|11b> + g3|11>)|1b>,

note the reversed basis order of the g row.  The 3-tangle is computed
two independent ways: spectrally, tau = 4 sqrt(l1) sqrt(l2) from the two
nonzero eigenvalues of rho rho~ with rho~ = (sy (x) sy) rho* (sy (x) sy);
and polynomially, tau = 4 |d1 - 2 d2 + 4 d3| with

    d1 = (f0 g0)^2 + (f1 g1)^2 + (f2 g2)^2 + (f3 g3)^2
    d2 = f0 g0 (f1 g1 + f2 g2 + f3 g3)
         + f1 g1 f2 g2 + f2 g2 f3 g3 + f3 g3 f1 g1
    d3 = f0 f3 g1 g2 + f1 f2 g0 g3.

Pair tangles are squared Wootters concurrences of the reduced pair.
Both tau and the pair tangles are invariant under local unitaries and
under permutations of the particles.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import SIGMA_Y, require_normalized

_YY = np.kron(SIGMA_Y, SIGMA_Y)

IMAG_TOL = 1e-9
NEG_EIG_TOL = 1e-8


def _pair_axes(traced: int) -> tuple[int, int, int]:
    if traced not in (1, 2, 3):
        raise ValueError(f"traced particle must be 1, 2 or 3, got {traced}")
    pair = tuple(k for k in (0, 1, 2) if k != traced - 1)
    return pair[0], pair[1], traced - 1


def split(state, traced: int = 3):
    """The (f, g) coefficient rows of the state against the traced particle.

    Returns two length-4 complex arrays; f pairs with the traced
    particle up and follows the pair basis (|11>,|11b>,|1b1>,|1b1b>),
    g pairs with it down and runs through the same basis reversed.
    """
    a0, a1, tr = _pair_axes(traced)
    arr = require_normalized(state).reshape(2, 2, 2).transpose(a0, a1, tr)
    f = arr[..., 0].reshape(4).copy()
    g = arr[..., 1].reshape(4)[::-1].copy()
    return f, g


def reduced_density(state, traced: int = 3) -> np.ndarray:
    """4x4 density matrix of the two particles left after tracing one out."""
    f, g = split(state, traced)
    gt = g[::-1]  # undo the reversed ordering: gt[p] multiplies pair basis p
    return np.outer(f, f.conj()) + np.outer(gt, gt.conj())


def spin_flipped(rho) -> np.ndarray:
    """The Wootters tilde operation (sy (x) sy) rho* (sy (x) sy)."""
    rho = np.asarray(rho, dtype=complex)
    return _YY @ rho.conj() @ _YY


def _sqrt_eigenvalues(rho) -> np.ndarray:
    """Square roots of eig(rho rho~), cleaned and sorted descending."""
    ev = np.linalg.eigvals(rho @ spin_flipped(rho))
    if np.abs(ev.imag).max() > IMAG_TOL:
        raise RuntimeError(f"eigenvalues of rho rho~ not real: max imag = {np.abs(ev.imag).max()}")
    ev = ev.real
    if ev.min() < -NEG_EIG_TOL:
        raise RuntimeError(f"eigenvalue of rho rho~ below tolerance: {ev.min()}")
    return np.sqrt(np.sort(np.clip(ev, 0.0, None))[::-1])


def tangle3_spectral(state, traced: int = 3) -> float:
    """3-tangle from the spectrum of rho rho~ of a reduced pair."""
    lam = _sqrt_eigenvalues(reduced_density(state, traced))
    return float(4.0 * lam[0] * lam[1])


def tangle3_polynomial(state, traced: int = 3) -> float:
    """3-tangle from the quartic polynomial in the (f, g) coefficients."""
    f, g = split(state, traced)
    fg = f * g
    d1 = np.sum(fg**2)
    d2 = fg[0] * (fg[1] + fg[2] + fg[3]) + fg[1] * fg[2] + fg[2] * fg[3] + fg[3] * fg[1]
    d3 = f[0] * f[3] * g[1] * g[2] + f[1] * f[2] * g[0] * g[3]
    return float(4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3))


def tangle2(state, pair) -> float:
    """Squared concurrence of the reduced pair (p, q), p, q in {1, 2, 3}."""
    pair = tuple(pair)
    if sorted(pair) not in ([1, 2], [1, 3], [2, 3]):
        raise ValueError(f"pair must name two distinct particles out of 1, 2, 3, got {pair}")
    traced = next(k for k in (1, 2, 3) if k not in pair)
    lam = _sqrt_eigenvalues(reduced_density(state, traced))
    c = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return float(c * c)


@dataclass(frozen=True)
class TangleReport:
    """All tangles of a pure 3-qubit state; method is 'spectral' or 'polynomial'."""

    tau123: float
    tau12: float
    tau13: float
    tau23: float
    method: str


def tangle_report(state, method: str = "polynomial") -> TangleReport:
    if method == "spectral":
        tau123 = tangle3_spectral(state)
    elif method == "polynomial":
        tau123 = tangle3_polynomial(state)
    else:
        raise ValueError(f"method must be 'spectral' or 'polynomial', got {method!r}")
    return TangleReport(
        tau123=tau123,
        tau12=tangle2(state, (1, 2)),
        tau13=tangle2(state, (1, 3)),
        tau23=tangle2(state, (2, 3)),
        method=method,
    )
