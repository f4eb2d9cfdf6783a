"""Time evolution of entangled 3-particle states under local precession.

The initial-state families (basis order as in qstate):

    ghz(eps)      (|111> + eps|bbb>)/sqrt2,              eps = +-1
    w(phi)        (|11b> + e^{-i phi}|1b1> + e^{i phi}|b11>)/sqrt3
    w_flipped(phi)(|bb1> + e^{i phi}|b1b> + e^{-i phi}|1bb>)/sqrt3

with phi in {0, +-2pi/3}.  Evolution applies M1 (x) M2 (x) M3 to the
amplitude vector.  For the special configuration -- all velocities
orthogonal to the field with equal speeds and identical particles -- the
three unitaries coincide, M = [[cos th, -i sin th], [-i sin th, cos th]]
with th = (omega + Omega) t / 2, and all outcome probabilities have
period pi in th.  The closed forms below give those probabilities
directly for comparison against the generic pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .precession import PrecessionUnitary
from .qstate import require_normalized

W_PHASES = (0.0, 2 * np.pi / 3, -2 * np.pi / 3)


def ghz_state(eps: int) -> np.ndarray:
    if eps not in (+1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    v = np.zeros(8, dtype=complex)
    v[0] = 1 / np.sqrt(2)
    v[7] = eps / np.sqrt(2)
    return v


def w_state(phi: float) -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[1] = 1.0
    v[2] = np.exp(-1j * phi)
    v[4] = np.exp(+1j * phi)
    return v / np.sqrt(3)


def w_flipped_state(phi: float) -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[6] = 1.0
    v[5] = np.exp(+1j * phi)
    v[3] = np.exp(-1j * phi)
    return v / np.sqrt(3)


def special_config_unitary(theta: float) -> PrecessionUnitary:
    """The common local unitary of the special configuration at angle theta."""
    return PrecessionUnitary(alpha=complex(np.cos(theta)), beta=complex(np.sin(theta)), t=float(theta))


def evolve(state, u1: PrecessionUnitary, u2: PrecessionUnitary, u3: PrecessionUnitary) -> np.ndarray:
    """Apply M1 (x) M2 (x) M3 to a normalized 8-amplitude state."""
    amp = require_normalized(state).reshape(2, 2, 2)
    out = np.einsum("ip,jq,kr,pqr->ijk", u1.matrix, u2.matrix, u3.matrix, amp)
    return out.reshape(8)


def ghz_closed_form(eps: int, theta: float | np.ndarray) -> np.ndarray:
    """Outcome probabilities for the evolved GHZ state in the special configuration.

    P_111 = P_bbb = (1 - (3/4) sin^2(2 theta))/2 and each of the six
    mixed outcomes carries sin^2(2 theta)/8; independent of eps.
    Returns shape (..., 8) in basis order.
    """
    if eps not in (+1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    theta = np.asarray(theta, dtype=float)
    s2 = np.sin(2 * theta) ** 2
    out = np.empty(theta.shape + (8,))
    out[..., 0] = out[..., 7] = 0.5 * (1 - 0.75 * s2)
    mixed = s2 / 8.0
    for k in range(1, 7):
        out[..., k] = mixed
    return out


def _w_closed_amplitudes(phi: float, theta):
    """Evolved amplitudes of the w(phi) family in the special configuration."""
    theta = np.asarray(theta, dtype=float)
    a, b = np.cos(theta), np.sin(theta)
    f = 1.0 + 2.0 * np.cos(phi)
    ep, em = np.exp(1j * phi), np.exp(-1j * phi)
    amp = np.empty(theta.shape + (8,), dtype=complex)
    amp[..., 0] = -1j * a * a * b * f
    amp[..., 1] = a * (1.0 - b * b * f)
    amp[..., 2] = a * (em - b * b * f)
    amp[..., 3] = 1j * b * (ep - a * a * f)
    amp[..., 4] = a * (ep - b * b * f)
    amp[..., 5] = 1j * b * (em - a * a * f)
    amp[..., 6] = 1j * b * (1.0 - a * a * f)
    amp[..., 7] = -a * b * b * f
    return amp / np.sqrt(3)


def w_closed_form(phi: float, theta: float | np.ndarray) -> np.ndarray:
    """Outcome probabilities for the evolved w(phi) state, special configuration.

    With a = cos theta, b = sin theta and f = 1 + 2 cos phi:
    P_111 = a^4 b^2 f^2 / 3, P_bbb = a^2 b^4 f^2 / 3, the one-down
    triplet goes like a^2 |e^{i phi k} - b^2 f|^2 / 3 and the two-down
    triplet like b^2 |e^{i phi k} - a^2 f|^2 / 3.  For phi = +-2pi/3
    (f = 0) the end components vanish identically.
    Returns shape (..., 8) in basis order.
    """
    amp = _w_closed_amplitudes(phi, theta)
    return np.abs(amp) ** 2


@dataclass(frozen=True)
class TimeSample:
    t: float
    amplitudes: np.ndarray
    probabilities: np.ndarray
    closed_form: np.ndarray | None = None


def time_series(state0, unitaries, t_grid, closed_form=None) -> list[TimeSample]:
    """Evolve state0 across t_grid.

    unitaries(t) must return the triple (u1, u2, u3) of local unitaries
    at time t; closed_form(t), if given, returns the 8 reference
    probabilities attached to each sample.  t_grid must be monotone
    non-decreasing.  Errors from the per-sample evaluation are re-raised
    with the offending t attached.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be a monotone non-decreasing 1-d grid")
    state0 = require_normalized(state0)
    samples = []
    for t in t_grid:
        try:
            u1, u2, u3 = unitaries(t)
            amp = evolve(state0, u1, u2, u3)
            cf = None if closed_form is None else np.asarray(closed_form(t), dtype=float)
        except Exception as exc:
            raise RuntimeError(f"time series evaluation failed at t = {t}") from exc
        samples.append(TimeSample(t=float(t), amplitudes=amp, probabilities=np.abs(amp) ** 2, closed_form=cf))
    return samples
