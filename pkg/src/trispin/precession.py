"""Spin precession of a charged particle in a constant magnetic field.

Builds the local time-evolution unitary M(t) for one spin-1/2 particle
from its kinematics and the field, including the anomalous-moment
contribution.  Natural units throughout: c = hbar = 1, speeds in [0, 1),
rates in inverse time units fixed by the caller's (e, m, B).

Conventions.  The cyclotron rate is omega = eB/(m gamma) and the
anomalous rate Omega = (ahat eB / m gamma) sqrt(gamma^2 - (gamma^2-1)(Bhat.vhat)^2)
with ahat = (g-2)/2.  Both carry the sign of the charge (and of ahat).
The velocity rotates rigidly about Bhat,

    dv/dt = -omega x v,

and the polarization precesses as

    dSigma/dt = -(omega_vec + Omega_vec(t)) x Sigma,

where Omega_vec(t) follows the rotating velocity.  The unitary is the
two-factor product

    M(t) = exp(-i Omega t/2 (Omegahat . sigma)) exp(-i omega t/2 (Bhat . sigma))

whose entries define the precession parameters (alpha, beta) through
M = [[alpha, -i beta], [-i beta*, alpha*]].  Exactly this product solves
the polarization equation above for the state evolved by M(t)^dagger,
i.e. Sigma(t) = <psi0| M sigma M^dagger |psi0>; see tests for the
numerical identification of the orientation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .qstate import PAULI

UNIT_TOL = 1e-12


def _as_unit(v, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{what} must be a 3-vector")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise ValueError(f"{what} must be a unit vector, got |{what}| = {np.linalg.norm(v)!r}")
    return v


def rotate_about(axis, angle: float, vec) -> np.ndarray:
    """Rodrigues rotation of vec about a unit axis by angle (right-handed)."""
    axis = np.asarray(axis, dtype=float)
    vec = np.asarray(vec, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    return c * vec + s * np.cross(axis, vec) + (1 - c) * np.dot(axis, vec) * axis


def pauli_rotation(axis, half_angle: float) -> np.ndarray:
    """exp(-i half_angle (axis . sigma)) in closed form for a unit axis."""
    n_dot_sigma = np.einsum("i,ijk->jk", np.asarray(axis, dtype=float), PAULI)
    return np.cos(half_angle) * np.eye(2) - 1j * np.sin(half_angle) * n_dot_sigma


@dataclass(frozen=True)
class FieldConfig:
    """Constant magnetic field of magnitude B along the unit vector bhat."""

    B: float
    bhat: tuple[float, float, float]

    def __post_init__(self):
        if self.B <= 0:
            raise ValueError(f"field magnitude must be positive, got {self.B}")
        b = _as_unit(self.bhat, "bhat")
        object.__setattr__(self, "bhat", tuple(float(x) for x in b))

    @property
    def bhat_vec(self) -> np.ndarray:
        return np.asarray(self.bhat, dtype=float)


@dataclass(frozen=True)
class ParticleKinematics:
    """Mass, charge, anomalous moment ahat = (g-2)/2, speed and direction."""

    mass: float
    charge: float
    anomaly: float
    speed: float
    vhat: tuple[float, float, float]

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not 0 <= self.speed < 1:
            raise ValueError(f"speed must lie in [0, 1), got {self.speed}")
        v = _as_unit(self.vhat, "vhat")
        object.__setattr__(self, "vhat", tuple(float(x) for x in v))

    @property
    def gamma(self) -> float:
        return 1.0 / np.sqrt(1.0 - self.speed**2)

    @property
    def vhat_vec(self) -> np.ndarray:
        return np.asarray(self.vhat, dtype=float)


@dataclass(frozen=True)
class PrecessionRates:
    """Cyclotron and anomalous precession rates for one particle.

    omega and Omega are signed; (l1, l3) are the components of the
    anomalous axis Omegahat in the orthonormal frame (Bhat, Bhat x vhat,
    Bhat x (Bhat x vhat)) -- the middle component vanishes identically.
    omega_vec / Omega_vec are the same data as lab-frame 3-vectors.
    degenerate flags |Bhat.vhat| = 1, where that frame is undefined but
    the axis reduces to Bhat itself.
    """

    omega: float
    Omega: float
    l1: float
    l3: float
    omega_vec: np.ndarray = field(repr=False)
    Omega_vec: np.ndarray = field(repr=False)
    degenerate: bool = False


def rates(fld: FieldConfig, p: ParticleKinematics) -> PrecessionRates:
    """Precession rates omega = eB/(m gamma) and the anomalous rate/axis."""
    bhat = fld.bhat_vec
    vhat = p.vhat_vec
    g = p.gamma
    c0 = float(np.dot(bhat, vhat))
    degenerate = abs(abs(c0) - 1.0) <= UNIT_TOL

    omega = p.charge * fld.B / (p.mass * g)
    pref = p.anomaly * omega
    Omega_vec = pref * (g * bhat - (g - 1.0) * c0 * vhat)
    Omega = pref * np.sqrt(max(g * g - (g * g - 1.0) * c0 * c0, 0.0))
    Omega1 = pref * (g - (g - 1.0) * c0 * c0)
    Omega3 = pref * (g - 1.0) * c0 * np.sqrt(max(1.0 - c0 * c0, 0.0))
    if Omega == 0.0:
        l1, l3 = 1.0, 0.0
    else:
        l1, l3 = Omega1 / Omega, Omega3 / Omega
    return PrecessionRates(
        omega=omega,
        Omega=Omega,
        l1=float(l1),
        l3=float(l3),
        omega_vec=omega * bhat,
        Omega_vec=Omega_vec,
        degenerate=degenerate,
    )


@dataclass(frozen=True)
class PrecessionUnitary:
    """Precession parameters (alpha, beta) of M = [[a, -ib], [-ib*, a*]] at time t."""

    alpha: complex
    beta: complex
    t: float

    def __post_init__(self):
        r = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(r - 1.0) > 1e-12:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {r!r}, not 1")

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([[a, -1j * b], [-1j * np.conj(b), np.conj(a)]])


def unitary(r: PrecessionRates, bhat, t: float) -> PrecessionUnitary:
    """Closed-form precession parameters at time t.

    bhat holds the components (b1, b2, b3) of the field direction in the
    spin quantization frame; the anomalous axis enters through (l1, l3)
    of ``r`` and is assumed to have no 2-component in the same frame.
    Equals the two-exponential product built from the same components.
    """
    b1, b2, b3 = _as_unit(bhat, "bhat")
    l1, l3 = r.l1, r.l3
    if abs(l1 * l1 + l3 * l3 - 1.0) > 1e-9:
        raise ValueError(f"(l1, l3) = ({l1}, {l3}) is not a unit axis")
    c, s = np.cos(r.omega * t / 2.0), np.sin(r.omega * t / 2.0)
    cp, sp = np.cos(r.Omega * t / 2.0), np.sin(r.Omega * t / 2.0)
    alpha = (cp - 1j * l3 * sp) * (c - 1j * b3 * s) - l1 * sp * (b1 + 1j * b2) * s
    beta = (cp - 1j * l3 * sp) * (b1 - 1j * b2) * s + l1 * sp * (c + 1j * b3 * s)
    return PrecessionUnitary(alpha=complex(alpha), beta=complex(beta), t=float(t))


def unitary_from_axes(omega: float, Omega: float, bhat, Omega_hat, t: float) -> PrecessionUnitary:
    """Two-factor unitary from lab-frame axes (no l2 = 0 assumption)."""
    M = pauli_rotation(Omega_hat, Omega * t / 2.0) @ pauli_rotation(bhat, omega * t / 2.0)
    return PrecessionUnitary(alpha=complex(M[0, 0]), beta=complex(1j * M[0, 1]), t=float(t))


def lab_unitary(fld: FieldConfig, p: ParticleKinematics, t: float) -> PrecessionUnitary:
    """M(t) for a particle, with spin components in the lab frame."""
    r = rates(fld, p)
    if r.Omega == 0.0:
        ohat = fld.bhat_vec
    else:
        ohat = r.Omega_vec / r.Omega
    return unitary_from_axes(r.omega, r.Omega, fld.bhat_vec, ohat, t)


def velocity_at(fld: FieldConfig, p: ParticleKinematics, t: float) -> np.ndarray:
    """Velocity vector at time t: rigid rotation of v about Bhat at rate omega."""
    r = rates(fld, p)
    return rotate_about(fld.bhat_vec, -r.omega * t, p.speed * p.vhat_vec)


def polarization_ode(
    fld: FieldConfig,
    p: ParticleKinematics,
    sigma0,
    t: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> np.ndarray:
    """Polarization at time t by direct integration of the precession equation.

    Integrates dSigma/dt = -(omega_vec + Omega_vec(t)) x Sigma with an
    adaptive embedded Runge-Kutta scheme, the anomalous vector following
    the rotating velocity.  Serves as an independent check on the
    unitary construction.
    """
    sigma0 = _as_unit(sigma0, "sigma0")
    r = rates(fld, p)
    bhat = fld.bhat_vec
    pref = p.anomaly * r.omega
    g = p.gamma

    def rhs(tt, s):
        vhat_t = rotate_about(bhat, -r.omega * tt, p.vhat_vec)
        Omega_t = pref * (g * bhat - (g - 1.0) * np.dot(bhat, vhat_t) * vhat_t)
        return -np.cross(r.omega_vec + Omega_t, s)

    if t == 0:
        return sigma0.copy()
    sol = solve_ivp(rhs, (0.0, t), sigma0, method="RK45", rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(
            f"polarization integration failed at t = {t}: {sol.message} "
            f"(accepted steps: {sol.t.size}, last t = {sol.t[-1]!r})"
        )
    return sol.y[:, -1]
