"""Crossed constant fields reduced to a pure magnetic frame, with Wigner rotations.

For orthogonal fields with |E| < |B| the frame drifting at speed E/B
along Ehat x Bhat sees no electric field and a weakened magnetic field
B' = sqrt(B^2 - E^2) along the same direction.  Changing frames rotates
each particle's canonical spin: composing the pure boosts L(u), L(u'')
leaves the residual rotation

    W = L(u')^{-1} L(u'') L(u),      u' = L(u'') u,

about khat = (u x u'')/|u x u''| by the angle delta with

    cos(delta/2) = b / sqrt(2 a),
    a = (1 + u0)(1 + u0'')(1 + u0'),   b = 1 + u0 + u0'' + u0'.

Spin states pick up the 2x2 rotation

    cos(delta/2) I + i sin(delta/2) (khat . sigma)

(the inverse takes delta -> -delta).  frame_map_scenario packages the
whole move: drift-frame field, boosted kinematics and the per-particle
rotations, so evolution can run with E' = 0 and the results can be
carried back.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .precession import FieldConfig, ParticleKinematics, _as_unit
from .qstate import PAULI, require_normalized

UNIT_TOL = 1e-12
_CROSS_TOL = 1e-14


@dataclass(frozen=True)
class EMField:
    """Orthogonal constant fields; requires 0 <= E < B (ehat optional when E = 0)."""

    B: float
    bhat: tuple[float, float, float]
    E: float = 0.0
    ehat: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.B <= 0:
            raise ValueError(f"field magnitude B must be positive, got {self.B}")
        if self.E < 0:
            raise ValueError(f"E must be non-negative, got {self.E}")
        if self.E >= self.B:
            raise ValueError(f"E must be < B for the reducing boost to exist, got E = {self.E}, B = {self.B}")
        b = _as_unit(self.bhat, "bhat")
        object.__setattr__(self, "bhat", tuple(float(x) for x in b))
        if self.E > 0:
            if self.ehat is None:
                raise ValueError("ehat is required when E > 0")
            e = _as_unit(self.ehat, "ehat")
            if abs(float(np.dot(e, b))) > UNIT_TOL:
                raise ValueError(f"ehat must be orthogonal to bhat, got ehat.bhat = {np.dot(e, b)!r}")
            object.__setattr__(self, "ehat", tuple(float(x) for x in e))


@dataclass(frozen=True)
class FourVelocity:
    """Timelike unit 4-vector (u0, u); u0^2 - |u|^2 = 1 within 1e-10."""

    u0: float
    u: tuple[float, float, float]

    def __post_init__(self):
        uv = np.asarray(self.u, dtype=float)
        if self.u0 < 1.0 - 1e-10:
            raise ValueError(f"u0 must be >= 1, got {self.u0}")
        resid = self.u0**2 - float(uv @ uv) - 1.0
        if abs(resid) > 1e-10:
            raise ValueError(f"4-velocity not normalized: u0^2 - |u|^2 - 1 = {resid!r}")
        object.__setattr__(self, "u", tuple(float(x) for x in uv))

    @classmethod
    def rest(cls) -> "FourVelocity":
        return cls(1.0, (0.0, 0.0, 0.0))

    @classmethod
    def from_velocity(cls, v3) -> "FourVelocity":
        v3 = np.asarray(v3, dtype=float)
        v2 = float(v3 @ v3)
        if v2 >= 1.0:
            raise ValueError(f"speed must be < 1, got |v| = {np.sqrt(v2)}")
        g = 1.0 / np.sqrt(1.0 - v2)
        return cls(g, tuple(g * v3))

    @property
    def u_vec(self) -> np.ndarray:
        return np.asarray(self.u, dtype=float)

    @property
    def velocity(self) -> np.ndarray:
        return self.u_vec / self.u0

    def reversed(self) -> "FourVelocity":
        """The same rapidity in the opposite spatial direction (inverse boost)."""
        return FourVelocity(self.u0, tuple(-x for x in self.u))


def boost_matrix(u: FourVelocity) -> np.ndarray:
    """4x4 pure boost taking the rest frame onto the 4-velocity u."""
    L = np.eye(4)
    uv = u.u_vec
    L[0, 0] = u.u0
    L[0, 1:] = uv
    L[1:, 0] = uv
    L[1:, 1:] = np.eye(3) + np.outer(uv, uv) / (1.0 + u.u0)
    return L


def apply_boost(boost: FourVelocity, u: FourVelocity) -> FourVelocity:
    """The 4-velocity L(boost) u."""
    u0p = boost.u0 * u.u0 + float(boost.u_vec @ u.u_vec)
    uvp = u.u_vec + boost.u_vec * (u.u0 + float(boost.u_vec @ u.u_vec) / (1.0 + boost.u0))
    return FourVelocity(u0p, tuple(uvp))


def reducing_boost(f: EMField) -> tuple[FourVelocity, float]:
    """The drift-frame 4-velocity and the reduced magnitude B' = sqrt(B^2 - E^2).

    The returned frame sees no electric field and the magnetic field
    still along bhat.
    """
    if f.E == 0.0:
        return FourVelocity.rest(), f.B
    g = 1.0 / np.sqrt(1.0 - (f.E / f.B) ** 2)
    drift = (f.E / f.B) * np.cross(f.ehat, f.bhat)
    bprime = float(np.sqrt(f.B**2 - f.E**2))
    return FourVelocity(g, tuple(g * drift)), bprime


@dataclass(frozen=True)
class WignerRotation:
    """Rotation angle delta in [0, pi] about the unit axis (axis None iff delta = 0)."""

    delta: float
    axis: tuple[float, float, float] | None

    def __post_init__(self):
        if not 0.0 <= self.delta <= np.pi:
            raise ValueError(f"delta must lie in [0, pi], got {self.delta}")
        if self.delta == 0.0:
            object.__setattr__(self, "axis", None)
        else:
            if self.axis is None:
                raise ValueError("a nonzero rotation needs an axis")
            a = _as_unit(self.axis, "axis")
            object.__setattr__(self, "axis", tuple(float(x) for x in a))


def wigner(u: FourVelocity, u_second: FourVelocity) -> WignerRotation:
    """Wigner rotation of spin states when u is composed with the boost u_second.

    Spin states are untouched (delta = 0) whenever u x u'' vanishes;
    otherwise the rotation is about (u x u'')/|u x u''|.
    """
    cross = np.cross(u.u_vec, u_second.u_vec)
    cnorm = float(np.linalg.norm(cross))
    if cnorm <= _CROSS_TOL * (1.0 + np.linalg.norm(u.u_vec) * np.linalg.norm(u_second.u_vec)):
        return WignerRotation(0.0, None)
    u0p = u.u0 * u_second.u0 + float(u.u_vec @ u_second.u_vec)
    a = (1.0 + u.u0) * (1.0 + u_second.u0) * (1.0 + u0p)
    b = 1.0 + u.u0 + u_second.u0 + u0p
    cos_half = np.clip(b / np.sqrt(2.0 * a), -1.0, 1.0)
    delta = float(2.0 * np.arccos(cos_half))
    return WignerRotation(delta, tuple(cross / cnorm))


def spin_rotation_matrix(rot: WignerRotation, inverse: bool = False) -> np.ndarray:
    """The 2x2 unitary cos(d/2) I + i sin(d/2) (khat . sigma); inverse flips d."""
    if rot.delta == 0.0:
        return np.eye(2, dtype=complex)
    half = -0.5 * rot.delta if inverse else 0.5 * rot.delta
    k_dot_sigma = np.einsum("i,ijk->jk", np.asarray(rot.axis, dtype=float), PAULI)
    return np.cos(half) * np.eye(2) + 1j * np.sin(half) * k_dot_sigma


def rotate_spin(rot: WignerRotation, spin, direction: str = "forward") -> np.ndarray:
    """Apply the Wigner rotation (or its inverse) to a single-particle spin state."""
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    spin = require_normalized(spin, what="spin state")
    return spin_rotation_matrix(rot, inverse=(direction == "inverse")) @ spin


@dataclass(frozen=True)
class FrameMap:
    """Drift-frame description of a crossed-field scenario.

    field/particles describe the frame with no electric field; rotations
    carry each particle's spin states into that frame (apply the inverse
    to come back).  boost is the frame's 4-velocity in the lab.
    """

    field: FieldConfig
    particles: tuple[ParticleKinematics, ...]
    rotations: tuple[WignerRotation, ...]
    boost: FourVelocity


def frame_map_scenario(f: EMField, particles) -> FrameMap:
    """Map field and particle kinematics into the frame where E' = 0.

    With E = 0 this is exactly the identity (same field values, same
    particle objects, zero rotations).  Otherwise each 4-velocity is
    composed with the inverse drift boost -- entering the moving frame --
    and the matching Wigner rotation is recorded.
    """
    particles = tuple(particles)
    if len(particles) != 3:
        raise ValueError(f"expected exactly 3 particles, got {len(particles)}")
    if f.E == 0.0:
        return FrameMap(
            field=FieldConfig(f.B, f.bhat),
            particles=particles,
            rotations=(WignerRotation(0.0, None),) * 3,
            boost=FourVelocity.rest(),
        )
    u_drift, bprime = reducing_boost(f)
    into_frame = u_drift.reversed()
    mapped = []
    rotations = []
    for p in particles:
        u = FourVelocity.from_velocity(p.speed * p.vhat_vec)
        up = apply_boost(into_frame, u)
        uvec = up.u_vec
        speed = float(np.linalg.norm(uvec) / up.u0)
        if np.linalg.norm(uvec) < 1e-15:
            vhat = p.vhat
            speed = 0.0
        else:
            vhat = tuple(uvec / np.linalg.norm(uvec))
        mapped.append(ParticleKinematics(p.mass, p.charge, p.anomaly, speed, vhat))
        rotations.append(wigner(u, into_frame))
    return FrameMap(
        field=FieldConfig(bprime, f.bhat),
        particles=tuple(mapped),
        rotations=tuple(rotations),
        boost=u_drift,
    )


def map_state(state, rotations, inverse: bool = False) -> np.ndarray:
    """Apply the three per-particle Wigner rotations to a 3-qubit state."""
    rotations = tuple(rotations)
    if len(rotations) != 3:
        raise ValueError(f"expected 3 rotations, got {len(rotations)}")
    amp = require_normalized(state).reshape(2, 2, 2)
    mats = [spin_rotation_matrix(r, inverse=inverse) for r in rotations]
    out = np.einsum("ip,jq,kr,pqr->ijk", mats[0], mats[1], mats[2], amp)
    return out.reshape(8)
