"""Scenario files: flat `key = value` configuration, validation, and the runner.

A scenario fixes the field, the three particles, the initial entangled
state and a sampling grid.  Example::

    field.B    = 1.0
    field.Bhat = 1,0,0
    particle1.m = 1.0
    particle1.e = 1.0
    particle1.ahat = 0.00116
    particle1.v = 0.6
    particle1.vhat = 0,1,0
    ...
    state.kind = ghz
    state.epsilon = +1
    grid.t = 0:20:256

The grid is either `grid.t = start:stop:samples` (physical time, natural
units) or `grid.theta = start:stop:samples` (dimensionless precession
angle; field and particle keys are then not needed).  state.kind is one
of ghz / w / wflip / custom; ghz takes state.epsilon = +-1, w and wflip
take state.phi (0, 2pi/3 or -2pi/3, symbolic forms accepted), custom
takes state.amplitudes with 8 comma-separated complex numbers.  An
electric field orthogonal to B may be added with field.E / field.Ehat
(E < B); the run then evolves in the drift frame and maps the states
back with the inverse Wigner rotations.

Parse errors carry the offending line number.  serialize_scenario is the
exact inverse of parse_scenario (round-trips to an equal Scenario).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import emboost, entanglement, evolution, precession

_KINDS = ("ghz", "w", "wflip", "custom")

_PHI_TOKENS = {
    "0": 0.0,
    "2pi/3": 2 * np.pi / 3,
    "+2pi/3": 2 * np.pi / 3,
    "-2pi/3": -2 * np.pi / 3,
}


class ScenarioError(ValueError):
    """Configuration error; str() carries a line-numbered diagnostic."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Scenario:
    kind: str
    epsilon: int | None
    phi: float | None
    amplitudes: tuple[complex, ...] | None
    grid_kind: str
    grid_start: float
    grid_stop: float
    grid_samples: int
    B: float | None = None
    bhat: tuple[float, float, float] | None = None
    E: float = 0.0
    ehat: tuple[float, float, float] | None = None
    particles: tuple[precession.ParticleKinematics, ...] | None = None


_KNOWN_KEYS = (
    {"field.B", "field.Bhat", "field.E", "field.Ehat",
     "state.kind", "state.epsilon", "state.phi", "state.amplitudes",
     "grid.theta", "grid.t"}
    | {f"particle{n}.{k}" for n in (1, 2, 3) for k in ("m", "e", "ahat", "v", "vhat")}
)


def _float(raw: str, key: str, line: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ScenarioError(f"{key}: expected a number, got {raw!r}", line) from None


def _vector(raw: str, key: str, line: int) -> tuple[float, float, float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ScenarioError(f"{key}: expected 3 comma-separated components, got {raw!r}", line)
    v = np.array([_float(p, key, line) for p in parts])
    n = np.linalg.norm(v)
    if n == 0:
        raise ScenarioError(f"{key}: zero vector cannot be normalized", line)
    return tuple(float(x) for x in v / n)


def parse_scenario(text: str) -> Scenario:
    """Parse and fully validate a scenario file."""
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ScenarioError(f"expected 'key = value', got {stripped!r}", lineno)
        key, _, val = stripped.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KNOWN_KEYS:
            raise ScenarioError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ScenarioError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno)
        if not val:
            raise ScenarioError(f"{key}: empty value", lineno)
        values[key] = val
        lines[key] = lineno

    def has(key):
        return key in values

    def require(key):
        if key not in values:
            raise ScenarioError(f"missing required key {key!r}")
        return values[key]

    # state
    kind = require("state.kind").lower()
    if kind not in _KINDS:
        raise ScenarioError(f"state.kind must be one of {', '.join(_KINDS)}, got {kind!r}", lines["state.kind"])
    epsilon = phi = amplitudes = None
    if kind == "ghz":
        raw = require("state.epsilon")
        try:
            epsilon = int(raw)
        except ValueError:
            raise ScenarioError(f"state.epsilon: expected +1 or -1, got {raw!r}", lines["state.epsilon"]) from None
        if epsilon not in (1, -1):
            raise ScenarioError(f"state.epsilon must be +1 or -1, got {epsilon}", lines["state.epsilon"])
        for k in ("state.phi", "state.amplitudes"):
            if has(k):
                raise ScenarioError(f"{k} does not apply to state.kind = ghz", lines[k])
    elif kind in ("w", "wflip"):
        raw = require("state.phi")
        phi = _PHI_TOKENS.get(raw.replace(" ", ""))
        if phi is None:
            phi = _float(raw, "state.phi", lines["state.phi"])
        for k in ("state.epsilon", "state.amplitudes"):
            if has(k):
                raise ScenarioError(f"{k} does not apply to state.kind = {kind}", lines[k])
    else:
        raw = require("state.amplitudes")
        ln = lines["state.amplitudes"]
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != 8:
            raise ScenarioError(f"state.amplitudes: expected 8 components, got {len(parts)}", ln)
        try:
            amps = np.array([complex(p) for p in parts])
        except ValueError:
            raise ScenarioError(f"state.amplitudes: could not parse complex components in {raw!r}", ln) from None
        n = np.linalg.norm(amps)
        if n == 0:
            raise ScenarioError("state.amplitudes: zero state", ln)
        amplitudes = tuple(complex(a) for a in amps / n)
        for k in ("state.epsilon", "state.phi"):
            if has(k):
                raise ScenarioError(f"{k} does not apply to state.kind = custom", lines[k])

    # grid
    if has("grid.theta") == has("grid.t"):
        raise ScenarioError("exactly one of grid.theta or grid.t is required")
    grid_kind = "theta" if has("grid.theta") else "t"
    gkey = f"grid.{grid_kind}"
    gline = lines[gkey]
    parts = values[gkey].split(":")
    if len(parts) != 3:
        raise ScenarioError(f"{gkey}: expected start:stop:samples, got {values[gkey]!r}", gline)
    start = _float(parts[0], gkey, gline)
    stop = _float(parts[1], gkey, gline)
    try:
        samples = int(parts[2])
    except ValueError:
        raise ScenarioError(f"{gkey}: samples must be an integer, got {parts[2]!r}", gline) from None
    if samples < 1:
        raise ScenarioError(f"{gkey}: samples must be >= 1, got {samples}", gline)
    if stop < start:
        raise ScenarioError(f"{gkey}: stop must be >= start", gline)

    # field and particles
    B = bhat = ehat = None
    E = 0.0
    particles = None
    needs_physics = grid_kind == "t"
    if needs_physics or has("field.B"):
        B = _float(require("field.B"), "field.B", lines.get("field.B"))
        if B <= 0:
            raise ScenarioError(f"field.B must be positive, got {B}", lines["field.B"])
        bhat = _vector(require("field.Bhat"), "field.Bhat", lines.get("field.Bhat"))
    if has("field.E"):
        E = _float(values["field.E"], "field.E", lines["field.E"])
        if E < 0:
            raise ScenarioError(f"field.E must be non-negative, got {E}", lines["field.E"])
        if E > 0:
            if B is None:
                raise ScenarioError("field.E requires field.B")
            if E >= B:
                raise ScenarioError(f"E must be < B, got E = {E}, B = {B}", lines["field.E"])
            ehat = _vector(require("field.Ehat"), "field.Ehat", lines.get("field.Ehat"))
            if abs(sum(e * b for e, b in zip(ehat, bhat))) > 1e-9:
                raise ScenarioError("field.Ehat must be orthogonal to field.Bhat", lines["field.Ehat"])
    if needs_physics or any(k.startswith("particle") for k in values):
        plist = []
        for n in (1, 2, 3):
            pref = f"particle{n}"
            m = _float(require(f"{pref}.m"), f"{pref}.m", lines.get(f"{pref}.m"))
            e = _float(require(f"{pref}.e"), f"{pref}.e", lines.get(f"{pref}.e"))
            ahat = _float(require(f"{pref}.ahat"), f"{pref}.ahat", lines.get(f"{pref}.ahat"))
            v = _float(require(f"{pref}.v"), f"{pref}.v", lines.get(f"{pref}.v"))
            if not 0 <= v < 1:
                raise ScenarioError(f"{pref}.v must lie in [0, 1), got {v}", lines[f"{pref}.v"])
            vhat = _vector(require(f"{pref}.vhat"), f"{pref}.vhat", lines.get(f"{pref}.vhat"))
            try:
                plist.append(precession.ParticleKinematics(m, e, ahat, v, vhat))
            except ValueError as exc:
                raise ScenarioError(f"{pref}: {exc}") from None
        particles = tuple(plist)

    return Scenario(
        kind=kind, epsilon=epsilon, phi=phi, amplitudes=amplitudes,
        grid_kind=grid_kind, grid_start=start, grid_stop=stop, grid_samples=samples,
        B=B, bhat=bhat, E=E, ehat=ehat, particles=particles,
    )


def serialize_scenario(s: Scenario) -> str:
    """Render a Scenario back to the key = value format (parse round-trips)."""
    out = []
    if s.B is not None:
        out.append(f"field.B = {s.B!r}")
        out.append("field.Bhat = " + ",".join(repr(x) for x in s.bhat))
        if s.E > 0:
            out.append(f"field.E = {s.E!r}")
            out.append("field.Ehat = " + ",".join(repr(x) for x in s.ehat))
    if s.particles is not None:
        for n, p in enumerate(s.particles, start=1):
            out.append(f"particle{n}.m = {p.mass!r}")
            out.append(f"particle{n}.e = {p.charge!r}")
            out.append(f"particle{n}.ahat = {p.anomaly!r}")
            out.append(f"particle{n}.v = {p.speed!r}")
            out.append(f"particle{n}.vhat = " + ",".join(repr(x) for x in p.vhat))
    out.append(f"state.kind = {s.kind}")
    if s.kind == "ghz":
        out.append(f"state.epsilon = {s.epsilon:+d}")
    elif s.kind in ("w", "wflip"):
        out.append(f"state.phi = {s.phi!r}")
    else:
        out.append("state.amplitudes = " + ",".join(repr(a) for a in s.amplitudes))
    out.append(f"grid.{s.grid_kind} = {s.grid_start!r}:{s.grid_stop!r}:{s.grid_samples}")
    return "\n".join(out) + "\n"


def initial_state(s: Scenario) -> np.ndarray:
    if s.kind == "ghz":
        return evolution.ghz_state(s.epsilon)
    if s.kind == "w":
        return evolution.w_state(s.phi)
    if s.kind == "wflip":
        return evolution.w_flipped_state(s.phi)
    return np.array(s.amplitudes, dtype=complex)


def _is_special_configuration(s: Scenario) -> bool:
    """Equal particles, velocities orthogonal to B, field along +-x, no E."""
    if s.E != 0.0 or s.particles is None or s.bhat is None:
        return False
    b = np.asarray(s.bhat)
    if abs(abs(b[0]) - 1.0) > 1e-12 or abs(b[1]) > 1e-12 or abs(b[2]) > 1e-12:
        return False
    p0 = s.particles[0]
    for p in s.particles:
        if (p.mass, p.charge, p.anomaly, p.speed) != (p0.mass, p0.charge, p0.anomaly, p0.speed):
            return False
        if abs(float(np.dot(b, p.vhat_vec))) > 1e-12:
            return False
    return True


@dataclass(frozen=True)
class RunResult:
    header: tuple[str, ...]
    rows: list[tuple[float, ...]]
    max_closed_form_error: float | None
    max_tangle_drift: float


_BASE_HEADER = (
    "t", "theta",
    "P_111", "P_11b", "P_1b1", "P_1bb", "P_b11", "P_b1b", "P_bb1", "P_bbb",
    "tau123", "tau12", "tau13", "tau23",
)
_CF_HEADER = ("Pcf_111", "Pcf_11b", "Pcf_1b1", "Pcf_1bb", "Pcf_b11", "Pcf_b1b", "Pcf_bb1", "Pcf_bbb")


def run_scenario(s: Scenario) -> RunResult:
    """Evolve the scenario over its grid; probabilities, tangles, closed forms.

    Rows follow _BASE_HEADER, extended by the closed-form probability
    columns whenever the scenario realizes the special configuration (in
    theta mode, always, for the ghz and w families).  The summary
    reports the worst closed-form deviation and the worst drift of any
    tangle from its initial value.
    """
    state0 = initial_state(s)
    grid = np.linspace(s.grid_start, s.grid_stop, s.grid_samples)

    rotations = None
    if s.grid_kind == "theta":
        special = True

        def unitaries(th):
            u = evolution.special_config_unitary(th)
            return u, u, u

        def theta_of(th):
            return th

        work_state = state0
    else:
        field = precession.FieldConfig(s.B, s.bhat)
        parts = s.particles
        if s.E > 0:
            emf = emboost.EMField(s.B, s.bhat, s.E, s.ehat)
            fmap = emboost.frame_map_scenario(emf, parts)
            field, parts, rotations = fmap.field, fmap.particles, fmap.rotations
            work_state = emboost.map_state(state0, rotations)
        else:
            work_state = state0
        special = _is_special_configuration(s)
        r1 = precession.rates(field, parts[0])

        def unitaries(t):
            return tuple(precession.lab_unitary(field, p, t) for p in parts)

        def theta_of(t):
            return (r1.omega + r1.Omega) * t / 2.0

    closed_form = None
    if special and s.kind == "ghz":
        closed_form = lambda t: evolution.ghz_closed_form(s.epsilon, theta_of(t))
    elif special and s.kind == "w":
        closed_form = lambda t: evolution.w_closed_form(s.phi, theta_of(t))

    samples = evolution.time_series(work_state, unitaries, grid, closed_form=closed_form)

    header = _BASE_HEADER + _CF_HEADER if closed_form is not None else _BASE_HEADER
    rows = []
    tangles0 = None
    max_cf = 0.0 if closed_form is not None else None
    max_drift = 0.0
    for smp in samples:
        amp = smp.amplitudes
        if rotations is not None:
            amp = emboost.map_state(amp, rotations, inverse=True)
        probs = np.abs(amp) ** 2
        rep = entanglement.tangle_report(amp, method="polynomial")
        tangles = (rep.tau123, rep.tau12, rep.tau13, rep.tau23)
        if tangles0 is None:
            tangles0 = tangles
        max_drift = max(max_drift, max(abs(a - b) for a, b in zip(tangles, tangles0)))
        row = [smp.t, theta_of(smp.t), *probs, *tangles]
        if closed_form is not None:
            row.extend(smp.closed_form)
            max_cf = max(max_cf, float(np.abs(probs - smp.closed_form).max()))
        rows.append(tuple(float(x) for x in row))
    return RunResult(
        header=header,
        rows=rows,
        max_closed_form_error=max_cf,
        max_tangle_drift=max_drift,
    )
