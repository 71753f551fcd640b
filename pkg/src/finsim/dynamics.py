"""Planar active/passive tail chain and whole-body recoil.

The body is a rigid head followed by ``n_active`` driven elements and
``n_passive`` spring-damper elements, all uniform slender rods. Joint angles
are integrated in the head frame; the world pose (heading and centre of mass)
is recovered afterwards by requiring zero linear and angular momentum of the
free body at every instant.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from finsim.actuation import DriveProfile, drive_accel, drive_angle, drive_rate
from finsim.errors import FinsimError, InvalidInputError, NoUniqueMinimumError, NumericalDivergenceError

DEG = math.pi / 180.0

DEFAULT_DT = 1e-4
DEFAULT_DURATION = 10.0
DEFAULT_TRANSIENT = 2.0
MAX_DT = 1e-3

# stiffness and damping of the passive joints, per degree
DEFAULT_STIFFNESS_PER_DEG = 0.001
DEFAULT_DAMPING_START_PER_DEG = 0.005
DEFAULT_DAMPING_END_PER_DEG = 0.00075


def graded_damping(start: float, end: float, n: int, law: str = "linear") -> tuple[float, ...]:
    """Damping values from the first passive joint (``start``) to the tip (``end``)."""
    if n < 1:
        raise InvalidInputError("need at least one passive joint")
    if n == 1:
        return (float(start),)
    x = np.linspace(0.0, 1.0, n)
    if law == "linear":
        vals = start + (end - start) * x
    elif law == "geometric":
        if start <= 0 or end <= 0:
            raise InvalidInputError("geometric grading needs positive endpoints")
        vals = start * (end / start) ** x
    elif law == "step":
        vals = np.where(x < 0.5, start, end)
    else:
        raise InvalidInputError(f"unknown damping grading law {law!r}")
    return tuple(float(v) for v in vals)


def _default_stiffness():
    return (DEFAULT_STIFFNESS_PER_DEG / DEG,) * 5


def _default_damping():
    return graded_damping(DEFAULT_DAMPING_START_PER_DEG / DEG, DEFAULT_DAMPING_END_PER_DEG / DEG, 5)


@dataclass(frozen=True)
class BodyPlan:
    """Geometry, inertia and joint properties of the swimmer.

    Stiffness is in N*m/rad and damping in N*m*s/rad. ``head_mass`` overrides
    the uniform-density head mass when set.
    """

    head_length: float = 0.27
    element_length: float = 0.03
    n_active: int = 4
    n_passive: int = 5
    joint_stiffness: tuple[float, ...] = field(default_factory=_default_stiffness)
    joint_damping: tuple[float, ...] = field(default_factory=_default_damping)
    mass_per_length: float = 1.5
    caudal_fin_area_small: float = 2431e-6
    caudal_fin_area_large: float = 4065e-6
    selected_fin: str = "large"
    head_mass: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "joint_stiffness", tuple(float(v) for v in self.joint_stiffness))
        object.__setattr__(self, "joint_damping", tuple(float(v) for v in self.joint_damping))
        for name in ("head_length", "element_length", "mass_per_length",
                     "caudal_fin_area_small", "caudal_fin_area_large"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidInputError(f"{name} must be > 0", field=name)
        if self.n_active < 1:
            raise InvalidInputError("n_active must be >= 1", field="n_active")
        if self.n_passive < 1:
            raise InvalidInputError("n_passive must be >= 1", field="n_passive")
        for name in ("joint_stiffness", "joint_damping"):
            vals = getattr(self, name)
            if len(vals) != self.n_passive:
                raise InvalidInputError(
                    f"{name} has {len(vals)} entries, expected n_passive={self.n_passive}",
                    field=name,
                )
            for i, v in enumerate(vals):
                if not (math.isfinite(v) and v > 0):
                    raise InvalidInputError(f"{name}[{i}] must be > 0, got {v}", field=f"{name}[{i}]")
        for i in range(1, self.n_passive):
            if self.joint_damping[i] > self.joint_damping[i - 1]:
                raise InvalidInputError(
                    "joint_damping must be non-increasing toward the tail tip",
                    field=f"joint_damping[{i}]",
                )
        if self.selected_fin not in ("small", "large"):
            raise InvalidInputError("selected_fin must be 'small' or 'large'", field="selected_fin")
        if self.head_mass is not None and not (math.isfinite(self.head_mass) and self.head_mass > 0):
            raise InvalidInputError("head_mass must be > 0", field="head_mass")

    @property
    def n_elements(self) -> int:
        return self.n_active + self.n_passive

    @property
    def tail_length(self) -> float:
        return self.n_elements * self.element_length

    @property
    def total_length(self) -> float:
        return self.head_length + self.tail_length

    @property
    def head_mass_value(self) -> float:
        if self.head_mass is not None:
            return self.head_mass
        return self.mass_per_length * self.head_length

    @property
    def element_mass(self) -> float:
        return self.mass_per_length * self.element_length

    @property
    def mass_ratio(self) -> float:
        """Head mass over total body mass."""
        head = self.head_mass_value
        return head / (head + self.n_elements * self.element_mass)

    @property
    def element_inertia(self) -> float:
        """Moment of inertia of one tail element about its proximal joint."""
        return self.element_mass * self.element_length**2 / 3.0

    @property
    def fin_area(self) -> float:
        return self.caudal_fin_area_large if self.selected_fin == "large" else self.caudal_fin_area_small

    def link_lengths(self) -> np.ndarray:
        return np.array([self.head_length] + [self.element_length] * self.n_elements)

    def link_masses(self) -> np.ndarray:
        return np.array([self.head_mass_value] + [self.element_mass] * self.n_elements)

    def node_arclengths(self) -> np.ndarray:
        """Arclength from the nose of every node (nose, joints, tip)."""
        return np.concatenate([[0.0], np.cumsum(self.link_lengths())])

    def with_head_length(self, head_length: float) -> "BodyPlan":
        return replace(self, head_length=head_length)


@dataclass(frozen=True)
class SimState:
    t: float
    passive_angles: tuple[float, ...]
    passive_rates: tuple[float, ...]
    active_angles: tuple[float, ...]
    world_heading: float
    world_com: tuple[float, float]
    active_rates: tuple[float, ...] = ()
    heading_rate: float = 0.0

    @classmethod
    def initial(cls, plan: BodyPlan, profile: DriveProfile, dt: float = DEFAULT_DT) -> "SimState":
        """Rest state of the passive tail with the drive at t = 0."""
        a = float(drive_angle(profile, 0.0))
        ar = float(drive_rate(profile, 0.0, dt))
        q = np.array([[a] * plan.n_active + [0.0] * plan.n_passive])
        qd = np.array([[ar] * plan.n_active + [0.0] * plan.n_passive])
        psi_dot = float(_reconstruct(plan, q, qd).heading_rate[0])
        return cls(
            t=0.0,
            passive_angles=(0.0,) * plan.n_passive,
            passive_rates=(0.0,) * plan.n_passive,
            active_angles=(a,) * plan.n_active,
            world_heading=0.0,
            world_com=(0.0, 0.0),
            active_rates=(ar,) * plan.n_active,
            heading_rate=psi_dot,
        )


@dataclass(frozen=True)
class SwayMetrics:
    head_sway_deg: float
    cor_arclength: float
    fin_to_cor: float
    mass_ratio: float
    head_length: float = float("nan")


@dataclass(frozen=True, eq=False)
class SimTrace:
    """Uniformly sampled simulation output.

    Arrays are indexed by sample first. ``nodes`` holds world coordinates of
    the nose, every joint and the tail tip.
    """

    dt: float
    t: np.ndarray
    active: np.ndarray
    passive: np.ndarray
    rates: np.ndarray
    active_rates: np.ndarray
    heading: np.ndarray
    heading_rate: np.ndarray
    com: np.ndarray
    nodes: np.ndarray
    frequency: float = float("nan")

    def __post_init__(self):
        for name in ("t", "active", "passive", "rates", "active_rates",
                     "heading", "heading_rate", "com", "nodes"):
            getattr(self, name).setflags(write=False)

    def __len__(self):
        return len(self.t)

    @property
    def node_positions(self) -> np.ndarray:
        return self.nodes

    @property
    def tip(self) -> np.ndarray:
        return self.nodes[:, -1, :]

    @cached_property
    def states(self) -> list[SimState]:
        return [self.state(i) for i in range(len(self))]

    def state(self, i: int) -> SimState:
        return SimState(
            t=float(self.t[i]),
            passive_angles=tuple(self.passive[i].tolist()),
            passive_rates=tuple(self.rates[i].tolist()),
            active_angles=tuple(self.active[i].tolist()),
            world_heading=float(self.heading[i]),
            world_com=(float(self.com[i, 0]), float(self.com[i, 1])),
            active_rates=tuple(self.active_rates[i].tolist()),
            heading_rate=float(self.heading_rate[i]),
        )

    @classmethod
    def from_nodes(cls, t, nodes, heading, com, frequency=float("nan")) -> "SimTrace":
        """Trace built from world-frame node positions alone (joint data zeroed)."""
        t = np.asarray(t, dtype=float)
        n = len(t)
        zeros = np.zeros((n, 0))
        return cls(
            dt=float(t[1] - t[0]) if n > 1 else 0.0,
            t=t,
            active=zeros,
            passive=zeros.copy(),
            rates=zeros.copy(),
            active_rates=zeros.copy(),
            heading=np.asarray(heading, dtype=float),
            heading_rate=np.zeros(n),
            com=np.asarray(com, dtype=float),
            nodes=np.asarray(nodes, dtype=float),
            frequency=frequency,
        )


# ---------------------------------------------------------------------------
# world-frame reconstruction


@dataclass
class _BodyFrame:
    nodes: np.ndarray        # (N, n_nodes, 2) body-frame node positions
    com: np.ndarray          # (N, 2) body-frame centre of mass
    heading_rate: np.ndarray  # (N,)


def _reconstruct(plan: BodyPlan, q: np.ndarray, qd: np.ndarray) -> _BodyFrame:
    """Body-frame shape and the heading rate that cancels angular momentum.

    Body frame: nose at the origin, head along -x, so +x is the swimming
    direction. ``q`` holds relative joint angles (active then passive).
    """
    n = q.shape[0]
    lengths = plan.link_lengths()
    masses = plan.link_masses()
    l = plan.element_length

    phi = np.cumsum(q, axis=1)          # absolute element angles in the head frame
    phid = np.cumsum(qd, axis=1)
    c, s = np.cos(phi), np.sin(phi)

    nodes = np.zeros((n, plan.n_elements + 2, 2))
    vel = np.zeros_like(nodes)
    nodes[:, 1, 0] = -plan.head_length
    nodes[:, 2:, 0] = -plan.head_length - l * np.cumsum(c, axis=1)
    nodes[:, 2:, 1] = -l * np.cumsum(s, axis=1)
    vel[:, 2:, 0] = l * np.cumsum(s * phid, axis=1)
    vel[:, 2:, 1] = -l * np.cumsum(c * phid, axis=1)

    centers = 0.5 * (nodes[:, :-1] + nodes[:, 1:])
    cvel = 0.5 * (vel[:, :-1] + vel[:, 1:])
    total = masses.sum()
    com = np.einsum("k,nkd->nd", masses, centers) / total

    rho = centers - com[:, None, :]
    inertia_c = masses * lengths**2 / 12.0
    link_rates = np.concatenate([np.zeros((n, 1)), phid], axis=1)
    spin = (rho[..., 0] * cvel[..., 1] - rho[..., 1] * cvel[..., 0]) @ masses + link_rates @ inertia_c
    inertia = (rho[..., 0] ** 2 + rho[..., 1] ** 2) @ masses + inertia_c.sum()
    return _BodyFrame(nodes=nodes, com=com, heading_rate=-spin / inertia)


def _world_nodes(frame: _BodyFrame, heading: np.ndarray, world_com: np.ndarray) -> np.ndarray:
    rel = frame.nodes - frame.com[:, None, :]
    c, s = np.cos(heading)[:, None], np.sin(heading)[:, None]
    out = np.empty_like(rel)
    out[..., 0] = world_com[:, None, 0] + c * rel[..., 0] - s * rel[..., 1]
    out[..., 1] = world_com[:, None, 1] + s * rel[..., 0] + c * rel[..., 1]
    return out


# ---------------------------------------------------------------------------
# integration


def _check_dt(dt: float):
    if not (math.isfinite(dt) and 0 < dt <= MAX_DT):
        raise InvalidInputError(f"dt must lie in (0, {MAX_DT}], got {dt}")


def _passive_update(theta, omega, alpha, k, c, inertia, dt):
    """One semi-implicit Euler step of the passive cascade.

    Spring and base excitation are explicit, damping implicit. ``alpha`` is
    the angular acceleration of the element in front of the first passive
    joint; each joint passes its own absolute acceleration on to the next.
    """
    new_theta = []
    new_omega = []
    for j in range(len(theta)):
        w = (omega[j] + dt * (-k[j] * theta[j] / inertia - alpha)) / (1.0 + dt * c[j] / inertia)
        alpha += (w - omega[j]) / dt
        new_omega.append(w)
        new_theta.append(theta[j] + dt * w)
    return new_theta, new_omega


def step(state: SimState, plan: BodyPlan, profile: DriveProfile, dt: float) -> SimState:
    """Advance ``state`` by one time step."""
    _check_dt(dt)
    if len(state.passive_angles) != plan.n_passive or len(state.active_angles) != plan.n_active:
        raise InvalidInputError("state does not match the body plan")
    alpha = plan.n_active * float(drive_accel(profile, state.t, dt))
    theta, omega = _passive_update(
        list(state.passive_angles), list(state.passive_rates), alpha,
        plan.joint_stiffness, plan.joint_damping, plan.element_inertia, dt,
    )
    t1 = state.t + dt
    for j, (a, w) in enumerate(zip(theta, omega)):
        if not (math.isfinite(a) and math.isfinite(w)):
            raise NumericalDivergenceError(f"passive joint {j}", t1)
    a = float(drive_angle(profile, t1))
    ar = float(drive_rate(profile, t1, dt))
    q = np.array([[a] * plan.n_active + theta])
    qd = np.array([[ar] * plan.n_active + omega])
    psi_dot = float(_reconstruct(plan, q, qd).heading_rate[0])
    return SimState(
        t=t1,
        passive_angles=tuple(theta),
        passive_rates=tuple(omega),
        active_angles=(a,) * plan.n_active,
        world_heading=state.world_heading + dt * psi_dot,
        world_com=state.world_com,
        active_rates=(ar,) * plan.n_active,
        heading_rate=psi_dot,
    )


def _integrate_passive(plan: BodyPlan, alpha: np.ndarray, dt: float, theta0=None, omega0=None):
    n = len(alpha)
    npas = plan.n_passive
    theta_out = np.zeros((n, npas))
    omega_out = np.zeros((n, npas))
    k = plan.joint_stiffness
    c = plan.joint_damping
    inertia = plan.element_inertia
    theta = [0.0] * npas if theta0 is None else [float(v) for v in theta0]
    omega = [0.0] * npas if omega0 is None else [float(v) for v in omega0]
    theta_out[0] = theta
    omega_out[0] = omega
    alpha_list = alpha.tolist()
    for i in range(1, n):
        theta, omega = _passive_update(theta, omega, alpha_list[i - 1], k, c, inertia, dt)
        theta_out[i] = theta
        omega_out[i] = omega
    return theta_out, omega_out


def simulate(
    plan: BodyPlan,
    profile: DriveProfile,
    duration: float = DEFAULT_DURATION,
    dt: float = DEFAULT_DT,
    initial_angles=None,
    initial_rates=None,
) -> SimTrace:
    """Run the chain for ``duration`` seconds.

    The passive tail starts at rest and straight unless ``initial_angles``
    or ``initial_rates`` (one value per passive joint, rad and rad/s) say
    otherwise.
    """
    _check_dt(dt)
    for name, init in (("initial_angles", initial_angles), ("initial_rates", initial_rates)):
        if init is not None and (len(init) != plan.n_passive or not all(math.isfinite(v) for v in init)):
            raise InvalidInputError(f"{name} needs {plan.n_passive} finite values", field=name)
    if not math.isfinite(duration) or duration < 5.0 * profile.period * (1 - 1e-12):
        raise InvalidInputError(
            f"duration {duration} s is shorter than 5 drive periods ({5 * profile.period:.6g} s)"
        )
    n_steps = int(round(duration / dt))
    t = np.arange(n_steps + 1) * dt

    a = drive_angle(profile, t)
    ar = drive_rate(profile, t, dt)
    alpha = plan.n_active * drive_accel(profile, t, dt)
    theta, omega = _integrate_passive(plan, alpha, dt, initial_angles, initial_rates)

    bad = ~(np.isfinite(theta) & np.isfinite(omega))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NumericalDivergenceError(f"passive joint {j}", float(t[i]))

    active = np.repeat(a[:, None], plan.n_active, axis=1)
    active_rates = np.repeat(ar[:, None], plan.n_active, axis=1)
    frame = _reconstruct(plan, np.hstack([active, theta]), np.hstack([active_rates, omega]))
    psi_dot = frame.heading_rate
    heading = np.concatenate([[0.0], np.cumsum(dt * psi_dot[1:])])
    com = np.zeros((n_steps + 1, 2))
    nodes = _world_nodes(frame, heading, com)
    return SimTrace(
        dt=dt, t=t, active=active, passive=theta, rates=omega, active_rates=active_rates,
        heading=heading, heading_rate=psi_dot, com=com, nodes=nodes,
        frequency=profile.frequency,
    )


def momentum_residuals(trace: SimTrace, plan: BodyPlan) -> tuple[np.ndarray, np.ndarray]:
    """Normalised linear and angular momentum of the reconstructed body.

    Linear momentum is ``M`` times the velocity of the mass centre computed
    from the world-frame rods (central differences), scaled by
    ``M * L * Omega``. Angular momentum about the mass centre is integrated
    exactly over each rod from world node positions and velocities and scaled
    by ``J * Omega``. ``Omega`` is the largest absolute link rate in the sample.
    """
    masses = plan.link_masses()
    total = masses.sum()
    n = len(trace)
    p = trace.nodes
    link_rates = np.concatenate(
        [np.zeros((n, 1)), np.cumsum(np.hstack([trace.active_rates, trace.rates]), axis=1)], axis=1
    ) + trace.heading_rate[:, None]
    omega = np.abs(link_rates).max(axis=1)
    scale = np.where(omega > 0, omega, 1.0)

    centroid = np.einsum("k,nkd->nd", masses, 0.5 * (p[:, :-1] + p[:, 1:])) / total
    if n > 1:
        com_vel = np.gradient(centroid, trace.dt, axis=0)
    else:
        com_vel = np.zeros_like(centroid)
    lin_n = np.linalg.norm(com_vel, axis=1) / (plan.total_length * scale)

    # node velocities relative to the nose, propagated link by link
    dvel = np.zeros_like(p)
    for k in range(p.shape[1] - 1):
        seg = p[:, k + 1] - p[:, k]
        w = link_rates[:, k]
        dvel[:, k + 1] = dvel[:, k] + np.stack([-w * seg[:, 1], w * seg[:, 0]], axis=1)
    # nose velocity that keeps the (verified stationary) mass centre at rest
    nose_vel = -np.einsum("k,nkd->nd", masses, 0.5 * (dvel[:, :-1] + dvel[:, 1:])) / total
    vel = dvel + nose_vel[:, None, :]

    a, b = p[:, :-1] - centroid[:, None], p[:, 1:] - centroid[:, None]
    va, vb = vel[:, :-1], vel[:, 1:]

    def cross(x, y):
        return x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0]

    ang = ((cross(a, va) / 3 + (cross(a, vb) + cross(b, va)) / 6 + cross(b, vb) / 3) * masses).sum(axis=1)
    inertia = (((a * a).sum(-1) + (a * b).sum(-1) + (b * b).sum(-1)) / 3 * masses).sum(axis=1)
    ang_n = np.abs(ang) / (inertia * scale)
    return lin_n, ang_n


# ---------------------------------------------------------------------------
# sway and manoeuvrability analysis

_COR_GRID = 400
_RMS_CHUNK = 64
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _steady(trace: SimTrace, transient: float) -> np.ndarray:
    mask = trace.t >= transient - 1e-12
    n = int(mask.sum())
    if n < 2:
        raise InvalidInputError(f"trace has no samples after the {transient} s transient")
    if math.isfinite(trace.frequency):
        span = trace.t[mask][-1] - trace.t[mask][0]
        if span * trace.frequency < 3.0 - 1e-9:
            raise InvalidInputError(
                f"steady window covers {span * trace.frequency:.3g} periods, need at least 3"
            )
    return mask


def neutral_heading(trace: SimTrace, transient: float = DEFAULT_TRANSIENT) -> float:
    """Mean heading over the steady window."""
    return float(trace.heading[_steady(trace, transient)].mean())


def _lateral_axis(trace: SimTrace, mask: np.ndarray):
    psi = float(trace.heading[mask].mean())
    normal = np.array([-math.sin(psi), math.cos(psi)])
    origin = trace.com[mask].mean(axis=0)
    return origin, normal


def head_sway(trace: SimTrace, plan: BodyPlan | None = None, transient: float = DEFAULT_TRANSIENT) -> float:
    """Peak angle in degrees between the head axis and the neutral line."""
    mask = _steady(trace, transient)
    psi = trace.heading[mask]
    return float(np.degrees(np.abs(psi - psi.mean()).max()))


def tip_lateral(trace: SimTrace, transient: float = DEFAULT_TRANSIENT) -> np.ndarray:
    """Tail-tip displacement perpendicular to the neutral line, steady window only."""
    mask = _steady(trace, transient)
    origin, normal = _lateral_axis(trace, mask)
    return (trace.tip[mask] - origin) @ normal


def tail_sweep_length(trace: SimTrace, transient: float = DEFAULT_TRANSIENT) -> float:
    """Peak-to-peak lateral excursion of the tail tip (m)."""
    d = tip_lateral(trace, transient)
    return float(d.max() - d.min())


def lateral_rms(trace: SimTrace, arclengths, s, transient: float = DEFAULT_TRANSIENT) -> np.ndarray:
    """RMS distance from the neutral line of body points at arclengths ``s``.

    ``arclengths`` gives the arclength of every node in ``trace.nodes``.
    """
    mask = _steady(trace, transient)
    origin, normal = _lateral_axis(trace, mask)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    arclengths = np.asarray(arclengths, dtype=float)
    # lateral offset is linear along each link, so project the nodes once
    d_nodes = (trace.nodes[mask] - origin) @ normal
    k = np.clip(np.searchsorted(arclengths, s, side="right") - 1, 0, len(arclengths) - 2)
    frac = (s - arclengths[k]) / (arclengths[k + 1] - arclengths[k])
    out = np.empty(len(s))
    for lo in range(0, len(s), _RMS_CHUNK):
        sl = slice(lo, lo + _RMS_CHUNK)
        d = d_nodes[:, k[sl]] + frac[sl] * (d_nodes[:, k[sl] + 1] - d_nodes[:, k[sl]])
        out[sl] = np.sqrt(np.mean(d * d, axis=0))
    return out


def _golden_min(fun, lo: float, hi: float, tol: float) -> float:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    return float(0.5 * (a + b))


def center_of_rotation(
    trace: SimTrace,
    plan: BodyPlan,
    transient: float = DEFAULT_TRANSIENT,
    tol: float = 1e-4,
) -> SwayMetrics:
    """Locate the body point with the least lateral motion.

    The RMS profile can have a second local minimum on the tail for light
    heads, so the global basin is picked on a grid first and then refined
    by golden-section search to ``tol``.
    """
    arc = plan.node_arclengths()
    total = float(arc[-1])
    grid = np.linspace(0.0, total, _COR_GRID + 1)
    profile = lateral_rms(trace, arc, grid, transient)
    top, low = float(profile.max()), float(profile.min())
    if top - low <= 1e-9 * top + 1e-15:
        raise NoUniqueMinimumError("lateral RMS is flat along the body; no centre of rotation")
    i = int(np.argmin(profile))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    cor = _golden_min(lambda s: float(lateral_rms(trace, arc, [s], transient)[0]), lo, hi, tol)
    return SwayMetrics(
        head_sway_deg=head_sway(trace, plan, transient),
        cor_arclength=cor,
        fin_to_cor=total - cor,
        mass_ratio=plan.mass_ratio,
        head_length=plan.head_length,
    )


class SweepRowError(FinsimError):
    """A head-sweep row failed; ``cause`` holds the original error."""

    def __init__(self, head_length, cause):
        super().__init__(f"head_length={head_length:g} m: {cause}")
        self.head_length = head_length
        self.cause = cause


def _sweep_row(args) -> SwayMetrics:
    plan, profile, duration, dt, transient = args
    try:
        trace = simulate(plan, profile, duration, dt)
        return center_of_rotation(trace, plan, transient)
    except (InvalidInputError, NumericalDivergenceError, NoUniqueMinimumError) as exc:
        raise SweepRowError(plan.head_length, exc) from exc


def sweep_head(
    plan_template: BodyPlan,
    head_lengths,
    profile: DriveProfile,
    duration: float = DEFAULT_DURATION,
    dt: float = DEFAULT_DT,
    transient: float = DEFAULT_TRANSIENT,
    jobs: int = 1,
) -> list[SwayMetrics]:
    """Sway and centre-of-rotation metrics for each head length, in input order."""
    head_lengths = [float(h) for h in head_lengths]
    if not head_lengths:
        raise InvalidInputError("head_lengths is empty")
    for h in head_lengths:
        if not (math.isfinite(h) and h > 0):
            raise InvalidInputError(f"head length must be > 0, got {h}")
    rows = [
        (replace(plan_template, head_length=h, head_mass=None), profile, duration, dt, transient)
        for h in head_lengths
    ]
    if jobs > 1 and len(rows) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_row, rows))
    return [_sweep_row(r) for r in rows]


# ---------------------------------------------------------------------------
# export


def trace_header(trace: SimTrace) -> list[str]:
    na, npas = trace.active.shape[1], trace.passive.shape[1]
    return (
        ["t"]
        + [f"active_{i}" for i in range(na)]
        + [f"passive_{i}" for i in range(npas)]
        + [f"rate_{i}" for i in range(npas)]
        + ["heading", "com_x", "com_y", "tip_x", "tip_y"]
    )


def write_trace_csv(trace: SimTrace, path) -> None:
    """One row per sample, every value at 17 significant digits."""
    table = np.column_stack(
        [trace.t, trace.active, trace.passive, trace.rates, trace.heading, trace.com, trace.tip]
    )
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(trace_header(trace)) + "\n")
        np.savetxt(fh, table, fmt="%.17g", delimiter=",")
