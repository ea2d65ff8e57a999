"""Exact dynamics of a spin-s magnetic moment in a uniformly rotating field.

The field has constant magnitude and rotates about the z axis on a cone of
half-angle theta_B at rate omega.  In the co-rotating frame the Hamiltonian
is time independent, which gives a closed-form propagator, a closed-form
mean-spin trajectory, and, whenever the effective precession rate omega_S
is commensurate with omega, closed forms for the total, dynamic, and
geometric phases and for the solid angle swept by the mean spin.

Everything uses hbar = 1; the time unit is arbitrary and phases are in
radians.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .exceptions import NonCyclicError, NumericalTrustError, UndefinedSolidAngleError
from .geometry import TWO_PI, Z_AXIS, rodrigues_rotate, wrap_angle
from .rational import best_rational
from .spin_algebra import SpinOps, SpinQuantum, exp_spin, mean_spin, rotation_z, spin_operators

#: below this magnitude a mean-spin vector has no direction and no solid angle
ZERO_SPIN_TOL = 1e-12


@dataclass(frozen=True)
class RotatingFieldParams:
    """Rotating-field problem definition.

    omega_B is the (positive) precession rate set by the field magnitude,
    omega the (positive) field rotation rate, theta_B the cone angle, and
    mu_sign the sign of the magnetic moment.
    """

    omega_B: float
    omega: float
    theta_B: float
    mu_sign: int = 1
    spin: SpinQuantum = field(default_factory=lambda: SpinQuantum(1))

    def __post_init__(self):
        if self.omega_B <= 0.0 or self.omega <= 0.0:
            raise ValueError("omega_B and omega must be positive")
        if not 0.0 <= self.theta_B <= np.pi:
            raise ValueError("theta_B must lie in [0, pi]")
        if self.mu_sign not in (+1, -1):
            raise ValueError("mu_sign must be +1 or -1")

    @property
    def period(self) -> float:
        """One field revolution, tau = 2*pi/omega."""
        return TWO_PI / self.omega

    def field_axis(self, t):
        """Unit field direction n(t) on the rotating cone."""
        t = np.asarray(t, dtype=float)
        st, ct = np.sin(self.theta_B), np.cos(self.theta_B)
        return np.stack(
            [st * np.cos(self.omega * t), st * np.sin(self.omega * t), ct * np.ones_like(t)],
            axis=-1,
        )

    def operators(self) -> SpinOps:
        return spin_operators(self.spin)

    def hamiltonian_sampler(self, ops: SpinOps | None = None):
        """Callable t -> H(t) = -sign(mu)*omega_B * s.n(t), for the oracle."""
        ops = ops or self.operators()
        rate = -self.mu_sign * self.omega_B

        def sampler(t):
            return rate * ops.dot(self.field_axis(t))

        return sampler


@dataclass(frozen=True)
class EffectiveFrame:
    """Tilted precession frame of the co-rotating picture.

    n_S lies in the x-z plane at tilt theta_S; the transformed Hamiltonian
    is -sign(mu)*omega_S * s.n_S.  A degenerate frame (omega_S ~ 0 from
    antiparallel cancellation) keeps n_S = z and is flagged.
    """

    omega_S: float
    theta_S: float
    n_S: np.ndarray
    degenerate: bool = False

    @property
    def cos_theta_S(self) -> float:
        return float(np.cos(self.theta_S))

    @property
    def sin_theta_S(self) -> float:
        return float(np.sin(self.theta_S))


def effective_frame(params: RotatingFieldParams) -> EffectiveFrame:
    """Tilted frame (omega_S, theta_S, n_S) of the co-rotating picture.

    omega_S = sqrt(omega_B^2 + omega^2 + 2*sign(mu)*omega_B*omega*cos(theta_B)),
    sin(theta_S) = omega_B*sin(theta_B)/omega_S,
    cos(theta_S) = (omega_B*cos(theta_B) + sign(mu)*omega)/omega_S.
    """
    eps = params.mu_sign
    wb, w, tb = params.omega_B, params.omega, params.theta_B
    omega_S_sq = wb * wb + w * w + 2.0 * eps * wb * w * np.cos(tb)
    omega_S = float(np.sqrt(max(omega_S_sq, 0.0)))
    if omega_S < 1e-12 * max(wb, w):
        return EffectiveFrame(omega_S=omega_S, theta_S=0.0, n_S=Z_AXIS.copy(), degenerate=True)
    sin_t = wb * np.sin(tb) / omega_S
    cos_t = (wb * np.cos(tb) + eps * w) / omega_S
    theta_S = float(np.arctan2(sin_t, cos_t))
    n_S = np.array([np.sin(theta_S), 0.0, np.cos(theta_S)])
    return EffectiveFrame(omega_S=omega_S, theta_S=theta_S, n_S=n_S)


def corotating_basis(frame: EffectiveFrame, v0):
    """Right-handed triple (e_x, e_y, e_z = n_S) adapted to v0.

    e_x points along the component of v0 perpendicular to n_S and
    e_y = n_S x v0 / |..|.  When v0 is (anti)parallel to n_S the
    perpendicular direction is arbitrary and a fixed completion is used;
    the trajectory does not depend on that choice.  Returns the triple and
    v0_perp = sqrt(|v0|^2 - (v0.n_S)^2).
    """
    v0 = np.asarray(v0, dtype=float)
    n = frame.n_S
    parallel = (v0 @ n) * n
    perp = v0 - parallel
    v0_perp = float(np.linalg.norm(perp))
    if v0_perp > 1e-12 * max(1.0, np.linalg.norm(v0)):
        e_x = perp / v0_perp
        e_y = np.cross(n, v0) / v0_perp
    else:
        seed = np.array([0.0, 1.0, 0.0]) if abs(n[1]) < 0.9 else np.array([1.0, 0.0, 0.0])
        e_y = seed - (seed @ n) * n
        e_y /= np.linalg.norm(e_y)
        e_x = np.cross(e_y, n)
        v0_perp = 0.0
    return e_x, e_y, n, v0_perp


def evolution_operator(params: RotatingFieldParams, t, t_initial=0.0) -> np.ndarray:
    """Closed-form propagator U(t, t_initial).

    U = exp(-i*omega*t*s_z) exp(i*sign(mu)*omega_S*(t-t0)*s.n_S)
        exp(i*omega*t0*s_z); the middle factor is the co-rotating
    propagator and the outer ones undo the frame rotation.
    """
    ops = params.operators()
    frame = effective_frame(params)
    u_eff = exp_spin(ops, frame.n_S, params.mu_sign * frame.omega_S * (t - t_initial))
    left = rotation_z(ops, params.omega * t)
    right = rotation_z(ops, -params.omega * t_initial)
    return left @ u_eff @ right


@dataclass
class Trajectory:
    """Mean-spin trajectory v(t) and its co-rotating decomposition g(t)."""

    times: np.ndarray
    vectors: np.ndarray  # v(t), shape (N, 3)
    g_vectors: np.ndarray  # co-rotating g(t), same shape; g_z == v_z

    @property
    def v0(self):
        return self.vectors[0]


def corotating_vector(params: RotatingFieldParams, frame: EffectiveFrame, v0, times):
    """g(t): v0 rotated about n_S through the angle -sign(mu)*omega_S*t."""
    angles = -params.mu_sign * frame.omega_S * np.asarray(times, dtype=float)
    return rodrigues_rotate(np.asarray(v0, dtype=float), frame.n_S, angles)


def mean_spin_trajectory(params: RotatingFieldParams, psi0, times) -> Trajectory:
    """Closed-form mean spin v(t) from the initial state.

    v0 = <psi0|s|psi0> is rotated about n_S (giving g(t)) and the result is
    carried around the z axis with the field, v(t) = R_z(omega*t) g(t).
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    times = np.asarray(times, dtype=float)
    ops = params.operators()
    frame = effective_frame(params)
    v0 = mean_spin(ops, psi0)
    g = corotating_vector(params, frame, v0, times)
    v = rodrigues_rotate(g, Z_AXIS, params.omega * times)
    return Trajectory(times=times, vectors=v, g_vectors=g)


@dataclass(frozen=True)
class CyclicInfo:
    """Detected commensurability omega_S/omega = K_S/K and period T = K*tau."""

    K: int
    K_S: int
    T: float
    ratio_residual: float


def detect_cyclicity(params: RotatingFieldParams, tol=1e-9, k_max=64) -> CyclicInfo | None:
    """Detect a rational omega_S/omega via continued-fraction convergents.

    Returns None when no convergent with denominator <= k_max lands within
    tol; every solution is then cyclic with period T = K*2*pi/omega.
    """
    frame = effective_frame(params)
    match = best_rational(frame.omega_S / params.omega, tol=tol, max_denominator=k_max)
    if match is None:
        return None
    return CyclicInfo(
        K=match.denominator,
        K_S=match.numerator,
        T=match.denominator * params.period,
        ratio_residual=match.residual,
    )


@dataclass
class PhaseReport:
    """Phase decomposition of one cyclic run.

    delta and gamma are reduced to (-pi, pi]; beta and omega_v are kept
    unreduced (beta is an integral, omega_v counts windings).  omega_v is
    NaN when |v0| vanishes and the solid angle is undefined.
    """

    delta: float
    beta: float
    gamma: float
    omega_v: float
    cyclic_fidelity: float
    relation_residual: float
    v0: np.ndarray
    info: CyclicInfo
    frame: EffectiveFrame


def total_phase_unreduced(params: RotatingFieldParams, info: CyclicInfo) -> float:
    """s*(sign(mu)*2*pi*K_S - 2*pi*K), before reduction mod 2*pi."""
    return params.spin.s * (params.mu_sign * TWO_PI * info.K_S - TWO_PI * info.K)


def dynamic_phase(params: RotatingFieldParams, frame: EffectiveFrame, info: CyclicInfo, v0) -> float:
    """Unreduced dynamic phase over one cycle.

    beta = sign(mu)*2*pi*K_S*(v0.n_S) - 2*pi*K*cos(theta_S)*(v0.n_S).
    """
    v0_par = float(np.asarray(v0) @ frame.n_S)
    return params.mu_sign * TWO_PI * info.K_S * v0_par - TWO_PI * info.K * frame.cos_theta_S * v0_par


def solid_angle_closed_form(frame: EffectiveFrame, v0, info: CyclicInfo, mu_sign) -> float:
    """Unreduced solid angle swept by the mean spin over one cycle.

    omega_v = -sign(mu)*2*pi*K_S*(1 - v0.n_S/|v0|)
              + 2*pi*K*(1 - cos(theta_S)*v0.n_S/|v0|).
    The first term comes from the precession about n_S, the second from
    being carried around the z axis.
    """
    v0 = np.asarray(v0, dtype=float)
    mag = float(np.linalg.norm(v0))
    if mag < ZERO_SPIN_TOL:
        raise UndefinedSolidAngleError("solid angle undefined for |v0| ~ 0")
    cos_gap = float(v0 @ frame.n_S) / mag
    return (
        -mu_sign * TWO_PI * info.K_S * (1.0 - cos_gap)
        + TWO_PI * info.K * (1.0 - frame.cos_theta_S * cos_gap)
    )


def extra_term_residual(report: PhaseReport, params: RotatingFieldParams) -> float:
    """Distance mod 2*pi of gamma from -|v0|*omega_v plus the extra term.

    The extra term is (s - |v0|)*(sign(mu)*2*pi*K_S - 2*pi*K); it vanishes
    identically for spin 1/2 (|v0| = 1/2 for every normalized state) but
    depends on the initial condition for higher spin.  For |v0| ~ 0 the
    solid-angle term drops out and the relation still holds.
    """
    mag = float(np.linalg.norm(report.v0))
    area_term = 0.0 if mag < ZERO_SPIN_TOL else -mag * report.omega_v
    extra = (params.spin.s - mag) * (
        params.mu_sign * TWO_PI * report.info.K_S - TWO_PI * report.info.K
    )
    return float(np.abs(wrap_angle(report.gamma - (area_term + extra))))


def phase_report(params: RotatingFieldParams, psi0, tol=1e-9, k_max=64) -> PhaseReport:
    """Closed-form phases of a cyclic solution started from psi0.

    Raises NonCyclicError when omega_S/omega is not detectably rational and
    NumericalTrustError if the closed-form total phase disagrees with the
    overlap arg<psi0|U(T)psi0> (an internal consistency failure).
    """
    info = detect_cyclicity(params, tol=tol, k_max=k_max)
    if info is None:
        raise NonCyclicError(
            f"omega_S/omega not rational within tol={tol:g} and K <= {k_max}"
        )
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    ops = params.operators()
    frame = effective_frame(params)
    v0 = mean_spin(ops, psi0)

    psi_T = evolution_operator(params, info.T) @ psi0
    overlap = complex(np.vdot(psi0, psi_T))
    fidelity = abs(overlap)
    if fidelity < 1.0 - 1e-9:
        raise NumericalTrustError(f"cyclic fidelity {fidelity:.12f} below 1 - 1e-9")

    delta_raw = total_phase_unreduced(params, info)
    delta = float(wrap_angle(delta_raw))
    overlap_mismatch = float(np.abs(wrap_angle(delta - np.angle(overlap))))
    if overlap_mismatch > 1e-9:
        raise NumericalTrustError(
            f"total phase formula and overlap disagree by {overlap_mismatch:.3e}"
        )

    beta = dynamic_phase(params, frame, info, v0)
    gamma = float(wrap_angle(delta_raw - beta))
    if np.linalg.norm(v0) < ZERO_SPIN_TOL:
        omega_v = float("nan")
    else:
        omega_v = solid_angle_closed_form(frame, v0, info, params.mu_sign)

    report = PhaseReport(
        delta=delta,
        beta=beta,
        gamma=gamma,
        omega_v=omega_v,
        cyclic_fidelity=fidelity,
        relation_residual=0.0,
        v0=v0,
        info=info,
        frame=frame,
    )
    report.relation_residual = extra_term_residual(report, params)
    return report


def oracle_phase_split(params: RotatingFieldParams, psi0, info: CyclicInfo, dt=None,
                       max_steps=400_000):
    """Brute-force (delta, beta, gamma, fidelity) over one detected cycle."""
    if dt is None:
        dt = 1e-4 * params.period
    n = min(max(1, round(info.T / dt)), max_steps)
    prop = oracle.timestep_propagate(params.hamiltonian_sampler(), psi0, info.T / n, info.T)
    return oracle.phase_decompose(prop, params.hamiltonian_sampler())


def sampled_trajectory_times(info: CyclicInfo, samples_per_period=None, total=None):
    """Uniform grid over one cycle, endpoint included."""
    if total is None:
        per = samples_per_period or 4096
        total = per * info.K
    return np.linspace(0.0, info.T, int(total) + 1)
