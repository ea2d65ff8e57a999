"""Brute-force validation engines.

Nothing here knows the closed-form solutions: propagation is a time-ordered
product of per-step exponentials, solid angles come from trapezoidal
quadrature of sampled traces, and phase splitting uses only overlaps and
energy expectations.  These are the independent references the exact
formulas are tested against.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import AntipodePassageError, NonCyclicError
from .geometry import (
    FOUR_PI,
    Z_AXIS,
    point_farthest_from_trace,
    rotation_aligning,
    trapezoid,
    wrap_angle,
)


@dataclass
class SteppedPropagation:
    """States from fixed-step time-ordered propagation."""

    times: np.ndarray
    states: np.ndarray  # shape (len(times), dim)
    dt: float
    norm_drift: float

    @property
    def initial(self):
        return self.states[0]

    @property
    def final(self):
        return self.states[-1]


@dataclass
class QuadratureResult:
    """Quadrature value with a half-resolution refinement estimate."""

    value: float
    refinement_delta: float


def _hamiltonian_stack(h_sampler, times):
    stack = np.asarray([h_sampler(t) for t in times], dtype=complex)
    scale = max(1.0, np.abs(stack).max())
    herm = np.abs(stack - stack.conj().transpose(0, 2, 1)).max()
    if herm > 1e-10 * scale:
        raise ValueError(f"Hamiltonian sample is not Hermitian (residual {herm:.3e})")
    return stack


def timestep_propagate(h_sampler, psi0, dt, t_final, t_initial=0.0) -> SteppedPropagation:
    """Propagate i dpsi/dt = H(t) psi by the exponential midpoint rule.

    Each step applies exp(-i*H(t_mid)*dt) built from a spectral
    decomposition of the midpoint-sampled Hamiltonian, so every step is
    exactly unitary and the scheme is second-order accurate in dt.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    span = t_final - t_initial
    if span <= 0.0:
        raise ValueError("t_final must exceed t_initial")
    n_steps = max(1, round(span / dt))
    dt = span / n_steps
    times = t_initial + dt * np.arange(n_steps + 1)

    h_stack = _hamiltonian_stack(h_sampler, times[:-1] + 0.5 * dt)
    evals, evecs = np.linalg.eigh(h_stack)
    phases = np.exp(-1j * dt * evals)
    steps = np.einsum("nij,nj,nkj->nik", evecs, phases, evecs.conj())

    psi = np.asarray(psi0, dtype=complex)
    states = np.empty((n_steps + 1, psi.size), dtype=complex)
    states[0] = psi
    for k in range(n_steps):
        psi = steps[k] @ psi
        states[k + 1] = psi
    norm_drift = float(np.abs(np.linalg.norm(states, axis=1) - 1.0).max())
    return SteppedPropagation(times=times, states=states, dt=dt, norm_drift=norm_drift)


def propagate_unitary(h_sampler, dim, dt, t_final, t_initial=0.0) -> np.ndarray:
    """Full time-ordered propagator over [t_initial, t_final] (same stepping)."""
    if dt <= 0.0 or t_final <= t_initial:
        raise ValueError("need dt > 0 and t_final > t_initial")
    n_steps = max(1, round((t_final - t_initial) / dt))
    dt = (t_final - t_initial) / n_steps
    mids = t_initial + dt * (np.arange(n_steps) + 0.5)
    h_stack = _hamiltonian_stack(h_sampler, mids)
    evals, evecs = np.linalg.eigh(h_stack)
    phases = np.exp(-1j * dt * evals)
    steps = np.einsum("nij,nj,nkj->nik", evecs, phases, evecs.conj())
    u = np.eye(dim, dtype=complex)
    for k in range(n_steps):
        u = steps[k] @ u
    return u


def _raw_solid_angle(times, vectors, v0_mag):
    vdot = np.gradient(vectors, times, axis=0)
    num = vectors[:, 0] * vdot[:, 1] - vectors[:, 1] * vdot[:, 0]
    den = v0_mag + vectors[:, 2]
    return trapezoid(num / den, times) / v0_mag


def solid_angle_quadrature(times, vectors, pole_margin=0.3, antipode_tol=1e-9) -> QuadratureResult:
    """Unreduced solid angle of a closed trace about the +z pole.

    Evaluates (1/|v0|) * integral of (vx*vy' - vy*vx')/(|v0| + vz) dt with
    central-difference derivatives.  The integrand is singular where the
    trace meets the -z antipode; if the trace comes closer than the pole
    margin, the quadrature is redone in a rotated frame whose antipode is
    far from the trace, and the result is branch-corrected back to the
    +z-pole value (the two frames can differ by multiples of 4*pi).
    """
    times = np.asarray(times, dtype=float)
    v = np.asarray(vectors, dtype=float)
    mags = np.linalg.norm(v, axis=1)
    if mags.min() <= 1e-10:
        raise AntipodePassageError("trace magnitude vanishes; solid angle undefined")
    v0_mag = float(mags[0])
    closeness = (v0_mag + v[:, 2]) / v0_mag
    if closeness.min() < antipode_tol:
        raise AntipodePassageError("trace passes through the quadrature antipode")

    plain = _raw_solid_angle(times, v, v0_mag)
    if closeness.min() >= pole_margin:
        refined = _raw_solid_angle(times[::2], v[::2], v0_mag)
        return QuadratureResult(value=plain, refinement_delta=abs(plain - refined))

    # Near-antipode passage: rotate so the new antipode is far from the
    # trace, then use the (possibly coarse) plain value only to pick the
    # 4*pi branch of the well-conditioned rotated value.
    far = point_farthest_from_trace(v / mags[:, None])
    rot = rotation_aligning(far, -Z_AXIS)
    v_rot = v @ rot.T
    value_rot = _raw_solid_angle(times, v_rot, v0_mag)
    branch = round((plain - value_rot) / FOUR_PI)
    value = value_rot + FOUR_PI * branch
    refined = _raw_solid_angle(times[::2], v_rot[::2], v0_mag) + FOUR_PI * branch
    return QuadratureResult(value=value, refinement_delta=abs(value - refined))


@dataclass
class PhaseSplit:
    """Numeric total/dynamic/geometric phase decomposition of a cyclic run."""

    delta: float
    beta: float
    gamma: float
    fidelity: float


def phase_decompose(prop: SteppedPropagation, h_sampler, fidelity_tol=1e-6) -> PhaseSplit:
    """Total, dynamic, and geometric phase from a stepped propagation.

    delta is the overlap argument arg<psi(0)|psi(T)>, beta the trapezoidal
    integral of -<H(t)>, and gamma their difference reduced to (-pi, pi].
    A run with final overlap magnitude below 1 - fidelity_tol is rejected
    as non-cyclic.
    """
    overlap = complex(np.vdot(prop.initial, prop.final))
    fidelity = abs(overlap)
    if fidelity < 1.0 - fidelity_tol:
        raise NonCyclicError(f"cyclic fidelity {fidelity:.9f} below 1 - {fidelity_tol:g}")
    h_stack = _hamiltonian_stack(h_sampler, prop.times)
    energies = np.real(np.einsum("ni,nij,nj->n", prop.states.conj(), h_stack, prop.states))
    beta = -trapezoid(energies, prop.times)
    delta = float(np.angle(overlap))
    gamma = float(wrap_angle(delta - beta))
    return PhaseSplit(delta=delta, beta=beta, gamma=gamma, fidelity=fidelity)
