"""Spin-s operator algebra on the (2s+1)-dimensional representation.

Conventions (hbar = 1 throughout):

* the quantum number s is stored as the integer 2s, so half-integer spins
  stay exact;
* the working basis is the s_z eigenbasis ordered m = s, s-1, ..., -s
  (descending), making s_z diagonal with descending entries;
* axis-angle exponentials exp(i*phi*s.n) are evaluated by spectral
  decomposition of the Hermitian matrix s.n, whose eigenvalues are the
  exact values m = s ... -s.
"""

from dataclasses import dataclass, field

import numpy as np

from .geometry import Y_AXIS, Z_AXIS, normalize, spherical_direction


@dataclass(frozen=True)
class SpinQuantum:
    """Spin quantum number stored as the integer 2s."""

    two_s: int

    def __post_init__(self):
        if not isinstance(self.two_s, (int, np.integer)) or self.two_s < 0:
            raise ValueError("two_s must be a non-negative integer")

    @classmethod
    def from_s(cls, s):
        two_s = round(2 * s)
        if abs(2 * s - two_s) > 1e-12:
            raise ValueError(f"{s} is not an integer or half-integer spin")
        return cls(int(two_s))

    @property
    def s(self) -> float:
        return self.two_s / 2.0

    @property
    def dim(self) -> int:
        return self.two_s + 1

    def projections(self):
        """Magnetic quantum numbers m = s, s-1, ..., -s (descending)."""
        return (self.two_s - 2 * np.arange(self.dim)) / 2.0


@dataclass(frozen=True)
class SpinOps:
    """Cartesian spin operator matrices in the descending s_z eigenbasis."""

    spin: SpinQuantum
    sx: np.ndarray = field(repr=False)
    sy: np.ndarray = field(repr=False)
    sz: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.spin.dim

    def dot(self, direction):
        """Hermitian matrix s.n for a (not necessarily unit) direction n."""
        n = np.asarray(direction, dtype=float)
        return n[0] * self.sx + n[1] * self.sy + n[2] * self.sz

    def vector(self):
        """The three matrices stacked as an array of shape (3, dim, dim)."""
        return np.stack([self.sx, self.sy, self.sz])


@dataclass(frozen=True)
class SpinEigenbasis:
    """Orthonormal eigenbasis of s.n, columns ordered m = s ... -s."""

    direction: np.ndarray
    columns: np.ndarray

    def state(self, m_s):
        """Eigenstate column for eigenvalue m_s (index s - m_s)."""
        dim = self.columns.shape[0]
        s = (dim - 1) / 2.0
        idx = round(s - m_s)
        if not 0 <= idx < dim or abs(s - idx - m_s) > 1e-12:
            raise ValueError(f"m_s={m_s} is not a projection for dim={dim}")
        return self.columns[:, idx]


def spin_operators(spin) -> SpinOps:
    """Spin matrices from the ladder construction.

    The raising operator has <m+1|s_+|m> = sqrt(s(s+1) - m(m+1)); then
    s_x = (s_+ + s_-)/2 and s_y = (s_+ - s_-)/(2i), with s_z diagonal.
    """
    if not isinstance(spin, SpinQuantum):
        spin = SpinQuantum.from_s(spin)
    dim = spin.dim
    s = spin.s
    m = spin.projections()
    s_plus = np.zeros((dim, dim), dtype=complex)
    for j in range(1, dim):
        mj = m[j]
        s_plus[j - 1, j] = np.sqrt(s * (s + 1) - mj * (mj + 1))
    s_minus = s_plus.conj().T
    sx = 0.5 * (s_plus + s_minus)
    sy = (s_plus - s_minus) / 2j
    sz = np.diag(m.astype(complex))
    for mat in (sx, sy, sz):
        mat.flags.writeable = False
    return SpinOps(spin=spin, sx=sx, sy=sy, sz=sz)


def exp_spin(ops: SpinOps, axis, angle) -> np.ndarray:
    """Unitary exp(i*angle*s.n) by spectral decomposition of s.n.

    The eigenvalues of s.n are known exactly (m = s ... -s), so they are
    substituted for the numerically computed ones before exponentiation.
    """
    n = normalize(axis)
    _, vecs = np.linalg.eigh(ops.dot(n))
    m_ascending = np.arange(ops.dim) - ops.spin.s
    phases = np.exp(1j * angle * m_ascending)
    return (vecs * phases) @ vecs.conj().T


def rotation_z(ops: SpinOps, phi) -> np.ndarray:
    """exp(-i*phi*s_z), diagonal in the working basis."""
    return np.diag(np.exp(-1j * phi * ops.spin.projections()))


def rotation_y(ops: SpinOps, theta) -> np.ndarray:
    """exp(-i*theta*s_y); its entries are real (they are the Wigner
    d-functions for this representation)."""
    return exp_spin(ops, Y_AXIS, -theta)


def spin_direction_eigenbasis(ops: SpinOps, theta, phi) -> SpinEigenbasis:
    """Eigenbasis of s.n for n at polar angle theta and azimuth phi.

    Column m_s is exp(-i*phi*s_z) exp(-i*theta*s_y) applied to the
    corresponding s_z eigenvector, which satisfies (s.n) chi = m_s chi.
    """
    columns = rotation_z(ops, phi) @ rotation_y(ops, theta)
    return SpinEigenbasis(direction=spherical_direction(theta, phi), columns=columns)


def conjugate_spin_vector(ops: SpinOps, axis, angle):
    """Closed form of exp(i*phi*s.n) s exp(-i*phi*s.n) as three matrices.

    Returns F = (s - (s.n)n) cos(phi) + (n x s) sin(phi) + (s.n)n, where the
    cross product acts on the operator triple componentwise.
    """
    n = normalize(axis)
    svec = ops.vector()
    s_dot_n = ops.dot(n)
    parallel = n[:, None, None] * s_dot_n[None, :, :]
    cross = np.zeros_like(svec)
    cross[0] = n[1] * svec[2] - n[2] * svec[1]
    cross[1] = n[2] * svec[0] - n[0] * svec[2]
    cross[2] = n[0] * svec[1] - n[1] * svec[0]
    f = (svec - parallel) * np.cos(angle) + cross * np.sin(angle) + parallel
    return f[0], f[1], f[2]


def mean_spin(ops: SpinOps, psi) -> np.ndarray:
    """Expectation value <psi|s|psi> as a real 3-vector."""
    psi = np.asarray(psi, dtype=complex)
    return np.real(np.einsum("i,aij,j->a", psi.conj(), ops.vector(), psi))


def spin_half_axis(psi) -> np.ndarray:
    """Unit vector e with (s.e)|psi> = |psi>/2 for any spin-1/2 state.

    For spin 1/2 the doubled mean spin 2<s> is always a unit vector and
    the state is the corresponding +1/2 eigenstate.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise ValueError("spin_half_axis expects a two-component state")
    ops = spin_operators(SpinQuantum(1))
    return 2.0 * mean_spin(ops, psi / np.linalg.norm(psi))


def random_state(dim, rng) -> np.ndarray:
    """Normalized state with complex-normal amplitudes."""
    amp = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return amp / np.linalg.norm(amp)
