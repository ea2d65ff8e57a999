"""Unit-vector geometry: rotations, spherical angles, spherical-loop areas.

All vectors are plain numpy arrays of shape (3,) or (N, 3).  Angles are in
radians.  Total phases are reduced to the half-open interval (-pi, pi];
solid angles are kept unreduced (winding-inclusive) unless stated otherwise.
"""

import numpy as np

from .exceptions import PoleGuardError

TWO_PI = 2.0 * np.pi
FOUR_PI = 4.0 * np.pi

X_AXIS = np.array([1.0, 0.0, 0.0])
Y_AXIS = np.array([0.0, 1.0, 0.0])
Z_AXIS = np.array([0.0, 0.0, 1.0])

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


def trapezoid(y, x):
    """Trapezoidal quadrature of samples y over abscissae x."""
    return float(_trapezoid(np.asarray(y, dtype=float), np.asarray(x, dtype=float)))


def cumulative_trapezoid(y, x):
    """Cumulative trapezoidal integral, starting at 0 for the first sample."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    steps = 0.5 * (y[1:] + y[:-1]) * np.diff(x)
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(steps, out=out[1:])
    return out


def wrap_angle(angle):
    """Reduce an angle (or array of angles) to (-pi, pi]."""
    return np.pi - (np.pi - np.asarray(angle)) % TWO_PI


def angle_distance(a, b):
    """Distance between two angles mod 2*pi, in [0, pi]."""
    return float(np.abs(wrap_angle(np.asarray(a) - np.asarray(b))))


def reduce_solid_angle(omega):
    """Reduce an unreduced solid angle to [0, 4*pi)."""
    return float(np.asarray(omega) % FOUR_PI)


def normalize(vec, tol=1e-15):
    """Return vec scaled to unit length; raises on (near-)zero input."""
    v = np.asarray(vec, dtype=float)
    r = np.linalg.norm(v)
    if r < tol:
        raise ValueError("cannot normalize a zero vector")
    return v / r


def spherical_direction(theta, phi):
    """Unit vector at polar angle theta and azimuth phi."""
    st = np.sin(theta)
    return np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


def rodrigues_rotate(vectors, axis, angles):
    """Rotate vector(s) about a unit axis by angle(s), broadcasting freely.

    Implements v*cos(a) + (axis x v)*sin(a) + axis*(axis.v)*(1 - cos(a)).
    """
    n = normalize(axis)
    v = np.asarray(vectors, dtype=float)
    a = np.asarray(angles, dtype=float)
    shape = np.broadcast_shapes(v.shape[:-1], a.shape)
    v = np.broadcast_to(v, shape + (3,))
    a = np.broadcast_to(a, shape)[..., None]
    proj = (v @ n)[..., None] * n
    return (v - proj) * np.cos(a) + np.cross(np.broadcast_to(n, v.shape), v) * np.sin(a) + proj


def rotation_matrix(axis, angle):
    """3x3 rotation matrix about a unit axis."""
    return rodrigues_rotate(np.eye(3).T, axis, angle).T


def rotation_aligning(src, dst):
    """Rotation matrix sending unit vector src onto unit vector dst."""
    a = normalize(src)
    b = normalize(dst)
    cross = np.cross(a, b)
    s = np.linalg.norm(cross)
    c = float(a @ b)
    if s < 1e-14:
        if c > 0.0:
            return np.eye(3)
        # antiparallel: rotate pi about any axis perpendicular to a
        perp = np.cross(a, X_AXIS if abs(a[0]) < 0.9 else Y_AXIS)
        return rotation_matrix(normalize(perp), np.pi)
    return rotation_matrix(cross / s, np.arctan2(s, c))


def spherical_angles(vectors):
    """Polar and (continuously unwrapped) azimuthal angles of a unit trace.

    The azimuth is unwrapped by nearest-branch continuation, which assumes
    the per-sample azimuthal step stays below pi.
    """
    v = np.asarray(vectors, dtype=float)
    theta = np.arccos(np.clip(v[..., 2], -1.0, 1.0))
    phi = np.unwrap(np.arctan2(v[..., 1], v[..., 0]))
    return theta, phi


def loop_solid_angle(theta, phi):
    """Unreduced solid angle swept by a unit trace: integral of (1-cos(theta)) d(phi)."""
    return trapezoid(1.0 - np.cos(theta), phi)


def fibonacci_sphere(count):
    """Roughly uniform unit-sphere sample of the given size."""
    k = np.arange(count, dtype=float) + 0.5
    z = 1.0 - 2.0 * k / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    golden = np.pi * (3.0 - np.sqrt(5.0))
    phi = golden * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def _decimate(unit_vectors, limit=4096):
    stride = max(1, len(unit_vectors) // limit)
    return unit_vectors[::stride]


def point_farthest_from_trace(unit_vectors, candidates=512):
    """Point on the sphere maximizing the angular distance to a unit trace."""
    trace = _decimate(np.asarray(unit_vectors, dtype=float))
    cands = fibonacci_sphere(candidates)
    closeness = (cands @ trace.T).max(axis=1)
    return cands[int(np.argmin(closeness))]


def pole_guarded_rotation(unit_vectors, guard=0.05, candidates=512):
    """Frame rotation keeping a unit trace away from both coordinate poles.

    Returns the identity when min sin(theta) over the trace already exceeds
    the guard.  Otherwise picks a new polar axis minimizing the maximal
    |cos(theta)| over the trace and raises PoleGuardError if even the best
    candidate leaves the trace inside the guard band.
    """
    v = np.asarray(unit_vectors, dtype=float)
    if np.sqrt(np.min(v[:, 0] ** 2 + v[:, 1] ** 2)) >= guard:
        return np.eye(3)
    trace = _decimate(v)
    cands = fibonacci_sphere(candidates)
    worst = np.abs(cands @ trace.T).max(axis=1)
    best = int(np.argmin(worst))
    if worst[best] > np.sqrt(1.0 - guard * guard):
        raise PoleGuardError("trace approaches every candidate polar axis")
    return rotation_aligning(cands[best], Z_AXIS)
