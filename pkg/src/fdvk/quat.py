"""Quaternion algebra on numpy arrays.

Quaternions are arrays with last axis 4, components (w, x, y, z) along
(1, i, j, k). Imaginary quaternions drop the real slot: last axis 3.
All functions broadcast over leading axes, so a field of quaternions is
just an (n, n, n, 4) array.

The inner product <p, q> = (p* q + q* p) / 2 is the Euclidean 4-dot.
For imaginary p, q the useful identities are
    p q = -dot(p, q) + cross(p, q)      (as a quaternion)
    [p, q] = 2 cross(p, q)
    Re(p q r) = -det[p, q, r]
"""

import numpy as np

UNIT_TOL = 1e-9

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])

IM_I = np.array([1.0, 0.0, 0.0])
IM_J = np.array([0.0, 1.0, 0.0])
IM_K = np.array([0.0, 0.0, 1.0])


def mul(p, q):
    """Hamilton product, broadcasting over leading axes."""
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def conj(q):
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def dot(p, q):
    """<p, q> = (p* q + q* p) / 2, the Euclidean 4-dot."""
    return np.sum(p * q, axis=-1)


def norm(q):
    return np.sqrt(np.sum(q * q, axis=-1))


def normalize(q, tol=UNIT_TOL):
    """Rescale to unit length; reject drift beyond tol.

    Accumulated float error up to tol is silently repaired. Anything
    larger is a bug or bad data and raises.
    """
    n = norm(q)
    if np.any(np.abs(n - 1.0) > tol):
        worst = float(np.max(np.abs(n - 1.0)))
        raise ValueError(f"unit constraint violated by {worst:.3e} (tol {tol:.1e})")
    return q / n[..., None]


def embed(v):
    """Imaginary 3-vector -> quaternion with zero real part."""
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def im(q):
    return q[..., 1:]


def exp_im(v):
    """exp of an imaginary quaternion: cos|v| + sin|v| v/|v|."""
    theta = np.sqrt(np.sum(v * v, axis=-1))
    small = theta < 1e-12
    # sin(t)/t with a series fallback so t = 0 is exact
    factor = np.where(small, 1.0 - theta * theta / 6.0, np.sin(theta) / np.where(small, 1.0, theta))
    return np.concatenate([np.cos(theta)[..., None], v * factor[..., None]], axis=-1)


def log_unit(q):
    """Imaginary part of the principal log of a unit quaternion.

    Valid for Re q > 0 (rotation angle below pi); callers enforce that
    via the adjacent-site dot check.
    """
    w = q[..., 0]
    v = q[..., 1:]
    s = np.sqrt(np.sum(v * v, axis=-1))
    theta = np.arctan2(s, w)
    small = s < 1e-12
    factor = np.where(small, 1.0 / np.where(np.abs(w) > 1e-12, w, 1.0), theta / np.where(small, 1.0, s))
    return v * factor[..., None]


def conjugate_by(u, v):
    """u v u* for unit u and imaginary v; a rotation of v."""
    return im(mul(mul(u, embed(v)), conj(u)))


def hopf(q):
    """h(q) = q i q*, the Hopf fibration Sp1 -> S2."""
    return conjugate_by(q, np.broadcast_to(IM_I, q.shape[:-1] + (3,)))


def _sqrt_chart_a(z):
    # q = (1 - z i)/|1 - z i| satisfies q i q* = z; |1 - z i|^2 = 2(1 + z.i)
    q = ONE - mul(embed(z), I)
    return q / norm(q)[..., None]


def _sqrt_of(z):
    """Some q with q i q* = z, smooth away from the chart seam.

    Chart A covers z.i > -1/2; elsewhere rotate z by pi about j, apply
    chart A, and undo the rotation with a left factor j. The two charts
    agree in 'qmap' output wherever both are defined.
    """
    zi = z[..., 0]
    use_b = zi <= -0.5
    if not np.any(use_b):
        return _sqrt_chart_a(z)
    # keep each chart away from its singular antipode before masking
    za = np.where(use_b[..., None], IM_I, z)
    qa = _sqrt_chart_a(za)
    zb = conjugate_by(np.broadcast_to(conj(J), z.shape[:-1] + (4,)), z)
    zb = np.where(use_b[..., None], zb, IM_I)
    qb = mul(J, _sqrt_chart_a(zb))
    return np.where(use_b[..., None], qb, qa)


def qmap(z, lam, tol=UNIT_TOL):
    """The gauge map: qmap(z, lam) = q lam q* where z = q i q*.

    z is unit imaginary, lam lies in the circle subgroup spanned by 1
    and i. The result does not depend on which square root q is chosen,
    because any two differ by a right circle factor that commutes with
    lam.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(np.abs(lam[..., 2:]) > tol):
        raise ValueError("qmap: lam must lie in the span of 1 and i")
    q = _sqrt_of(np.asarray(z, dtype=float))
    return mul(mul(q, lam), conj(q))
