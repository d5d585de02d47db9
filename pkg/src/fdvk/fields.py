"""Lattice fields with values on S2 and Sp1, energies, and connections.

A SphereField stores one unit imaginary quaternion per site (a map to
S2), a GroupField one unit quaternion (a map to Sp1), a Connection one
imaginary quaternion per site and lattice direction.

Connection values follow the edge-logarithm convention: a_mu(x) is the
scaled log of the transport from site x to x + e_mu and therefore
samples the continuum 1-form at the edge midpoint x + h/2 e_mu. Code
that needs the value at the site itself averages the two incident
edges (avg_back); holonomy and developing-map reconstruction consume
the raw edge values, for which the round trip is exact.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import quat
from .errors import GridMismatch, UnresolvableField
from .lattice import Grid, avg_back, diff

FOUR_PI = 4.0 * np.pi


def _check_values(grid, values, comps, kind):
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n, grid.n, grid.n, comps):
        raise ValueError(f"{kind} values must have shape (n, n, n, {comps})")
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{kind} values must be finite")
    return values


@dataclass(frozen=True)
class SphereField:
    """Map from the torus to S2, one unit imaginary quaternion per site."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = _check_values(self.grid, self.values, 3, "SphereField")
        n = np.sqrt(np.sum(v * v, axis=-1))
        if np.any(np.abs(n - 1.0) > quat.UNIT_TOL):
            worst = float(np.max(np.abs(n - 1.0)))
            raise ValueError(f"SphereField off the unit sphere by {worst:.3e}")
        # stored as given: renormalizing here would break the bit-exact
        # snapshot round trip
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class GroupField:
    """Map from the torus to Sp1, one unit quaternion per site."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = _check_values(self.grid, self.values, 4, "GroupField")
        n = np.sqrt(np.sum(v * v, axis=-1))
        if np.any(np.abs(n - 1.0) > quat.UNIT_TOL):
            worst = float(np.max(np.abs(n - 1.0)))
            raise ValueError(f"GroupField off the unit sphere by {worst:.3e}")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class Connection:
    """sp1-valued discrete 1-form in the edge-logarithm convention."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,) * 3 + (3, 3):
            raise ValueError("Connection values must have shape (n, n, n, 3, 3)")
        if not np.all(np.isfinite(v)):
            raise ValueError("Connection values must be finite")
        object.__setattr__(self, "values", v)

    def site_values(self):
        """Edge values moved to sites by the two-edge average, O(h^2)."""
        out = np.empty_like(self.values)
        for mu in (1, 2, 3):
            out[..., mu - 1, :] = avg_back(self.grid, self.values[..., mu - 1, :], mu)
        return out


class Energy(NamedTuple):
    e2: float
    e4: float
    total: float


def constant_sphere(grid, v=quat.IM_I):
    return SphereField(grid, np.broadcast_to(np.asarray(v, float), (grid.n,) * 3 + (3,)).copy())


def constant_group(grid, q=quat.ONE):
    return GroupField(grid, np.broadcast_to(np.asarray(q, float), (grid.n,) * 3 + (4,)).copy())


def conjugate_field(u, phi):
    """psi = u phi u* site by site."""
    u.grid.same(phi.grid)
    psi = quat.conjugate_by(u.values, phi.values)
    psi /= np.sqrt(np.sum(psi * psi, axis=-1))[..., None]
    return SphereField(u.grid, psi)


def _gradients(grid, values):
    return [diff(grid, values, mu) for mu in (1, 2, 3)]


def pullback_area(psi):
    """Pullback of the unit-area 2-form on S2, as a dual-vector 2-form.

    F_k = psi . (d_i psi x d_j psi) / 4 pi for (i, j, k) cyclic; the
    total flux through a slice counts preimages of a regular value.
    """
    g = psi.grid
    dv = _gradients(g, psi.values)
    out = np.empty((g.n, g.n, g.n, 3))
    for i, j, k in ((1, 2, 0), (2, 0, 1), (0, 1, 2)):
        out[..., k] = np.sum(psi.values * np.cross(dv[i], dv[j]), axis=-1) / FOUR_PI
    return out


def _quartic_density(d1, d2, d3):
    c12 = np.cross(d1, d2)
    c23 = np.cross(d2, d3)
    c31 = np.cross(d3, d1)
    return np.sum(c12 * c12 + c23 * c23 + c31 * c31, axis=-1)


def energy(psi):
    """Dirichlet plus quartic energy of an S2-valued map.

    e2 integrates |d psi|^2; e4 integrates |d psi ^ d psi|^2, the sum
    of |d psi^a ^ d psi^b|^2 over the three component pairs, which
    collapses to sum_{mu<nu} |d_mu psi x d_nu psi|^2.
    """
    g = psi.grid
    d1, d2, d3 = _gradients(g, psi.values)
    e2 = float(np.sum(d1 * d1 + d2 * d2 + d3 * d3)) * g.h**3
    e4 = float(np.sum(_quartic_density(d1, d2, d3))) * g.h**3
    return Energy(e2, e4, e2 + e4)


def connection_of(u):
    """a = u* du via edge logarithms.

    a_mu(x) = log(u(x)* u(x + e_mu)) / h. Exactness of the round trip
    through the developing map is the design property; the price is the
    half-edge offset documented on Connection.
    """
    g = u.grid
    out = np.empty((g.n, g.n, g.n, 3, 3))
    for mu in (1, 2, 3):
        ahead = np.roll(u.values, -1, axis=mu - 1)
        step = quat.mul(quat.conj(u.values), ahead)
        if np.any(step[..., 0] <= 0.0):
            raise UnresolvableField(
                f"adjacent sites along direction {mu} differ by 90 degrees or more; refine the grid"
            )
        out[..., mu - 1, :] = quat.log_unit(step) / g.h
    return Connection(g, out)


def covariant_derivative(a, phi):
    """D_a phi, components d_mu phi + [a_mu, phi] at sites.

    Uses central differences for d and the site-averaged connection for
    the bracket, so the result is collocated with the field values.
    """
    a.grid.same(phi.grid)
    g = phi.grid
    ab = a.site_values()
    out = np.empty((g.n, g.n, g.n, 3, 3))
    for mu in (1, 2, 3):
        out[..., mu - 1, :] = diff(g, phi.values, mu) + 2.0 * np.cross(
            ab[..., mu - 1, :], phi.values
        )
    return out


def energy_conn(phi, a):
    """Energy in the connection picture: d psi replaced by D_a phi."""
    a.grid.same(phi.grid)
    g = phi.grid
    D = covariant_derivative(a, phi)
    d1, d2, d3 = D[..., 0, :], D[..., 1, :], D[..., 2, :]
    e2 = float(np.sum(d1 * d1 + d2 * d2 + d3 * d3)) * g.h**3
    e4 = float(np.sum(_quartic_density(d1, d2, d3))) * g.h**3
    return Energy(e2, e4, e2 + e4)


def decompose(a, phi):
    """Split a into the phi-component and the tangential part.

    long_mu = <a_mu, phi>, tang_mu = phi [a_mu, phi] / 2. Reconstruction
    long phi + tang = a is an algebraic identity, exact per site. This
    is pointwise algebra on the stored arrays; no edge averaging.
    """
    a.grid.same(phi.grid)
    p = phi.values[..., None, :]
    long = np.sum(a.values * p, axis=-1)
    # phi [a, phi] / 2 = phi x (a x phi), the projection off phi
    tang = np.cross(p, np.cross(a.values, p))
    return long, tang


def plaquette_curvature(a):
    """Forward-difference curvature da + a ^ a on plaquettes.

    Each component is centered at the plaquette midpoint: forward
    differences of the transverse edge values plus the bracket of the
    averaged parallel legs. O(h^2) for developed connections.
    Returns a dual-vector 2-form of imaginary quaternions, slot k for
    the (i, j) plaquette with (i, j, k) cyclic.
    """
    g = a.grid
    v = a.values
    out = np.empty((g.n, g.n, g.n, 3, 3))
    for i, j, k in ((1, 2, 0), (2, 0, 1), (0, 1, 2)):
        ai, aj = v[..., i, :], v[..., j, :]
        dj_ai = (np.roll(ai, -1, axis=j) - ai) / g.h
        di_aj = (np.roll(aj, -1, axis=i) - aj) / g.h
        ai_avg = 0.5 * (ai + np.roll(ai, -1, axis=j))
        aj_avg = 0.5 * (aj + np.roll(aj, -1, axis=i))
        out[..., k, :] = di_aj - dj_ai + 2.0 * np.cross(ai_avg, aj_avg)
    return out


def flatness_residuals(a, phi):
    """L2 residuals of the curvature and of its frame decomposition.

    full is the plaquette curvature norm. eq1 and eq2 are the residuals
    of the two equations the flatness condition splits into over the
    frame of phi: the phi-component equation

        d<a, phi> = [phi dphi, [a, phi]]/4 + phi [a, phi]^[a, phi]/4

    and the tangential equation

        d(phi [a, phi]/2) = <a, phi>^D_a phi + (dphi^[a, phi] + [a, phi]^dphi)/4.

    Both are evaluated site-centered through the identities
    [phi dphi, Q]_{mu nu}/4 = d_mu phi . t_nu - d_nu phi . t_mu and
    phi Q^Q /4 = -2 (t_mu x t_nu) . phi with t the tangential part and
    Q = [a, phi]; the transcription is exact pointwise algebra.
    """
    a.grid.same(phi.grid)
    g = phi.grid
    ab = a.site_values()
    p = phi.values
    dphi = _gradients(g, p)
    s = np.sum(ab * p[..., None, :], axis=-1)
    t = ab - s[..., None] * p[..., None, :]
    D = [dphi[mu] + 2.0 * np.cross(ab[..., mu, :], p) for mu in range(3)]

    full2 = 0.0
    r1_2 = 0.0
    r2_2 = 0.0
    Fp = plaquette_curvature(a)
    for i, j, k in ((1, 2, 0), (2, 0, 1), (0, 1, 2)):
        full2 += float(np.sum(Fp[..., k, :] ** 2))
        si, sj = s[..., i], s[..., j]
        ti, tj = t[..., i, :], t[..., j, :]
        ds = diff(g, sj, i + 1) - diff(g, si, j + 1)
        r1 = (
            ds
            - np.sum(dphi[i] * tj, axis=-1)
            + np.sum(dphi[j] * ti, axis=-1)
            + 2.0 * np.sum(np.cross(ti, tj) * p, axis=-1)
        )
        r1_2 += float(np.sum(r1 * r1))
        dt = diff(g, tj, i + 1) - diff(g, ti, j + 1)
        sD = si[..., None] * D[j] - sj[..., None] * D[i]
        Qi, Qj = 2.0 * np.cross(ti, p), 2.0 * np.cross(tj, p)
        mix = 0.5 * (np.cross(dphi[i], Qj) - np.cross(dphi[j], Qi))
        r2 = dt - sD - mix
        r2_2 += float(np.sum(r2 * r2))
    h3 = g.h**3
    return float(np.sqrt(full2 * h3)), float(np.sqrt(r1_2 * h3)), float(np.sqrt(r2_2 * h3))
