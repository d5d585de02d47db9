"""Periodic cubic grid on the flat 3-torus and its discrete calculus.

Scalar fields are (n, n, n) arrays; a value with extra per-site
components (quaternions, form components) appends trailing axes. Site
(x, y, z) holds the sample at physical point (x h, y h, z h).

Forms are realized componentwise:
    0-form  (n, n, n)
    1-form  (n, n, n, 3)      component mu along dx^mu
    2-form  (n, n, n, 3)      dual-vector: slot k holds the (i, j)
                              coefficient for (i, j, k) cyclic
    3-form  (n, n, n)         coefficient of dx^1 dx^2 dx^3

Two derivative backends coexist on purpose. Central differences keep
the discrete energy an explicit smooth function of site values, so its
gradient is exact. Fourier multipliers make d compose to zero and the
codifferential an exact adjoint, which the Hodge machinery needs. The
two agree to O(h^2) on smooth data.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, NonExactForm


@dataclass(frozen=True)
class Grid:
    """Cubic periodic lattice: n sites per axis, physical period l."""

    n: int
    l: float = 2.0 * np.pi

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("grid needs at least 4 sites per axis")
        if not self.l > 0:
            raise ValueError("period must be positive")

    @property
    def h(self):
        return self.l / self.n

    def axes(self):
        """Coordinate arrays (x, y, z) broadcast to grid shape."""
        c = np.arange(self.n) * self.h
        return np.meshgrid(c, c, c, indexing="ij")

    def same(self, other):
        if self.n != other.n or self.l != other.l:
            raise GridMismatch(f"{self} vs {other}")


def check_direction(mu):
    if mu not in (1, 2, 3):
        raise ValueError("direction must be 1, 2 or 3")


def diff(grid, f, mu):
    """Central difference along direction mu, periodic."""
    check_direction(mu)
    ax = mu - 1
    return (np.roll(f, -1, axis=ax) - np.roll(f, 1, axis=ax)) / (2.0 * grid.h)


def avg_back(grid, f, mu):
    """Average of a value with its backward neighbor along mu.

    Moves an edge-held value (sample at x + h/2 e_mu) to the site x at
    second order; the workhorse for consuming edge-logarithm
    connections in site-centered formulas.
    """
    check_direction(mu)
    return 0.5 * (f + np.roll(f, 1, axis=mu - 1))


def _kvec(grid):
    # integer frequencies scaled to wavenumbers; the Nyquist mode of a
    # real field carries no usable sign for a first derivative, drop it
    k = 2.0 * np.pi / grid.l * (grid.n * np.fft.fftfreq(grid.n))
    if grid.n % 2 == 0:
        k[grid.n // 2] = 0.0
    return k


def _kgrids(grid):
    k = _kvec(grid)
    return np.meshgrid(k, k, k, indexing="ij")


def _spectral_partial(grid, f, ax):
    fh = np.fft.fftn(f, axes=(0, 1, 2))
    k = _kvec(grid)
    shape = [1, 1, 1]
    shape[ax] = grid.n
    mult = 1j * k.reshape(shape)
    if f.ndim > 3:
        mult = mult.reshape(shape + [1] * (f.ndim - 3))
    return np.fft.ifftn(mult * fh, axes=(0, 1, 2)).real


def d(grid, w, deg):
    """Spectral exterior derivative of a degree-'deg' form."""
    if deg == 0:
        return np.stack([_spectral_partial(grid, w, ax) for ax in range(3)], axis=-1)
    if deg == 1:
        return np.stack(
            [
                _spectral_partial(grid, w[..., 2], 1) - _spectral_partial(grid, w[..., 1], 2),
                _spectral_partial(grid, w[..., 0], 2) - _spectral_partial(grid, w[..., 2], 0),
                _spectral_partial(grid, w[..., 1], 0) - _spectral_partial(grid, w[..., 0], 1),
            ],
            axis=-1,
        )
    if deg == 2:
        return sum(_spectral_partial(grid, w[..., ax], ax) for ax in range(3))
    raise ValueError("d is defined for degrees 0, 1, 2")


def codiff(grid, w, deg):
    """Spectral codifferential, the L2 adjoint of d."""
    if deg == 1:
        return -sum(_spectral_partial(grid, w[..., ax], ax) for ax in range(3))
    if deg == 2:
        return d(grid, w, 1)
    if deg == 3:
        return -np.stack([_spectral_partial(grid, w, ax) for ax in range(3)], axis=-1)
    raise ValueError("codiff is defined for degrees 1, 2, 3")


def integrate(grid, w):
    """Quadrature sum times h^3."""
    return float(np.sum(w)) * grid.h**3


def form_norm(grid, w):
    """L2 norm of a form given by component arrays."""
    return float(np.sqrt(np.sum(np.asarray(w) ** 2) * grid.h**3))


def slice_flux(grid, F, axis, index):
    """Pairing of a 2-form with the coordinate 2-torus at slice 'index'.

    The slice is transverse to 'axis'; for a closed form the result is
    independent of index up to O(h^2).
    """
    check_direction(axis)
    if not 0 <= index < grid.n:
        raise ValueError("slice index out of range")
    comp = np.take(F[..., axis - 1], index, axis=axis - 1)
    return float(np.sum(comp)) * grid.h**2


def mean_fluxes(grid, F):
    """Slice fluxes averaged over all parallel slices, one per axis."""
    return np.array([np.mean(F[..., ax]) for ax in range(3)]) * grid.l**2


def solve_alpha(grid, F, closed_tol=None):
    """The delta-closed 1-form alpha with d(alpha) = F, no harmonic part.

    Requires F closed and with vanishing fluxes; otherwise no such
    potential exists and NonExactForm is raised. closed_tol bounds
    ||dF|| relative to (2 pi / l)||F||, which separates discretization
    residue of smooth closed forms from genuinely non-closed data.
    """
    nF = form_norm(grid, F)
    flux = mean_fluxes(grid, F)
    if np.any(np.abs(flux) > 0.5):
        raise NonExactForm(f"fluxes {flux.round(3).tolist()} obstruct a global potential")
    if closed_tol is None:
        closed_tol = 0.5
    dF = d(grid, F, 2)
    if form_norm(grid, dF) > closed_tol * (2.0 * np.pi / grid.l) * nF + 1e-12:
        raise NonExactForm("2-form is not closed")
    kx, ky, kz = _kgrids(grid)
    k2 = kx**2 + ky**2 + kz**2
    Fh = np.fft.fftn(F, axes=(0, 1, 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        Gh = Fh / k2[..., None]
    Gh[k2 == 0] = 0.0
    # alpha = curl of the componentwise Poisson preimage; div-free by construction
    K = np.stack([kx, ky, kz], axis=-1)
    Ah = 1j * np.cross(K, Gh)
    return np.fft.ifftn(Ah, axes=(0, 1, 2)).real
