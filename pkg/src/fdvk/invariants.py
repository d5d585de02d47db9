"""Topological invariants of lattice fields.

The primary obstruction is read off as fluxes of the pulled-back area
form through the three coordinate 2-tori.  When the fluxes vanish the
Hopf charge is the helicity of the vector potential of that form; group
fields additionally carry a degree, computed from the cubic integral of
their flattening connection, and any connection has a Chern--Simons
number.  homotopy_record bundles the complete classification data.
"""

from dataclasses import dataclass
from math import gcd
from typing import Optional

import numpy as np

from .errors import NonIntegralFlux
from .fields import (
    Connection,
    GroupField,
    SphereField,
    conjugate_field,
    connection_of,
    pullback_area,
)
from .lattice import d, integrate, slice_flux, solve_alpha

FLUX_ROUND_TOL = 0.1


def _raw_fluxes(psi: SphereField):
    F = pullback_area(psi)
    mid = psi.grid.n // 2
    return tuple(float(slice_flux(psi.grid, F, k, mid)) for k in (1, 2, 3))


def fluxes(psi: SphereField):
    """Integer fluxes of the pulled-back area form, with their raw values.

    Component k is the flux through the 2-torus {x_k = l/2}.  Raising
    NonIntegralFlux beyond the 0.1 rounding window is deliberate: a flux
    that far from an integer means the field is too coarse to classify,
    and guessing would silently misfile the homotopy class.
    """
    raw = np.array(_raw_fluxes(psi))
    p = np.rint(raw).astype(int)
    bad = np.abs(raw - p) > FLUX_ROUND_TOL
    if np.any(bad):
        k = int(np.argmax(bad))
        raise NonIntegralFlux(
            f"flux {raw[k]:.4f} along direction {k + 1} is not within "
            f"{FLUX_ROUND_TOL} of an integer; field is under-resolved"
        )
    return tuple(int(v) for v in p), tuple(float(v) for v in raw)


def hopf_charge(psi: SphereField) -> float:
    """Helicity integral of the area pullback; defined when fluxes vanish.

    With F = pullback_area(psi) exact, alpha the coexact potential from
    solve_alpha, the charge is the integral of alpha wedge d(alpha).
    Nonzero fluxes make F non-exact and solve_alpha raises NonExactForm,
    which is the honest answer: the invariant does not exist there.
    """
    F = pullback_area(psi)
    alpha = solve_alpha(psi.grid, F)
    dalpha = d(psi.grid, alpha, 1)
    # volume coefficient: alpha_1 (da)_23 + alpha_2 (da)_31 + alpha_3 (da)_12,
    # and the dual-vector storage of 2-forms pairs components directly
    wedge = np.einsum("...k,...k->...", alpha, dalpha)
    return float(integrate(psi.grid, wedge))


def _det3(a1, a2, a3):
    return np.einsum("...i,...i->...", a1, np.cross(a2, a3))


def degree(u: GroupField) -> float:
    """Mapping degree of a group field via its flattening connection.

    Realizes -(1/12 pi^2) times the integral of Re(a^a^a).  The volume
    coefficient of Re(a^a^a) is 6 Re(a_1 a_2 a_3) = -6 det[a_1 a_2 a_3]
    (one term per permutation of three distinct directions); the cross
    check against a signed preimage count lives in the test suite.
    """
    a = connection_of(u).site_values()
    det = _det3(a[..., 0, :], a[..., 1, :], a[..., 2, :])
    return float(integrate(u.grid, det) / (2 * np.pi**2))


def chern_simons(a: Connection) -> float:
    """Chern--Simons number (1/4 pi^2) integral of Re(a^da + 2/3 a^a^a).

    The derivative term uses the spectral differential so that the flat
    identity cs(a) = degree holds at second order on developable
    connections.
    """
    ab = a.site_values()
    ada = 0.0
    for i in range(3):
        curl_i = d(a.grid, ab[..., :, i], 1)
        ada = ada - sum(ab[..., k, i] * curl_i[..., k] for k in range(3))
    det = _det3(ab[..., 0, :], ab[..., 1, :], ab[..., 2, :])
    dens = ada - 4.0 * det
    return float(integrate(a.grid, dens) / (4 * np.pi**2))


def modulus(p) -> int:
    """gcd of the absolute fluxes; zero when all fluxes vanish."""
    p1, p2, p3 = (abs(int(v)) for v in p)
    return gcd(p1, gcd(p2, p3))


@dataclass(frozen=True)
class HomotopyRecord:
    """Complete homotopy data of a pair (reference field, framing map)."""

    fluxes: tuple
    raw_fluxes: tuple
    m: int
    degree: float
    degree_class: int
    hopf_charge: Optional[float] = None

    def __post_init__(self):
        if self.m > 0 and not 0 <= self.degree_class < 2 * self.m:
            raise ValueError("degree class must be reduced mod 2m")


def homotopy_record(phi: SphereField, u: GroupField) -> HomotopyRecord:
    """Classify the pair (phi, u) up to homotopy.

    Fluxes are read from the conjugated field u phi u* (they agree with
    phi's own), the degree of u is reduced mod 2 gcd(fluxes), and the
    Hopf charge of the conjugated field is attached whenever the fluxes
    vanish (elsewhere it is undefined).
    """
    phi.grid.same(u.grid)
    psi = conjugate_field(u, phi)
    p, raw = fluxes(psi)
    m = modulus(p)
    deg = degree(u)
    cls = int(np.rint(deg))
    if abs(deg - cls) > FLUX_ROUND_TOL:
        raise NonIntegralFlux(
            f"degree {deg:.4f} is not within {FLUX_ROUND_TOL} of an integer"
        )
    if m > 0:
        cls %= 2 * m
    hopf = hopf_charge(psi) if p == (0, 0, 0) else None
    return HomotopyRecord(p, raw, m, deg, cls, hopf)
