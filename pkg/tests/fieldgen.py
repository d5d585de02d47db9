"""Deterministic smooth test fields.

Convergence checks need the same continuum field sampled at several
resolutions, so generators are trig polynomials with frozen random
coefficients: evaluate at any grid, refine at will.
"""

import numpy as np

from fdvk.fields import GroupField, SphereField


class TrigPoly:
    """Real trig polynomial R^3 -> R^C with modes |m|_inf <= mmax."""

    def __init__(self, seed, comps, mmax=2, amp=1.0):
        rng = np.random.default_rng(seed)
        modes = []
        for mx in range(-mmax, mmax + 1):
            for my in range(-mmax, mmax + 1):
                for mz in range(-mmax, mmax + 1):
                    if (mx, my, mz) == (0, 0, 0):
                        continue
                    modes.append((mx, my, mz))
        self.modes = np.array(modes)
        weight = np.sum(self.modes**2, axis=1) ** -1.5
        # scale so each output component has pointwise std == amp
        weight *= amp / np.sqrt(0.5 * np.sum(weight**2))
        self.coeff = rng.normal(size=(len(modes), comps)) * weight[:, None]
        self.phase = rng.uniform(0, 2 * np.pi, size=(len(modes), comps))

    def sample(self, grid):
        x, y, z = grid.axes()
        out = np.zeros(x.shape + (self.coeff.shape[1],))
        for (mx, my, mz), c, p in zip(self.modes, self.coeff, self.phase):
            arg = 2 * np.pi * (mx * x + my * y + mz * z) / grid.l
            out += c * np.cos(arg[..., None] + p)
        return out


def smooth_sphere_field(grid, seed, amp=0.25):
    """Unit imaginary field biased toward i so normalization is safe."""
    raw = TrigPoly(seed, 3, amp=amp).sample(grid)
    raw[..., 0] += 1.0
    return SphereField(grid, raw / np.linalg.norm(raw, axis=-1, keepdims=True))


def smooth_group_field(grid, seed, amp=0.25):
    """Unit quaternion field biased toward 1."""
    raw = TrigPoly(seed, 4, amp=amp).sample(grid)
    raw[..., 0] += 1.0
    return GroupField(grid, raw / np.linalg.norm(raw, axis=-1, keepdims=True))
