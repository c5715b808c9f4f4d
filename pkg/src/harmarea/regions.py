"""Plane regions inside the unit disk: disks, star-shaped sets, pixel grids.

A star-shaped region is stored as M >= 8 radial samples R_j = R(2*pi*j/M)
in (0, 1], interpreted by piecewise-linear periodic interpolation.  A pixel
grid covers [-1,1]^2 with n x n cells; a cell belongs to the region when its
mask entry is true, and every true cell's center must lie in the open unit
disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConstructionError, NonConvergenceError

MIN_PROFILE_SAMPLES = 8

# Trapezoid refinement of the star-measure integral stops at this relative
# agreement between successive doublings.
MEASURE_RTOL = 1e-10
_MEASURE_NODE_CAP = 1 << 23


@dataclass(frozen=True)
class Disk:
    """Centered disk of radius r, 0 < r <= 1."""

    r: float

    def __post_init__(self):
        r = float(self.r)
        if not math.isfinite(r) or not 0.0 < r <= 1.0:
            raise ConstructionError("disk radius must lie in (0, 1]")
        object.__setattr__(self, "r", r)


@dataclass(frozen=True)
class StarShaped:
    """Region |z| <= R(arg z) with piecewise-linear periodic profile R."""

    profile: tuple[float, ...]

    def __post_init__(self):
        prof = tuple(float(v) for v in self.profile)
        if len(prof) < MIN_PROFILE_SAMPLES:
            raise ConstructionError(
                f"star profile needs at least {MIN_PROFILE_SAMPLES} samples"
            )
        if any(not math.isfinite(v) or not 0.0 < v <= 1.0 for v in prof):
            raise ConstructionError("star profile values must lie in (0, 1]")
        object.__setattr__(self, "profile", prof)


@dataclass(frozen=True, eq=False)
class PixelGrid:
    """n x n boolean mask over [-1,1]^2; cell side 2/n."""

    n: int
    mask: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        if n < 2:
            raise ConstructionError("grid resolution must be >= 2")
        mask = np.ascontiguousarray(np.asarray(self.mask, dtype=bool))
        if mask.shape != (n, n):
            raise ConstructionError(f"mask must have shape ({n}, {n})")
        rows, cols = np.nonzero(mask)
        if rows.size:
            cx = -1.0 + (cols + 0.5) * (2.0 / n)
            cy = -1.0 + (rows + 0.5) * (2.0 / n)
            if np.any(np.hypot(cx, cy) >= 1.0):
                raise ConstructionError(
                    "true cells must have centers in the open unit disk"
                )
        mask.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mask", mask)

    def __eq__(self, other):
        if not isinstance(other, PixelGrid):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.mask, other.mask)

    def cell_centers(self) -> np.ndarray:
        """Complex centers of the true cells, row-major order."""
        rows, cols = np.nonzero(self.mask)
        side = 2.0 / self.n
        return (-1.0 + (cols + 0.5) * side) + 1j * (-1.0 + (rows + 0.5) * side)


Region = Union[Disk, StarShaped, PixelGrid]


def _interp_profile(E: StarShaped, theta) -> np.ndarray:
    prof = np.asarray(E.profile, dtype=float)
    m = prof.size
    xp = 2.0 * np.pi * np.arange(m + 1) / m
    fp = np.append(prof, prof[0])
    t = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi)
    return np.interp(t, xp, fp)


def radial_profile(E: Region, theta: float):
    """Boundary radius in direction theta (any real; profile is periodic)."""
    if isinstance(E, Disk):
        return E.r
    if isinstance(E, StarShaped):
        out = _interp_profile(E, theta)
        return float(out) if out.ndim == 0 else out
    raise ValueError("radial_profile is undefined for pixel grids")


def region_measure(E: Region) -> float:
    """Lebesgue measure of the region.

    Disks and pixel grids have closed forms.  Star measures integrate
    R(theta)^2/2 by the trapezoid rule, doubling the node count until two
    successive values agree to 1e-10 relative.
    """
    if isinstance(E, Disk):
        return math.pi * E.r * E.r
    if isinstance(E, PixelGrid):
        side = 2.0 / E.n
        return int(np.count_nonzero(E.mask)) * side * side
    m = len(E.profile)
    prev = _star_trapezoid(E, m)
    m *= 2
    while True:
        cur = _star_trapezoid(E, m)
        if abs(cur - prev) <= MEASURE_RTOL * abs(cur):
            return cur
        if m > _MEASURE_NODE_CAP:
            raise NonConvergenceError(
                "star measure refinement exceeded the node cap", cur, prev
            )
        prev = cur
        m *= 2


def _star_trapezoid(E: StarShaped, m: int) -> float:
    theta = 2.0 * np.pi * np.arange(m) / m
    r = _interp_profile(E, theta)
    # Periodic trapezoid: all nodes carry equal weight 2*pi/m.
    return float(np.sum(r * r)) * math.pi / m


def contains(E: Region, z: complex) -> bool:
    """Membership of a single point under the region's geometric model."""
    z = complex(z)
    if isinstance(E, Disk):
        return abs(z) <= E.r
    if isinstance(E, StarShaped):
        return abs(z) <= float(_interp_profile(E, np.angle(z)))
    return bool(np.any(_grid_membership(E, np.asarray([z]))))


def contains_points(E: Region, z: np.ndarray) -> np.ndarray:
    """Vectorized membership for an array of complex points."""
    z = np.asarray(z, dtype=complex)
    if isinstance(E, Disk):
        return np.abs(z) <= E.r
    if isinstance(E, StarShaped):
        return np.abs(z) <= _interp_profile(E, np.angle(z))
    return _grid_membership(E, z)


def _grid_membership(E: PixelGrid, z: np.ndarray) -> np.ndarray:
    side = 2.0 / E.n
    cols = np.floor((z.real + 1.0) / side).astype(int)
    rows = np.floor((z.imag + 1.0) / side).astype(int)
    ok = (cols >= 0) & (cols < E.n) & (rows >= 0) & (rows < E.n)
    out = np.zeros(z.shape, dtype=bool)
    idx = np.nonzero(ok)
    out[idx] = E.mask[rows[idx], cols[idx]]
    return out


def rasterize(E: Region, n: int) -> PixelGrid:
    """Pixel-grid approximation: a cell is true iff its center is in E.

    Centers are additionally clipped to the open unit disk so the output
    always satisfies the PixelGrid invariant.
    """
    n = int(n)
    if n < 2:
        raise ConstructionError("grid resolution must be >= 2")
    side = 2.0 / n
    axis = -1.0 + (np.arange(n) + 0.5) * side
    xx, yy = np.meshgrid(axis, axis)
    z = xx + 1j * yy
    mask = contains_points(E, z) & (np.abs(z) < 1.0)
    return PixelGrid(n=n, mask=mask)


def bounding_radius(E: Region) -> float:
    """Smallest centered disk radius covering the region model."""
    if isinstance(E, Disk):
        return E.r
    if isinstance(E, StarShaped):
        return max(E.profile)
    centers = E.cell_centers()
    if centers.size == 0:
        return 0.0
    # Half the cell diagonal pads the center radius to cover whole cells.
    return float(np.max(np.abs(centers))) + math.sqrt(2.0) / E.n


def star_cos3(m: int = 256, scale: float = 1.0) -> StarShaped:
    """Built-in star region R(theta) = scale*(0.5 + 0.2*cos(3*theta))."""
    theta = 2.0 * np.pi * np.arange(m) / m
    return StarShaped(tuple(float(scale) * (0.5 + 0.2 * np.cos(3.0 * theta))))
