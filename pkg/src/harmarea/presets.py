"""Named built-in maps reproducing the checkable textbook examples."""

from __future__ import annotations

import math

from .maps import HarmonicMap, affine, automorphism, identity_map, rotation_map, shear

_BUILDERS = {
    "identity": identity_map,
    "rotation": lambda: rotation_map(math.pi / 3.0),
    "example1-affine-0.2": lambda: affine(0.2),
    "example1-affine-0.5": lambda: affine(0.5),
    "remark-shear-0.3": lambda: shear(0.3, 2),
    "example2-shear-0.1": lambda: shear(0.1, 2),
    "automorphism-0.5": lambda: automorphism(0.5, 0.0),
}


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))


def preset_map(name: str) -> HarmonicMap:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        known = ", ".join(preset_names())
        raise ValueError(f"unknown preset {name!r}; known presets: {known}") from None
    return builder()
