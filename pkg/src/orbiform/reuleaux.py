"""Reuleaux polygons with an odd number of sides, in closed form.

An n-sided Reuleaux polygon of width B (n odd) alternates, as the normal angle
sweeps the circle, between corner windows where the curvature radius vanishes
and arc windows where it equals B. Each window spans pi/n; with the support
maximum placed at angle 0 the switch angles sit at odd multiples of
alpha = pi/(2n). On the corner windows the mean-free support is
(m + B/2) cos(w - c) - B/2 about the window center c, reflected with flipped
sign on the arc windows, where the corner amplitude m solves
cos(alpha) = B / (2m + B).

The curvature radius is therefore an exact square wave taking {0, B}, whose
Fourier series is known in closed form; the support coefficients follow by the
resolvent multipliers 1/(1 - k^2). That makes spectral truncation here exact
truncation of the square wave, with no smoothing filter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .body2d import SupportBody, body_from_deviation
from .harmonic_core import SpectralCoeffs, coeff_degrees, index2, zero_coeffs

__all__ = [
    "ReuleauxSpec",
    "make_spec",
    "support_piecewise",
    "curvature_square_wave",
    "to_body",
    "closed_area",
    "area_table",
    "format_area_table_csv",
]


@dataclass(frozen=True)
class ReuleauxSpec:
    """Geometry of an odd Reuleaux polygon.

    sides: odd side count >= 3; width: the constant width B;
    amplitude: corner support amplitude m; switch_angle: alpha = pi/(2*sides).
    """

    sides: int
    width: float
    amplitude: float
    switch_angle: float


def make_spec(sides: int, width: float) -> ReuleauxSpec:
    if sides < 3 or sides % 2 == 0:
        raise ValueError(f"sides must be odd and >= 3, got {sides}")
    if not np.isfinite(width) or width <= 0:
        raise ValueError(f"width must be finite and > 0, got {width}")
    alpha = np.pi / (2 * sides)
    amplitude = 0.5 * width * (1.0 / np.cos(alpha) - 1.0)
    return ReuleauxSpec(sides, width, amplitude, alpha)


def _window_decomposition(spec: ReuleauxSpec, omega) -> tuple[np.ndarray, np.ndarray, bool]:
    """Split angles into (local offset from window center, odd-window mask)."""
    om = np.asarray(omega, dtype=float)
    scalar = om.ndim == 0
    om = np.atleast_1d(om)
    two_alpha = 2.0 * spec.switch_angle
    # windows are [(2k-1) alpha, (2k+1) alpha), half-open at the upper switch
    k = np.floor((om + spec.switch_angle) / two_alpha)
    local = om - k * two_alpha
    odd = (k.astype(np.int64) % 2) != 0
    return local, odd, scalar


def support_piecewise(spec: ReuleauxSpec, omega) -> np.ndarray | float:
    """Mean-free support value(s): the full support function is width/2 + this."""
    local, odd, scalar = _window_decomposition(spec, omega)
    amp = spec.amplitude + 0.5 * spec.width
    vals = amp * np.cos(local) - 0.5 * spec.width
    vals[odd] = -vals[odd]
    return float(vals[0]) if scalar else vals


def curvature_square_wave(spec: ReuleauxSpec, omega) -> np.ndarray | float:
    """Curvature radius: exactly 0 on corner windows, exactly width on arc windows."""
    _, odd, scalar = _window_decomposition(spec, omega)
    vals = np.where(odd, spec.width, 0.0)
    return float(vals[0]) if scalar else vals


def deviation_coeffs(spec: ReuleauxSpec, max_degree: int) -> SpectralCoeffs:
    """Exact harmonic coefficients of R - width/2 up to max_degree.

    The square wave has cosine harmonics only at odd multiples j of the side
    count, with amplitude -(2 B / pi) (-1)^((j-1)/2) / j; all are odd degrees,
    so the wave is antipodally antisymmetric.
    """
    n, B = spec.sides, spec.width
    out = zero_coeffs(2, max_degree).values.copy()
    sqrt_pi = np.sqrt(np.pi)
    j = 1
    while j * n <= max_degree:
        sign = -1.0 if (j - 1) // 2 % 2 else 1.0
        amp = -(2.0 * B / np.pi) * sign / j
        out[index2(j * n, "cos")] = amp * sqrt_pi
        j += 2
    return SpectralCoeffs(2, max_degree, out)


def to_body(spec: ReuleauxSpec, max_degree: int) -> SupportBody:
    """Spectrally truncated body: plain Fourier truncation of the square wave."""
    if max_degree < 4 * spec.sides:
        raise ValueError(
            f"max_degree {max_degree} too small for {spec.sides} sides; need >= {4 * spec.sides}"
        )
    r_dev = deviation_coeffs(spec, max_degree)
    degs = coeff_degrees(2, max_degree).astype(float)
    factor = np.zeros_like(degs)
    nz = degs >= 2
    factor[nz] = 1.0 / (1.0 - degs[nz] ** 2)
    p_dev = r_dev.with_values(r_dev.values * factor)
    return body_from_deviation(spec.width, p_dev, canonical=True)


def closed_area(spec: ReuleauxSpec) -> float:
    """Exact area: (B^2 / 2) (pi - n tan(pi / (2n)))."""
    n, B = spec.sides, spec.width
    return float(0.5 * B * B * (np.pi - n * np.tan(np.pi / (2 * n))))


def area_table(max_sides: int, width: float = 1.0) -> list[tuple[int, float]]:
    """Closed-form areas for odd side counts 3..max_sides, ascending."""
    if max_sides < 3:
        raise ValueError("max_sides must be >= 3")
    return [(n, closed_area(make_spec(n, width))) for n in range(3, max_sides + 1, 2)]


def format_area_table_csv(rows: list[tuple[int, float]]) -> str:
    lines = ["n,area"]
    for n, area in rows:
        lines.append(f"{n},{float(area)!r}")
    return "\n".join(lines) + "\n"
