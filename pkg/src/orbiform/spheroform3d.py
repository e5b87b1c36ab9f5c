"""Exploratory tooling for constant-width bodies in three dimensions.

The quadratic functional generalizes: with R the sum of principal curvature
radii (mean B(d-1) for width B), Phi1[R] = (1/d) <G R, R> is proportional to the
surface area and shares its minimizers among admissible candidates. Volume
itself follows from surface area through the Blaschke relation
Vol = B S / 2 - pi B^3 / 3, so surface-area minimization and volume
minimization coincide for genuine constant-width bodies.

The caveat, and it is structural: an admissible deviation on the sphere need
not be realizable as the curvature sum of an actual convex body, so dim-3
minimization results are candidates, not certified bodies. Every result out of
this module carries equivalence_warning=True for that reason.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .harmonic_core import (
    ClosednessError,
    GridFn,
    SPHERE_AREA,
    SpectralCoeffs,
    SphereGrid,
    quadratic_form_green,
    zero_coeffs,
)
from .variational import MinimizeConfig, OptimizationResult, minimize

__all__ = [
    "SpheroformCandidate",
    "ball_curvature_sum",
    "phi1",
    "blaschke_volume",
    "width_residual",
    "explore_minimize3d",
]


@dataclass(frozen=True)
class SpheroformCandidate:
    """Dim-3 curvature-sum deviation candidate with optional provenance."""

    width: float
    deviation_coeffs: SpectralCoeffs
    provenance: dict | None = None

    def __post_init__(self):
        if not np.isfinite(self.width) or self.width <= 0:
            raise ValueError(f"width must be finite and > 0, got {self.width}")
        if self.deviation_coeffs.dim != 3:
            raise ValueError("SpheroformCandidate requires dim-3 coefficients")


def ball_curvature_sum(width: float, dim: int = 3, max_degree: int = 0) -> SpectralCoeffs:
    """Curvature-radius sum of the ball of the given width: constant (dim-1)*width/2."""
    if dim not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    total = 2.0 * np.pi if dim == 2 else SPHERE_AREA
    c = zero_coeffs(dim, max_degree).values.copy()
    # constant mode has value 1/sqrt(total measure)
    c[0] = 0.5 * (dim - 1) * width * np.sqrt(total)
    return SpectralCoeffs(dim, max_degree, c)


def phi1(coeffs: SpectralCoeffs) -> float:
    """(1/dim) <G R, R> for a full curvature-sum expansion (mean included).

    Equals the enclosed area at dim 2; at dim 3 it is proportional to surface
    area (2/3 of it), which is what makes it the right minimization surrogate.
    Degree-1 content means the expansion is not the curvature sum of a closed
    boundary, hence ClosednessError.
    """
    if coeffs.dim not in (2, 3):
        raise ValueError(f"phi1 supports dim 2 and 3 only, got {coeffs.dim}")
    sl = coeffs.degree_slice(1)
    block = coeffs.values[sl]
    if block.size and np.max(np.abs(block)) > 1e-12 * max(coeffs.norm(), np.finfo(float).tiny):
        raise ClosednessError(
            f"curvature sum has a degree-1 component ({np.max(np.abs(block)):.3e}); "
            "no closed boundary has one"
        )
    return quadratic_form_green(coeffs) / coeffs.dim


def blaschke_volume(surface_area: float, width: float) -> float:
    """Volume of a constant-width body from its surface area: B*S/2 - pi*B^3/3."""
    if not np.isfinite(width) or width <= 0:
        raise ValueError(f"width must be finite and > 0, got {width}")
    if not np.isfinite(surface_area) or surface_area < 0:
        raise ValueError(f"surface_area must be finite and >= 0, got {surface_area}")
    return 0.5 * width * surface_area - np.pi * width**3 / 3.0


def width_residual(r_values: GridFn, grid: SphereGrid, width: float) -> float:
    """Max over nodes of |R(w) + R(antipode) - (dim-1)*width|; 0 for constant width."""
    if grid.dim != 3:
        raise ValueError("width_residual expects a dim-3 grid")
    vals = np.asarray(r_values, dtype=float)
    if vals.shape != (grid.size,):
        raise ValueError("values shape does not match the grid")
    target = (grid.dim - 1) * width
    return float(np.max(np.abs(vals + vals[grid.antipode_index] - target)))


def explore_minimize3d(
    width: float,
    grid: SphereGrid,
    max_degree: int,
    seed: int,
    config: MinimizeConfig | None = None,
) -> OptimizationResult:
    """Dim-3 functional minimization; results are exploratory candidates.

    Identical engine to the planar minimizer. The returned result always has
    equivalence_warning=True: admissibility on the sphere does not certify that
    a convex body realizes the candidate, so the surface-area/volume
    equivalence is conditional.
    """
    if grid.dim != 3:
        raise ValueError("explore_minimize3d expects a dim-3 grid")
    return minimize(width, grid, max_degree, seed, config, equivalence_warning=True)
