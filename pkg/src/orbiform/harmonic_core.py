"""Spectral machinery on the circle and the 2-sphere.

Everything downstream works with real orthonormal harmonic expansions: Fourier
modes on S^1, real spherical harmonics on S^2. Coefficients are plain L2 inner
products against the orthonormal basis functions, so Parseval holds with no
extra weights. Grids are antipodally closed quadrature rules; transforms are
exact for band-limited functions whenever the grid resolution covers twice the
band limit.

The Green operator implemented here is the reduced resolvent of the spherical
Laplacian at its second eigenvalue d-1: diagonal in the harmonic basis, with
the degree-1 eigenspace excluded (that subspace is the kernel of translations
and the resolvent is undefined on it).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "GridFn",
    "SphereGrid",
    "SpectralCoeffs",
    "GreenMultipliers",
    "ClosednessError",
    "make_grid",
    "default_max_degree",
    "num_coeffs",
    "coeff_degrees",
    "index2",
    "index3",
    "zero_coeffs",
    "analyze",
    "synthesize",
    "differentiate",
    "laplace_eigenvalue",
    "apply_laplacian",
    "green_multipliers",
    "apply_green",
    "quadratic_form_green",
    "project_linear_H",
]

# Values of a function sampled at the nodes of a SphereGrid, shape (grid.size,).
GridFn = np.ndarray

TWO_PI = 2.0 * np.pi
SPHERE_AREA = 4.0 * np.pi

DEGREE_ONE_RTOL = 1e-12  # relative degree-1 tolerance for resolvent inputs


class ClosednessError(ValueError):
    """A degree-1 harmonic component blocks an operation that needs a closed boundary."""


@dataclass(frozen=True)
class SphereGrid:
    """Antipodally closed quadrature grid on S^1 (dim 2) or S^2 (dim 3).

    Attributes
    ----------
    dim : ambient dimension, 2 or 3.
    resolution : grid parameter; node count on S^1, azimuthal count on S^2
        (polar count is resolution // 2).
    nodes : (N, dim) unit vectors.
    weights : (N,) positive quadrature weights summing to the sphere measure.
    antipode_index : (N,) permutation with node[a[i]] == -node[i]; an involution.
    angles : (N,) polar angle omega for dim 2; (N, 2) columns (theta, phi) for dim 3.
    """

    dim: int
    resolution: int
    nodes: np.ndarray
    weights: np.ndarray
    antipode_index: np.ndarray
    angles: np.ndarray

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def total_measure(self) -> float:
        return TWO_PI if self.dim == 2 else SPHERE_AREA

    def inner(self, f: GridFn, g: GridFn) -> float:
        """Quadrature L2 inner product of two grid functions."""
        return float(np.dot(self.weights, np.asarray(f) * np.asarray(g)))

    def norm(self, f: GridFn) -> float:
        return float(np.sqrt(max(self.inner(f, f), 0.0)))


def make_grid(dim: int, resolution: int) -> SphereGrid:
    """Build the quadrature grid.

    dim 2: uniform nodes omega_i = 2*pi*i/N with trapezoid weights (spectrally
    exact). dim 3: Gauss-Legendre polar nodes crossed with a uniform azimuth;
    antipodally closed because the Legendre nodes are symmetric in cos(theta)
    and the azimuth count is even.
    """
    if dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    if resolution % 2 != 0 or resolution < 8:
        raise ValueError(f"resolution must be even and >= 8, got {resolution}")

    if dim == 2:
        n = resolution
        idx = np.arange(n)
        angles = TWO_PI * idx / n
        nodes = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        weights = np.full(n, TWO_PI / n)
        antipode = (idx + n // 2) % n
        return SphereGrid(2, resolution, nodes, weights, antipode, angles)

    n_az = resolution
    n_pol = resolution // 2
    mu, w_mu = np.polynomial.legendre.leggauss(n_pol)  # ascending, symmetric
    theta = np.arccos(mu)
    phi = TWO_PI * np.arange(n_az) / n_az
    # flat layout: node (j, i) -> j * n_az + i
    tt = np.repeat(theta, n_az)
    pp = np.tile(phi, n_pol)
    ct = np.repeat(mu, n_az)
    st = np.repeat(np.sqrt(np.maximum(0.0, 1.0 - mu * mu)), n_az)
    nodes = np.stack([st * np.cos(pp), st * np.sin(pp), ct], axis=1)
    weights = np.repeat(w_mu, n_az) * (TWO_PI / n_az)
    j = np.repeat(np.arange(n_pol), n_az)
    i = np.tile(np.arange(n_az), n_pol)
    antipode = (n_pol - 1 - j) * n_az + (i + n_az // 2) % n_az
    angles = np.stack([tt, pp], axis=1)
    return SphereGrid(3, resolution, nodes, weights, antipode, angles)


def default_max_degree(resolution: int) -> int:
    """Largest band limit the resolution transforms exactly: resolution // 2 - 1."""
    return resolution // 2 - 1


def num_coeffs(dim: int, max_degree: int) -> int:
    return 2 * max_degree + 1 if dim == 2 else (max_degree + 1) ** 2


def coeff_degrees(dim: int, max_degree: int) -> np.ndarray:
    """Per-coefficient degree labels for the flat coefficient layout."""
    if dim == 2:
        return np.concatenate(([0], np.repeat(np.arange(1, max_degree + 1), 2)))
    ell = np.arange(max_degree + 1)
    return np.repeat(ell, 2 * ell + 1)


def index2(degree: int, part: str) -> int:
    """Flat index of the dim-2 coefficient (degree, part), part in {cos, sin}."""
    if part not in ("cos", "sin"):
        raise ValueError(f"part must be 'cos' or 'sin', got {part!r}")
    if degree == 0:
        if part == "sin":
            raise ValueError("degree 0 has no sin part")
        return 0
    return 2 * degree - 1 + (part == "sin")


def index3(degree: int, order: int) -> int:
    """Flat index of the dim-3 coefficient (degree, order), order in [-degree, degree].

    Negative orders are the sin-type harmonics, non-negative the cos-type.
    """
    if abs(order) > degree:
        raise ValueError(f"|order| <= degree required, got ({degree}, {order})")
    return degree * degree + degree + order


@dataclass(frozen=True)
class SpectralCoeffs:
    """Real orthonormal harmonic coefficients up to max_degree.

    Layout: dim 2 -> [ (0,cos), (1,cos), (1,sin), (2,cos), (2,sin), ... ];
    dim 3 -> degree blocks of size 2*degree+1, orders -degree..degree.
    """

    dim: int
    max_degree: int
    values: np.ndarray

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        vals = np.asarray(self.values, dtype=float)
        expected = num_coeffs(self.dim, self.max_degree)
        if vals.shape != (expected,):
            raise ValueError(
                f"coefficient vector has shape {vals.shape}, expected ({expected},)"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "values", vals)

    def degrees(self) -> np.ndarray:
        return coeff_degrees(self.dim, self.max_degree)

    def degree_slice(self, degree: int) -> slice:
        if degree > self.max_degree or degree < 0:
            return slice(0, 0)
        if self.dim == 2:
            return slice(0, 1) if degree == 0 else slice(2 * degree - 1, 2 * degree + 1)
        return slice(degree * degree, (degree + 1) ** 2)

    def coeff(self, degree: int, *, part: str = "cos", order: int = 0) -> float:
        idx = index2(degree, part) if self.dim == 2 else index3(degree, order)
        return float(self.values[idx])

    def with_values(self, values: np.ndarray) -> "SpectralCoeffs":
        return SpectralCoeffs(self.dim, self.max_degree, values)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def zero_coeffs(dim: int, max_degree: int) -> SpectralCoeffs:
    return SpectralCoeffs(dim, max_degree, np.zeros(num_coeffs(dim, max_degree)))


def _normalized_legendre(max_degree: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal associated Legendre values P[l, m, :] at abscissae x.

    Normalized so that the real spherical harmonics built as
    P[l,0] (m = 0) and sqrt(2) * P[l,m] * cos/sin(m*phi) (m > 0) are an
    orthonormal family on S^2. Standard stable recursion; no factorials.
    """
    L = max_degree
    n = x.size
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    P = np.zeros((L + 1, L + 1, n))
    P[0, 0] = np.full(n, np.sqrt(1.0 / SPHERE_AREA))
    for m in range(1, L + 1):
        P[m, m] = np.sqrt((2 * m + 1) / (2.0 * m)) * s * P[m - 1, m - 1]
    for m in range(0, L):
        P[m + 1, m] = np.sqrt(2 * m + 3.0) * x * P[m, m]
    for m in range(0, L + 1):
        for ell in range(m + 2, L + 1):
            a = np.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
            b = np.sqrt(((ell - 1.0) ** 2 - m * m) / (4.0 * (ell - 1.0) ** 2 - 1.0))
            P[ell, m] = a * (x * P[ell - 1, m] - b * P[ell - 2, m])
    return P


@lru_cache(maxsize=8)
def _basis_matrix(dim: int, resolution: int, max_degree: int) -> np.ndarray:
    """Orthonormal basis functions evaluated on the grid, shape (N, num_coeffs).

    Cached by (dim, resolution, max_degree); node layout matches make_grid.
    """
    L = max_degree
    if dim == 2:
        n = resolution
        omega = TWO_PI * np.arange(n) / n
        cols = [np.full(n, 1.0 / np.sqrt(TWO_PI))]
        inv_sqrt_pi = 1.0 / np.sqrt(np.pi)
        for k in range(1, L + 1):
            cols.append(np.cos(k * omega) * inv_sqrt_pi)
            cols.append(np.sin(k * omega) * inv_sqrt_pi)
        return np.stack(cols, axis=1)

    n_az = resolution
    n_pol = resolution // 2
    mu, _ = np.polynomial.legendre.leggauss(n_pol)
    phi = TWO_PI * np.arange(n_az) / n_az
    P = _normalized_legendre(L, mu)  # (L+1, L+1, n_pol)
    cos_m = np.cos(np.outer(np.arange(L + 1), phi))  # (L+1, n_az)
    sin_m = np.sin(np.outer(np.arange(L + 1), phi))
    N = n_pol * n_az
    out = np.empty((N, (L + 1) ** 2))
    sqrt2 = np.sqrt(2.0)
    for ell in range(L + 1):
        for m in range(-ell, ell + 1):
            col = index3(ell, m)
            if m == 0:
                block = np.repeat(P[ell, 0], n_az)
            elif m > 0:
                block = np.outer(P[ell, m], sqrt2 * cos_m[m]).ravel()
            else:
                block = np.outer(P[ell, -m], sqrt2 * sin_m[-m]).ravel()
            out[:, col] = block
    return out


def _require_resolution(grid: SphereGrid, max_degree: int) -> None:
    if grid.resolution < 2 * max_degree + 2:
        raise ValueError(
            f"grid resolution {grid.resolution} cannot analyze degree {max_degree}; "
            f"need resolution >= {2 * max_degree + 2}"
        )


def analyze(grid: SphereGrid, f: GridFn, max_degree: int | None = None) -> SpectralCoeffs:
    """Forward transform: quadrature inner products against the orthonormal basis.

    Exact for band-limited f when resolution >= 2 * max_degree + 2.
    """
    if max_degree is None:
        max_degree = default_max_degree(grid.resolution)
    _require_resolution(grid, max_degree)
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.size,):
        raise ValueError(f"grid function has shape {f.shape}, expected ({grid.size},)")
    basis = _basis_matrix(grid.dim, grid.resolution, max_degree)
    return SpectralCoeffs(grid.dim, max_degree, basis.T @ (grid.weights * f))


def synthesize(coeffs: SpectralCoeffs, grid: SphereGrid) -> GridFn:
    """Evaluate the expansion at the grid nodes."""
    if coeffs.dim != grid.dim:
        raise ValueError(f"dimension mismatch: coeffs dim {coeffs.dim}, grid dim {grid.dim}")
    basis = _basis_matrix(grid.dim, grid.resolution, coeffs.max_degree)
    return basis @ coeffs.values


def differentiate(coeffs: SpectralCoeffs) -> SpectralCoeffs:
    """d/d(omega) in coefficient space (dim 2 only)."""
    if coeffs.dim != 2:
        raise ValueError("differentiate is defined for dim 2 only")
    out = np.zeros_like(coeffs.values)
    for k in range(1, coeffs.max_degree + 1):
        a, b = coeffs.values[2 * k - 1], coeffs.values[2 * k]
        out[2 * k - 1] = k * b
        out[2 * k] = -k * a
    return coeffs.with_values(out)


def laplace_eigenvalue(dim: int, degree: int) -> float:
    """Eigenvalue of -Laplace-Beltrami on S^(dim-1) harmonics: degree*(degree+dim-2)."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    return float(degree * (degree + dim - 2))


def apply_laplacian(coeffs: SpectralCoeffs) -> SpectralCoeffs:
    """Spectral Laplace-Beltrami: multiply each coefficient by -eigenvalue."""
    degs = coeffs.degrees()
    lam = degs * (degs + coeffs.dim - 2)
    return coeffs.with_values(-lam * coeffs.values)


@dataclass(frozen=True)
class GreenMultipliers:
    """Diagonal multipliers of the reduced resolvent, one per degree.

    g_l = 1 / ((dim-1) - l*(l+dim-2)) for l != 1; degree 1 carries NaN because
    dim-1 is exactly the degree-1 eigenvalue and the resolvent is undefined there.
    """

    dim: int
    max_degree: int
    values: np.ndarray

    def g(self, degree: int) -> float:
        return float(self.values[degree])

    def per_coefficient(self) -> np.ndarray:
        return self.values[coeff_degrees(self.dim, self.max_degree)]


def green_multipliers(dim: int, max_degree: int) -> GreenMultipliers:
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    ell = np.arange(max_degree + 1, dtype=float)
    denom = (dim - 1) - ell * (ell + dim - 2)
    vals = np.empty(max_degree + 1)
    nonsingular = denom != 0.0
    vals[nonsingular] = 1.0 / denom[nonsingular]
    vals[~nonsingular] = np.nan
    return GreenMultipliers(dim, max_degree, vals)


def _degree_one_violation(coeffs: SpectralCoeffs, rtol: float) -> tuple[int, float] | None:
    """Return (flat index, magnitude) of the worst offending degree-1 coefficient."""
    sl = coeffs.degree_slice(1)
    block = coeffs.values[sl]
    if block.size == 0:
        return None
    worst = int(np.argmax(np.abs(block)))
    mag = abs(float(block[worst]))
    if mag <= rtol * max(coeffs.norm(), np.finfo(float).tiny):
        return None
    return sl.start + worst, mag


def _degree_one_label(coeffs: SpectralCoeffs, flat_index: int) -> str:
    if coeffs.dim == 2:
        return "part=cos" if flat_index == index2(1, "cos") else "part=sin"
    return f"order={flat_index - index3(1, 0)}"


def apply_green(coeffs: SpectralCoeffs, rtol: float = DEGREE_ONE_RTOL) -> SpectralCoeffs:
    """Apply the reduced resolvent: solve laplacian(p) + (dim-1) p = input on H1.

    The input must be orthogonal to the degree-1 harmonics within rtol of its
    norm; the output has exact zeros at degree 1.
    """
    bad = _degree_one_violation(coeffs, rtol)
    if bad is not None:
        idx, mag = bad
        raise ValueError(
            f"input is not orthogonal to the degree-1 harmonics: coefficient "
            f"(degree=1, {_degree_one_label(coeffs, idx)}) has magnitude {mag:.3e}"
        )
    mult = green_multipliers(coeffs.dim, coeffs.max_degree).per_coefficient()
    out = coeffs.values * mult
    out[np.isnan(mult)] = 0.0
    return coeffs.with_values(out)


def quadratic_form_green(coeffs: SpectralCoeffs) -> float:
    """<G f, f> = sum over degrees != 1 of g_l * coeff^2 (degree 1 is ignored)."""
    mult = green_multipliers(coeffs.dim, coeffs.max_degree).per_coefficient()
    mask = ~np.isnan(mult)
    vals = coeffs.values[mask]
    return float(np.dot(mult[mask] * vals, vals))


def project_linear_H(coeffs: SpectralCoeffs) -> SpectralCoeffs:
    """Orthogonal projection onto the odd-degree (>= 3) harmonic subspace.

    That subspace is exactly the antipodally antisymmetric functions orthogonal
    to the degree-1 harmonics: odd degrees flip sign under the antipodal map,
    and dropping degree 1 removes the translation modes.
    """
    degs = coeffs.degrees()
    keep = (degs % 2 == 1) & (degs >= 3)
    out = np.where(keep, coeffs.values, 0.0)
    return coeffs.with_values(out)
