"""Potential norms: L^p, weighted L^q, Morrey-Campanato, Kerman-Sayer, A_p.

All integrals are lattice quadrature sums with weight h^dim.  Balls and
kernel distances use plain Euclidean distance with the potential extended by
zero outside the cell (no periodic wrapping); ball membership is decided in
exact integer arithmetic so independent scans agree bit for bit.  Dyadic
cubes run from the whole cell down to single cells when n is a power of two.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .lattice import Lattice, ScalarField
from .lame import Potential

__all__ = [
    "DyadicCube",
    "NormResult",
    "dyadic_level_max",
    "dyadic_cubes",
    "dyadic_radius_exponents",
    "polynomial_weight",
    "lp_norm",
    "weighted_lq_norm",
    "morrey_campanato_norm",
    "kerman_sayer_norm",
    "muckenhoupt_constant",
    "mc_ball_value",
    "ks_cube_value",
    "ap_cube_value",
    "norm_result",
]

EPS_MASS = 0.0
EPS_WEIGHT = 1e-12


@dataclass(frozen=True)
class DyadicCube:
    """Dyadic sub-cube: level 0 is the whole cell, each level halves the side."""

    level: int
    corner: tuple
    side: int  # in grid cells

    def slices(self) -> tuple:
        return tuple(slice(c, c + self.side) for c in self.corner)

    def to_dict(self) -> dict:
        return {"level": self.level, "corner": list(self.corner), "side": self.side}


@dataclass(frozen=True)
class NormResult:
    """A computed norm with the argmax witness that reproduces it."""

    norm_name: str
    params: dict
    value: float
    witness: dict | None = field(default=None)

    def to_dict(self) -> dict:
        return {
            "norm_name": self.norm_name,
            "params": self.params,
            "value": float(self.value),
            "witness": self.witness,
        }


def dyadic_level_max(n: int) -> int:
    """Number of exact halvings of n (equals log2 n for powers of two)."""
    level = 0
    while n % 2 == 0:
        n //= 2
        level += 1
    return level


def dyadic_cubes(lattice: Lattice):
    """Yield every dyadic cube of the cell, coarse to fine, row-major corners."""
    n = lattice.n
    for level in range(dyadic_level_max(n) + 1):
        side = n >> level
        starts = range(0, n, side)
        for corner in np.ndindex(*((len(starts),) * lattice.dim)):
            yield DyadicCube(level, tuple(c * side for c in corner), side)


def dyadic_radius_exponents(lattice: Lattice) -> list:
    """Exponents j with radius h * 2^j <= L/2, i.e. 2^j <= n/2."""
    out = []
    j = 0
    while 2**j <= lattice.n // 2:
        out.append(j)
        j += 1
    return out


def polynomial_weight(lattice: Lattice, alpha: float) -> np.ndarray:
    """Weight <x>^(2 alpha) = (1 + |x|^2)^alpha at cell-centered coordinates."""
    x = lattice.coordinates(centered=True)
    return (1.0 + np.sum(x**2, axis=0)) ** alpha


# -- plain and weighted Lebesgue norms ---------------------------------------


def lp_norm(V: Potential, p: float) -> float:
    """Quadrature L^p norm of the potential, p >= 1."""
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    lat = V.lattice
    return float(np.sum(np.abs(V.values) ** p) * lat.cell_volume) ** (1.0 / p)


def weighted_lq_norm(V: Potential, q: float, alpha: float) -> float:
    """Norm of V in L^q with weight <x>^(2 alpha), cell-centered."""
    if q < 1.0:
        raise ValueError(f"q must be >= 1, got {q}")
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    lat = V.lattice
    w = polynomial_weight(lat, alpha)
    total = np.sum(np.abs(V.values) ** q * w) * lat.cell_volume
    return float(total) ** (1.0 / q)


# -- Morrey-Campanato --------------------------------------------------------


def mc_ball_value(V: Potential, alpha: float, p: float, center: tuple, j: int) -> float:
    """Candidate r^alpha (r^-dim Int_{B_r(x)} |V|^p)^(1/p) for one ball.

    ``center`` is a grid multi-index and the radius is h * 2^j; membership is
    the exact integer test |offset|^2 <= 4^j.
    """
    lat = V.lattice
    d = lat.dim
    h = lat.spacing
    W = (np.abs(V.values) ** p).reshape(-1)
    idx = np.indices(lat.shape).reshape(d, -1).T
    diff = idx - np.asarray(center, dtype=idx.dtype)
    m = np.sum(diff * diff, axis=1)
    mask = m <= 4**j
    integral = np.sum(W[mask]) * h**d
    r = h * float(2**j)
    return r**alpha * (integral / r**d) ** (1.0 / p)


def morrey_campanato_norm(V: Potential, alpha: float, p: float,
                          return_witness: bool = False):
    """Discrete Morrey-Campanato norm over grid centers and dyadic radii.

    sup over centers x and radii r in {h, 2h, ..., L/2} of
    r^alpha (r^-dim sum_{|y-x| <= r} |V(y)|^p h^dim)^(1/p).
    """
    lat = V.lattice
    d = lat.dim
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    if not 0.0 < alpha <= d / p:
        raise ValueError(f"alpha must lie in (0, dim/p] = (0, {d / p}], got {alpha}")
    h = lat.spacing
    W = (np.abs(V.values) ** p).reshape(-1)
    idx = np.indices(lat.shape).reshape(d, -1).T
    exponents = dyadic_radius_exponents(lat)
    thresholds = [4**j for j in exponents]
    best = 0.0
    best_witness = None
    for c in range(idx.shape[0]):
        diff = idx - idx[c]
        m = np.sum(diff * diff, axis=1)
        for j, thr in zip(exponents, thresholds):
            integral = np.sum(W[m <= thr]) * h**d
            r = h * float(2**j)
            cand = r**alpha * (integral / r**d) ** (1.0 / p)
            if cand > best:
                best = cand
                best_witness = {"center": [int(v) for v in idx[c]], "radius_exponent": j}
    if return_witness:
        return best, best_witness
    return best


# -- Kerman-Sayer ------------------------------------------------------------


def _cube_block(values: np.ndarray, cube: DyadicCube) -> np.ndarray:
    return values[cube.slices()].flatten()


def _ks_kernel(lattice: Lattice, side: int, alpha: float) -> np.ndarray:
    """Pairwise |x-y|^(alpha-dim) inside one cube, zero on the diagonal."""
    d = lattice.dim
    h = lattice.spacing
    idx = np.indices((side,) * d).reshape(d, -1).T
    diff = idx[:, None, :] - idx[None, :, :]
    m = np.sum(diff * diff, axis=2)
    kern = np.zeros(m.shape, dtype=float)
    off = m > 0
    kern[off] = (h * np.sqrt(m[off])) ** (alpha - d)
    return kern


def ks_cube_value(V: Potential, alpha: float, cube: DyadicCube,
                  eps_mass: float = EPS_MASS) -> float:
    """Ratio (Int_Q |V|)^-1 IntInt_{QxQ, x!=y} |V(x)||V(y)| |x-y|^(alpha-dim)."""
    lat = V.lattice
    d = lat.dim
    h = lat.spacing
    w = _cube_block(np.abs(V.values), cube)
    mass = np.sum(w) * h**d
    if not mass > eps_mass:
        return 0.0
    kern = _ks_kernel(lat, cube.side, alpha)
    num = np.sum((w[:, None] * w[None, :]) * kern * h ** (2 * d))
    return float(num / mass)


def kerman_sayer_norm(V: Potential, alpha: float, eps_mass: float = EPS_MASS,
                      return_witness: bool = False):
    """Discrete Kerman-Sayer norm over the dyadic cube family.

    Cubes with quadrature mass <= eps_mass are skipped; single-cell cubes
    contribute zero because the diagonal is excluded.
    """
    lat = V.lattice
    d = lat.dim
    if not 0.0 < alpha < d:
        raise ValueError(f"alpha must lie in (0, dim) = (0, {d}), got {alpha}")
    h = lat.spacing
    absV = np.abs(V.values)
    kernels = {}
    best = 0.0
    best_witness = None
    for cube in dyadic_cubes(lat):
        w = _cube_block(absV, cube)
        mass = np.sum(w) * h**d
        if not mass > eps_mass:
            continue
        if cube.side not in kernels:
            kernels[cube.side] = _ks_kernel(lat, cube.side, alpha)
        num = np.sum((w[:, None] * w[None, :]) * kernels[cube.side] * h ** (2 * d))
        cand = float(num / mass)
        if cand > best:
            best = cand
            best_witness = cube.to_dict()
    if return_witness:
        return best, best_witness
    return best


# -- Muckenhoupt -------------------------------------------------------------


def _checked_weight(w: ScalarField, eps_w: float) -> np.ndarray:
    values = w.values
    if np.any(values.imag != 0.0):
        raise ValueError("weight must be real")
    values = values.real
    if np.any(values < 0.0):
        raise ValueError("weight must be nonnegative")
    if np.any(values == 0.0):
        warnings.warn(
            f"weight vanishes on {int(np.sum(values == 0.0))} cells; flooring at {eps_w}",
            stacklevel=3,
        )
        values = np.maximum(values, eps_w)
    return values


def ap_cube_value(w: ScalarField, p: float, cube: DyadicCube,
                  eps_w: float = EPS_WEIGHT) -> float:
    """Candidate (avg_Q w) (avg_Q w^(-1/(p-1)))^(p-1) for one cube."""
    values = _checked_weight(w, eps_w)
    block = _cube_block(values, cube)
    m1 = np.mean(block)
    m2 = np.mean(block ** (-1.0 / (p - 1.0)))
    return float(m1 * m2 ** (p - 1.0))


def muckenhoupt_constant(w: ScalarField, p: float, eps_w: float = EPS_WEIGHT,
                         return_witness: bool = False):
    """A_p characteristic over the dyadic cube family.

    Zero cells are floored at eps_w (reported through a warning); p <= 1 is
    rejected.  Constant weights give 1 up to rounding of the reciprocal.
    """
    if p <= 1.0:
        raise ValueError(f"p must be > 1, got {p}")
    values = _checked_weight(w, eps_w)
    inv_pow = -1.0 / (p - 1.0)
    best = 0.0
    best_witness = None
    for cube in dyadic_cubes(w.lattice):
        block = _cube_block(values, cube)
        m1 = np.mean(block)
        m2 = np.mean(block**inv_pow)
        cand = float(m1 * m2 ** (p - 1.0))
        if cand > best:
            best = cand
            best_witness = cube.to_dict()
    if return_witness:
        return best, best_witness
    return best


# -- reporting ---------------------------------------------------------------


def norm_result(name: str, V: Potential, **params) -> NormResult:
    """Compute a named norm with its witness, packaged for serialization."""
    if name == "lp":
        p = params["p"]
        value = lp_norm(V, p)
        flat = int(np.argmax(np.abs(V.values)))
        witness = {"argmax_index": [int(i) for i in np.unravel_index(flat, V.lattice.shape)]}
        return NormResult("lp", {"p": p}, value, witness)
    if name == "weighted_lq":
        q, alpha = params["q"], params["alpha"]
        value = weighted_lq_norm(V, q, alpha)
        w = polynomial_weight(V.lattice, alpha)
        flat = int(np.argmax(np.abs(V.values) ** q * w))
        witness = {"argmax_index": [int(i) for i in np.unravel_index(flat, V.lattice.shape)]}
        return NormResult("weighted_lq", {"q": q, "alpha": alpha}, value, witness)
    if name == "morrey_campanato":
        alpha, p = params["alpha"], params["p"]
        value, witness = morrey_campanato_norm(V, alpha, p, return_witness=True)
        return NormResult("morrey_campanato", {"alpha": alpha, "p": p}, value, witness)
    if name == "kerman_sayer":
        alpha = params["alpha"]
        eps_mass = params.get("eps_mass", EPS_MASS)
        value, witness = kerman_sayer_norm(V, alpha, eps_mass=eps_mass, return_witness=True)
        return NormResult("kerman_sayer", {"alpha": alpha, "eps_mass": eps_mass}, value, witness)
    if name == "muckenhoupt":
        p = params["p"]
        eps_w = params.get("eps_w", EPS_WEIGHT)
        w = ScalarField(V.lattice, np.abs(V.values))
        value, witness = muckenhoupt_constant(w, p, eps_w=eps_w, return_witness=True)
        return NormResult("muckenhoupt", {"p": p, "eps_w": eps_w}, value, witness)
    raise ValueError(f"unknown norm {name!r}")
