"""The Lame operator of elasticity, its resolvent, and potentials.

The unperturbed operator is -Delta* u = -mu Laplace u - (lam + mu) grad div u
with Fourier symbol M(xi) = mu |xi|^2 I + (lam + mu) xi xi^T.  Its resolvent
is computed two independent ways: per-frequency inversion of M(xi) - z, and
the Helmholtz splitting into two scalar Laplacian resolvents

    (-Delta* - z)^-1 g = (1/mu) (-Laplace - z/mu)^-1 g_S
                       + (1/(lam+2mu)) (-Laplace - z/(lam+2mu))^-1 g_P.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .helmholtz import helmholtz_decompose
from .lattice import (
    Lattice,
    ScalarField,
    VectorField,
    forward_transform,
    inverse_transform,
)

__all__ = [
    "DEFAULT_TAU_Z",
    "LameParams",
    "Potential",
    "distance_to_ray",
    "lame_symbol",
    "apply_lame",
    "resolvent_direct",
    "resolvent_split",
    "apply_perturbed",
]

DEFAULT_TAU_Z = 1e-8


@dataclass(frozen=True)
class LameParams:
    """Lame moduli; ellipticity demands mu > 0 and lam + 2 mu > 0."""

    lam: float
    mu: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.lam) and np.isfinite(self.mu)):
            raise ValueError("Lame moduli must be finite")
        if self.mu <= 0.0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.lam + 2.0 * self.mu <= 0.0:
            raise ValueError(f"lam + 2 mu must be positive, got {self.lam + 2.0 * self.mu}")

    @property
    def longitudinal(self) -> float:
        """Modulus lam + 2 mu seen by the gradient (P-wave) part."""
        return self.lam + 2.0 * self.mu


@dataclass(frozen=True)
class Potential:
    """Complex potential samples with support bookkeeping.

    The support mask marks grid points where V is exactly nonzero; the
    Birman-Schwinger kernels are restricted to it.
    """

    field: ScalarField

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.field.values)):
            raise ValueError("potential has non-finite samples")

    @classmethod
    def from_array(cls, lattice: Lattice, values) -> "Potential":
        return cls(ScalarField(lattice, values))

    @property
    def lattice(self) -> Lattice:
        return self.field.lattice

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    @cached_property
    def support_mask(self) -> np.ndarray:
        mask = self.field.values != 0.0
        mask.setflags(write=False)
        return mask

    @cached_property
    def support_box(self):
        """Half-open index ranges ((lo, hi), ...) per axis, None if V == 0."""
        if not self.support_mask.any():
            return None
        idx = np.argwhere(self.support_mask)
        return tuple((int(lo), int(hi) + 1) for lo, hi in zip(idx.min(0), idx.max(0)))

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.field.values.imag == 0.0))


def distance_to_ray(z: complex) -> float:
    """Distance from z to the half line [0, infinity)."""
    z = complex(z)
    if z.real >= 0.0:
        return abs(z.imag)
    return abs(z)


def _check_admissible(z: complex, tau_z: float) -> None:
    if distance_to_ray(z) < tau_z:
        raise ValueError(
            f"z = {z} is within {tau_z} of the essential spectrum [0, inf)"
        )


def lame_symbol(params: LameParams, xi) -> np.ndarray:
    """Symbol M(xi) = mu |xi|^2 I + (lam + mu) xi xi^T as a (d, d) array."""
    xi = np.asarray(xi, dtype=float)
    d = xi.size
    return params.mu * float(xi @ xi) * np.eye(d) + (params.lam + params.mu) * np.outer(xi, xi)


def apply_lame(params: LameParams, u: VectorField) -> VectorField:
    """Apply -Delta* spectrally: mu |xi|^2 uhat + (lam+mu) xi (xi . uhat)."""
    lat = u.lattice
    xi = lat.frequency_grid
    uhat = forward_transform(u).values
    out = params.mu * lat.frequency_norm2[None] * uhat
    out += (params.lam + params.mu) * xi * np.sum(xi * uhat, axis=0)[None]
    return inverse_transform(VectorField(lat, out))


def resolvent_direct(params: LameParams, z: complex, g: VectorField,
                     tau_z: float = DEFAULT_TAU_Z) -> VectorField:
    """Resolvent by per-frequency solves of (M(xi) - z) fhat = ghat."""
    _check_admissible(z, tau_z)
    lat = g.lattice
    d = lat.dim
    xi = lat.frequency_grid.reshape(d, -1).T            # (npts, d)
    xi2 = lat.frequency_norm2.reshape(-1)
    mats = params.mu * xi2[:, None, None] * np.eye(d)
    mats = mats + (params.lam + params.mu) * xi[:, :, None] * xi[:, None, :]
    mats = mats - z * np.eye(d)
    ghat = forward_transform(g).values.reshape(d, -1).T  # (npts, d)
    fhat = np.linalg.solve(mats, ghat[:, :, None])[:, :, 0]
    fhat = fhat.T.reshape((d,) + lat.shape)
    return inverse_transform(VectorField(lat, fhat))


def _laplacian_resolvent_values(lat: Lattice, w: complex, vhat: np.ndarray) -> np.ndarray:
    return vhat / (lat.frequency_norm2 - w)


def resolvent_split(params: LameParams, z: complex, g: VectorField,
                    tau_z: float = DEFAULT_TAU_Z) -> VectorField:
    """Resolvent via the Helmholtz splitting into scalar resolvents."""
    _check_admissible(z, tau_z)
    lat = g.lattice
    pair = helmholtz_decompose(g)
    gs_hat = forward_transform(pair.solenoidal).values
    gp_hat = forward_transform(pair.potential).values
    mu = params.mu
    lm = params.longitudinal
    out = _laplacian_resolvent_values(lat, z / mu, gs_hat) / mu
    out = out + _laplacian_resolvent_values(lat, z / lm, gp_hat) / lm
    return inverse_transform(VectorField(lat, out))


def apply_perturbed(params: LameParams, V: Potential, u: VectorField) -> VectorField:
    """Apply -Delta* + V with V acting componentwise by multiplication."""
    if V.lattice != u.lattice:
        raise ValueError("potential and field live on different lattices")
    out = apply_lame(params, u)
    return VectorField(u.lattice, out.values + V.values[None] * u.values)
