"""Discrete spectra of -Delta* + V and Birman-Schwinger checks.

Dense matrices are assembled from circulant kernel tables: the inverse FFT
of a Fourier symbol gives the translation kernel, gathered by integer index
differences.  Flat vectors use the component-major layout (component, then
row-major grid).  Eigenvalues are filtered by their distance to the
essential-spectrum ray [0, inf) and accepted only with a matrix-free
residual below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg

from .lame import (
    DEFAULT_TAU_Z,
    LameParams,
    Potential,
    apply_perturbed,
    distance_to_ray,
    resolvent_split,
)
from .lattice import (
    Lattice,
    VectorField,
    l2_inner,
    random_vector_field,
)
from .norms import polynomial_weight
from .operator_norms import lp_operator_norm, singular_norm

__all__ = [
    "DEFAULT_BUDGET_BYTES",
    "BudgetExceeded",
    "SpectralResult",
    "BSOperator",
    "spectral_width",
    "default_tau_filter",
    "default_tau_res",
    "dense_lame_matrix",
    "dense_operator_matrix",
    "dense_resolvent_matrix",
    "discrete_eigenvalues",
    "shift_invert_eigenvalues",
    "bs_apply",
    "bs_norm",
    "bs_check",
    "resolvent_norm_estimate",
]

DEFAULT_BUDGET_BYTES = 512 * 1024**2


class BudgetExceeded(RuntimeError):
    """Dense assembly would blow the memory budget."""


def spectral_width(params: LameParams, lattice: Lattice) -> float:
    """Largest unperturbed symbol eigenvalue, (lam + 2 mu) max |xi|^2."""
    return params.longitudinal * float(lattice.frequency_norm2.max())


def default_tau_filter(params: LameParams, lattice: Lattice) -> float:
    """Distance filter separating discrete eigenvalues from ray artifacts."""
    return 1e-3 * spectral_width(params, lattice)


def default_tau_res(params: LameParams, lattice: Lattice) -> float:
    """Residual acceptance threshold scaled to the operator norm."""
    return 1e-8 * max(1.0, spectral_width(params, lattice))


def _check_budget(order: int, budget_bytes: int, dim: int) -> None:
    need = 16 * order * order
    if need > budget_bytes:
        n = 4
        while True:
            m = n + 2
            if 16 * (dim * m**dim) ** 2 > budget_bytes:
                break
            n = m
        raise BudgetExceeded(
            f"dense matrix of order {order} needs {need / 1e6:.0f} MB, budget is "
            f"{budget_bytes / 1e6:.0f} MB; try n <= {n} in dimension {dim}"
        )


def _offset_matrix(lattice: Lattice, points: np.ndarray | None = None) -> np.ndarray:
    """Flat index of (a - b) mod n for all point pairs; points are flat indices."""
    idx = np.indices(lattice.shape).reshape(lattice.dim, -1)
    if points is not None:
        idx = idx[:, points]
    flat = np.zeros((idx.shape[1], idx.shape[1]), dtype=np.int64)
    for axis in range(lattice.dim):
        o = (idx[axis][:, None] - idx[axis][None, :]) % lattice.n
        flat = flat * lattice.n + o
    return flat


def _symbol_grid(params: LameParams, lattice: Lattice) -> np.ndarray:
    """M(xi) on the grid, shape (dim, dim) + grid."""
    xi = lattice.frequency_grid
    xi2 = lattice.frequency_norm2
    d = lattice.dim
    sym = (params.lam + params.mu) * (xi[:, None] * xi[None, :])
    sym = sym + params.mu * xi2 * np.eye(d).reshape((d, d) + (1,) * d)
    return sym.astype(np.complex128)


def _gather_blocks(tables: np.ndarray, flat_off: np.ndarray) -> np.ndarray:
    """Assemble the dense block matrix from kernel tables (d, d, *grid)."""
    d = tables.shape[0]
    rows = []
    for j in range(d):
        rows.append([tables[j, k].reshape(-1)[flat_off] for k in range(d)])
    return np.block(rows)


def dense_lame_matrix(params: LameParams, lattice: Lattice,
                      budget_bytes: int = DEFAULT_BUDGET_BYTES) -> np.ndarray:
    """Dense matrix of -Delta* in the component-major flat layout."""
    _check_budget(lattice.dim * lattice.npoints, budget_bytes, lattice.dim)
    sym = _symbol_grid(params, lattice)
    axes = tuple(range(2, 2 + lattice.dim))
    tables = np.fft.ifftn(sym, axes=axes)
    return _gather_blocks(tables, _offset_matrix(lattice))


def dense_operator_matrix(params: LameParams, V: Potential,
                          budget_bytes: int = DEFAULT_BUDGET_BYTES) -> np.ndarray:
    """Dense matrix of -Delta* + V."""
    lat = V.lattice
    A = dense_lame_matrix(params, lat, budget_bytes=budget_bytes)
    npts = lat.npoints
    vflat = V.values.reshape(-1)
    diag = np.arange(npts)
    for j in range(lat.dim):
        A[j * npts + diag, j * npts + diag] += vflat
    return A


def _inverse_symbol_tables(params: LameParams, z: complex, lattice: Lattice) -> np.ndarray:
    """Kernel tables of (M(xi) - z)^-1, shape (dim, dim) + grid."""
    d = lattice.dim
    xi = lattice.frequency_grid.reshape(d, -1).T
    xi2 = lattice.frequency_norm2.reshape(-1)
    mats = params.mu * xi2[:, None, None] * np.eye(d)
    mats = mats + (params.lam + params.mu) * xi[:, :, None] * xi[:, None, :]
    mats = mats - z * np.eye(d)
    inv = np.linalg.inv(mats)                                  # (npts, d, d)
    inv = np.moveaxis(inv, 0, 2).reshape((d, d) + lattice.shape)
    axes = tuple(range(2, 2 + lattice.dim))
    return np.fft.ifftn(np.ascontiguousarray(inv), axes=axes)


def dense_resolvent_matrix(params: LameParams, z: complex, lattice: Lattice,
                           points: np.ndarray | None = None,
                           tau_z: float = DEFAULT_TAU_Z,
                           budget_bytes: int = DEFAULT_BUDGET_BYTES) -> np.ndarray:
    """Dense resolvent of -Delta*, optionally restricted to flat grid points."""
    if distance_to_ray(z) < tau_z:
        raise ValueError(f"z = {z} is within {tau_z} of [0, inf)")
    npts = lattice.npoints if points is None else len(points)
    _check_budget(lattice.dim * npts, budget_bytes, lattice.dim)
    tables = _inverse_symbol_tables(params, z, lattice)
    return _gather_blocks(tables, _offset_matrix(lattice, points))


# -- eigenvalues -------------------------------------------------------------


@dataclass(frozen=True)
class SpectralResult:
    """Filtered discrete eigenvalues with residuals and provenance."""

    eigenvalues: np.ndarray
    residuals: np.ndarray
    distances: np.ndarray
    solver_info: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "residuals": [float(r) for r in self.residuals],
            "distances": [float(d) for d in self.distances],
            "solver_info": self.solver_info,
        }


def _vector_from_flat(lattice: Lattice, vec: np.ndarray) -> VectorField:
    return VectorField(lattice, vec.reshape((lattice.dim,) + lattice.shape))


def _field_l2(u: VectorField) -> float:
    return float(np.sqrt(l2_inner(u, u).real))


def _operator_residual(params: LameParams, V: Potential, z: complex, u: VectorField) -> float:
    r = apply_perturbed(params, V, u) - z * u
    return _field_l2(r) / _field_l2(u)


def _package(params, V, lattice, pairs, tau_filter, tau_res, info) -> SpectralResult:
    kept = []
    rejected = 0
    for z, u in pairs:
        if distance_to_ray(z) <= tau_filter:
            continue
        res = _operator_residual(params, V, z, u)
        if res >= tau_res:
            rejected += 1
            continue
        kept.append((z, res))
    kept.sort(key=lambda t: (t[0].real, t[0].imag))
    eigenvalues = np.array([z for z, _ in kept], dtype=complex)
    residuals = np.array([r for _, r in kept], dtype=float)
    distances = np.array([distance_to_ray(z) for z in eigenvalues], dtype=float)
    info = dict(info)
    info.update(
        {
            "tau_filter": tau_filter,
            "tau_res": tau_res,
            "dim": lattice.dim,
            "n": lattice.n,
            "period": lattice.period,
            "rejected_by_residual": rejected,
        }
    )
    return SpectralResult(eigenvalues, residuals, distances, info)


def discrete_eigenvalues(params: LameParams, V: Potential,
                         tau_filter: float | None = None,
                         tau_res: float | None = None,
                         budget_bytes: int = DEFAULT_BUDGET_BYTES) -> SpectralResult:
    """All eigenvalues of the assembled operator away from the ray [0, inf).

    Dense assembly plus a full nonsymmetric eigensolve; raises
    :class:`BudgetExceeded` when the matrix would not fit the budget.  Every
    reported eigenvalue carries a matrix-free residual below ``tau_res``.
    """
    lat = V.lattice
    if tau_filter is None:
        tau_filter = default_tau_filter(params, lat)
    if tau_res is None:
        tau_res = default_tau_res(params, lat)
    A = dense_operator_matrix(params, V, budget_bytes=budget_bytes)
    w, vecs = np.linalg.eig(A)
    pairs = ((w[i], _vector_from_flat(lat, vecs[:, i])) for i in range(len(w)))
    info = {"method": "dense", "matrix_order": A.shape[0]}
    return _package(params, V, lat, pairs, tau_filter, tau_res, info)


def shift_invert_eigenvalues(params: LameParams, V: Potential, sigma: complex,
                             k: int = 6, tol: float = 1e-10,
                             gmres_tol: float = 1e-12,
                             tau_filter: float = 0.0,
                             tau_res: float | None = None) -> SpectralResult:
    """Matrix-free eigenvalues near ``sigma`` beyond the dense budget.

    Arnoldi on (A - sigma)^-1, applied through GMRES with the unperturbed
    resolvent as preconditioner; acceptance is purely residual based.
    """
    lat = V.lattice
    if tau_res is None:
        tau_res = default_tau_res(params, lat)
    d = lat.dim
    nflat = d * lat.npoints

    def shifted(vec: np.ndarray) -> np.ndarray:
        u = _vector_from_flat(lat, vec)
        out = apply_perturbed(params, V, u) - sigma * u
        # field buffers are frozen; solvers need a writable array back
        return out.values.reshape(-1).copy()

    def precondition(vec: np.ndarray) -> np.ndarray:
        g = _vector_from_flat(lat, vec)
        return resolvent_split(params, sigma, g).values.reshape(-1).copy()

    A_op = scipy.sparse.linalg.LinearOperator((nflat, nflat), matvec=shifted, dtype=complex)
    M_op = scipy.sparse.linalg.LinearOperator((nflat, nflat), matvec=precondition, dtype=complex)

    def solve(vec: np.ndarray) -> np.ndarray:
        sol, code = scipy.sparse.linalg.gmres(A_op, vec, M=M_op, rtol=gmres_tol, atol=0.0)
        if code != 0:
            raise RuntimeError(f"inner GMRES failed to converge (code {code})")
        return sol

    OP = scipy.sparse.linalg.LinearOperator((nflat, nflat), matvec=solve, dtype=complex)
    theta, vecs = scipy.sparse.linalg.eigs(OP, k=k, which="LM", tol=tol)
    pairs = []
    for i in range(len(theta)):
        if theta[i] == 0.0:
            continue
        pairs.append((sigma + 1.0 / theta[i], _vector_from_flat(lat, vecs[:, i])))
    info = {"method": "shift_invert", "sigma": [sigma.real, sigma.imag], "k": k}
    return _package(params, V, lat, pairs, tau_filter, tau_res, info)


# -- Birman-Schwinger --------------------------------------------------------


class BSOperator:
    """Birman-Schwinger operator K = V_1/2 (-Delta* - z)^-1 |V|^1/2.

    ``V_1/2 = |V|^1/2 sgn(V)`` with the complex signum (0 at 0); both factors
    act componentwise and vanish off the support of V.
    """

    def __init__(self, params: LameParams, V: Potential, z: complex,
                 tau_z: float = DEFAULT_TAU_Z):
        if distance_to_ray(z) < tau_z:
            raise ValueError(f"z = {z} is within {tau_z} of [0, inf)")
        self.params = params
        self.V = V
        self.z = complex(z)
        mag = np.abs(V.values)
        sgn = np.zeros_like(V.values)
        nz = mag > 0
        sgn[nz] = V.values[nz] / mag[nz]
        self.abs_half = np.sqrt(mag)
        self.v_half = self.abs_half * sgn

    @property
    def lattice(self) -> Lattice:
        return self.V.lattice

    def apply(self, g: VectorField) -> VectorField:
        cut = VectorField(g.lattice, self.abs_half[None] * g.values)
        out = resolvent_split(self.params, self.z, cut)
        return VectorField(g.lattice, self.v_half[None] * out.values)

    def apply_adjoint(self, g: VectorField) -> VectorField:
        cut = VectorField(g.lattice, np.conj(self.v_half)[None] * g.values)
        out = resolvent_split(self.params, np.conj(self.z), cut)
        return VectorField(g.lattice, self.abs_half[None] * out.values)

    def support_points(self) -> np.ndarray:
        return np.flatnonzero(self.V.support_mask.reshape(-1))

    def dense_matrix(self, budget_bytes: int = DEFAULT_BUDGET_BYTES) -> np.ndarray:
        """K restricted to the support of V, in the component-major layout."""
        pts = self.support_points()
        if len(pts) == 0:
            return np.zeros((0, 0), dtype=complex)
        R = dense_resolvent_matrix(self.params, self.z, self.lattice, points=pts,
                                   budget_bytes=budget_bytes)
        left = np.concatenate([self.v_half.reshape(-1)[pts]] * self.lattice.dim)
        right = np.concatenate([self.abs_half.reshape(-1)[pts]] * self.lattice.dim)
        return left[:, None] * R * right[None, :]


def bs_apply(K: BSOperator, g: VectorField) -> VectorField:
    """Apply the Birman-Schwinger operator to a field."""
    return K.apply(g)


def bs_norm(params: LameParams, V: Potential, z: complex,
            tau_z: float = DEFAULT_TAU_Z, tol: float = 1e-10,
            max_iter: int = 5000, seed: int = 0) -> float:
    """Largest singular value of the Birman-Schwinger operator at z.

    Power iteration on K*K; returns 0 for the zero potential.  At any
    eigenvalue of the discretized -Delta* + V the value is at least 1,
    since -1 then lies in the spectrum of K.
    """
    K = BSOperator(params, V, z, tau_z=tau_z)
    if not V.support_mask.any():
        return 0.0
    rng = np.random.default_rng(seed)
    start = random_vector_field(K.lattice, rng)
    start = VectorField(K.lattice, K.abs_half[None] * start.values)
    if _field_l2(start) == 0.0:
        return 0.0
    return singular_norm(K.apply, K.apply_adjoint, start, tol=tol, max_iter=max_iter)


def bs_check(params: LameParams, V: Potential, z: complex,
             tau_z: float = DEFAULT_TAU_Z,
             budget_bytes: int = DEFAULT_BUDGET_BYTES) -> float:
    """Residual min |sigma + 1| over the spectrum of the dense restricted K.

    Near zero exactly when z is an eigenvalue of the discretized -Delta* + V;
    returns 1 for the zero potential (K is the zero operator).
    """
    K = BSOperator(params, V, z, tau_z=tau_z)
    mat = K.dense_matrix(budget_bytes=budget_bytes)
    if mat.shape[0] == 0:
        return 1.0
    sigma = np.linalg.eigvals(mat)
    return float(np.min(np.abs(sigma + 1.0)))


# -- resolvent norm estimates ------------------------------------------------


def resolvent_norm_estimate(params: LameParams, z: complex, norm_pair, lattice: Lattice,
                            samples: int = 6, n_iter: int = 40, seed: int = 0,
                            tau_z: float = DEFAULT_TAU_Z, tol: float = 1e-6) -> float:
    """Empirical lower estimate of a resolvent operator norm.

    ``norm_pair`` selects the pairing: ``("lp_dual", p)`` estimates
    L^p -> L^p' by random starts refined with the nonlinear power method;
    ``("weighted_l2", alpha)`` estimates L^2(<x>^2a) -> L^2(<x>^-2a) by plain
    power iteration on the weight-conjugated operator, stopping at relative
    change ``tol``.
    """
    if distance_to_ray(z) < tau_z:
        raise ValueError(f"z = {z} is within {tau_z} of [0, inf)")
    kind, value = norm_pair
    rng = np.random.default_rng(seed)

    if kind == "lp_dual":
        p = float(value)
        if not 1.0 < p <= 2.0:
            raise ValueError(f"lp_dual pairing needs 1 < p <= 2, got {p}")
        q = p / (p - 1.0)

        def op(g):
            return resolvent_split(params, z, g)

        def op_adj(g):
            return resolvent_split(params, np.conj(z), g)

        best = 0.0
        for _ in range(samples):
            start = random_vector_field(lattice, rng)
            best = max(best, lp_operator_norm(op, op_adj, start, p, q, n_iter=n_iter))
        return best

    if kind == "weighted_l2":
        alpha = float(value)
        if alpha < 0.0:
            raise ValueError(f"weight exponent must be >= 0, got {alpha}")
        half = polynomial_weight(lattice, alpha / 2.0)  # <x>^alpha

        def conj_op(g):
            cut = VectorField(lattice, g.values / half[None])
            out = resolvent_split(params, z, cut)
            return VectorField(lattice, out.values / half[None])

        def conj_adj(g):
            cut = VectorField(lattice, g.values / half[None])
            out = resolvent_split(params, np.conj(z), cut)
            return VectorField(lattice, out.values / half[None])

        start = random_vector_field(lattice, rng)
        return singular_norm(conj_op, conj_adj, start, tol=tol, max_iter=5000)

    raise ValueError(f"unknown norm pairing {kind!r}")
