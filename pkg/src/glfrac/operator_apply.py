"""Applying the rational forms to self-adjoint positive operators.

Each retained node turns into one shifted solve (sigma I + tau L) x = b
with sigma, tau >= 0, so any operator that can solve such systems plugs
in through OperatorHandle. Spectra are rescaled to [1, inf) before the
form is applied and the result is multiplied back by lambda_min**(-alpha),
which keeps the scalar error estimates valid verbatim.
"""

import math
import threading
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigvalsh_tridiagonal

from .scalar_core import RationalForm, check_alpha

__all__ = [
    "NotPositiveDefiniteError",
    "DimensionMismatchError",
    "OperatorHandle",
    "DiagonalOperator",
    "TridiagonalOperator",
    "DenseOperator",
    "builtin_operator",
    "rescale_to_unit",
    "apply_fractional_inverse",
    "dense_fractional_inverse",
    "DENSE_DIM_CAP",
]

# Largest dimension for which dense assembly/factorization is allowed.
DENSE_DIM_CAP = 2000


class NotPositiveDefiniteError(ValueError):
    """Operator (or a shifted system) is not symmetric positive definite."""


class DimensionMismatchError(ValueError):
    """Vector length does not match the operator dimension."""


class OperatorHandle(ABC):
    """A self-adjoint positive operator exposing shifted solves.

    Concrete handles implement apply(v) = L v and the protected solve of
    (sigma I + tau L) x = v. The public shifted_solve wrapper counts
    every solve (thread-safe), which is what the inversion-accounting
    tests read back.
    """

    def __init__(self, dimension: int, lambda_min: float):
        dimension = int(dimension)
        if dimension < 1:
            raise ValueError("dimension must be at least 1")
        if not lambda_min > 0.0:
            raise ValueError("lambda_min must be positive")
        self.dimension = dimension
        self.lambda_min = float(lambda_min)
        self._solve_count = 0
        self._count_lock = threading.Lock()

    @property
    def solve_count(self) -> int:
        return self._solve_count

    def reset_solve_count(self):
        with self._count_lock:
            self._solve_count = 0

    def _check_vector(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dimension,):
            raise DimensionMismatchError("dimension mismatch")
        return v

    @abstractmethod
    def apply(self, v: np.ndarray) -> np.ndarray:
        """Return L v."""

    @abstractmethod
    def _shifted_solve(self, sigma: float, tau: float, v: np.ndarray) -> np.ndarray:
        ...

    def shifted_solve(self, sigma: float, tau: float, v) -> np.ndarray:
        """Solve (sigma I + tau L) x = v for sigma, tau >= 0, not both zero."""
        if sigma < 0.0 or tau < 0.0 or sigma + tau == 0.0:
            raise ValueError("shift coefficients must be nonnegative and not both zero")
        v = self._check_vector(v)
        with self._count_lock:
            self._solve_count += 1
        return self._shifted_solve(float(sigma), float(tau), v)


class DiagonalOperator(OperatorHandle):
    """diag(eigenvalues); solves are elementwise divisions."""

    def __init__(self, eigenvalues):
        eigenvalues = np.asarray(eigenvalues, dtype=float)
        if eigenvalues.ndim != 1 or eigenvalues.size == 0:
            raise ValueError("eigenvalues must be a nonempty vector")
        if not np.all(eigenvalues > 0.0):
            raise NotPositiveDefiniteError("operator not positive definite")
        super().__init__(eigenvalues.size, float(eigenvalues.min()))
        self.eigenvalues = eigenvalues

    def apply(self, v):
        return self.eigenvalues * self._check_vector(v)

    def _shifted_solve(self, sigma, tau, v):
        return v / (sigma + tau * self.eigenvalues)


def _thomas(diag, off, rhs):
    """Solve the symmetric tridiagonal system; no pivoting (shifted SPD input)."""
    n = diag.size
    if n == 1:
        return rhs / diag
    cp = np.empty(n - 1)
    dp = np.empty(n)
    cp[0] = off[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n - 1):
        denom = diag[i] - off[i - 1] * cp[i - 1]
        cp[i] = off[i] / denom
        dp[i] = (rhs[i] - off[i - 1] * dp[i - 1]) / denom
    denom = diag[n - 1] - off[n - 2] * cp[n - 2]
    dp[n - 1] = (rhs[n - 1] - off[n - 2] * dp[n - 2]) / denom
    x = np.empty(n)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


class TridiagonalOperator(OperatorHandle):
    """Symmetric tridiagonal operator solved by the Thomas sweep.

    lambda_min may be passed when known in closed form; otherwise the
    smallest eigenvalue is computed once at construction.
    """

    def __init__(self, diag, off, lambda_min: float | None = None):
        diag = np.asarray(diag, dtype=float)
        off = np.asarray(off, dtype=float)
        if diag.ndim != 1 or diag.size < 1 or off.shape != (diag.size - 1,):
            raise ValueError("need a main diagonal of length m and an off-diagonal of length m - 1")
        if lambda_min is None:
            lambda_min = float(eigvalsh_tridiagonal(diag, off, select="i", select_range=(0, 0))[0])
        if not lambda_min > 0.0:
            raise NotPositiveDefiniteError("operator not positive definite")
        super().__init__(diag.size, lambda_min)
        self.diag = diag
        self.off = off

    def apply(self, v):
        v = self._check_vector(v)
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out

    def _shifted_solve(self, sigma, tau, v):
        return _thomas(sigma + tau * self.diag, tau * self.off, v)

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        idx = np.arange(self.dimension - 1)
        a[idx, idx + 1] = self.off
        a[idx + 1, idx] = self.off
        return a


class DenseOperator(OperatorHandle):
    """Dense symmetric positive definite operator; solves use Cholesky.

    Positive definiteness is checked once at construction by attempting
    a Cholesky factorization. lambda_min must be supplied by the caller
    (it is spectral information the factorization does not reveal).
    """

    def __init__(self, matrix, lambda_min: float):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("matrix must be square")
        if matrix.shape[0] > DENSE_DIM_CAP:
            raise ValueError("dimension too large for dense assembly")
        if not np.allclose(matrix, matrix.T, rtol=1e-10, atol=1e-12):
            raise ValueError("operator not symmetric")
        try:
            cho_factor(matrix, lower=True, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("operator not positive definite") from exc
        super().__init__(matrix.shape[0], lambda_min)
        self.matrix = matrix

    def apply(self, v):
        return self.matrix @ self._check_vector(v)

    def _shifted_solve(self, sigma, tau, v):
        shifted = tau * self.matrix
        shifted[np.diag_indices_from(shifted)] += sigma
        try:
            return cho_solve(cho_factor(shifted, lower=True, check_finite=False), v, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("operator not positive definite") from exc

    def to_dense(self) -> np.ndarray:
        return self.matrix.copy()


def _fd1d_stencil(m: int):
    """Dirichlet second-difference stencil on m interior points of (0, 1)."""
    m = int(m)
    if m < 1:
        raise ValueError("grid size must be at least 1")
    h = 1.0 / (m + 1)
    diag = np.full(m, 2.0 / h**2)
    off = np.full(m - 1, -1.0 / h**2)
    lam_min = 4.0 * math.sin(math.pi / (2.0 * (m + 1))) ** 2 / h**2
    return diag, off, lam_min


def builtin_operator(kind: str, **params) -> OperatorHandle:
    """Construct one of the stock test operators.

    Kinds
    -----
    "diag-power"     : eigenvalues j**exponent, j = 1..size.
    "diag-explicit"  : eigenvalues given directly.
    "fd-laplacian-1d": Dirichlet Laplacian on m interior points, tridiagonal.
    "fd-laplacian-2d": Kronecker-sum Laplacian on an m x m grid, dense.
    "dense-spd"      : caller-supplied matrix with known lambda_min.
    """
    if kind == "diag-power":
        size = int(params["size"])
        exponent = float(params["exponent"])
        if size < 1:
            raise ValueError("size must be at least 1")
        return DiagonalOperator(np.arange(1.0, size + 1.0) ** exponent)
    if kind == "diag-explicit":
        return DiagonalOperator(params["eigenvalues"])
    if kind == "fd-laplacian-1d":
        diag, off, lam_min = _fd1d_stencil(params["m"])
        return TridiagonalOperator(diag, off, lambda_min=lam_min)
    if kind == "fd-laplacian-2d":
        m = int(params["m"])
        diag, off, lam_min = _fd1d_stencil(m)
        if m * m > DENSE_DIM_CAP:
            raise ValueError("dimension too large for dense assembly")
        t = np.diag(diag)
        idx = np.arange(m - 1)
        t[idx, idx + 1] = off
        t[idx + 1, idx] = off
        eye = np.eye(m)
        a = np.kron(t, eye) + np.kron(eye, t)
        return DenseOperator(a, lambda_min=2.0 * lam_min)
    if kind == "dense-spd":
        return DenseOperator(params["matrix"], lambda_min=float(params["lambda_min"]))
    raise ValueError(f"unknown operator kind: {kind}")


class _UnitScaledOperator(OperatorHandle):
    """View of base / lambda_min, whose spectrum starts at 1."""

    def __init__(self, base: OperatorHandle):
        super().__init__(base.dimension, 1.0)
        self._base = base
        self._scale = base.lambda_min

    def apply(self, v):
        return self._base.apply(v) / self._scale

    def _shifted_solve(self, sigma, tau, v):
        # (sigma I + tau L/c) x = v  <=>  (sigma I + (tau/c) L) x = v
        return self._base.shifted_solve(sigma, tau / self._scale, v)


def rescale_to_unit(op: OperatorHandle, alpha: float) -> tuple[OperatorHandle, float]:
    """Spectrum-shifting view (L / lambda_min) plus the lambda_min**(-alpha) postfactor."""
    alpha = check_alpha(alpha)
    return _UnitScaledOperator(op), op.lambda_min ** (-alpha)


def _solve_tasks(form: RationalForm):
    """Fixed task order: family 1 ascending, then family 2 ascending."""
    tasks = []
    for j, (c, d) in enumerate(zip(form.coeffs1, form.shifts1), start=1):
        tasks.append((1, j, float(c), 1.0, float(d)))
    for j, (c, s) in enumerate(zip(form.coeffs2, form.shifts2), start=1):
        tasks.append((2, j, float(c), float(s), 1.0))
    return tasks


def apply_fractional_inverse(
    op: OperatorHandle,
    b,
    form: RationalForm,
    parallel: bool = False,
    max_workers: int | None = None,
) -> np.ndarray:
    """Approximate L**(-alpha) b with one shifted solve per retained node.

    The solves are independent and may run on a thread pool, but the
    weighted accumulation always happens afterwards in the fixed task
    order, so parallel output is bit-identical to serial output.
    """
    scaled, post = rescale_to_unit(op, form.alpha)
    b = scaled._check_vector(b)
    tasks = _solve_tasks(form)

    def solve(task):
        fam, j, _, sigma, tau = task
        try:
            return scaled.shifted_solve(sigma, tau, b)
        except Exception as exc:
            raise RuntimeError(f"shifted solve failed (family {fam}, node {j}): {exc}") from exc

    if parallel and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            solutions = list(pool.map(solve, tasks))
    else:
        solutions = [solve(t) for t in tasks]

    acc = np.zeros(op.dimension)
    for task, sol in zip(tasks, solutions):
        acc = acc + task[2] * sol
    return post * acc


def dense_fractional_inverse(op: OperatorHandle, form: RationalForm, parallel: bool = False) -> np.ndarray:
    """Materialize the approximation of L**(-alpha) column by column."""
    if op.dimension > DENSE_DIM_CAP:
        raise ValueError("dimension too large for dense assembly")
    cols = np.empty((op.dimension, op.dimension))
    basis = np.zeros(op.dimension)
    for i in range(op.dimension):
        basis[i] = 1.0
        cols[:, i] = apply_fractional_inverse(op, basis, form, parallel=parallel)
        basis[i] = 0.0
    return cols
