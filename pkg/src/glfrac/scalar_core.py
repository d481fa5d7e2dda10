"""Rational approximation of lambda**(-alpha) on [1, inf) and its a-priori errors.

The negative fractional power is written as a pair of exponentially
weighted integrals over [0, inf), one per factor of the reflection
formula. Discretizing each with the same Gauss-Laguerre rule yields a
rational function in lambda whose poles are negative reals, so applying
it to a self-adjoint positive operator costs one shifted solve per
retained node. Everything here is scalar bookkeeping: node/coefficient
assembly, closed-form error estimates, order selection, and truncation
planning. Operator plumbing lives in operator_apply.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .quadrature import N_MAX, gauss_laguerre

__all__ = [
    "FractionalExponent",
    "ErrorEstimate",
    "TruncationPlan",
    "RationalForm",
    "ToleranceUnreachableError",
    "check_alpha",
    "gamma_pm",
    "g1",
    "g2",
    "lambda_n_exact",
    "lambda_n_tilde",
    "n_star",
    "estimate_scalar_error",
    "estimate_operator_error",
    "estimate_balanced_error",
    "estimate_balanced_error_fast",
    "select_n",
    "plan_full",
    "plan_balanced",
    "plan_equalized",
    "build_rational",
    "eval_scalar",
]

_PI = math.pi


class ToleranceUnreachableError(RuntimeError):
    """No order below the cap meets the requested tolerance."""


def check_alpha(alpha: float) -> float:
    """Validate a fractional exponent, returning it as float."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha out of range (0, 1)")
    return alpha


@dataclass(frozen=True)
class FractionalExponent:
    """A validated exponent alpha in (0, 1) for the power lambda**(-alpha)."""

    alpha: float

    def __post_init__(self):
        check_alpha(self.alpha)


def _as_lambda(lam):
    """Validate lambda >= 1 and report whether the input was scalar."""
    arr = np.asarray(lam, dtype=float)
    if np.any(arr < 1.0):
        raise ValueError("lambda out of range [1, inf)")
    return arr, arr.ndim == 0


def gamma_pm(lam):
    """Decay-rate factors gamma_minus, gamma_plus at lambda >= 1.

    gamma_pm = sqrt(sqrt(u**2 + pi**2) -+ u) with u = ln(lambda); their
    product is exactly pi for every lambda.

    Returns
    -------
    (gamma_minus, gamma_plus) : floats or arrays matching the input shape.
    """
    arr, scalar = _as_lambda(lam)
    u = np.log(arr)
    r = np.sqrt(u * u + _PI * _PI)
    gm = np.sqrt(r - u)
    gp = np.sqrt(r + u)
    if scalar:
        return float(gm), float(gp)
    return gm, gp


def g1(n: int, alpha: float, lam):
    """Slow-family error profile lambda**(-alpha) * exp(-gamma_minus * sqrt(2 alpha nbar))."""
    alpha = check_alpha(alpha)
    arr, scalar = _as_lambda(lam)
    gm, _ = gamma_pm(arr)
    nbar = 4.0 * n + 2.0
    out = arr ** (-alpha) * np.exp(-gm * math.sqrt(2.0 * alpha * nbar))
    return float(out) if scalar else out


def g2(n: int, alpha: float, lam):
    """Fast-family error profile lambda**(-alpha) * exp(-gamma_plus * sqrt(2 (1-alpha) nbar))."""
    alpha = check_alpha(alpha)
    arr, scalar = _as_lambda(lam)
    _, gp = gamma_pm(arr)
    nbar = 4.0 * n + 2.0
    out = arr ** (-alpha) * np.exp(-gp * math.sqrt(2.0 * (1.0 - alpha) * nbar))
    return float(out) if scalar else out


def estimate_scalar_error(n: int, alpha: float, lam):
    """Pointwise a-priori bound 4 sin(alpha pi) (g1 + g2) at lambda >= 1."""
    return 4.0 * math.sin(check_alpha(alpha) * _PI) * (g1(n, alpha, lam) + g2(n, alpha, lam))


def lambda_n_exact(n: int, alpha: float) -> float:
    """Location of the slow-family error maximum on [1, inf).

    Solves, in u = ln(lambda) >= 0,

        (sqrt(u**2 + pi**2) - u) / (u**2 + pi**2) = 2 alpha / nbar,

    with nbar = 4 n + 2. The left side decreases from 1/pi at u = 0, so
    when 2 alpha / nbar >= 1/pi the maximum sits at the boundary and the
    function returns 1.0.
    """
    alpha = check_alpha(alpha)
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    nbar = 4.0 * n + 2.0
    target = 2.0 * alpha / nbar

    def shifted(u):
        r2 = u * u + _PI * _PI
        return (math.sqrt(r2) - u) / r2 - target

    if shifted(0.0) <= 0.0:  # 2 alpha / nbar >= 1/pi
        return 1.0
    hi = 200.0
    while shifted(hi) > 0.0:  # left side ~ pi**2 / (2 u**3); extend for tiny alpha*n
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError("root bracket exceeded")
    u = brentq(shifted, 0.0, hi, xtol=1e-13, rtol=4.0 * np.finfo(float).eps)
    return math.exp(u)


def lambda_n_tilde(n: int, alpha: float) -> float:
    """Closed-form stand-in exp(sqrt((nbar pi**2 / (4 alpha))**(2/3) - pi**2)).

    Raises ValueError("n too small") when the radicand is negative, which
    happens once nbar < 4 alpha pi. A radicand of exactly zero gives 1.0.
    """
    alpha = check_alpha(alpha)
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    nbar = 4.0 * n + 2.0
    radicand = (nbar * _PI * _PI / (4.0 * alpha)) ** (2.0 / 3.0) - _PI * _PI
    if radicand < 0.0:
        raise ValueError("n too small")
    return math.exp(math.sqrt(radicand))


def n_star(alpha: float) -> float:
    """Order above which the slow family dominates the operator estimate."""
    alpha = check_alpha(alpha)
    return 4.5 * alpha ** 4 / (1.0 - alpha) ** 3


@dataclass(frozen=True)
class ErrorEstimate:
    """Operator-norm a-priori estimate for the order-n full approximation.

    branch records which family supplied the maximum: "g1_at_lambda_n"
    (slow family, evaluated at its interior maximum) or "g2_at_one" (fast
    family, maximal at the spectrum edge). truncation_inflation is the
    factor budgeted for truncated variants built on the same order.
    """

    n: int
    alpha: float
    value: float
    branch: str
    n_star: float
    truncation_inflation: float = 2.0

    def __post_init__(self):
        if self.branch not in ("g1_at_lambda_n", "g2_at_one"):
            raise ValueError("unknown estimate branch")
        if not self.value > 0.0:
            raise ValueError("estimate must be positive")


def estimate_operator_error(n: int, alpha: float) -> ErrorEstimate:
    """A-priori bound on the operator-norm error of the order-n approximation.

    4 sin(alpha pi) * S(n, alpha), where S is the slow-family maximum
    g1(lambda_n) when alpha <= 1/2 or n > n_star(alpha), and the fast
    family edge value g2(1) otherwise.
    """
    alpha = check_alpha(alpha)
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    ns = n_star(alpha)
    if alpha <= 0.5 or n > ns:
        s = g1(n, alpha, lambda_n_exact(n, alpha))
        branch = "g1_at_lambda_n"
    else:
        s = g2(n, alpha, 1.0)
        branch = "g2_at_one"
    return ErrorEstimate(n, alpha, 4.0 * math.sin(alpha * _PI) * s, branch, ns)


def select_n(alpha: float, tol: float, n_cap: int = N_MAX) -> tuple[int, ErrorEstimate]:
    """Smallest order whose operator estimate does not exceed tol.

    Doubling then bisection, then a final walk-down. The walk-down
    guards the single upward step the estimate takes where its branch
    switches, so the returned n always satisfies estimate(n) <= tol and
    estimate(n - 1) > tol when n > 1.
    """
    alpha = check_alpha(alpha)
    tol = float(tol)
    if not tol > 0.0:
        raise ValueError("tolerance must be positive")
    n_cap = min(int(n_cap), N_MAX)

    def value(n):
        return estimate_operator_error(n, alpha).value

    if value(1) <= tol:
        n = 1
    else:
        lo, hi = 1, 2
        while value(hi) > tol:
            lo = hi
            hi *= 2
            if hi >= n_cap:
                if value(n_cap) > tol:
                    raise ToleranceUnreachableError("tolerance unreachable")
                hi = n_cap
                break
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if value(mid) <= tol:
                hi = mid
            else:
                lo = mid
        n = hi
    while n > 1 and value(n - 1) <= tol:
        n -= 1
    return n, estimate_operator_error(n, alpha)


@dataclass(frozen=True)
class TruncationPlan:
    """Orders and retained node counts for the two families.

    variant is "full", "balanced", or "equalized". Family i uses the
    order-n_i rule truncated to its first k_i nodes; one shifted solve
    per retained node gives predicted_inversions = k1 + k2.
    """

    variant: str
    n1: int
    n2: int
    k1: int
    k2: int
    predicted_inversions: int

    def __post_init__(self):
        if self.variant not in ("full", "balanced", "equalized"):
            raise ValueError("unknown truncation variant")
        if not (1 <= self.k1 <= self.n1 and 1 <= self.k2 <= self.n2):
            raise ValueError("retained counts must lie in [1, order]")
        if self.predicted_inversions != self.k1 + self.k2:
            raise ValueError("inversion count must equal k1 + k2")
        if self.variant == "full" and (self.k1 != self.n1 or self.k2 != self.n2):
            raise ValueError("full variant retains every node")


def _k1_cutoff(n: int, alpha: float) -> int:
    """Slow-family retained count floor(2 sqrt(3) (alpha n**2 / pi**2)**(1/3)), at least 1."""
    k = math.floor(2.0 * math.sqrt(3.0) * (alpha * n * n / (_PI * _PI)) ** (1.0 / 3.0))
    return max(1, min(int(k), n))


def _k2_cutoff(n: int, alpha: float) -> int:
    """Fast-family retained count 2 floor((1-alpha)**(1/4) (2n/pi)**(3/4)), at least 1."""
    k = 2 * math.floor((1.0 - alpha) ** 0.25 * (2.0 * n / _PI) ** 0.75)
    return max(1, min(int(k), n))


def plan_full(n: int) -> TruncationPlan:
    """Keep every node of both order-n rules."""
    n = int(n)
    if not 1 <= n <= N_MAX:
        raise ValueError("order out of range")
    return TruncationPlan("full", n, n, n, n, 2 * n)


def plan_balanced(n: int, alpha: float) -> TruncationPlan:
    """Truncate both order-n families at the common slow-family cutoff.

    Dropping nodes past the cutoff perturbs the result by no more than
    the full estimate itself, so accuracy matches the full variant at
    roughly a third of the solves.
    """
    alpha = check_alpha(alpha)
    n = int(n)
    if not 1 <= n <= N_MAX:
        raise ValueError("order out of range")
    k = _k1_cutoff(n, alpha)
    return TruncationPlan("balanced", n, n, k, k, 2 * k)


def plan_equalized(n: int, alpha: float) -> TruncationPlan:
    """Give each family its own order so their truncated errors match.

    The dominant family keeps the requested order n; the other family's
    order is shrunk (rounded up) to the point where its error estimate
    equals the dominant one, then each family truncates at its own
    cutoff. Branch choice mirrors estimate_operator_error.
    """
    alpha = check_alpha(alpha)
    n = int(n)
    if not 1 <= n <= N_MAX:
        raise ValueError("order out of range")
    if alpha <= 0.5 or n > n_star(alpha):
        n1 = n
        k1 = _k1_cutoff(n1, alpha)
        n2 = math.ceil(1.125 * _PI ** (1.0 / 3.0) * alpha ** (4.0 / 3.0) / (1.0 - alpha) * n1 ** (2.0 / 3.0))
        n2 = max(1, min(n2, N_MAX))
        k2 = _k2_cutoff(n2, alpha)
    else:
        n2 = n
        k2 = _k2_cutoff(n2, alpha)
        n1 = math.ceil((8.0 * (1.0 - alpha)) ** 1.5 / (27.0 * alpha * alpha * math.sqrt(_PI)) * n2 ** 1.5)
        n1 = max(1, min(n1, N_MAX))
        k1 = _k1_cutoff(n1, alpha)
    return TruncationPlan("equalized", n1, n2, k1, k2, k1 + k2)


def estimate_balanced_error(k: int, alpha: float, inflation: float = 1.0) -> float:
    """Truncated-variant bound 4 (1 + C) sin(alpha pi) exp(-3.6 sqrt(alpha) sqrt(2 k))."""
    alpha = check_alpha(alpha)
    return 4.0 * (1.0 + inflation) * math.sin(alpha * _PI) * math.exp(-3.6 * math.sqrt(alpha) * math.sqrt(2.0 * k))


def estimate_balanced_error_fast(k2: int, alpha: float, inflation: float = 1.0) -> float:
    """Fast-family analogue 4 (1 + C) sin(alpha pi) exp(-2.96 (1-alpha)**(1/3) (2 k2)**(2/3))."""
    alpha = check_alpha(alpha)
    return (
        4.0
        * (1.0 + inflation)
        * math.sin(alpha * _PI)
        * math.exp(-2.96 * (1.0 - alpha) ** (1.0 / 3.0) * (2.0 * k2) ** (2.0 / 3.0))
    )


@dataclass(frozen=True, eq=False)
class RationalForm:
    """Assembled partial-fraction form of the approximation.

    Family 1 contributes coeffs1[j] / (1 + shifts1[j] * lambda) and
    family 2 contributes coeffs2[j] / (shifts2[j] + lambda); nodes are
    kept in ascending order within each family and the families are
    always accumulated in that fixed order (family 1 first), which makes
    every evaluation bit-reproducible.
    """

    alpha: float
    variant: str
    n1: int
    n2: int
    k1: int
    k2: int
    coeffs1: np.ndarray
    shifts1: np.ndarray
    coeffs2: np.ndarray
    shifts2: np.ndarray

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.coeffs1.shape != (self.k1,) or self.shifts1.shape != (self.k1,):
            raise ValueError("family 1 arrays must have length k1")
        if self.coeffs2.shape != (self.k2,) or self.shifts2.shape != (self.k2,):
            raise ValueError("family 2 arrays must have length k2")
        # trailing weights underflow to exact zeros at large orders
        if not (np.all(self.coeffs1 >= 0.0) and np.all(self.coeffs2 >= 0.0)):
            raise ValueError("coefficients must be nonnegative")
        if self.coeffs1[0] <= 0.0 or self.coeffs2[0] <= 0.0:
            raise ValueError("leading coefficients must be positive")
        for shifts in (self.shifts1, self.shifts2):
            if not (np.all(shifts >= 0.0) and np.all(shifts < 1.0)):
                raise ValueError("shifts must lie in [0, 1)")

    @property
    def family1(self) -> list[tuple[float, float]]:
        return list(zip(self.coeffs1.tolist(), self.shifts1.tolist()))

    @property
    def family2(self) -> list[tuple[float, float]]:
        return list(zip(self.coeffs2.tolist(), self.shifts2.tolist()))

    @property
    def solves_required(self) -> int:
        return self.k1 + self.k2


def build_rational(alpha: float, plan: TruncationPlan) -> RationalForm:
    """Assemble coefficients and shifts for a truncation plan.

    Family 1 uses coefficient sin(alpha pi)/(alpha pi) * w_j and shift
    exp(-theta_j / alpha); family 2 uses sin(alpha pi)/((1-alpha) pi) * w_j
    and shift exp(-theta_j / (1 - alpha)). Very large theta_j / alpha
    underflows the shift to an exact zero, which is harmless: the term
    degenerates to its limiting constant.
    """
    alpha = check_alpha(alpha)
    rule1 = gauss_laguerre(plan.n1)
    rule2 = rule1 if plan.n2 == plan.n1 else gauss_laguerre(plan.n2)
    pref1 = math.sin(alpha * _PI) / (alpha * _PI)
    pref2 = math.sin(alpha * _PI) / ((1.0 - alpha) * _PI)
    th1 = rule1.nodes[: plan.k1]
    th2 = rule2.nodes[: plan.k2]
    return RationalForm(
        alpha=alpha,
        variant=plan.variant,
        n1=plan.n1,
        n2=plan.n2,
        k1=plan.k1,
        k2=plan.k2,
        coeffs1=pref1 * rule1.weights[: plan.k1],
        shifts1=np.exp(-th1 / alpha),
        coeffs2=pref2 * rule2.weights[: plan.k2],
        shifts2=np.exp(-th2 / (1.0 - alpha)),
    )


def eval_scalar(form: RationalForm, lam):
    """Evaluate the rational form at lambda >= 1 (scalar or array).

    Terms are accumulated in the fixed ascending-node order, family 1
    first, so repeated evaluations are bit-identical. All terms are
    positive, so the value is strictly positive.
    """
    arr, scalar = _as_lambda(lam)
    acc = np.zeros_like(arr)
    for c, d in zip(form.coeffs1, form.shifts1):
        acc = acc + c / (1.0 + d * arr)
    for c, s in zip(form.coeffs2, form.shifts2):
        acc = acc + c / (s + arr)
    return float(acc) if scalar else acc
