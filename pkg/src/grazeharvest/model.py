"""Model constants, the grazing/harvesting nonlinearity, and regime checks."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolation, NoSignChange

__all__ = [
    "ModelParams",
    "WellposednessReport",
    "reaction",
    "reaction_derivative",
    "grazing_margin",
    "compute_r0",
    "find_x0",
    "wellposedness",
]

BISECT_TOL = 1e-12
BISECT_MAXITER = 200


@dataclass(frozen=True)
class ModelParams:
    """Scalar constants of the harvested logistic/grazing model.

    ``lam`` is the reciprocal diffusion coefficient and multiplies the
    reaction term; it is never folded into `reaction`.
    """

    lam: float = 500.0
    K: float = 20.0
    c: float = 0.5
    q: float = 1.0
    H: float = 0.3
    B1: float = 1.0
    B2: float = 2.0

    def __post_init__(self):
        checks = [
            ("lambda", self.lam > 0, "must be > 0"),
            ("K", self.K > 0, "must be > 0"),
            ("c", self.c >= 0, "must be >= 0"),
            ("q", self.q > 0, "must be > 0"),
            ("H", 0 < self.H < 1, "must lie in (0, 1)"),
            ("B1", self.B1 >= 0, "must be >= 0"),
            ("B2", self.B2 >= 0, "must be >= 0"),
        ]
        for key, ok, msg in checks:
            if not (ok and np.isfinite(getattr(self, "lam" if key == "lambda" else key))):
                raise ConstraintViolation(f"{key} {msg}", key=key)

    @property
    def wellposed(self):
        """True when the grazing rate satisfies c < 2(1 - H)."""
        return self.c < 2.0 * (1.0 - self.H)

    def replace(self, **changes):
        values = {k: getattr(self, k) for k in ("lam", "K", "c", "q", "H", "B1", "B2")}
        values.update(changes)
        return ModelParams(**values)


def reaction(s, h_val, params):
    """f_h(s) = s - s^2/K - c s^2/(1+s^2) - h s, elementwise."""
    s = np.asarray(s, dtype=float)
    s2 = s * s
    out = s - s2 / params.K - params.c * s2 / (1.0 + s2) - h_val * s
    return out if out.ndim else float(out)


def reaction_derivative(s, h_val, params):
    """d/ds of `reaction`: 1 - 2s/K - 2cs/(1+s^2)^2 - h."""
    s = np.asarray(s, dtype=float)
    out = 1.0 - 2.0 * s / params.K - 2.0 * params.c * s / (1.0 + s * s) ** 2 - h_val
    return out if out.ndim else float(out)


def grazing_margin(x, c):
    """g(x) = 1/x + c(1 - x^2)/(1 + x^2)^2.

    Positive g(K) keeps the two-state potential V2 strictly above V1.
    """
    x = np.asarray(x, dtype=float)
    x2 = x * x
    out = 1.0 / x + c * (1.0 - x2) / (1.0 + x2) ** 2
    return out if out.ndim else float(out)


def _bisect(fun, lo, hi, tol=BISECT_TOL, maxiter=BISECT_MAXITER):
    flo, fhi = fun(lo), fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChange(f"no sign change on [{lo:g}, {hi:g}]")
    mid = 0.5 * (lo + hi)
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fmid = fun(mid)
        if abs(fmid) <= tol or mid in (lo, hi):
            break
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return mid


def compute_r0(alpha, params):
    """Positive zero of f_alpha, bracketed in (K(1-alpha)/2, K)."""
    lo = params.K * (1.0 - alpha) / 2.0
    hi = params.K
    r0 = _bisect(lambda s: reaction(s, alpha, params), lo, hi)
    # r0 = K only in the ungrazed, unharvested case
    assert lo < r0 <= hi, (lo, r0, hi)
    return r0


def find_x0(c, upper, npts=20000):
    """Smallest x0 >= 0 with g > 0 on (x0, upper].

    Scans g on a log grid over (1e-6, upper] and bisects the last sign
    change; returns 0 when g is positive on the whole scan.
    """
    x = np.logspace(-6, np.log10(upper), npts)
    g = grazing_margin(x, c)
    bad = np.nonzero(g <= 0)[0]
    if bad.size == 0:
        return 0.0
    i = bad[-1]
    if i == npts - 1:
        return float(upper)
    return _bisect(lambda t: grazing_margin(t, c), x[i], x[i + 1])


@dataclass
class WellposednessReport:
    c_bound_ok: bool
    x0: float
    K_bar: float
    K_ok: bool
    lambda_threshold: float
    lambda_ok: bool
    r0_values: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.c_bound_ok and self.K_ok and self.lambda_ok

    def lines(self):
        out = [
            f"c_bound_ok = {self.c_bound_ok}",
            f"x0 = {self.x0!r}",
            f"K_bar = {self.K_bar!r}",
            f"K_ok = {self.K_ok}",
            f"lambda_threshold = {self.lambda_threshold!r}",
            f"lambda_ok = {self.lambda_ok}",
        ]
        for alpha, r0 in sorted(self.r0_values.items()):
            out.append(f"r0[{alpha!r}] = {r0!r}")
        return out


def wellposedness(params, lambda1):
    """Collect the regime checks for `params`.

    ``lambda1`` is the principal eigenvalue of the Robin Laplacian on the
    domain in use. Nothing here raises; failed checks show up as flags and
    as missing entries in ``r0_values``.
    """
    one_minus_H = 1.0 - params.H
    x0 = find_x0(params.c, 10.0 * params.K)
    K_bar = max(x0, 8.0 / one_minus_H)
    threshold = lambda1 / one_minus_H
    r0_values = {}
    for alpha in (0.0, params.H):
        if params.c < 2.0 * (1.0 - alpha):
            try:
                r0_values[alpha] = compute_r0(alpha, params)
            except NoSignChange:
                pass
    return WellposednessReport(
        c_bound_ok=params.wellposed,
        x0=x0,
        K_bar=K_bar,
        K_ok=params.K > K_bar,
        lambda_threshold=threshold,
        lambda_ok=params.lam > threshold,
        r0_values=r0_values,
    )
