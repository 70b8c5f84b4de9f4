"""Semantic accuracy curve: 4-parameter model, monotone envelope, inversion, fitting.

The raw curve is eps(xi) = theta1*exp(theta2*(1-xi)) + theta3*exp(-theta4*(1-xi)),
with the shipped default tuple substituted verbatim (theta1 and theta4 are
negative in the default). The raw curve rises from ~0.124 at xi=0 to a peak
~0.963 near xi=0.33 and then decreases slightly; optimizers must see a
nondecreasing accuracy, so the exposed model is the running maximum of the raw
curve over a fixed grid, clamped to [0, 1].
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import AccuracyUnreachable, FitDiverged, InsufficientSamples

# Tuple used for all shipped scenarios (image-task semantic transceiver).
DEFAULT_THETA = (-6.205e-8, 16.45, 0.9228, -0.06917)

DEFAULT_GRID_STEP = 1e-4

_XI_TH_TOL = 1e-6
_EXP_CLIP = 700.0  # keeps exp() finite for wild theta during fitting


def raw_accuracy(xi, theta):
    """Unclamped accuracy curve value(s) at xi for a parameter 4-tuple."""
    t1, t2, t3, t4 = theta
    u = 1.0 - np.asarray(xi, dtype=float)
    out = t1 * np.exp(np.clip(t2 * u, -_EXP_CLIP, _EXP_CLIP)) \
        + t3 * np.exp(np.clip(-t4 * u, -_EXP_CLIP, _EXP_CLIP))
    return float(out) if out.ndim == 0 else out


class AccuracyModel:
    """Nondecreasing, clamped accuracy envelope tabulated on a uniform xi grid.

    Immutable after construction; all methods are pure and safe to share
    across threads and processes.
    """

    def __init__(self, theta=DEFAULT_THETA, grid_step=DEFAULT_GRID_STEP):
        if not 0.0 < grid_step < 1.0:
            raise ValueError(f"grid_step must be in (0,1), got {grid_step}")
        self.theta = tuple(float(t) for t in theta)
        self.grid_step = float(grid_step)
        n = int(round(1.0 / grid_step))
        self._n = n
        self._xs = np.linspace(0.0, 1.0, n + 1)
        env = np.maximum.accumulate(raw_accuracy(self._xs, self.theta))
        self._env = np.clip(env, 0.0, 1.0)
        self._env_list = self._env.tolist()  # fast scalar lookups in hot loops

    @classmethod
    def default(cls, grid_step=DEFAULT_GRID_STEP):
        return cls(DEFAULT_THETA, grid_step)

    @property
    def envelope(self):
        """(grid, values) of the tabulated envelope."""
        return self._xs, self._env

    @property
    def envelope_max(self):
        return self._env_list[-1]

    def accuracy(self, xi):
        """Envelope value at xi (scalar or array), linear between grid nodes."""
        if isinstance(xi, np.ndarray):
            return np.interp(xi, self._xs, self._env)
        pos = float(xi) * self._n
        i = int(pos)
        if i >= self._n:
            return self._env_list[self._n]
        if i < 0:
            return self._env_list[0]
        lo = self._env_list[i]
        return lo + (self._env_list[i + 1] - lo) * (pos - i)

    def min_extraction_ratio(self, eps_min):
        """Smallest xi whose envelope accuracy reaches eps_min.

        Bisects the nondecreasing envelope; the returned value always
        satisfies accuracy(xi) >= eps_min. Raises AccuracyUnreachable when
        even xi = 1 falls short.
        """
        if not 0.0 <= eps_min <= 1.0:
            raise ValueError(f"eps_min must be in [0,1], got {eps_min}")
        if self.accuracy(0.0) >= eps_min:
            return 0.0
        if self.envelope_max < eps_min:
            raise AccuracyUnreachable(
                f"accuracy requirement {eps_min} above envelope max {self.envelope_max}")
        lo, hi = 0.0, 1.0
        while hi - lo > _XI_TH_TOL:
            mid = 0.5 * (lo + hi)
            if self.accuracy(mid) >= eps_min:
                hi = mid
            else:
                lo = mid
        return hi


@dataclass(frozen=True)
class FitResult:
    theta: tuple
    mse: float


def _fit_starts(ys):
    level = float(np.mean(ys))
    return [
        DEFAULT_THETA,
        (0.0, 1.0, level, 0.0),
        (-(1.0 - level) * 1e-6, 14.0, max(ys.max(), 1e-3), -0.05),
        (-1e-7, 18.0, 0.9, -0.1),
        (0.1, 1.0, 0.5, 1.0),
    ]


def fit_accuracy_model(samples, grid_step=DEFAULT_GRID_STEP):
    """Fit the 4-parameter curve to (xi, eps) samples by damped least squares.

    Runs Levenberg-Marquardt from several starts and keeps the parameter
    tuple with the lowest mean squared residual. Needs at least 4 samples
    (one per parameter).
    """
    pts = [(float(x), float(e)) for x, e in samples]
    if len(pts) < 4:
        raise InsufficientSamples(f"need >= 4 samples, got {len(pts)}")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if np.any((xs < 0) | (xs > 1)) or np.any((ys < 0) | (ys > 1)):
        raise ValueError("samples must satisfy xi in [0,1] and eps in [0,1]")

    def resid(theta):
        return raw_accuracy(xs, theta) - ys

    best = None
    for x0 in _fit_starts(ys):
        try:
            sol = least_squares(resid, x0, method="lm", max_nfev=2000)
        except Exception:
            continue
        if not np.all(np.isfinite(sol.x)):
            continue
        mse = float(np.mean(resid(sol.x) ** 2))
        if np.isfinite(mse) and (best is None or mse < best.mse):
            best = FitResult(theta=tuple(float(t) for t in sol.x), mse=mse)
    if best is None:
        raise FitDiverged("no least-squares start converged")
    return best
