"""Weighted log-log regression used by the exponent estimators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientLadder


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    slope_stderr: float
    r2: float
    n: int
    chi2_dof: float

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "r2": self.r2,
            "n": self.n,
            "chi2_dof": self.chi2_dof,
        }


def loglog_fit(x, y, sigma=None, min_points: int = 3) -> FitResult:
    """Fit log y = intercept + slope * log x.

    ``sigma`` holds per-point standard errors of y; weights follow by the
    delta method.  The slope stderr is inflated by sqrt(chi2/dof) when the
    scatter exceeds the declared errors (and for sigma=None this reduces to
    the ordinary residual-based stderr).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    good = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
    if sigma is not None:
        sigma = np.asarray(sigma, dtype=float)
        good &= np.isfinite(sigma)
    if np.count_nonzero(good) < min_points:
        raise InsufficientLadder(
            f"log-log fit needs >= {min_points} usable points, "
            f"got {np.count_nonzero(good)}")
    x, y = x[good], y[good]
    lx, ly = np.log(x), np.log(y)
    if sigma is None:
        w = np.ones_like(lx)
    else:
        rel = np.maximum(sigma[good] / y, 1e-15)
        w = 1.0 / rel ** 2
    sw = np.sum(w)
    swx = np.sum(w * lx)
    swxx = np.sum(w * lx * lx)
    det = sw * swxx - swx * swx
    if det <= 0:
        raise InsufficientLadder("degenerate abscissae in log-log fit")
    swy = np.sum(w * ly)
    swxy = np.sum(w * lx * ly)
    slope = (sw * swxy - swx * swy) / det
    intercept = (swxx * swy - swx * swxy) / det
    resid = ly - (intercept + slope * lx)
    dof = max(lx.size - 2, 1)
    chi2_dof = float(np.sum(w * resid ** 2) / dof)
    stderr = float(np.sqrt(sw / det) * max(np.sqrt(chi2_dof), 1.0))
    if sigma is None:
        stderr = float(np.sqrt(sw / det * chi2_dof))
    ss_tot = float(np.sum((ly - np.mean(ly)) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return FitResult(slope=float(slope), intercept=float(intercept),
                     slope_stderr=max(stderr, 1e-12), r2=r2, n=int(lx.size),
                     chi2_dof=chi2_dof)
