"""Unimodular level sets on the bitorus: exceptional lines and branch graphs.

The level set of a symbol f at a unimodular value alpha is the closure of
{zeta in T^2 : f*(zeta) = alpha}.  For a rational inner function reflect(p)/p
this is cut out by q_alpha = reflect(p) - alpha p; for a polynomial smooth
symbol psi by psi - alpha.  Full vertical/horizontal lines are detected
first and divided out of q_alpha, and what remains is traced as graphs over
the first (resp. second) circle.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import poly as P
from .errors import InvalidInput, RefineResolution
from .rif import RationalInnerFunction, SmoothSymbol, Symbol

ROOT_BAND = 1e-6          # ||root| - 1| retention band for torus roots
RESIDUAL_REL_TOL = 1e-8   # defining-equation residual, relative to coeff scale
LINE_VALUE_TOL = 1e-10    # 1 - |f(tau, 0)|^2 at an exceptional tau


@dataclass(frozen=True)
class LineFeature:
    """A full line {z1 = tau} (vertical) or {z2 = tau} (horizontal) in a level set.

    ``everywhere`` marks slice-constant symbols (e.g. psi = z1) whose every
    slice is a unimodular constant; tau/alpha are then meaningless.
    """

    orientation: str          # 'v' or 'h'
    tau: complex | None
    alpha: complex | None
    everywhere: bool = False

    def to_dict(self) -> dict:
        return {
            "orientation": self.orientation,
            "tau": None if self.tau is None else [self.tau.real, self.tau.imag],
            "alpha": None if self.alpha is None else [self.alpha.real, self.alpha.imag],
            "everywhere": self.everywhere,
        }


@dataclass
class Branch:
    """One graph (theta, g(theta)) of a level set, sampled on the trace grid."""

    alpha: complex
    thetas: np.ndarray
    values: np.ndarray
    continuity_gap: float = 0.0
    cut_gap: float = 0.0            # jump across the excluded anchor tau0
    ambiguous_at: list[float] = field(default_factory=list)
    interpolated_at: list[float] = field(default_factory=list)
    max_residual: float = 0.0

    def __len__(self) -> int:
        return int(self.thetas.size)

    def value_at(self, theta: float) -> complex:
        """Linear interpolation in angle, renormalized to the circle.

        Interpolates across the trace anchor when the branch is continuous
        there; otherwise clamps to the nearer endpoint.
        """
        th = np.mod(theta - self.thetas[0], 2.0 * np.pi) + self.thetas[0]
        idx = np.searchsorted(self.thetas, th)
        if idx == 0 or idx >= self.thetas.size:
            if self.cut_gap > 3.0 * self.continuity_gap + 1e-9:
                g = self.values[0] if idx == 0 else self.values[-1]
                return complex(g)
            span = 2.0 * np.pi - (self.thetas[-1] - self.thetas[0])
            off = th - self.thetas[-1] if idx >= self.thetas.size \
                else th + 2.0 * np.pi - self.thetas[-1]
            w = off / span
            g = (1.0 - w) * self.values[-1] + w * self.values[0]
        else:
            t0, t1 = self.thetas[idx - 1], self.thetas[idx]
            w = (th - t0) / (t1 - t0)
            g = (1.0 - w) * self.values[idx - 1] + w * self.values[idx]
        mod = abs(g)
        return complex(g / mod) if mod > 0 else complex(g)


@dataclass
class LevelSet:
    alpha: complex
    branches: list[Branch]
    vertical_lines: list[complex]
    horizontal_lines: list[complex]
    resolution: int
    tau0: complex
    base_alpha: complex
    q_scale: float

    def to_csv(self) -> str:
        """Branch export: branch_id, theta, re_g, im_g; lines as VLINE:/HLINE: rows."""
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["branch_id", "theta", "re_g", "im_g"])
        for tau in self.vertical_lines:
            writer.writerow([f"VLINE:{tau.real:.12g}{tau.imag:+.12g}j", "", "", ""])
        for tau in self.horizontal_lines:
            writer.writerow([f"HLINE:{tau.real:.12g}{tau.imag:+.12g}j", "", "", ""])
        for bid, branch in enumerate(self.branches):
            for th, g in zip(branch.thetas, branch.values):
                writer.writerow([bid, f"{th:.15g}", f"{g.real:.15g}", f"{g.imag:.15g}"])
        return buf.getvalue()


def _base_and_rotation(symbol) -> tuple[RationalInnerFunction | SmoothSymbol, complex]:
    if isinstance(symbol, Symbol):
        return symbol.base, complex(symbol.prefactor)
    if isinstance(symbol, (RationalInnerFunction, SmoothSymbol)):
        return symbol, 1.0 + 0.0j
    raise InvalidInput(f"not a symbol: {symbol!r}")


def _slice_value(base, tau: complex, orientation: str) -> complex:
    """f(tau, 0) for vertical scans, f(0, tau) for horizontal."""
    z = (tau, 0.0) if orientation == "v" else (0.0, tau)
    if isinstance(base, RationalInnerFunction):
        den = complex(base.den(*z))
        if abs(den) < 1e-12 * max(base.den.scale, 1.0):
            return complex(np.nan, np.nan)
        return complex(base.num(*z)) / den
    return complex(base.psi(*z))


def detect_lines(symbol, scan: int = 4096) -> list[LineFeature]:
    """Find all full lines carried by level sets of the symbol.

    A vertical line {z1 = tau} lies in a level set iff the disc self-map
    z2 -> f(tau, z2) is a unimodular constant, which by the maximum principle
    happens iff |f(tau, 0)| = 1.  Zeros of h(theta) = 1 - |f(e^{i theta}, 0)|^2
    are located on a scan grid and refined by brentq on h' (h has only
    double zeros, so refining h itself would stall at ~1e-8).
    """
    base, rot = _base_and_rotation(symbol)
    out: list[LineFeature] = []
    for orientation in ("v", "h"):
        thetas = 2.0 * np.pi * np.arange(scan) / scan
        w = np.array([_slice_value(base, complex(np.exp(1j * t)), orientation)
                      for t in thetas])
        h = 1.0 - np.abs(w) ** 2
        finite = np.isfinite(h)
        if not np.any(finite):
            continue
        if np.nanmax(np.abs(h[finite])) < 1e-12:
            out.append(LineFeature(orientation, None, None, everywhere=True))
            continue

        def hval(t, _o=orientation):
            v = _slice_value(base, complex(np.exp(1j * t)), _o)
            return 1.0 - abs(v) ** 2

        def hprime(t, _o=orientation, eps=1e-7):
            return (hval(t + eps, _o) - hval(t - eps, _o)) / (2.0 * eps)

        mins = [k for k in range(scan)
                if finite[k] and h[k] < 1e-4
                and h[k] <= h[(k - 1) % scan] and h[k] <= h[(k + 1) % scan]]
        taus: list[float] = []
        for k in mins:
            lo, hi = thetas[k] - 2 * np.pi / scan, thetas[k] + 2 * np.pi / scan
            try:
                dlo, dhi = hprime(lo), hprime(hi)
                if dlo == 0.0:
                    t_star = lo
                elif dhi == 0.0:
                    t_star = hi
                elif np.sign(dlo) == np.sign(dhi):
                    t_star = thetas[k]
                else:
                    t_star = optimize.brentq(hprime, lo, hi, xtol=1e-14)
            except ValueError:
                t_star = thetas[k]
            if hval(t_star) <= LINE_VALUE_TOL:
                taus.append(t_star % (2.0 * np.pi))
        taus.sort()
        dedup: list[float] = []
        for t in taus:
            if all(abs(np.angle(np.exp(1j * (t - q)))) > 1e-8 for q in dedup):
                dedup.append(t)
        for t in dedup:
            tau = complex(np.exp(1j * t))
            alpha = rot * _slice_value(base, tau, orientation)
            out.append(LineFeature(orientation, tau, complex(alpha)))
    return out


def _greedy_match(prev: np.ndarray, new: np.ndarray, tie_tol: float = 1e-10):
    """Assign new roots to tracks by nearest previous value.

    Returns (assignment, ambiguous): assignment[i] = index into new for track
    i, or -1 when unfilled.  Ambiguity is flagged when a root has two
    candidate continuations within tie_tol of each other.
    """
    n_tracks, n_new = prev.size, new.size
    assignment = np.full(n_tracks, -1, dtype=int)
    used = np.zeros(n_new, dtype=bool)
    ambiguous = False
    dist = np.abs(prev[:, None] - new[None, :])
    order = np.dstack(np.unravel_index(np.argsort(dist, axis=None), dist.shape))[0]
    for i, j in order:
        if assignment[i] != -1 or used[j]:
            continue
        others = dist[i, ~used]
        if others.size > 1:
            second = np.partition(others, 1)[1]
            if abs(second - dist[i, j]) < tie_tol:
                ambiguous = True
        assignment[i] = j
        used[j] = True
    return assignment, ambiguous


def trace_level_set(symbol, alpha: complex, resolution: int = 4096,
                    tau0: complex = -1.0 + 0.0j) -> LevelSet:
    """Trace the level set of the symbol at unimodular value alpha.

    Lines are detected and divided out of the level polynomial before the
    z2-roots are tracked over the theta grid, which is anchored at the
    excluded point tau0 (samples straddle it, none lands on it).  Branch
    labels are not guaranteed stable across different tau0.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise InvalidInput("level-set value must be unimodular")
    if resolution < 64:
        raise InvalidInput("resolution must be >= 64")
    base, rot = _base_and_rotation(symbol)
    base_alpha = np.conj(rot) * alpha

    if isinstance(base, RationalInnerFunction):
        q = base.num - base_alpha * base.den
    else:
        q = base.psi - P.BivariatePolynomial([[base_alpha]])
    if q.scale == 0:  # constant symbol at its own value: empty trace
        return LevelSet(alpha, [], [], [], resolution, complex(tau0),
                        complex(base_alpha), 0.0)
    q_scale = q.scale

    vlines: list[complex] = []
    hlines: list[complex] = []
    for feat in detect_lines(symbol):
        if feat.everywhere:
            # Every slice is constant: the level set is exactly one line.
            ori = feat.orientation
            qq = q if ori == "v" else q.transpose()
            sl = P.slice_z2(qq, 0.0)
            if sl.degree >= 1:
                for root in P.roots(sl):
                    if abs(abs(root) - 1.0) <= ROOT_BAND:
                        tau = complex(root / abs(root))
                        (vlines if ori == "v" else hlines).append(tau)
                        q = P.deflate_z1(q, tau) if ori == "v" else P.deflate_z2(q, tau)
            continue
        if feat.alpha is None or abs(feat.alpha - alpha) > 1e-8:
            continue
        if feat.orientation == "v" and P.divides_linear(q, feat.tau):
            vlines.append(feat.tau)
            q = P.deflate_z1(q, feat.tau)
        elif feat.orientation == "h" and P.divides_linear(q.transpose(), feat.tau):
            hlines.append(feat.tau)
            q = P.deflate_z2(q, feat.tau)

    n_deg, m_deg = q.bidegree
    anchor = float(np.angle(complex(tau0)))
    thetas = anchor + 2.0 * np.pi * (np.arange(resolution) + 0.5) / resolution
    branches: list[Branch] = []
    if m_deg >= 1:
        z1s = np.exp(1j * thetas)
        powers = z1s[:, None] ** np.arange(n_deg + 1)[None, :]
        rows = powers @ np.asarray(q.coeffs)
        all_roots = P.batched_roots(rows)
        retained = []
        for rts in all_roots:
            if rts.size:
                keep = np.abs(np.abs(rts) - 1.0) <= ROOT_BAND
                retained.append(rts[keep])
            else:
                retained.append(rts)
        n_tracks = max((r.size for r in retained), default=0)
        if n_tracks > 0:
            tracks = np.full((n_tracks, resolution), np.nan + 1j * np.nan)
            ambig_marks: list[list[float]] = [[] for _ in range(n_tracks)]
            last = None
            for k in range(resolution):
                rts = retained[k]
                if last is None:
                    if rts.size == n_tracks:
                        tracks[:, k] = rts
                        last = rts.copy()
                    elif rts.size:
                        tracks[:rts.size, k] = rts
                        last = tracks[:, k].copy()
                    continue
                ref = np.where(np.isnan(last), np.inf, last)
                assignment, amb = _greedy_match(ref, rts)
                for i, j in enumerate(assignment):
                    if j >= 0:
                        tracks[i, k] = rts[j]
                        last[i] = rts[j]
                        if amb:
                            ambig_marks[i].append(float(thetas[k]))
                # Unassigned new roots take over empty tracks.
                used = set(int(j) for j in assignment if j >= 0)
                spare = [j for j in range(rts.size) if j not in used]
                for i in range(n_tracks):
                    if np.isnan(tracks[i, k]) and spare and not np.isfinite(ref[i]):
                        j = spare.pop(0)
                        tracks[i, k] = rts[j]
                        last[i] = rts[j]

            qc = np.asarray(q.coeffs)
            for i in range(n_tracks):
                g = tracks[i, :].copy()
                missing = ~np.isfinite(g)
                interp_marks: list[float] = []
                if np.mean(missing) > 0.25:
                    # Not a graph over the circle (typical for smooth symbols,
                    # whose torus level sets are isolated points).
                    continue
                if np.any(missing):
                    idx = np.nonzero(~missing)[0]
                    re = np.interp(np.arange(resolution), idx, g[idx].real)
                    im = np.interp(np.arange(resolution), idx, g[idx].imag)
                    fill = re + 1j * im
                    mod = np.abs(fill)
                    fill = np.where(mod > 0, fill / np.where(mod > 0, mod, 1.0), fill)
                    interp_marks = [float(thetas[k]) for k in np.nonzero(missing)[0]]
                    g[missing] = fill[missing]
                resid = np.abs(P.eval_poly2(qc, np.exp(1j * thetas), g))
                gaps = np.abs(np.diff(g))
                branches.append(Branch(
                    alpha=alpha, thetas=thetas, values=g,
                    continuity_gap=float(np.max(gaps)) if gaps.size else 0.0,
                    cut_gap=float(np.abs(g[0] - g[-1])),
                    ambiguous_at=ambig_marks[i],
                    interpolated_at=interp_marks,
                    max_residual=float(np.max(resid)),
                ))
            branches.sort(key=lambda b: (b.values[0].real, b.values[0].imag))

    return LevelSet(alpha=alpha, branches=branches, vertical_lines=sorted(
        vlines, key=lambda t: np.angle(t)), horizontal_lines=sorted(
        hlines, key=lambda t: np.angle(t)), resolution=resolution,
        tau0=complex(tau0), base_alpha=complex(base_alpha), q_scale=q_scale)


def branch_angle_fn(branch: Branch):
    """Vectorized theta -> arg g(theta) interpolator for a traced branch.

    The angle is unwrapped along the branch, so graphs like g = e^{-i theta}
    interpolate smoothly; the cut at the trace anchor is clamped.
    """
    th = branch.thetas
    ang = np.unwrap(np.angle(branch.values))

    def fn(t):
        tt = np.mod(np.asarray(t, dtype=float) - th[0], 2.0 * np.pi) + th[0]
        return np.interp(tt, th, ang)

    return fn


def branch_tangent(branch: Branch, theta0: float) -> tuple[float, float]:
    """Slope d(arg g)/d theta at theta0 by Richardson-refined central differences.

    Returns (slope, error_estimate); raises RefineResolution when the sample
    spacing cannot support an estimate better than 1e-3.
    """
    th = branch.thetas
    if th.size < 5:
        raise RefineResolution("branch too short for tangent estimation",
                               required_resolution=64)
    rel = np.mod(theta0 - th[0], 2.0 * np.pi) + th[0]
    k = int(np.argmin(np.abs(th - rel)))
    k = min(max(k, 2), th.size - 3)
    local = np.unwrap(np.angle(branch.values[k - 2:k + 3]))
    h = float(th[1] - th[0])
    d1 = (local[3] - local[1]) / (2.0 * h)
    d2 = (local[4] - local[0]) / (4.0 * h)
    slope = d1 + (d1 - d2) / 3.0
    err = abs(d1 - d2) / 3.0
    if err > 1e-3:
        needed = int(branch.thetas.size * np.sqrt(err / 1e-3)) + 1
        raise RefineResolution(
            f"tangent error estimate {err:.2e} too large", required_resolution=needed)
    return float(slope), float(err)
