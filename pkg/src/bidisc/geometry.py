"""Quantitative singularity geometry: contact orders, derivative growth,
intersection classification, and boundary transversality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import poly as P
from .errors import (InsufficientLadder, InvalidInput, NoBranch,
                     NotBoundaryContact)
from .fitting import FitResult, loglog_fit
from .levelset import Branch, LevelSet, branch_tangent
from .rif import RationalInnerFunction, Singularity, SmoothSymbol, Symbol

# Fitted epsilon values below this are floating-point noise, not geometry.
EPS_FLOOR = 1e-13
# Slope-difference band separating transversal from tangential crossings.
TRANSVERSAL_SLOPE_TOL = 0.05
COMMON_CURVE_DIST = 1e-7
COMMON_CURVE_ARC = 0.1
ISOLATED_MIN_DIST = 1e-6
AT_SINGULARITY_TOL = 1e-4


@dataclass(frozen=True)
class ContactOrderEstimate:
    """Fitted exponent K in eps(zeta) ~ |omega - zeta|^K near a singularity."""

    K: float
    stderr: float
    K_rounded_even: int
    variable: str
    singularity: tuple[complex, complex]
    ladder: list[tuple[float, float]]
    r2: float
    low_confidence: bool

    def to_dict(self) -> dict:
        w1, w2 = self.singularity
        return {
            "K": self.K,
            "stderr": self.stderr,
            "K_rounded_even": self.K_rounded_even,
            "variable": self.variable,
            "singularity": [[w1.real, w1.imag], [w2.real, w2.imag]],
            "ladder": [[d, e] for d, e in self.ladder],
            "r2": self.r2,
            "low_confidence": self.low_confidence,
        }


def _ladder_s(decades: tuple[float, float] = (1e-1, 1e-4), rungs: int = 12) -> np.ndarray:
    return np.geomspace(decades[0], decades[1], rungs)


def contact_order(phi: RationalInnerFunction, omega, variable: str = "z1",
                  rungs: int = 12) -> ContactOrderEstimate:
    """Exponent law of the slice zeros approaching the circle.

    For the z1-contact order, the zeros a_j(zeta2) of the numerator slice in
    z1 are tracked for zeta2 on a geometric ladder toward omega2, and
    eps = min_j (1 - |a_j|) is regressed against |omega2 - zeta2|.  Rungs
    with no interior zero or with eps at the floating-point floor are
    dropped; fewer than 6 usable rungs raise InsufficientLadder.  The law's
    exponent is an even integer, so the rounded value is reported alongside
    the raw fit.
    """
    if isinstance(omega, Singularity):
        omega = omega.location
    w1, w2 = complex(omega[0]), complex(omega[1])
    if variable == "z1":
        num = phi.num
        approach_center = w2
    elif variable == "z2":
        num = phi.num.transpose()
        approach_center = w1
    else:
        raise InvalidInput("variable must be 'z1' or 'z2'")

    svals = _ladder_s(rungs=rungs)
    ladder: list[tuple[float, float]] = []
    for s in svals:
        for sign in (+1.0, -1.0):
            zeta = approach_center * np.exp(1j * sign * s)
            sl = P.slice_z2(num, zeta)
            if sl.degree < 1:
                continue
            mods = np.abs(P.roots(sl))
            interior = mods[mods < 1.0]
            if interior.size == 0:
                continue
            eps = float(1.0 - np.max(interior))
            dist = float(abs(approach_center - zeta))
            if eps > EPS_FLOOR:
                ladder.append((dist, eps))
    if len(ladder) < 6:
        raise InsufficientLadder(
            f"only {len(ladder)} usable contact rungs", diagnostics=ladder)
    dists = np.array([d for d, _ in ladder])
    epss = np.array([e for _, e in ladder])
    fit = loglog_fit(dists, epss)
    k_even = int(2 * round(fit.slope / 2.0))
    return ContactOrderEstimate(
        K=fit.slope, stderr=fit.slope_stderr, K_rounded_even=max(k_even, 2),
        variable=variable, singularity=(w1, w2),
        ladder=sorted(ladder), r2=fit.r2,
        low_confidence=bool(fit.r2 < 0.99 or fit.slope <= 0))


def partial_growth(phi: RationalInnerFunction, branch: Branch, omega,
                   rungs: int = 10) -> FitResult:
    """Growth law of 1/|d phi/d z2| along a level branch into a singularity.

    Cross-validates the contact order: the fitted exponent should match K.
    Branch points are re-solved from the level polynomial at a geometric
    ladder of angles instead of relying on the trace grid.
    """
    if isinstance(omega, Singularity):
        omega = omega.location
    w1, w2 = complex(omega[0]), complex(omega[1])
    if branch is None or len(branch) == 0:
        raise NoBranch("no level-set branch available")
    theta_w = float(np.angle(w1))
    near = branch.value_at(theta_w + 1e-3)
    if abs(near - w2) > 0.2:
        raise NoBranch("branch does not pass through the singularity")
    alpha = complex(branch.alpha)
    q = phi.num - alpha * phi.den
    ladder: list[tuple[float, float]] = []
    guide = None
    for s in np.geomspace(1e-1, 1e-3, rungs):
        for sign in (+1.0, -1.0):
            z1 = w1 * np.exp(1j * sign * s)
            sl = P.slice_z1(q, z1)
            if sl.degree < 1:
                continue
            rts = P.roots(sl)
            target = branch.value_at(theta_w + sign * s) if guide is None else guide
            g = rts[np.argmin(np.abs(rts - target))]
            if abs(abs(g) - 1.0) > 1e-6:
                continue
            _, d2 = phi.partials(np.asarray(z1), np.asarray(g))
            mag = abs(complex(d2))
            if mag <= 0:
                continue
            ladder.append((float(abs(z1 - w1)), 1.0 / mag))
    if len(ladder) < 6:
        raise InsufficientLadder(
            f"only {len(ladder)} usable growth rungs", diagnostics=ladder)
    return loglog_fit([d for d, _ in ladder], [v for _, v in ladder])


# ---------------------------------------------------------------------------
# Interaction of two level sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularContext:
    """A common singularity with the two symbols' contact orders attached."""

    location: tuple[complex, complex]
    K1: ContactOrderEstimate | None = None
    K2: ContactOrderEstimate | None = None


@dataclass
class IntersectionPoint:
    location: tuple[complex, complex]
    kind: str                       # transversal | tangential | common-component
    M: float | None = None
    M_stderr: float | None = None
    M_r2: float | None = None
    order_unresolved: bool = False
    angle: float | None = None
    at_singularity: bool = False
    K_pair: tuple[float, float] | None = None
    slopes: tuple[float, float] | None = None
    witness: list[tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        z1, z2 = self.location
        return {
            "location": [[z1.real, z1.imag], [z2.real, z2.imag]],
            "kind": self.kind,
            "M": self.M,
            "M_stderr": self.M_stderr,
            "M_r2": self.M_r2,
            "order_unresolved": self.order_unresolved,
            "angle": self.angle,
            "at_singularity": self.at_singularity,
            "K_pair": list(self.K_pair) if self.K_pair else None,
            "slopes": list(self.slopes) if self.slopes else None,
            "witness": [[a, b] for a, b in self.witness],
        }


@dataclass
class InteractionReport:
    symbols: tuple[str, str]
    alphas: tuple[complex, complex]
    common_vertical_lines: list[complex]
    common_horizontal_lines: list[complex]
    common_curve: bool
    curve_witness: list[tuple[float, complex]]
    curve_resultants: list[float]
    intersections: list[IntersectionPoint]

    def to_dict(self) -> dict:
        return {
            "symbols": list(self.symbols),
            "alphas": [[a.real, a.imag] for a in self.alphas],
            "common_vertical_lines": [[t.real, t.imag]
                                      for t in self.common_vertical_lines],
            "common_horizontal_lines": [[t.real, t.imag]
                                        for t in self.common_horizontal_lines],
            "common_curve": self.common_curve,
            "curve_witness": [[th, g.real, g.imag] for th, g in self.curve_witness],
            "curve_resultants": self.curve_resultants,
            "intersections": [ip.to_dict() for ip in self.intersections],
        }

    @property
    def has_feature(self) -> bool:
        return (bool(self.common_vertical_lines) or
                bool(self.common_horizontal_lines) or self.common_curve or
                any(ip.kind == "tangential" for ip in self.intersections))


def _match_lines(a: list[complex], b: list[complex], tol: float = 1e-8) -> list[complex]:
    out = []
    for ta in a:
        for tb in b:
            if abs(ta - tb) <= tol:
                out.append(ta)
                break
    return out


def _pseudo_branches(ls: LevelSet) -> list[Branch]:
    """Branches plus horizontal lines as constant graphs (for crossing tests)."""
    out = list(ls.branches)
    if ls.branches:
        thetas = ls.branches[0].thetas
    else:
        anchor = float(np.angle(ls.tau0))
        thetas = anchor + 2.0 * np.pi * (np.arange(ls.resolution) + 0.5) / ls.resolution
    for tau in ls.horizontal_lines:
        out.append(Branch(alpha=ls.alpha, thetas=thetas,
                          values=np.full(thetas.size, complex(tau))))
    return out


def _refine_min(thetas, dvals, k) -> float:
    """Parabolic vertex of d around the grid minimum at index k."""
    if k <= 0 or k >= thetas.size - 1:
        return float(thetas[k])
    dm, d0, dp = dvals[k - 1], dvals[k], dvals[k + 1]
    denom = dm - 2.0 * d0 + dp
    if denom <= 0:
        return float(thetas[k])
    shift = 0.5 * (dm - dp) / denom
    h = float(thetas[1] - thetas[0])
    return float(thetas[k] + np.clip(shift, -1.0, 1.0) * h)


def _fit_tangency(thetas, dvals, th_star):
    """Exponent of d(theta) ~ |theta - theta*|^M over a two-decade window.

    The lower window edge stays >= 3 grid spacings above theta*, since the
    refined theta* is only good to a fraction of the spacing.
    """
    h = float(thetas[1] - thetas[0])
    rel = np.abs(thetas - th_star)
    lo = max(1e-3, 3.0 * h)
    window = (rel >= lo) & (rel <= 1e-1) & (dvals > 0)
    if np.count_nonzero(window & (rel <= 10 * lo)) < 4 or np.count_nonzero(window) < 12:
        return None, None, None, True
    fit = loglog_fit(rel[window], dvals[window])
    unresolved = fit.r2 < 0.99
    return fit.slope, fit.slope_stderr, fit.r2, unresolved


def classify_intersections(ls1: LevelSet, ls2: LevelSet,
                           singular_points: list[SingularContext] | None = None,
                           q1: P.BivariatePolynomial | None = None,
                           q2: P.BivariatePolynomial | None = None,
                           symbols: tuple[str, str] = ("symbol1", "symbol2"),
                           ) -> InteractionReport:
    """Classify how two superimposed level sets interact.

    Detects common lines (per orientation, tau within 1e-8), a common curve
    (branch distance <= 1e-7 over an arc >= 0.1 rad, confirmed by slice
    resultants of the line-free level polynomials when those are supplied),
    and isolated intersection points labelled transversal or tangential by
    the branch-slope difference, with a fitted tangency order for the latter.
    Both level sets must be traced on the same grid.
    """
    if ls1.resolution != ls2.resolution or abs(ls1.tau0 - ls2.tau0) > 1e-12:
        raise InvalidInput("level sets must share resolution and anchor")
    singular_points = singular_points or []

    common_v = _match_lines(ls1.vertical_lines, ls2.vertical_lines)
    common_h = _match_lines(ls1.horizontal_lines, ls2.horizontal_lines)

    branches1 = _pseudo_branches(ls1)
    branches2 = _pseudo_branches(ls2)
    common_curve = False
    curve_witness: list[tuple[float, complex]] = []
    curve_res: list[float] = []
    intersections: list[IntersectionPoint] = []

    for b1 in branches1:
        for b2 in branches2:
            thetas = b1.thetas
            d = np.abs(b1.values - b2.values)
            close = d <= COMMON_CURVE_DIST
            # Longest contiguous run of near-coincidence (no wrap).
            run_len = 0
            best_run = (0, 0)
            start = 0
            for k in range(thetas.size + 1):
                if k < thetas.size and close[k]:
                    if run_len == 0:
                        start = k
                    run_len += 1
                else:
                    if run_len > best_run[1] - best_run[0]:
                        best_run = (start, start + run_len)
                    run_len = 0
            arc = (best_run[1] - best_run[0]) * 2.0 * np.pi / thetas.size
            if arc >= COMMON_CURVE_ARC:
                confirmed = True
                if q1 is not None and q2 is not None:
                    ks = np.linspace(best_run[0], best_run[1] - 1, 8, dtype=int)
                    for k in ks:
                        z1 = complex(np.exp(1j * thetas[k]))
                        try:
                            val = abs(P.resultant_z2(q1, q2, z1))
                            scale = P.resultant_scale(q1, q2, z1)
                        except Exception:
                            confirmed = False
                            break
                        curve_res.append(val / max(scale, 1e-300))
                        if val > 1e-8 * max(scale, 1e-300):
                            confirmed = False
                if confirmed:
                    common_curve = True
                    # Dense enough that downstream probe collars built by
                    # interpolating this witness stay on the curve.
                    n_w = min(best_run[1] - best_run[0], 1024)
                    ks = np.linspace(best_run[0], best_run[1] - 1, n_w, dtype=int)
                    curve_witness = [(float(thetas[k]), complex(b1.values[k]))
                                     for k in ks]
                    continue
            # Isolated minima of d below the intersection threshold.
            inner = d <= ISOLATED_MIN_DIST
            mins = [k for k in range(1, thetas.size - 1)
                    if inner[k] and d[k] <= d[k - 1] and d[k] <= d[k + 1]]
            # Keep one representative per cluster of adjacent minima.
            kept: list[int] = []
            for k in mins:
                if kept and (thetas[k] - thetas[kept[-1]]) < 0.05:
                    if d[k] < d[kept[-1]]:
                        kept[-1] = k
                else:
                    kept.append(k)
            for k in kept:
                th_star = _refine_min(thetas, d, k)
                loc = (complex(np.exp(1j * th_star)),
                       complex((b1.values[k] + b2.values[k]) / 2.0))
                try:
                    s1, _ = branch_tangent(b1, th_star)
                    s2, _ = branch_tangent(b2, th_star)
                except Exception:
                    s1 = s2 = float("nan")
                at_sing = False
                kpair = None
                for ctx in singular_points:
                    if (abs(loc[0] - ctx.location[0]) <= AT_SINGULARITY_TOL
                            and abs(loc[1] - ctx.location[1]) <= AT_SINGULARITY_TOL):
                        at_sing = True
                        if ctx.K1 is not None and ctx.K2 is not None:
                            kpair = (ctx.K1.K, ctx.K2.K)
                        break
                window = np.abs(thetas - thetas[k]) <= 0.15
                witness = [(float(t), float(v))
                           for t, v in zip(thetas[window], d[window])][:64]
                if np.isfinite(s1) and np.isfinite(s2) and \
                        abs(s1 - s2) >= TRANSVERSAL_SLOPE_TOL:
                    intersections.append(IntersectionPoint(
                        location=loc, kind="transversal",
                        angle=float(np.arctan(abs(s1 - s2))),
                        at_singularity=at_sing, K_pair=kpair,
                        slopes=(float(s1), float(s2)), witness=witness))
                else:
                    M, Ms, Mr2, unresolved = _fit_tangency(thetas, d, th_star)
                    intersections.append(IntersectionPoint(
                        location=loc, kind="tangential", M=M, M_stderr=Ms,
                        M_r2=Mr2, order_unresolved=unresolved,
                        at_singularity=at_sing, K_pair=kpair,
                        slopes=(float(s1), float(s2)) if np.isfinite(s1) else None,
                        witness=witness))

    return InteractionReport(
        symbols=symbols, alphas=(complex(ls1.alpha), complex(ls2.alpha)),
        common_vertical_lines=common_v, common_horizontal_lines=common_h,
        common_curve=common_curve, curve_witness=curve_witness,
        curve_resultants=curve_res, intersections=intersections)


# ---------------------------------------------------------------------------
# First-order conditions for smooth pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransversalityResult:
    jacobian: np.ndarray
    det: complex            # raw complex Jacobian determinant (base symbols)
    det_polar_abs: float    # |det D(u,v)| after the polar conjugation
    transversal: bool

    def to_dict(self) -> dict:
        return {
            "jacobian": [[[c.real, c.imag] for c in row] for row in self.jacobian],
            "det": [self.det.real, self.det.imag],
            "det_polar_abs": self.det_polar_abs,
            "transversal": self.transversal,
        }


def transversality_check(pair, zeta, tol: float = 1e-8) -> TransversalityResult:
    """Invertibility of the boundary derivative at a bitorus contact point.

    The Jacobian is taken on the base symbols (unimodular prefactors rotate
    rows and cannot change invertibility), then conjugated to the polar-
    coordinate matrix D = diag(1/alpha) J diag(zeta); the verdict compares
    |det D| (= |det J|) against tol.
    """
    f1, f2 = pair
    b1 = f1.base if isinstance(f1, Symbol) else f1
    b2 = f2.base if isinstance(f2, Symbol) else f2
    z1, z2 = complex(zeta[0]), complex(zeta[1])
    vals = []
    for b in (b1, b2):
        if isinstance(b, RationalInnerFunction):
            den = complex(b.den(z1, z2))
            if abs(den) < 1e-10 * max(b.den.scale, 1.0):
                raise NotBoundaryContact(
                    "transversality undefined at a RIF singularity")
            vals.append(complex(b.num(z1, z2)) / den)
        else:
            vals.append(complex(b.psi(z1, z2)))
    if any(abs(abs(v) - 1.0) > 1e-8 for v in vals):
        raise NotBoundaryContact(
            f"symbol values {vals} are not on the bitorus")
    rows = []
    for b in (b1, b2):
        d1, d2 = b.partials(np.asarray(z1), np.asarray(z2))
        rows.append([complex(d1), complex(d2)])
    jac = np.array(rows, dtype=complex)
    det = complex(jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0])
    polar = np.diag([1.0 / vals[0], 1.0 / vals[1]]) @ jac @ np.diag([z1, z2])
    det_polar = complex(polar[0, 0] * polar[1, 1] - polar[0, 1] * polar[1, 0])
    return TransversalityResult(jacobian=jac, det=det,
                                det_polar_abs=abs(det_polar),
                                transversal=bool(abs(det_polar) >= tol))


@dataclass(frozen=True)
class SliceTestResult:
    derivative: complex
    boundary_value: complex
    degenerate: bool
    constant: bool | None

    def to_dict(self) -> dict:
        return {
            "derivative": [self.derivative.real, self.derivative.imag],
            "boundary_value": [self.boundary_value.real, self.boundary_value.imag],
            "degenerate": self.degenerate,
            "constant": self.constant,
        }


def julia_caratheodory_slice_test(psi, xi, direction: str = "z2",
                                  tol: float = 1e-10) -> SliceTestResult:
    """Angular-derivative test on a one-variable slice at a boundary point.

    A disc self-map smooth up to a boundary point it sends to the circle has
    a nonvanishing angular derivative unless it is constant.  So a vanishing
    slice derivative forces the slice to be constant; constancy is then
    verified by sampling and reported.
    """
    base = psi.base if isinstance(psi, Symbol) else psi
    if not isinstance(base, SmoothSymbol):
        raise InvalidInput("slice test applies to smooth symbols")
    xi1, xi2 = complex(xi[0]), complex(xi[1])
    if direction == "z2":
        sl = P.slice_z1(base.psi, xi1)
        point = xi2
    elif direction == "z1":
        sl = P.slice_z2(base.psi, xi2)
        point = xi1
    else:
        raise InvalidInput("direction must be 'z1' or 'z2'")
    value = complex(sl(point))
    if abs(abs(value) - 1.0) > 1e-8:
        raise NotBoundaryContact("slice does not reach the circle at xi")
    deriv = complex(sl.derivative()(point))
    degenerate = abs(deriv) < tol
    constant = None
    if degenerate:
        sample = np.linspace(-0.95, 0.95, 41)
        grid = (sample[:, None] + 1j * sample[None, :]).ravel()
        grid = grid[np.abs(grid) < 1.0]
        constant = bool(np.max(np.abs(sl(grid) - value)) <= 1e-9)
    return SliceTestResult(derivative=deriv, boundary_value=value,
                           degenerate=degenerate, constant=constant)
