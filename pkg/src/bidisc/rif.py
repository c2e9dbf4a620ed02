"""Rational inner functions phi = reflect(p)/p on the bidisc, and the
polynomial smooth symbols used in mixed pairs.

Unimodular prefactors and monomial factors are excluded from the inner
representation itself; symbols that need a sign or rotation carry it in a
thin ``Symbol`` wrapper, since none of the boundary geometry depends on it.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from . import poly as P
from .errors import (DegreeGuard, InnernessViolation, InvalidInput, NearPole,
                     StabilityViolation)
from .kernels import eval_poly2

SINGULARITY_RESIDUAL_TOL = 1e-8
SINGULARITY_DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class Singularity:
    """Common boundary zero of p and reflect(p) on the bitorus."""

    location: tuple[complex, complex]
    nontangential_value: complex
    residual: float
    value_error: float = 0.0

    def to_dict(self) -> dict:
        w1, w2 = self.location
        return {
            "location": [[w1.real, w1.imag], [w2.real, w2.imag]],
            "nontangential_value": [self.nontangential_value.real,
                                    self.nontangential_value.imag],
            "residual": self.residual,
            "value_error": self.value_error,
        }


class RationalInnerFunction:
    """phi = reflect(p)/p for a stable denominator p."""

    def __init__(self, den: P.BivariatePolynomial, num: P.BivariatePolynomial,
                 stability: P.StabilityReport):
        self.den = den
        self.num = num
        self.stability = stability
        self._singularities: list[Singularity] | None = None

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.den.bidegree

    @property
    def kind(self) -> str:
        return "rif"

    def __call__(self, z1, z2):
        return rif_eval(self, (z1, z2))

    def eval_batch(self, z1, z2):
        num = eval_poly2(np.asarray(self.num.coeffs), z1, z2)
        den = eval_poly2(np.asarray(self.den.coeffs), z1, z2)
        return num / den

    def partials(self, z1, z2):
        """(d/dz1, d/dz2) by the quotient rule; exact."""
        pz = eval_poly2(np.asarray(self.den.coeffs), z1, z2)
        qz = eval_poly2(np.asarray(self.num.coeffs), z1, z2)
        out = []
        for var in ("z1", "z2"):
            dq = eval_poly2(np.asarray(self.num.partial(var).coeffs), z1, z2)
            dp = eval_poly2(np.asarray(self.den.partial(var).coeffs), z1, z2)
            out.append((dq * pz - qz * dp) / (pz * pz))
        return out[0], out[1]

    def transpose(self) -> "RationalInnerFunction":
        """Swap the two coordinates."""
        return RationalInnerFunction(self.den.transpose(), self.num.transpose(),
                                     self.stability)

    @property
    def singularities(self) -> list[Singularity]:
        if self._singularities is None:
            self._singularities = find_singularities(self)
        return self._singularities

    def to_dict(self) -> dict:
        return {"p": P.poly_to_dict(self.den)}


def make_rif(p: P.BivariatePolynomial, stability_tol: float = 1e-7,
             spot_checks: int = 256) -> RationalInnerFunction:
    """Build reflect(p)/p after a sampled stability certificate.

    Raises StabilityViolation if a slice root falls inside the disc, and
    InnernessViolation if a sampled torus point away from the zero set of p
    fails ||phi| - 1| <= 1e-8.
    """
    p = p.trimmed()
    report = P.is_stable(p, tol=stability_tol)
    if not report.consistent:
        raise StabilityViolation(
            f"denominator has a root of modulus {report.min_modulus:.6g} "
            f"inside the bidisc", witness=report.location)
    num = P.reflect(p)
    rif = RationalInnerFunction(p, num, report)
    if spot_checks > 0 and p.bidegree != (0, 0):
        rng = np.random.default_rng(20259)
        ang = rng.uniform(0.0, 2.0 * np.pi, size=(spot_checks, 2))
        z1 = np.exp(1j * ang[:, 0])
        z2 = np.exp(1j * ang[:, 1])
        pv = eval_poly2(np.asarray(p.coeffs), z1, z2)
        away = np.abs(pv) > 1e-6 * p.scale
        vals = np.abs(eval_poly2(np.asarray(num.coeffs), z1, z2)[away] / pv[away])
        if vals.size and np.max(np.abs(vals - 1.0)) > 1e-8:
            raise InnernessViolation(
                f"sampled torus modulus deviates from 1 by "
                f"{np.max(np.abs(vals - 1.0)):.3g}")
    return rif


def rif_eval(phi: RationalInnerFunction, z) -> complex:
    """phi at a strictly interior point (or batch)."""
    z1, z2 = z
    den = eval_poly2(np.asarray(phi.den.coeffs), z1, z2)
    if np.ndim(den) == 0:
        if abs(den) < 1e-300:
            raise NearPole(f"denominator vanished at {z}")
        return complex(eval_poly2(np.asarray(phi.num.coeffs), z1, z2) / den)
    if np.any(np.abs(den) < 1e-300):
        raise NearPole("denominator vanished inside the batch")
    return eval_poly2(np.asarray(phi.num.coeffs), z1, z2) / den


def _torus_eval_grid(p: P.BivariatePolynomial, s: np.ndarray, t: np.ndarray) -> np.ndarray:
    """|p| on the grid exp(i s) x exp(i t), shape (len(s), len(t))."""
    n, m = p.bidegree
    e1 = np.exp(1j * np.outer(s, np.arange(n + 1)))
    e2 = np.exp(1j * np.outer(np.arange(m + 1), t))
    return e1 @ np.asarray(p.coeffs) @ e2


def _angdist(a: float, b: float) -> float:
    return abs(float(np.angle(np.exp(1j * (a - b)))))


def _dedup_angles(cands: list[tuple[float, float]], radius: float) -> list[tuple[float, float]]:
    kept: list[tuple[float, float]] = []
    for cand in cands:
        if all(max(_angdist(cand[0], q[0]), _angdist(cand[1], q[1])) >= radius
               for q in kept):
            kept.append(cand)
    return kept


def _mp_refine_singularity(p: P.BivariatePolynomial, s0: float, t0: float,
                           halfwidth: float = 3e-2, dps: int = 60):
    """Localize a torus zero of p in extended precision.

    |p| vanishes to order >= 2 along the worst torus direction, so double
    precision only brackets the zero to ~1e-5.  Track the slice root of
    p(., e^{it}) nearest the unit circle and bisect the derivative of its
    squared modulus; bisection is immune to the degeneracy.  Returns refined
    (s, t) angles or None.
    """
    import mpmath as mp

    n, _ = p.bidegree
    if n == 0:
        return None
    with mp.workdps(dps):
        coeffs = [[mp.mpc(c) for c in row] for row in np.asarray(p.coeffs)]
        d1 = p.partial("z1")
        c_d1 = [[mp.mpc(c) for c in row] for row in np.asarray(d1.coeffs)]
        d2 = p.partial("z2")
        c_d2 = [[mp.mpc(c) for c in row] for row in np.asarray(d2.coeffs)]

        def ev(cf, z1, z2):
            acc = mp.mpc(0)
            for row in reversed(cf):
                rv = mp.mpc(0)
                for c in reversed(row):
                    rv = rv * z2 + c
                acc = acc * z1 + rv
            return acc

        def slice_root(t, a_seed):
            # Newton for the z1-root of p(., e^{it}) near a_seed (simple root).
            z2 = mp.expjpi(t / mp.pi)
            a = mp.mpc(a_seed)
            for _ in range(60):
                fv = ev(coeffs, a, z2)
                dv = ev(c_d1, a, z2)
                if abs(dv) == 0:
                    return None
                step = fv / dv
                a -= step
                if abs(step) < mp.mpf(10) ** (-dps + 6):
                    break
            return a

        def gprime(t, a_seed):
            # d/dt |a(t)|^2 with a'(t) from implicit differentiation.
            a = slice_root(t, a_seed)
            if a is None:
                return None, None
            z2 = mp.expjpi(t / mp.pi)
            dz2 = 1j * z2
            pz1 = ev(c_d1, a, z2)
            if abs(pz1) == 0:
                return None, a
            aprime = -ev(c_d2, a, z2) * dz2 / pz1
            return 2 * mp.re(mp.conj(a) * aprime), a

        a_seed = complex(np.exp(1j * s0))
        lo, hi = mp.mpf(t0) - halfwidth, mp.mpf(t0) + halfwidth
        glo, alo = gprime(lo, a_seed)
        ghi, ahi = gprime(hi, a_seed)
        if glo is None or ghi is None:
            return None
        if mp.sign(glo) == mp.sign(ghi):
            # Not a bracketed minimum of |a(t)| (or the wrong root tracked).
            return None
        for _ in range(dps * 4):
            mid = (lo + hi) / 2
            gm, am = gprime(mid, a_seed)
            if gm is None:
                return None
            a_seed = am
            if mp.sign(gm) == mp.sign(glo):
                lo, glo = mid, gm
            else:
                hi, ghi = mid, gm
            if hi - lo < mp.mpf(10) ** (-dps + 10):
                break
        t_ref = (lo + hi) / 2
        a_fin = slice_root(t_ref, a_seed)
        if a_fin is None or abs(abs(a_fin) - 1) > mp.mpf("1e-12"):
            return None
        return float(mp.arg(a_fin)), float(t_ref)


def find_singularities(phi: RationalInnerFunction, grid: int = 1024,
                       seed_threshold: float = 1e-3,
                       max_iter: int = 50) -> list[Singularity]:
    """Common torus zeros of p and reflect(p).

    A coarse |p| scan on a grid x grid angular lattice seeds a damped
    least-squares Newton iteration on (Re p, Im p)(s, t); the 2x2 angular
    Jacobian is rank-deficient exactly at a torus zero, so steps use the
    pseudoinverse and the iteration only brackets the zero.  Survivors are
    clustered and localized in extended precision (see
    ``_mp_refine_singularity``), filtered by |p~| as well, and deduplicated
    within 1e-6.  Zeros closer together than ~2e-2 are reported merged;
    at the default grid they were never separable anyway.
    """
    p = phi.den
    n, m = p.bidegree
    if n == 0 and m == 0:
        return []
    transposed = n == 0  # refine in whichever variable has slice structure
    if transposed:
        return [Singularity((sg.location[1], sg.location[0]),
                            sg.nontangential_value, sg.residual, sg.value_error)
                for sg in find_singularities(
                    RationalInnerFunction(p.transpose(), phi.num.transpose(),
                                          phi.stability), grid, seed_threshold,
                    max_iter)]
    scale = p.scale
    s = 2.0 * np.pi * np.arange(grid) / grid
    vals = np.abs(_torus_eval_grid(p, s, s))
    mask = vals < seed_threshold * scale
    if not np.any(mask):
        return []
    neigh = np.full_like(vals, np.inf)
    for ds in (-1, 0, 1):
        for dt in (-1, 0, 1):
            if ds == 0 and dt == 0:
                continue
            neigh = np.minimum(neigh, np.roll(np.roll(vals, ds, 0), dt, 1))
    seeds = np.argwhere(mask & (vals <= neigh))

    dp1 = p.partial("z1")
    dp2 = p.partial("z2")
    rough: list[tuple[float, float]] = []
    stalled: list[tuple[float, float]] = []
    for js, jt in seeds:
        ang = np.array([s[js], s[jt]])
        for _ in range(max_iter):
            z1, z2 = np.exp(1j * ang[0]), np.exp(1j * ang[1])
            val = complex(p(z1, z2))
            if abs(val) <= 1e-11 * scale:
                break
            gs = 1j * z1 * complex(dp1(z1, z2))
            gt = 1j * z2 * complex(dp2(z1, z2))
            jac = np.array([[gs.real, gt.real], [gs.imag, gt.imag]])
            rhs = np.array([val.real, val.imag])
            step, *_ = np.linalg.lstsq(jac, rhs, rcond=None)
            norm = float(np.linalg.norm(step))
            if norm > 0.5:
                step *= 0.5 / norm
            ang = ang - step
            if norm < 1e-13:
                break
        z1, z2 = np.exp(1j * ang[0]), np.exp(1j * ang[1])
        target = rough if abs(complex(p(z1, z2))) <= 1e-6 * scale else stalled
        target.append((float(ang[0] % (2 * np.pi)), float(ang[1] % (2 * np.pi))))

    ptil = phi.num
    found: list[tuple[float, float, float]] = []
    dropped: list[tuple[float, float]] = []
    dps = 60 + 10 * max(sum(p.bidegree) - 2, 0)
    for s0, t0 in _dedup_angles(sorted(rough), 2e-2):
        refined = _mp_refine_singularity(p, s0, t0, dps=dps)
        if refined is None:
            dropped.append((s0, t0))
            continue
        a, b = refined
        w1, w2 = np.exp(1j * a), np.exp(1j * b)
        res = max(abs(complex(p(w1, w2))), abs(complex(ptil(w1, w2))))
        if res <= SINGULARITY_RESIDUAL_TOL * max(scale, 1.0):
            found.append((float(a % (2 * np.pi)), float(b % (2 * np.pi)), res))

    # Flat-valley candidates near a located zero stall or fail refinement
    # routinely (the |p| sublevel set stretches ~0.3 rad along a branch for
    # higher contact orders); warn only about orphans with nothing accepted
    # nearby.
    for s0, t0 in dropped + stalled:
        if not any(max(_angdist(s0, a), _angdist(t0, b)) < 0.4
                   for a, b, _ in found):
            warnings.warn(f"singularity candidate near angles ({s0:.6f}, "
                          f"{t0:.6f}) dropped: no convergence")

    kept = _dedup_angles(sorted((a, b) for a, b, _ in found), SINGULARITY_DEDUP_TOL)
    out = []
    for a, b in kept:
        res = next(r for aa, bb, r in found
                   if _angdist(aa, a) < 1e-12 and _angdist(bb, b) < 1e-12)
        w = (complex(np.exp(1j * a)), complex(np.exp(1j * b)))
        value, err = _radial_limit(phi, w)
        out.append(Singularity(location=w, nontangential_value=value,
                               residual=res, value_error=err))
    out.sort(key=lambda sg: (sg.location[0].real, sg.location[0].imag,
                             sg.location[1].real, sg.location[1].imag))
    return out


def _radial_limit(phi: RationalInnerFunction, w, kmin: int = 6, kmax: int = 16):
    """Richardson extrapolation of phi(r w) along the diagonal radius."""
    ks = np.arange(kmin, kmax + 1)
    rs = 1.0 - 2.0 ** (-ks.astype(float))
    vals = np.array([rif_eval(phi, (r * w[0], r * w[1])) for r in rs])
    # Neville table for errors c1*h + c2*h^2 + ..., h = 2^-k.
    table = vals.copy()
    prev_last = table[-1]
    err = np.inf
    for lvl in range(1, len(vals)):
        fac = 2.0 ** lvl
        table = (fac * table[1:] - table[:-1]) / (fac - 1.0)
        new_err = abs(table[-1] - prev_last)
        prev_last = table[-1]
        err = new_err
        if len(table) == 1:
            break
    return complex(prev_last), float(err)


def nontangential_value(phi: RationalInnerFunction, w,
                        singular_tol: float = 1e-9) -> tuple[complex, float, bool]:
    """Boundary value of phi at a torus point.

    Returns (value, error_estimate, converged).  Nonsingular points evaluate
    directly; singular ones use Richardson extrapolation along the diagonal
    radius, which lies in every product approach region.
    """
    w = (complex(w[0]), complex(w[1]))
    if abs(abs(w[0]) - 1.0) > 1e-9 or abs(abs(w[1]) - 1.0) > 1e-9:
        raise InvalidInput("nontangential value requested off the bitorus")
    den = complex(phi.den(w[0], w[1]))
    if abs(den) > singular_tol * max(phi.den.scale, 1.0):
        return complex(phi.num(w[0], w[1])) / den, 0.0, True
    value, err = _radial_limit(phi, w)
    return value, err, err <= 1e-4


# ---------------------------------------------------------------------------
# Named examples and the iterate family
# ---------------------------------------------------------------------------

def kappa() -> RationalInnerFunction:
    """(2 z1 z2 - z1 - z2) / (2 - z1 - z2)."""
    return make_rif(P.BivariatePolynomial([[2, -1], [-1, 0]]))


def amy() -> RationalInnerFunction:
    """(4 z1^2 z2 - z1^2 - 3 z1 z2 - z1 + z2) / (4 - 3 z1 - z2 - z1 z2 + z1^2)."""
    return make_rif(P.BivariatePolynomial([[4, -1], [-3, -1], [1, 0]]))


def kappa_iterate(n: int) -> RationalInnerFunction:
    """n-fold composition of kappa with itself in the second slot.

    phi_0 = kappa and phi_j(z1, z2) = kappa(z1, phi_{j-1}(z1, z2)); the
    denominators satisfy q_j = (2 - z1) q_{j-1} - reflect(q_{j-1}), and the
    numerator stays the exact reflection, so the result is already in
    reflect(q)/q form.  phi_1 coincides with the amy function coefficient for
    coefficient.  The measured bidegree is (n+1, 1).
    """
    if n < 0 or int(n) != n:
        raise InvalidInput("iteration count must be a nonnegative integer")
    if n > 6:
        raise DegreeGuard("iterate degree guard: n must be <= 6")
    two_minus_z1 = P.BivariatePolynomial([[2], [-1]])
    q = P.BivariatePolynomial([[2, -1], [-1, 0]])
    for _ in range(int(n)):
        q = (two_minus_z1 * q - P.reflect(q)).trimmed()
    return make_rif(q)


# ---------------------------------------------------------------------------
# Smooth polynomial symbols
# ---------------------------------------------------------------------------

class SmoothSymbol:
    """Polynomial self-map of the bidisc into the closed disc.

    The sup bound |psi| <= 1 is certified by sampling the bitorus (maximum
    principle) at construction.
    """

    def __init__(self, psi: P.BivariatePolynomial, grid: int = 512, tol: float = 1e-10):
        psi = psi.trimmed()
        s = 2.0 * np.pi * np.arange(grid) / grid
        vals = np.abs(_torus_eval_grid(psi, s, s))
        worst = float(np.max(vals))
        if worst > 1.0 + tol:
            raise InvalidInput(f"smooth symbol exceeds the disc: sup |psi| = {worst:.6g}")
        self.psi = psi
        self.sup_modulus = worst
        self._contacts: list[tuple[complex, complex]] | None = None
        self.contact_everywhere = bool(np.mean(vals > 1.0 - 1e-9) > 0.5)

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.psi.bidegree

    @property
    def kind(self) -> str:
        return "smooth"

    def __call__(self, z1, z2):
        return self.psi(z1, z2)

    def eval_batch(self, z1, z2):
        return eval_poly2(np.asarray(self.psi.coeffs), z1, z2)

    def partials(self, z1, z2):
        d1 = eval_poly2(np.asarray(self.psi.partial("z1").coeffs), z1, z2)
        d2 = eval_poly2(np.asarray(self.psi.partial("z2").coeffs), z1, z2)
        return d1, d2

    def transpose(self) -> "SmoothSymbol":
        return SmoothSymbol(self.psi.transpose())

    def boundary_contacts(self, grid: int = 512, tol: float = 1e-9,
                          max_points: int = 256) -> list[tuple[complex, complex]]:
        """Sampled torus points with |psi| = 1, Newton-refined.

        For symbols unimodular on the whole bitorus the flag
        ``contact_everywhere`` is set and a coarse sample is returned.
        """
        if self._contacts is not None:
            return self._contacts
        s = 2.0 * np.pi * np.arange(grid) / grid
        h = 1.0 - np.abs(_torus_eval_grid(self.psi, s, s)) ** 2
        if self.contact_everywhere:
            idx = np.linspace(0, grid - 1, max_points, dtype=int)
            self._contacts = [(complex(np.exp(1j * s[i])), complex(np.exp(1j * s[j])))
                              for i, j in zip(idx, idx)]
            return self._contacts
        neigh = np.full_like(h, np.inf)
        for ds in (-1, 0, 1):
            for dt in (-1, 0, 1):
                if ds == 0 and dt == 0:
                    continue
                neigh = np.minimum(neigh, np.roll(np.roll(h, ds, 0), dt, 1))
        seeds = np.argwhere((h < 1e-4) & (h <= neigh))
        d1 = self.psi.partial("z1")
        d2 = self.psi.partial("z2")
        pts: list[tuple[float, float]] = []
        for js, jt in seeds[:4 * max_points]:
            ang = np.array([s[js], s[jt]])
            for _ in range(40):
                z1, z2 = np.exp(1j * ang[0]), np.exp(1j * ang[1])
                v = complex(self.psi(z1, z2))
                hval = 1.0 - abs(v) ** 2
                if hval <= 1e-13:
                    break
                gs = -2.0 * (np.conj(v) * complex(d1(z1, z2)) * 1j * z1).real
                gt = -2.0 * (np.conj(v) * complex(d2(z1, z2)) * 1j * z2).real
                grad = np.array([gs, gt])
                gg = grad @ grad
                if gg < 1e-30:
                    break
                step = (hval / gg) * grad
                norm = np.linalg.norm(step)
                if norm > 0.3:
                    step *= 0.3 / norm
                ang = ang - step
            z1, z2 = np.exp(1j * ang[0]), np.exp(1j * ang[1])
            if 1.0 - abs(complex(self.psi(z1, z2))) ** 2 <= tol:
                pts.append((float(ang[0] % (2 * np.pi)), float(ang[1] % (2 * np.pi))))
        pts.sort()
        dedup: list[tuple[float, float]] = []
        for cand in pts:
            if all(max(abs(np.angle(np.exp(1j * (cand[0] - q[0])))),
                       abs(np.angle(np.exp(1j * (cand[1] - q[1]))))) > 1e-4
                   for q in dedup):
                dedup.append(cand)
        self._contacts = [(complex(np.exp(1j * a)), complex(np.exp(1j * b)))
                          for a, b in dedup[:max_points]]
        return self._contacts

    def to_dict(self) -> dict:
        return {"psi": P.poly_to_dict(self.psi)}


# ---------------------------------------------------------------------------
# Symbols with a unimodular prefactor, and the name/JSON parsers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Symbol:
    """A coordinate function: unimodular prefactor times a base RIF or
    smooth polynomial map.

    The prefactor only rotates values, so level sets, singularities and
    transversality are computed on the base and translated.
    """

    base: RationalInnerFunction | SmoothSymbol
    prefactor: complex = 1.0 + 0.0j
    name: str = ""

    def __post_init__(self):
        if abs(abs(self.prefactor) - 1.0) > 1e-12:
            raise InvalidInput("symbol prefactor must be unimodular")

    @property
    def kind(self) -> str:
        return self.base.kind

    def __call__(self, z1, z2):
        return self.prefactor * self.base(z1, z2)

    def eval_batch(self, z1, z2):
        return self.prefactor * self.base.eval_batch(z1, z2)

    def partials(self, z1, z2):
        d1, d2 = self.base.partials(z1, z2)
        return self.prefactor * d1, self.prefactor * d2

    def numden_grids(self) -> tuple[np.ndarray, np.ndarray]:
        """Numerator/denominator coefficient grids with the prefactor folded in."""
        if isinstance(self.base, RationalInnerFunction):
            return (self.prefactor * np.asarray(self.base.num.coeffs),
                    np.asarray(self.base.den.coeffs))
        return (self.prefactor * np.asarray(self.base.psi.coeffs),
                np.ones((1, 1), dtype=complex))

    def to_value(self, base_value: complex) -> complex:
        """Translate a value of the base symbol to a value of this symbol."""
        return self.prefactor * base_value

    def to_dict(self) -> dict:
        d = self.base.to_dict()
        if self.prefactor != 1.0 + 0.0j:
            d["prefactor"] = [self.prefactor.real, self.prefactor.imag]
        if self.name:
            d["name"] = self.name
        return d


_BUILTIN_SMOOTH = {
    "z1": [[0, 0], [1, 0]],
    "z2": [[0, 1]],
}


def parse_symbol(spec) -> Symbol:
    """Accepts builtin names, JSON strings/dicts, or Symbol instances.

    Builtins: "kappa", "amy", "kappa_iterate:n", "z1", "z2"; a leading "-"
    negates.  JSON: {"p": <poly>} for a RIF, {"psi": <poly>} for a smooth
    symbol, optional "prefactor": [re, im].
    """
    if isinstance(spec, Symbol):
        return spec
    if isinstance(spec, RationalInnerFunction) or isinstance(spec, SmoothSymbol):
        return Symbol(base=spec)
    if isinstance(spec, dict):
        return _symbol_from_dict(spec)
    if not isinstance(spec, str):
        raise InvalidInput(f"cannot interpret symbol spec of type {type(spec)!r}")
    text = spec.strip()
    if text.startswith("{"):
        try:
            return _symbol_from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"invalid symbol JSON: {exc}") from exc
    prefactor = 1.0 + 0.0j
    name = text
    if text.startswith("-"):
        prefactor = -1.0 + 0.0j
        text = text[1:]
    if text == "kappa":
        return Symbol(kappa(), prefactor, name)
    if text == "amy":
        return Symbol(amy(), prefactor, name)
    if text.startswith("kappa_iterate:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise InvalidInput(f"bad iterate spec {spec!r}") from exc
        return Symbol(kappa_iterate(n), prefactor, name)
    if text in _BUILTIN_SMOOTH:
        return Symbol(SmoothSymbol(P.BivariatePolynomial(_BUILTIN_SMOOTH[text])),
                      prefactor, name)
    raise InvalidInput(f"unknown symbol spec {spec!r}")


def _symbol_from_dict(data: dict) -> Symbol:
    prefactor = 1.0 + 0.0j
    if "prefactor" in data:
        pref = data["prefactor"]
        prefactor = complex(float(pref[0]), float(pref[1]))
    if "p" in data:
        return Symbol(make_rif(P.poly_from_dict(data["p"])), prefactor,
                      str(data.get("name", "")))
    if "psi" in data:
        return Symbol(SmoothSymbol(P.poly_from_dict(data["psi"])), prefactor,
                      str(data.get("name", "")))
    raise InvalidInput("symbol JSON needs a 'p' (RIF) or 'psi' (smooth) field")
