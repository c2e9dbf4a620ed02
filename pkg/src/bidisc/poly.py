"""Bivariate complex polynomial arithmetic.

Coefficient grids are dense row-major: ``coeffs[j, k]`` multiplies
``z1**j * z2**k``.  Bidegrees in this domain are tiny (<= 10), so no sparsity
machinery.  All values are immutable after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSlice, InvalidInput, NoRoots
from .kernels import eval_poly2

# Residual tolerance for root acceptance, relative to coefficient max-norm.
ROOT_RESIDUAL_TOL = 1e-9
# Trailing coefficients below this (relative) are trimmed when slicing.
TRIM_TOL = 1e-13


def _as_grid(coeffs) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidInput("coefficient grid must be a 2-d array")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise InvalidInput("coefficient grid contains non-finite entries")
    return arr


@dataclass(frozen=True)
class BivariatePolynomial:
    """Polynomial in two complex variables with exact declared bidegree."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _as_grid(self.coeffs)
        # Auto-trim zero top rows/columns so the stored bidegree is exact.
        scale = max(float(np.max(np.abs(arr))), 1.0)
        n, m = arr.shape
        while n > 1 and np.max(np.abs(arr[n - 1, :m])) <= TRIM_TOL * scale:
            n -= 1
        while m > 1 and np.max(np.abs(arr[:n, m - 1])) <= TRIM_TOL * scale:
            m -= 1
        arr = arr[:n, :m].copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, z1, z2):
        return evaluate(self, (z1, z2))

    def trimmed(self) -> "BivariatePolynomial":
        """Construction already trims; kept for call-site clarity."""
        return self

    def partial(self, variable: str) -> "BivariatePolynomial":
        """Exact partial derivative with respect to 'z1' or 'z2'."""
        arr = np.asarray(self.coeffs)
        n, m = self.bidegree
        if variable == "z1":
            if n == 0:
                return BivariatePolynomial(np.zeros((1, 1), dtype=complex))
            out = arr[1:, :] * np.arange(1, n + 1, dtype=float)[:, None]
        elif variable == "z2":
            if m == 0:
                return BivariatePolynomial(np.zeros((1, 1), dtype=complex))
            out = arr[:, 1:] * np.arange(1, m + 1, dtype=float)[None, :]
        else:
            raise InvalidInput(f"unknown variable {variable!r}")
        return BivariatePolynomial(out)

    def transpose(self) -> "BivariatePolynomial":
        """Swap the roles of z1 and z2."""
        return BivariatePolynomial(np.asarray(self.coeffs).T)

    def __mul__(self, other):
        if isinstance(other, BivariatePolynomial):
            a, b = np.asarray(self.coeffs), np.asarray(other.coeffs)
            out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
                           dtype=complex)
            for j in range(a.shape[0]):
                for k in range(a.shape[1]):
                    if a[j, k] != 0:
                        out[j:j + b.shape[0], k:k + b.shape[1]] += a[j, k] * b
            return BivariatePolynomial(out).trimmed()
        return BivariatePolynomial(np.asarray(self.coeffs) * complex(other)).trimmed()

    __rmul__ = __mul__

    def __add__(self, other):
        a, b = np.asarray(self.coeffs), np.asarray(other.coeffs)
        n = max(a.shape[0], b.shape[0])
        m = max(a.shape[1], b.shape[1])
        out = np.zeros((n, m), dtype=complex)
        out[:a.shape[0], :a.shape[1]] += a
        out[:b.shape[0], :b.shape[1]] += b
        return BivariatePolynomial(out).trimmed()

    def __sub__(self, other):
        return self + (-1.0) * other

    def to_json(self) -> str:
        return json.dumps(poly_to_dict(self))


@dataclass(frozen=True)
class UnivariatePolynomial:
    """Coefficients ascending in the variable; trailing near-zeros trimmed."""

    coeffs: np.ndarray = field()

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128)).ravel()
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise InvalidInput("univariate coefficients contain non-finite entries")
        scale = max(float(np.max(np.abs(arr))) if arr.size else 0.0, 1e-300)
        k = arr.size
        while k > 1 and abs(arr[k - 1]) <= TRIM_TOL * scale:
            k -= 1
        arr = arr[:k].copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.full_like(z, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc if acc.ndim else complex(acc)

    def derivative(self) -> "UnivariatePolynomial":
        if self.degree == 0:
            return UnivariatePolynomial(np.zeros(1, dtype=complex))
        return UnivariatePolynomial(self.coeffs[1:] * np.arange(1, self.coeffs.size))


def evaluate(p: BivariatePolynomial, z) -> complex:
    """Horner evaluation of p at z = (z1, z2); vectorized over arrays."""
    z1, z2 = z
    out = eval_poly2(np.asarray(p.coeffs), z1, z2)
    return out if np.ndim(out) else complex(out)


def reflect(p: BivariatePolynomial) -> BivariatePolynomial:
    """Reflection z1^n z2^m conj(p(1/conj(z1), 1/conj(z2))).

    On coefficients: c~[j, k] = conj(c[n-j, m-k]).  An involution when the
    declared bidegree is exact.
    """
    return BivariatePolynomial(np.conj(np.asarray(p.coeffs)[::-1, ::-1]))


def slice_z1(p: BivariatePolynomial, z1: complex) -> UnivariatePolynomial:
    """Coefficients of z2 -> p(z1, z2)."""
    powers = np.asarray(z1, dtype=complex) ** np.arange(p.coeffs.shape[0])
    return UnivariatePolynomial(powers @ np.asarray(p.coeffs))


def slice_z2(p: BivariatePolynomial, z2: complex) -> UnivariatePolynomial:
    """Coefficients of z1 -> p(z1, z2)."""
    powers = np.asarray(z2, dtype=complex) ** np.arange(p.coeffs.shape[1])
    return UnivariatePolynomial(np.asarray(p.coeffs) @ powers)


def _sorted_roots(rts: np.ndarray) -> np.ndarray:
    order = np.lexsort((rts.imag, rts.real))
    return rts[order]


def roots(q: UnivariatePolynomial) -> np.ndarray:
    """All complex roots with multiplicity, via companion-matrix eigenvalues.

    Deterministic for fixed input; returned sorted by (real, imag).
    """
    coeffs = np.asarray(q.coeffs)
    if q.degree < 1:
        raise NoRoots("degree-0 polynomial has no roots")
    rts = np.roots(coeffs[::-1])
    scale = float(np.max(np.abs(coeffs)))
    # Newton polish where the residual is sloppy (clustered roots).
    resid = np.abs(q(rts))
    tol = ROOT_RESIDUAL_TOL * scale * np.maximum(np.abs(rts), 1.0) ** q.degree
    bad = resid > tol
    if np.any(bad):
        d = q.derivative()
        for _ in range(2):
            dv = d(rts[bad])
            safe = np.abs(dv) > 1e-300
            step = np.where(safe, q(rts[bad]) / np.where(safe, dv, 1.0), 0.0)
            rts[bad] = rts[bad] - step
    return _sorted_roots(rts)


def batched_roots(coeff_rows: np.ndarray) -> list[np.ndarray]:
    """Roots of many univariate polynomials at once.

    ``coeff_rows[i]`` holds ascending coefficients of the i-th polynomial.
    Rows are grouped by effective degree and solved with batched companion
    eigenvalues; each result is sorted by (real, imag).  Degree-0 rows yield
    empty arrays.
    """
    rows = np.asarray(coeff_rows, dtype=complex)
    count, width = rows.shape
    scale = np.maximum(np.max(np.abs(rows), axis=1), 1e-300)
    nonzero = np.abs(rows) > TRIM_TOL * scale[:, None]
    degree = np.where(nonzero.any(axis=1),
                      width - 1 - np.argmax(nonzero[:, ::-1], axis=1), 0)
    out: list[np.ndarray | None] = [None] * count
    for d in np.unique(degree):
        idx = np.nonzero(degree == d)[0]
        if d == 0:
            for i in idx:
                out[i] = np.empty(0, dtype=complex)
            continue
        if d == 1:
            r = -rows[idx, 0] / rows[idx, 1]
            for pos, i in enumerate(idx):
                out[i] = np.array([r[pos]])
            continue
        comp = np.zeros((idx.size, d, d), dtype=complex)
        comp[:, np.arange(1, d), np.arange(0, d - 1)] = 1.0
        comp[:, 0, :] = -rows[idx, d - 1::-1] / rows[idx, d][:, None]
        eig = np.linalg.eigvals(comp)
        for pos, i in enumerate(idx):
            out[i] = _sorted_roots(eig[pos])
    return out  # type: ignore[return-value]


def sylvester_matrix(f: UnivariatePolynomial, g: UnivariatePolynomial) -> np.ndarray:
    """Sylvester matrix with the f-block rows first (descending coefficients)."""
    n, m = f.degree, g.degree
    size = n + m
    mat = np.zeros((size, size), dtype=complex)
    fr = f.coeffs[::-1]
    gr = g.coeffs[::-1]
    for i in range(m):
        mat[i, i:i + n + 1] = fr
    for i in range(n):
        mat[m + i, i:i + m + 1] = gr
    return mat


def resultant_z2(p: BivariatePolynomial, q: BivariatePolynomial, z1: complex) -> complex:
    """Resultant of the two z2-slices at z1; vanishes iff they share a root.

    Convention: Res(f, g) with the f-rows first; determinant by LU with
    partial pivoting.  Raises DegenerateSlice when a slice drops to degree 0.
    """
    f = slice_z1(p, z1)
    g = slice_z1(q, z1)
    if f.degree < 1 or g.degree < 1:
        raise DegenerateSlice(f"z2-slice degenerates to a constant at z1={z1}", z1=z1)
    mat = sylvester_matrix(f, g)
    sign, logdet = np.linalg.slogdet(mat)
    if sign == 0:
        return 0.0 + 0.0j
    return complex(sign * np.exp(logdet))


def resultant_scale(p: BivariatePolynomial, q: BivariatePolynomial, z1: complex) -> float:
    """Natural magnitude of the resultant, for relative zero tests."""
    f = slice_z1(p, z1)
    g = slice_z1(q, z1)
    fs = max(float(np.max(np.abs(f.coeffs))), 1e-300)
    gs = max(float(np.max(np.abs(g.coeffs))), 1e-300)
    return float(fs ** g.degree * gs ** f.degree)


def divides_linear(q_alpha: BivariatePolynomial, tau: complex, tol: float = 1e-8) -> bool:
    """True iff (z1 - tau) divides q_alpha, for unimodular tau.

    Each z2-coefficient of q_alpha is a polynomial in z1; all must vanish at
    tau within a relative tolerance.
    """
    if abs(abs(tau) - 1.0) > 1e-12:
        raise InvalidInput("tau must be unimodular")
    arr = np.asarray(q_alpha.coeffs)
    powers = np.asarray(tau, dtype=complex) ** np.arange(arr.shape[0])
    values = powers @ arr
    scale = max(float(np.max(np.abs(arr))), 1e-300)
    return bool(np.max(np.abs(values)) <= tol * scale)


def deflate_z1(q: BivariatePolynomial, tau: complex) -> BivariatePolynomial:
    """Synthetic division of q by (z1 - tau); remainder discarded.

    Caller is responsible for tau being an actual root (see divides_linear).
    """
    arr = np.asarray(q.coeffs)
    n = arr.shape[0] - 1
    if n < 1:
        raise DegenerateSlice("cannot deflate a polynomial of z1-degree 0", z1=tau)
    out = np.zeros((n, arr.shape[1]), dtype=complex)
    carry = arr[n, :].copy()
    for j in range(n - 1, -1, -1):
        out[j, :] = carry
        carry = arr[j, :] + tau * carry
    return BivariatePolynomial(out).trimmed()


def deflate_z2(q: BivariatePolynomial, tau: complex) -> BivariatePolynomial:
    return deflate_z1(q.transpose(), tau).transpose()


@dataclass(frozen=True)
class StabilityReport:
    """Sampled stability certificate: not a proof, records its own grid."""

    consistent: bool
    min_modulus: float
    location: tuple[complex, complex] | None
    angular_grid: int
    radial_grid: int
    tol: float

    def to_dict(self) -> dict:
        loc = None
        if self.location is not None:
            loc = [[self.location[0].real, self.location[0].imag],
                   [self.location[1].real, self.location[1].imag]]
        return {
            "consistent": self.consistent,
            "min_modulus": self.min_modulus,
            "location": loc,
            "angular_grid": self.angular_grid,
            "radial_grid": self.radial_grid,
            "tol": self.tol,
        }


def is_stable(p: BivariatePolynomial, angular: int = 512, radial: int = 16,
              tol: float = 1e-7) -> StabilityReport:
    """Sampled check that p has no zeros in the open bidisc.

    For each z2 on an angular x radial grid of the closed disc, every z1-root
    of the slice p(., z2) must have modulus >= 1 - tol.  The report carries
    the minimum modulus found and its location; this is a consistency
    certificate, not a proof.
    """
    if p.scale == 0:
        raise InvalidInput("zero polynomial")
    n, m = p.bidegree
    if n == 0:
        # No z1-dependence: stability is about the z2-roots of the single row.
        sl = slice_z1(p, 0.0)
        if sl.degree < 1:
            return StabilityReport(True, np.inf, None, angular, radial, tol)
        rts = roots(sl)
        idx = int(np.argmin(np.abs(rts)))
        mod = float(np.abs(rts[idx]))
        return StabilityReport(not (mod < 1.0 - tol), mod,
                               (0.0 + 0.0j, complex(rts[idx])), angular, radial, tol)

    radii = np.linspace(0.0, 1.0, radial) if m > 0 else np.array([0.0])
    angles = 2.0 * np.pi * np.arange(angular) / angular if m > 0 else np.array([0.0])
    z2_grid = np.unique(np.concatenate(
        [(r * np.exp(1j * angles)) for r in radii]))
    # Slice coefficients for all z2 at once: rows ascending in z1.
    powers = z2_grid[:, None] ** np.arange(m + 1)[None, :]
    rows = powers @ np.asarray(p.coeffs).T
    all_roots = batched_roots(rows)
    best = np.inf
    best_loc = None
    for z2, rts in zip(z2_grid, all_roots):
        if rts.size == 0:
            continue
        idx = int(np.argmin(np.abs(rts)))
        mod = float(np.abs(rts[idx]))
        if mod < best:
            best = mod
            best_loc = (complex(rts[idx]), complex(z2))
    consistent = not (best < 1.0 - tol)
    return StabilityReport(consistent=consistent, min_modulus=best,
                           location=best_loc, angular_grid=angular,
                           radial_grid=radial, tol=tol)


# ---------------------------------------------------------------------------
# JSON contract: {"bidegree": [n, m], "coeffs": [[[re, im], ...], ...]}
# ---------------------------------------------------------------------------

def poly_to_dict(p: BivariatePolynomial) -> dict:
    n, m = p.bidegree
    grid = [[[float(c.real), float(c.imag)] for c in row] for row in np.asarray(p.coeffs)]
    return {"bidegree": [n, m], "coeffs": grid}


def poly_from_dict(data: dict) -> BivariatePolynomial:
    try:
        bidegree = data["bidegree"]
        rows = data["coeffs"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"polynomial JSON missing field: {exc}") from exc
    if len(bidegree) != 2 or any(int(d) != d or d < 0 for d in bidegree):
        raise InvalidInput("bidegree must be a pair of nonnegative integers")
    n, m = int(bidegree[0]), int(bidegree[1])
    declared = (n, m)
    if len(rows) != n + 1:
        raise InvalidInput(f"expected {n + 1} coefficient rows, got {len(rows)}")
    grid = np.zeros((n + 1, m + 1), dtype=complex)
    for j, row in enumerate(rows):
        if len(row) != m + 1:
            raise InvalidInput(f"ragged coefficient row {j}: expected {m + 1} entries")
        for k, entry in enumerate(row):
            if not hasattr(entry, "__len__") or len(entry) != 2:
                raise InvalidInput("coefficient entries must be [re, im] pairs")
            re, im = float(entry[0]), float(entry[1])
            if not (np.isfinite(re) and np.isfinite(im)):
                raise InvalidInput("non-finite coefficient")
            grid[j, k] = complex(re, im)
    out = BivariatePolynomial(grid)
    if out.bidegree != declared and declared != (0, 0):
        raise InvalidInput(
            f"declared bidegree {declared} is not exact (actual {out.bidegree})")
    return out


def poly_from_json(text: str) -> BivariatePolynomial:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid polynomial JSON: {exc}") from exc
    return poly_from_dict(data)
