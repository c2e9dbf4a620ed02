import os
import subprocess
import sys

import numpy as np
import numpy.polynomial.polynomial as npoly

from bidisc import _kernels_py, kernels

from conftest import random_interior_points


def _random_grid(seed, shape=(3, 2)):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_eval_matches_polyval2d():
    coeffs = _random_grid(1)
    z1, z2 = random_interior_points(500, seed=2)
    ours = kernels.eval_poly2(coeffs, z1, z2)
    ref = npoly.polyval2d(z1, z2, coeffs)
    assert np.max(np.abs(ours - ref)) <= 1e-13


def test_scalar_input():
    coeffs = _random_grid(3)
    val = kernels.eval_poly2(coeffs, 0.3 + 0.1j, -0.2j)
    ref = npoly.polyval2d(0.3 + 0.1j, -0.2j, coeffs)
    assert abs(val - ref) <= 1e-14


def test_backends_agree_to_roundoff():
    # Same multiply-add sequence, but numpy's SIMD complex product fuses
    # multiply-adds, so agreement is to the last few bits, not bit-exact.
    coeffs = _random_grid(4, shape=(4, 3))
    z1, z2 = random_interior_points(4096, seed=5)
    a = kernels.eval_poly2(coeffs, z1, z2)
    b = _kernels_py.eval_poly2(coeffs, z1, z2)
    assert np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-30)) <= 1e-13


def test_each_backend_self_deterministic():
    coeffs = _random_grid(11, shape=(3, 2))
    z1, z2 = random_interior_points(2048, seed=12)
    for mod in (kernels, _kernels_py):
        a = mod.eval_poly2(coeffs, z1, z2)
        b = mod.eval_poly2(coeffs.copy(), z1.copy(), z2.copy())
        assert np.array_equal(a, b)


def test_box_hits_parity_and_correctness():
    num1, den1 = _random_grid(6), _random_grid(7) + 5.0
    num2, den2 = _random_grid(8), _random_grid(9) + 5.0
    z1, z2 = random_interior_points(2000, seed=10)
    c1, c2, d1, d2 = 1.0 + 0.0j, -1.0 + 0.0j, 0.4, 0.7
    k, mask = kernels.box_hits(num1, den1, num2, den2, z1, z2, c1, c2, d1, d2)
    kp, maskp = _kernels_py.box_hits(num1, den1, num2, den2, z1, z2, c1, c2, d1, d2)
    assert k == kp
    assert np.array_equal(mask, maskp)
    w1 = npoly.polyval2d(z1, z2, num1) / npoly.polyval2d(z1, z2, den1)
    w2 = npoly.polyval2d(z1, z2, num2) / npoly.polyval2d(z1, z2, den2)
    ref = (np.abs(w1 - c1) < d1) & (np.abs(w2 - c2) < d2)
    assert np.array_equal(mask, ref)
    assert k == int(np.count_nonzero(ref))


def test_env_var_forces_pure_python():
    code = ("import bidisc.kernels as k; print(k.BACKEND)")
    env = dict(os.environ, BIDISC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
