"""Pure-python (numpy) implementations of the hot kernels.

The compiled twin in ``_kernels.pyx`` performs the same multiply-add sequence
per sample; the backends agree to floating-point roundoff (numpy's SIMD
complex product fuses multiply-adds, so not bit-exactly), and each backend is
bit-deterministic on its own.
"""

import numpy as np

BACKEND = "python"


def eval_poly2(coeffs, z1, z2):
    """Evaluate a bivariate polynomial at a batch of points.

    ``coeffs[j, k]`` multiplies z1**j * z2**k.  Horner in z2 inside Horner in
    z1, vectorized over the sample axis.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    z1 = np.asarray(z1, dtype=np.complex128)
    z2 = np.asarray(z2, dtype=np.complex128)
    n1, m1 = coeffs.shape
    acc = np.zeros_like(z1)
    for j in range(n1 - 1, -1, -1):
        row = np.full_like(z2, coeffs[j, m1 - 1])
        for k in range(m1 - 2, -1, -1):
            row = row * z2 + coeffs[j, k]
        acc = acc * z1 + row
    return acc


def eval_rational2(num, den, z1, z2):
    """num(z)/den(z) at a batch of points; caller guards against poles."""
    return eval_poly2(num, z1, z2) / eval_poly2(den, z1, z2)


def box_hits(num1, den1, num2, den2, z1, z2, c1, c2, d1, d2):
    """Count samples z with |f(z)-c1| < d1 and |g(z)-c2| < d2.

    f = num1/den1 and g = num2/den2.  Returns (count, mask).
    """
    w1 = eval_rational2(num1, den1, z1, z2)
    w2 = eval_rational2(num2, den2, z1, z2)
    mask = (np.abs(w1 - c1) < d1) & (np.abs(w2 - c2) < d2)
    return int(np.count_nonzero(mask)), mask
