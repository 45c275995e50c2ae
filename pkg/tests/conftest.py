"""Shared test helpers: independent oracles and random rational data.

The oracles here deliberately avoid the library's own code paths: the monic
form is evaluated term by term from its defining four sums, and certificates
are evaluated as literal weighted squares. Tests compare library output
against these.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from biquad.core import BiquadraticTensor, symmetrize


def random_rational(rng, denom=12, lo=-3, hi=3) -> Fraction:
    return Fraction(int(rng.integers(lo * denom, hi * denom + 1)), denom)


def random_rational_vector(rng, length, denom=12, lo=-3, hi=3):
    return [random_rational(rng, denom, lo, hi) for _ in range(length)]


def random_symmetric_tensor(rng, m, n, denom=8):
    arr = np.empty((m, n, m, n), dtype=object)
    for idx in np.ndindex(m, n, m, n):
        arr[idx] = Fraction(int(rng.integers(-denom, denom + 1)), denom)
    return symmetrize(BiquadraticTensor(m, n, arr))


def monic_form_value(m, n, a, b, c, x, y):
    """Term-by-term evaluation of the monic symmetric form.

    Sums the four defining blocks directly:
      sum_i sum_j x_i^2 y_j^2
      + a sum_{i != k} sum_j x_i x_k y_j^2
      + b sum_i sum_{j != l} x_i^2 y_j y_l
      + c sum_{i != k} sum_{j != l} x_i y_j x_k y_l
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    t0 = sum(x[i] * x[i] * y[j] * y[j] for i in range(m) for j in range(n))
    t1 = sum(
        x[i] * x[k] * y[j] * y[j]
        for i in range(m) for k in range(m) if i != k
        for j in range(n)
    )
    t2 = sum(
        x[i] * x[i] * y[j] * y[l]
        for i in range(m)
        for j in range(n) for l in range(n) if j != l
    )
    t3 = sum(
        x[i] * y[j] * x[k] * y[l]
        for i in range(m) for k in range(m) if i != k
        for j in range(n) for l in range(n) if j != l
    )
    return t0 + a * t1 + b * t2 + c * t3


def certificate_value(cert, x, y):
    """sum_p c_p * (sum_ij W_p[i,j] x_i y_j)^2, computed literally."""
    total = Fraction(0)
    for w, form in cert.terms:
        f = sum(form.W[i, j] * x[i] * y[j] for i in range(cert.m) for j in range(cert.n))
        total += w * f * f
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
