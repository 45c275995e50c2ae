"""Monic symmetric biquadratic forms: PSD classification, the parameter
tetrahedron, and constructive square certificates.

A monic symmetric form is determined by (m, n, a, b, c). Its nonnegativity is
equivalent to four linear inequalities in (a, b, c) (plus one rational
inequality that turns out to be redundant), and the feasible set is the
tetrahedron spanned by four explicit vertices, each of which carries a short
closed-form square certificate. Any interior point inherits a certificate by
taking the barycentric combination of the vertex certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exactla
from .core import (
    BilinearForm,
    MonicParams,
    SOSCertificate,
    SymmetricBiquadraticTensor,
    is_x_symmetric,
    is_y_symmetric,
    monic_to_tensor,
    tensors_equal,
)

__all__ = [
    "CONDITION_LABELS",
    "MEigenEntry",
    "MEigenReport",
    "Tetrahedron",
    "m_eigen_monic",
    "psd_conditions",
    "tetrahedron",
    "barycentric",
    "membership_equivalence_check",
    "vertex_sos",
    "monic_sos_decompose",
    "symmetric_sos_decompose",
    "merge_proportional",
    "read_monic_params",
]

CONDITION_LABELS = ("i", "ii", "iii", "iv", "v")


@dataclass(frozen=True)
class MEigenEntry:
    """One critical value of the monic form on the unit spheres.

    ``value`` is None exactly when the entry is inapplicable (only possible
    for label 'v').
    """

    label: str
    value: Fraction | None
    applicable: bool


@dataclass(frozen=True)
class MEigenReport:
    """The five closed-form critical values of a monic symmetric form.

    Labels 'i'..'iv' are always applicable; 'v' applies only when c != 0 and
    a/c in [1-n, 1) and b/c in [1-m, 1) (the range in which the interior
    critical pair with alpha_x^2 = (c-b)/c, alpha_y^2 = (c-a)/c exists on the
    spheres). The form is PSD iff every applicable value is >= 0.
    """

    m: int
    n: int
    entries: tuple

    def __getitem__(self, label: str) -> MEigenEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def applicable_values(self) -> list[Fraction]:
        return [e.value for e in self.entries if e.applicable]

    def min_value(self) -> Fraction:
        return min(self.applicable_values())

    def all_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.applicable_values())


def m_eigen_monic(p: MonicParams) -> MEigenReport:
    """Closed-form critical values of the monic form with parameters p.

        (i)   1 - b + (m-1)(a - c)
        (ii)  1 - a + (n-1)(b - c)
        (iii) 1 - a - b + c
        (iv)  1 + (m-1)a + (n-1)b + (m-1)(n-1)c
        (v)   1 - ab/c, when applicable (see MEigenReport).

    Each is the form value at a specific unit-sphere pair, so the form is PSD
    iff all applicable values are nonnegative.
    """
    m, n = p.m, p.n
    a, b, c = p.abc
    one = Fraction(1)
    vals = [
        one - b + (m - 1) * (a - c),
        one - a + (n - 1) * (b - c),
        one - a - b + c,
        one + (m - 1) * a + (n - 1) * b + (m - 1) * (n - 1) * c,
    ]
    entries = [MEigenEntry(lab, v, True) for lab, v in zip(CONDITION_LABELS[:4], vals)]
    v_applies = (
        c != 0
        and Fraction(1 - n) <= a / c < 1
        and Fraction(1 - m) <= b / c < 1
    )
    entries.append(MEigenEntry("v", one - a * b / c if v_applies else None, v_applies))
    return MEigenReport(m, n, tuple(entries))


def psd_conditions(p: MonicParams) -> tuple[bool, MEigenReport]:
    """Decide PSD-ness of the monic form; returns (verdict, full report)."""
    report = m_eigen_monic(p)
    return report.all_nonnegative(), report


@dataclass(frozen=True)
class Tetrahedron:
    """The PSD parameter region of monic (m, n) forms, as four vertices.

        V1 = (1, 1, 1)
        V2 = (-1/(m-1), -1/(n-1), 1/((m-1)(n-1)))
        V3 = (-1/(m-1), 1, -1/(m-1))
        V4 = (1, -1/(n-1), -1/(n-1))

    The vertices are affinely independent for all m, n >= 2.
    """

    m: int
    n: int
    vertices: tuple

    def vertex(self, v: int) -> tuple[Fraction, Fraction, Fraction]:
        """1-based vertex accessor (v in 1..4)."""
        return self.vertices[v - 1]


def tetrahedron(m: int, n: int) -> Tetrahedron:
    if m < 2 or n < 2:
        raise ValueError(f"tetrahedron needs m, n >= 2, got ({m}, {n})")
    im = Fraction(1, m - 1)
    jn = Fraction(1, n - 1)
    one = Fraction(1)
    verts = (
        (one, one, one),
        (-im, -jn, im * jn),
        (-im, one, -im),
        (one, -jn, -jn),
    )
    return Tetrahedron(m, n, verts)


def barycentric(p: MonicParams):
    """Barycentric coordinates of (a, b, c) in the (m, n) tetrahedron.

    Solves the exact 4x4 system [V1..V4; 1 1 1 1] lam = [(a,b,c); 1] (unique
    by affine independence) and returns the tuple lam when every coordinate
    is >= 0, else None: the point lies outside, i.e. the form is not PSD.
    """
    tet = tetrahedron(p.m, p.n)
    A = [[tet.vertices[v][coord] for v in range(4)] for coord in range(3)]
    A.append([Fraction(1)] * 4)
    lam = exactla.solve_linear(A, [p.a, p.b, p.c, Fraction(1)])
    if any(w < 0 for w in lam):
        return None
    return tuple(lam)


def membership_equivalence_check(p: MonicParams) -> bool:
    """Audit that the inequality classifier and tetrahedron membership agree.

    Returns True iff psd_conditions(p) and (barycentric(p) is not None) give
    the same verdict. Additionally enforces the redundancy of condition (v):
    if (i)-(iv) all hold, (v) must hold too; a violation would contradict the
    convexity argument behind the vertex certificates, so it raises.
    """
    psd, report = psd_conditions(p)
    inside = barycentric(p) is not None
    first_four = all(report[lab].value >= 0 for lab in CONDITION_LABELS[:4])
    v = report["v"]
    if first_four and v.applicable and v.value < 0:
        raise RuntimeError(f"condition (v) violated inside the tetrahedron at {p}")
    return psd == inside


def vertex_sos(v: int, m: int, n: int) -> SOSCertificate:
    """Closed-form square certificate of tetrahedron vertex v (1-based).

        V1: ( sum_i x_i * sum_j y_j )^2, weight 1
        V2: ((x_i - x_k)(y_j - y_l))^2 over i<k, j<l, weights 1/((m-1)(n-1))
        V3: ((x_i - x_k) * sum_j y_j)^2 over i<k, weights 1/(m-1)
        V4: ( sum_i x_i * (y_j - y_l))^2 over j<l, weights 1/(n-1)

    The expansion equals monic_to_tensor of the vertex parameters exactly.
    """
    if m < 2 or n < 2:
        raise ValueError(f"vertex certificates need m, n >= 2, got ({m}, {n})")
    one = Fraction(1)
    zero = Fraction(0)

    def form(x_signs: dict, y_signs: dict) -> BilinearForm:
        W = np.empty((m, n), dtype=object)
        for i in range(m):
            xi = x_signs.get(i, zero)
            for j in range(n):
                W[i, j] = xi * y_signs.get(j, zero)
        return BilinearForm(m, n, W)

    all_x = {i: one for i in range(m)}
    all_y = {j: one for j in range(n)}
    terms = []
    if v == 1:
        terms.append((one, form(all_x, all_y)))
    elif v == 2:
        w = Fraction(1, (m - 1) * (n - 1))
        for i in range(m):
            for k in range(i + 1, m):
                for j in range(n):
                    for l in range(j + 1, n):
                        terms.append((w, form({i: one, k: -one}, {j: one, l: -one})))
    elif v == 3:
        w = Fraction(1, m - 1)
        for i in range(m):
            for k in range(i + 1, m):
                terms.append((w, form({i: one, k: -one}, all_y)))
    elif v == 4:
        w = Fraction(1, n - 1)
        for j in range(n):
            for l in range(j + 1, n):
                terms.append((w, form(all_x, {j: one, l: -one})))
    else:
        raise ValueError(f"vertex id must be 1..4, got {v}")
    return SOSCertificate(m, n, tuple(terms))


def merge_proportional(cert: SOSCertificate) -> SOSCertificate:
    """Combine terms whose bilinear forms are proportional.

    Each form is normalized by its first nonzero entry (row-major scan);
    terms sharing a normalized form merge into a single weight
    sum_p c_p * lead_p^2. Zero weights and zero forms are dropped. The
    expansion is unchanged. This is a cheap tidy-up, not rank minimization.
    """
    groups: dict[tuple, Fraction] = {}
    order: list[tuple] = []
    reps: dict[tuple, BilinearForm] = {}
    for weight, form in cert.terms:
        if weight == 0 or form.is_zero():
            continue
        nz = form.nonzero_entries()
        lead = nz[0][2]
        key = tuple((form.W / lead).reshape(-1))
        if key not in groups:
            groups[key] = Fraction(0)
            order.append(key)
            reps[key] = BilinearForm(cert.m, cert.n, (form.W / lead).reshape(cert.m, cert.n))
        groups[key] += weight * lead * lead
    terms = tuple((groups[k], reps[k]) for k in order)
    return SOSCertificate(cert.m, cert.n, terms)


def monic_sos_decompose(p: MonicParams) -> SOSCertificate | None:
    """Square certificate for a PSD monic form, or None when not PSD.

    Writes (a, b, c) as a convex combination of the tetrahedron vertices and
    concatenates the vertex certificates with weights scaled by the
    barycentric coordinates (zero-coordinate vertices are skipped), then
    merges proportional terms. The expansion equals monic_to_tensor(p).
    """
    lam = barycentric(p)
    if lam is None:
        return None
    terms = []
    for v, weight in enumerate(lam, start=1):
        if weight == 0:
            continue
        for w, form in vertex_sos(v, p.m, p.n).terms:
            terms.append((weight * w, form))
    return merge_proportional(SOSCertificate(p.m, p.n, tuple(terms)))


def read_monic_params(t: SymmetricBiquadraticTensor, scale: Fraction) -> MonicParams:
    """Read (a, b, c) of ``t / scale`` from the canonical entry slots."""
    a = t.entries[0, 0, 1, 0] / scale
    b = t.entries[0, 0, 0, 1] / scale
    c = t.entries[0, 0, 1, 1] / scale
    return MonicParams(t.m, t.n, a, b, c)


def symmetric_sos_decompose(t: SymmetricBiquadraticTensor) -> SOSCertificate | None:
    """Square certificate for any PSD tensor of a fully symmetric form.

    Requires the tensor to be invariant under permutations of the x-variables
    and of the y-variables (raises otherwise). Let d be the common diagonal
    coefficient: d < 0 means not PSD (None); d = 0 forces the zero form (an
    empty certificate) unless some entry is nonzero (None); d > 0 scales to
    the monic case, decomposes there and scales the weights back by d.
    """
    if not (is_x_symmetric(t) and is_y_symmetric(t)):
        raise ValueError("tensor is not x- and y-permutation symmetric")
    if t.is_zero():
        return SOSCertificate(t.m, t.n, ())
    d = t.entries[0, 0, 0, 0]
    if d <= 0:
        return None
    if t.m < 2 or t.n < 2:
        raise ValueError("positive-diagonal decomposition needs m, n >= 2")
    p = read_monic_params(t, d)
    if not tensors_equal(monic_to_tensor(p), SymmetricBiquadraticTensor(t.m, t.n, t.entries / d)):
        raise ValueError("tensor is not a scaled monic symmetric tensor")
    cert = monic_sos_decompose(p)
    if cert is None:
        return None
    return SOSCertificate(t.m, t.n, tuple((d * w, f) for (w, f) in cert.terms))
