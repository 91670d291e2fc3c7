#!/usr/bin/env python3
"""Independent reference values for the unit tests.

Everything here is computed with exact rationals (fractions) or 40-digit
mpmath arithmetic, from the defining formulas, without the C++ code paths
(no log-space basis, no compensated sums, no LU, no barycentric weights).
Writes tests/golden/oracle.json.
"""
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40


def basis(n, k, x):
    x = mp.mpf(x)
    return mp.binomial(n, k) * x**k * (1 - x) ** (n - k)


def psi_system(r):
    size = 2 * r + 1
    rows = []
    for m in range(size):
        row = []
        for j in range(size):
            v = 1
            for s in range(m):
                v *= 2 * r + 1 + j - s
            row.append(Fraction(v))
        rows.append(row)
    return rows


def solve_exact(a, b):
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    det = Fraction(1)
    for c in range(n):
        p = next(i for i in range(c, n) if m[i][c] != 0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [vi - f * vc for vi, vc in zip(m[i], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)], det


def psi_coeffs(r):
    a, det = solve_exact(psi_system(r), [Fraction(1)] + [Fraction(0)] * (2 * r))
    return a, det


def psi_value(a, r, x):
    x = mp.mpf(x)
    if x <= 0:
        return mp.mpf(0)
    if x >= 1:
        return mp.mpf(1)
    return sum(mp.mpf(c.numerator) / c.denominator * x ** (2 * r + 1 + j) for j, c in enumerate(a))


def combination(nodes):
    out = []
    for i, ni in enumerate(nodes):
        c = Fraction(1)
        for j, nj in enumerate(nodes):
            if j != i:
                c *= Fraction(ni, ni - nj)
        out.append(c)
    return out


def floor_div(num, n):
    return Fraction(math.floor(num), n)


class Blend:
    """F_n at degree n, built from the defining floor formulas in exact rationals."""

    def __init__(self, n, r, xi, f, a):
        self.r, self.f, self.a = r, f, a
        nxi = n * Fraction(xi)
        self.nodes = [floor_div(nxi - (Fraction(r - 1, 2) + i), n) for i in range(1, r + 2)]
        root = mp.sqrt(n)
        c = mp.mpf(nxi.numerator) / nxi.denominator
        self.breaks = [mp.floor(c - 2 * root) / n, mp.floor(c - root) / n, mp.floor(c + root) / n, mp.floor(c + 2 * root) / n]
        self.fx = [f(mp.mpf(x.numerator) / x.denominator) for x in self.nodes]

    def h(self, x):
        total = mp.mpf(0)
        xs = [mp.mpf(v.numerator) / v.denominator for v in self.nodes]
        for i, xi in enumerate(xs):
            l = mp.mpf(1)
            for j, xj in enumerate(xs):
                if j != i:
                    l *= (x - xj) / (xi - xj)
            total += self.fx[i] * l
        return total

    def __call__(self, x):
        b = self.breaks
        if x <= b[0] or x >= b[3]:
            return self.f(x)
        hx = self.h(x)
        if b[1] <= x <= b[2]:
            return hx
        p1 = psi_value(self.a, self.r, (x - b[0]) / (b[1] - b[0]))
        p2 = psi_value(self.a, self.r, (x - b[2]) / (b[3] - b[2]))
        return self.f(x) * (1 - p1 + p2) + p1 * (1 - p2) * hx


def modified_operator(n, r, xi, f, x):
    a, _ = psi_coeffs(r)
    nodes = [(i + 1) * n for i in range(r)]
    coeffs = combination(nodes)
    total = mp.mpf(0)
    for ni, ci in zip(nodes, coeffs):
        blend = Blend(ni, r, xi, f, a)
        s = sum(blend(mp.mpf(k) / ni) * basis(ni, k, x) for k in range(ni + 1))
        total += mp.mpf(ci.numerator) / ci.denominator * s
    return total


def modified_operator_poly(n, r, xi, f):
    """Returns x -> B_{n,r}(F_n f, x) with the samples frozen, for differentiation."""
    a, _ = psi_coeffs(r)
    nodes = [(i + 1) * n for i in range(r)]
    coeffs = combination(nodes)
    tables = []
    for ni, ci in zip(nodes, coeffs):
        blend = Blend(ni, r, xi, f, a)
        tables.append((ni, mp.mpf(ci.numerator) / ci.denominator, [blend(mp.mpf(k) / ni) for k in range(ni + 1)]))

    def g(x):
        return sum(c * sum(v * basis(ni, k, x) for k, v in enumerate(vals)) for ni, c, vals in tables)

    return g


def grid(size, center):
    """Same construction as EvaluationGrid::make, in IEEE doubles."""
    cluster = (size + 7) // 8 + 1
    endpoint = size // 40
    backbone = size - 2 * cluster - 2 * endpoint
    pts = [i / (backbone - 1) for i in range(backbone)]

    def geometric(count, outer, inner, place):
        ratio = math.pow(inner / outer, 1.0 / (count - 1))
        d = outer
        for _ in range(count):
            pts.extend(place(d))
            d *= ratio

    geometric(cluster, 0.05, 1e-7, lambda d: (center - d, center + d))
    geometric(endpoint, 0.01, 1e-8, lambda d: (d, 1.0 - d))
    pts = sorted(x for x in pts if 0.0 <= x <= 1.0 and abs(x - center) > 1e-12)
    out = []
    for x in pts:
        if not out or x - out[-1] > 1e-15:
            out.append(x)
    return out


def lemma1_max(u, v, n, pts):
    best = mp.mpf(0)
    for x in pts:
        if not (1.0 / n <= x <= 1.0 - 1.0 / n):
            continue
        xm = mp.mpf(x)
        s = sum((mp.mpf(k) / n) ** (-u) * (1 - mp.mpf(k) / n) ** (-v) * basis(n, k, xm) for k in range(1, n))
        best = max(best, s / (xm ** (-u) * (1 - xm) ** (-v)))
    return best


def lemma6_max(beta, alpha, xi, n, pts):
    lo = max(0, math.ceil(n * xi - math.sqrt(n)))
    hi = min(n, math.floor(n * xi + math.sqrt(n)))
    best = mp.mpf(0)
    for x in pts:
        if not (1.0 / n <= x <= 1.0 - 1.0 / n):
            continue
        xm = mp.mpf(x)
        s = sum(abs(k - n * xm) ** beta * basis(n, k, xm) for k in range(lo, hi + 1))
        phi = mp.sqrt(xm * (1 - xm))
        best = max(best, abs(xm - xi) ** alpha * s / (mp.mpf(n) ** (beta - alpha / 2) * phi**beta))
    return best


def modulus_square(alpha, xi, t, h_count, pts):
    """Weighted modulus of x^2 with second differences: the differences are exact constants."""
    hs = []
    m = 0
    while True:
        h = 0.125 * 2.0 ** (-m / h_count)
        if h < 2.0**-20:
            break
        if h <= t * (1.0 + 1e-12):
            hs.append(h)
        m += 1
    best = mp.mpf(0)
    for h in hs:
        edge = 16.0 * h * h
        interior = left = right = mp.mpf(0)
        for x in pts:
            w = abs(mp.mpf(x) - xi) ** alpha
            phi = math.sqrt(x * (1.0 - x))
            step = h * phi
            if edge <= x <= 1.0 - edge and x - step >= -1e-14 and x + step <= 1.0 + 1e-14:
                interior = max(interior, w * 2 * mp.mpf(step) ** 2)
            if x <= edge and x + 2 * h <= 1.0:
                left = max(left, w * 2 * mp.mpf(h) ** 2)
            if x >= 1.0 - edge and x - 2 * h >= 0.0:
                right = max(right, w * 2 * mp.mpf(h) ** 2)
        best = max(best, interior + left + right)
    return best


def f_sin(x):
    return mp.sin(mp.pi * x)


def f_power(xi, beta):
    c = mp.mpf(xi.numerator) / xi.denominator
    return lambda x: abs(x - c) ** (-beta)


# the double nearest 0.513, exactly as the C++ side sees it
XI = Fraction(0.513)


def num(v):
    return float(v)


def main():
    out = {}
    out["basis"] = [
        {"n": n, "k": k, "x": x, "p": num(basis(n, k, x))}
        for n, k, x in [
            (10, 3, 0.3),
            (2, 1, 0.5),
            (100, 37, 0.41),
            (1000, 513, 0.513),
            (4096, 1, 1e-3),
            (4096, 2048, 0.5),
            (4096, 4000, 0.97),
            (20000, 6000, 0.3),
            (100000, 50000, 0.5),
            (100000, 3, 1e-4),
        ]
    ]
    out["psi"] = []
    for r in range(1, 5):
        a, det = psi_coeffs(r)
        xs = [0.1, 0.25, 0.5, 0.77, 0.95]
        out["psi"].append(
            {
                "r": r,
                "coefficients": [num(c) for c in a],
                "determinant": num(abs(det)),
                "x": xs,
                "values": [num(psi_value(a, r, x)) for x in xs],
            }
        )
    out["combination"] = [
        {"r": r, "coefficients": [num(c) for c in combination([(i + 1) for i in range(r)])],
         "abs_sum": num(sum(abs(c) for c in combination([(i + 1) for i in range(r)])))}
        for r in range(1, 7)
    ]
    xs = [0.05, 0.3, 0.47, 0.5, 0.513, 0.52, 0.56, 0.8, 0.99]
    out["operator"] = []
    for label, f, n, r in [
        ("smooth_sin", f_sin, 256, 2),
        ("singular_power:beta=0.5", f_power(XI, mp.mpf("0.5")), 256, 2),
        ("smooth_sin", f_sin, 64, 1),
        ("singular_power:beta=0.5", f_power(XI, mp.mpf("0.5")), 100, 3),
    ]:
        xi = XI
        wrapped = f
        out["operator"].append(
            {"function": label, "n": n, "r": r, "xi": 0.513, "x": xs,
             "values": [num(modified_operator(n, r, xi, wrapped, mp.mpf(x))) for x in xs]}
        )
    g = modified_operator_poly(64, 1, XI, f_sin)
    dx = [0.3, 0.5, 0.7]
    out["derivative"] = {"function": "smooth_sin", "n": 64, "r": 1, "xi": 0.513, "x": dx,
                         "values": [num(mp.diff(g, mp.mpf(x), 2)) for x in dx]}
    g2 = modified_operator_poly(32, 2, XI, f_power(XI, mp.mpf("0.5")))
    out["derivative_singular"] = {"function": "singular_power:beta=0.5", "n": 32, "r": 2, "xi": 0.513, "x": dx,
                                  "values": [num(mp.diff(g2, mp.mpf(x), 4)) for x in dx]}
    pts_half = grid(2001, 0.5)
    out["lemma1"] = {"u": 1.0, "v": 0.0, "n": 100, "grid": 2001, "center": 0.5,
                     "max_ratio": num(lemma1_max(1, 0, 100, pts_half))}
    out["lemma6"] = {"beta": 2.0, "alpha": 1.0, "xi": 0.5, "n": 256, "grid": 2001,
                     "max_ratio": num(lemma6_max(2, 1, 0.5, 256, pts_half))}
    out["modulus"] = {"function": "smooth_poly:c2=1", "r2": 2, "alpha": 1.0, "xi": 0.5, "t": 0.1, "h_count": 8,
                      "grid": 2001, "value": num(modulus_square(1, 0.5, 0.1, 8, pts_half))}
    out["grid"] = {"size": 2001, "center": 0.5, "count": len(pts_half), "sum": math.fsum(pts_half)}
    path = Path(__file__).resolve().parent.parent / "golden" / "oracle.json"
    path.write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {path}", file=sys.stderr)


if __name__ == "__main__":
    main()
