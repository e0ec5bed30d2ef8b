"""Pure-Python twin of the compiled kernels in ``_core``.

Both backends implement the identical algorithms and consume random
variates from the supplied generator in the same order, so a given seed
produces bit-identical chains on either backend.
"""
from __future__ import annotations

import math

import numpy as np

COMPILED = False

_MAX_HULL_POINTS = 32


def ellipsoid_update(c, P, g):
    """Central-cut update of the ellipsoid (c, P) with the halfspace
    {x : <g, x - c> <= 0}.  Mutates c and P in place.

    Returns the squared semi-axis length g'Pg (<= 0 signals degeneracy,
    in which case nothing is modified).
    """
    n = c.shape[0]
    Pg = P @ g
    gPg = float(g @ Pg)
    if not math.isfinite(gPg) or gPg <= 0.0:
        return gPg
    if n == 1:
        # the 1-D ellipsoid is an interval; a central cut halves it
        r = math.sqrt(P[0, 0])
        c[0] -= 0.5 * r * (1.0 if g[0] > 0 else -1.0)
        P[0, 0] *= 0.25
        return gPg
    b = Pg / math.sqrt(gPg)
    c -= b / (n + 1.0)
    scale = n * n / (n * n - 1.0)
    P -= (2.0 / (n + 1.0)) * np.outer(b, b)
    P *= scale
    P += P.T
    P *= 0.5
    return gPg


def certificate_lower(V, X, G, k, c, P):
    """max_i  V[i] + <G[i], c - X[i]> - sqrt(G[i]' P G[i])  over the first
    k accumulated objective cuts: a lower bound on the objective minimum,
    valid while the minimizer stays inside the ellipsoid (c, P)."""
    Gk = G[:k]
    quad = np.einsum("ij,jk,ik->i", Gk, P, Gk)
    np.clip(quad, 0.0, None, out=quad)
    vals = V[:k] + Gk @ c - np.einsum("ij,ij->i", Gk, X[:k]) - np.sqrt(quad)
    return float(vals.max())


def _radial_logpdf(r, m, c, eta):
    v = -(r - c) * (r - c) / (2.0 * eta)
    if m > 0.0:
        v += m * math.log(r)
    return v


def _radial_dlogpdf(r, m, c, eta):
    v = -(r - c) / eta
    if m > 0.0:
        v += m / r
    return v


def _seg_mass(h, dh, xref, lo, hi):
    # integral of exp(h + dh*(x - xref)) over [lo, hi]
    if hi == math.inf:
        return math.exp(h + dh * (lo - xref)) / (-dh)
    width = hi - lo
    if abs(dh) < 1e-13:
        return math.exp(h + dh * (0.5 * (lo + hi) - xref)) * width
    if dh > 0.0:
        return math.exp(h + dh * (hi - xref)) * (-math.expm1(-dh * width)) / dh
    return math.exp(h + dh * (lo - xref)) * (-math.expm1(dh * width)) / (-dh)


def _seg_draw(dh, lo, hi, u):
    # inverse-CDF draw from density proportional to exp(dh*x) on [lo, hi]
    if hi == math.inf:
        return lo + math.log1p(-u) / dh
    width = hi - lo
    if abs(dh) < 1e-13:
        return lo + u * width
    return lo + math.log1p(u * math.expm1(dh * width)) / dh


class _Hull:
    """Tangent upper hull / chord lower hull of a concave log-density on
    (0, inf), in the style of Gilks-Wild adaptive rejection sampling."""

    def __init__(self, xs, m, c, eta, shift):
        self.m = m
        self.c = c
        self.eta = eta
        self.shift = shift
        self.x = list(xs)
        self.h = [_radial_logpdf(x, m, c, eta) - shift for x in self.x]
        self.dh = [_radial_dlogpdf(x, m, c, eta) for x in self.x]
        self._rebuild()

    def _rebuild(self):
        x, h, dh = self.x, self.h, self.dh
        k = len(x)
        z = [0.0]
        for i in range(k - 1):
            denom = dh[i] - dh[i + 1]
            if denom <= 0.0:
                zi = 0.5 * (x[i] + x[i + 1])
            else:
                zi = (h[i + 1] - h[i] + x[i] * dh[i] - x[i + 1] * dh[i + 1]) / denom
            z.append(min(max(zi, x[i]), x[i + 1]))
        z.append(math.inf)
        self.z = z
        self.mass = [_seg_mass(h[j], dh[j], x[j], z[j], z[j + 1]) for j in range(k)]
        self.total = sum(self.mass)

    def upper(self, j, r):
        return self.h[j] + self.dh[j] * (r - self.x[j])

    def lower(self, r):
        x, h = self.x, self.h
        if r <= x[0] or r >= x[-1]:
            return -math.inf
        j = 0
        while x[j + 1] < r:
            j += 1
        w = (r - x[j]) / (x[j + 1] - x[j])
        return h[j] + w * (h[j + 1] - h[j])

    def insert(self, r):
        if len(self.x) >= _MAX_HULL_POINTS:
            return
        j = 0
        while j < len(self.x) and self.x[j] < r:
            j += 1
        self.x.insert(j, r)
        self.h.insert(j, _radial_logpdf(r, self.m, self.c, self.eta) - self.shift)
        self.dh.insert(j, _radial_dlogpdf(r, self.m, self.c, self.eta))
        self._rebuild()


def radial_ars(m, c, eta, rng, max_trials=10000):
    """Exact draw from the density proportional to
    r^m * exp(-(r-c)^2/(2*eta)) on (0, inf) by adaptive rejection sampling
    with a tangent upper hull and a chord squeeze."""
    rstar = 0.5 * (c + math.sqrt(c * c + 4.0 * m * eta))
    if rstar <= 0.0:
        rstar = math.sqrt(eta)
    shift = _radial_logpdf(rstar, m, c, eta)
    hull = _Hull([0.5 * rstar, rstar, 2.0 * rstar], m, c, eta, shift)

    for _ in range(max_trials):
        u1 = rng.random()
        target = u1 * hull.total
        acc = 0.0
        j = 0
        for j in range(len(hull.mass)):
            acc += hull.mass[j]
            if target <= acc:
                break
        u2 = rng.random()
        r = _seg_draw(hull.dh[j], hull.z[j], hull.z[j + 1], u2)
        if not (r > 0.0) or not math.isfinite(r):
            continue
        w = rng.random()
        if w <= 0.0:
            continue
        logw = math.log(w)
        uval = hull.upper(j, r)
        if logw <= hull.lower(r) - uval:
            return r
        ell = _radial_logpdf(r, m, c, eta) - shift
        if logw <= ell - uval:
            return r
        hull.insert(r)
    raise RuntimeError("adaptive rejection sampling failed to accept within budget")
