# Compiled twin of liftsampler._purecore.  The algorithms and the order in
# which random variates are drawn match the pure-Python module exactly, so
# seeds reproduce identical chains on either backend.

from libc.math cimport sqrt, log, exp, expm1, log1p, isfinite, INFINITY

import numpy as np

COMPILED = True

cdef int _MAX_HULL_POINTS = 32


def ellipsoid_update(double[::1] c, double[:, ::1] P, double[::1] g):
    """Central-cut update of the ellipsoid (c, P) with the halfspace
    {x : <g, x - c> <= 0}.  Mutates c and P in place.

    Returns the squared semi-axis length g'Pg (<= 0 signals degeneracy,
    in which case nothing is modified)."""
    cdef int n = c.shape[0]
    cdef int i, j
    cdef double gPg = 0.0, r, scale, bi
    cdef double[::1] Pg = np.empty(n)
    for i in range(n):
        r = 0.0
        for j in range(n):
            r += P[i, j] * g[j]
        Pg[i] = r
        gPg += g[i] * r
    if not isfinite(gPg) or gPg <= 0.0:
        return gPg
    if n == 1:
        r = sqrt(P[0, 0])
        c[0] -= 0.5 * r * (1.0 if g[0] > 0 else -1.0)
        P[0, 0] *= 0.25
        return gPg
    r = sqrt(gPg)
    scale = n * n / (n * n - 1.0)
    for i in range(n):
        Pg[i] /= r
    for i in range(n):
        c[i] -= Pg[i] / (n + 1.0)
    for i in range(n):
        bi = Pg[i]
        for j in range(n):
            P[i, j] = scale * (P[i, j] - (2.0 / (n + 1.0)) * bi * Pg[j])
    for i in range(n):
        for j in range(i + 1, n):
            r = 0.5 * (P[i, j] + P[j, i])
            P[i, j] = r
            P[j, i] = r
    return gPg


def certificate_lower(double[::1] V, double[:, ::1] X, double[:, ::1] G,
                      int k, double[::1] c, double[:, ::1] P):
    """max_i  V[i] + <G[i], c - X[i]> - sqrt(G[i]' P G[i])  over the first
    k accumulated objective cuts: a lower bound on the objective minimum,
    valid while the minimizer stays inside the ellipsoid (c, P)."""
    cdef int n = c.shape[0]
    cdef int i, a, b
    cdef double best = -INFINITY
    cdef double quad, lin, row, val
    for i in range(k):
        quad = 0.0
        lin = 0.0
        for a in range(n):
            row = 0.0
            for b in range(n):
                row += P[a, b] * G[i, b]
            quad += G[i, a] * row
            lin += G[i, a] * (c[a] - X[i, a])
        if quad < 0.0:
            quad = 0.0
        val = V[i] + lin - sqrt(quad)
        if val > best:
            best = val
    return best


cdef double _radial_logpdf(double r, double m, double c, double eta):
    cdef double v = -(r - c) * (r - c) / (2.0 * eta)
    if m > 0.0:
        v += m * log(r)
    return v


cdef double _radial_dlogpdf(double r, double m, double c, double eta):
    cdef double v = -(r - c) / eta
    if m > 0.0:
        v += m / r
    return v


cdef double _seg_mass(double h, double dh, double xref, double lo, double hi):
    cdef double width
    if hi == INFINITY:
        return exp(h + dh * (lo - xref)) / (-dh)
    width = hi - lo
    if dh < 1e-13 and dh > -1e-13:
        return exp(h + dh * (0.5 * (lo + hi) - xref)) * width
    if dh > 0.0:
        return exp(h + dh * (hi - xref)) * (-expm1(-dh * width)) / dh
    return exp(h + dh * (lo - xref)) * (-expm1(dh * width)) / (-dh)


cdef double _seg_draw(double dh, double lo, double hi, double u):
    cdef double width
    if hi == INFINITY:
        return lo + log1p(-u) / dh
    width = hi - lo
    if dh < 1e-13 and dh > -1e-13:
        return lo + u * width
    return lo + log1p(u * expm1(dh * width)) / dh


def radial_ars(double m, double c, double eta, rng, int max_trials=10000):
    """Exact draw from the density proportional to
    r^m * exp(-(r-c)^2/(2*eta)) on (0, inf) by adaptive rejection sampling
    with a tangent upper hull and a chord squeeze."""
    cdef double[33] x
    cdef double[33] h
    cdef double[33] dh
    cdef double[34] z
    cdef double[33] mass
    cdef int k = 3
    cdef int i, j, t, pos
    cdef double rstar, shift, total, denom, zi
    cdef double u1, u2, w, target, acc, r, uval, lval, ell, frac, logw

    rstar = 0.5 * (c + sqrt(c * c + 4.0 * m * eta))
    if rstar <= 0.0:
        rstar = sqrt(eta)
    shift = _radial_logpdf(rstar, m, c, eta)
    x[0] = 0.5 * rstar
    x[1] = rstar
    x[2] = 2.0 * rstar
    for i in range(3):
        h[i] = _radial_logpdf(x[i], m, c, eta) - shift
        dh[i] = _radial_dlogpdf(x[i], m, c, eta)

    # rebuild breakpoints and segment masses
    total = 0.0
    z[0] = 0.0
    for i in range(k - 1):
        denom = dh[i] - dh[i + 1]
        if denom <= 0.0:
            zi = 0.5 * (x[i] + x[i + 1])
        else:
            zi = (h[i + 1] - h[i] + x[i] * dh[i] - x[i + 1] * dh[i + 1]) / denom
        if zi < x[i]:
            zi = x[i]
        if zi > x[i + 1]:
            zi = x[i + 1]
        z[i + 1] = zi
    z[k] = INFINITY
    for i in range(k):
        mass[i] = _seg_mass(h[i], dh[i], x[i], z[i], z[i + 1])
        total += mass[i]

    for t in range(max_trials):
        u1 = rng.random()
        target = u1 * total
        acc = 0.0
        j = 0
        for j in range(k):
            acc += mass[j]
            if target <= acc:
                break
        u2 = rng.random()
        r = _seg_draw(dh[j], z[j], z[j + 1], u2)
        if not (r > 0.0) or not isfinite(r):
            continue
        w = rng.random()
        if w <= 0.0:
            continue
        logw = log(w)
        uval = h[j] + dh[j] * (r - x[j])
        # chord lower bound (squeeze)
        if r <= x[0] or r >= x[k - 1]:
            lval = -INFINITY
        else:
            i = 0
            while x[i + 1] < r:
                i += 1
            frac = (r - x[i]) / (x[i + 1] - x[i])
            lval = h[i] + frac * (h[i + 1] - h[i])
        if logw <= lval - uval:
            return r
        ell = _radial_logpdf(r, m, c, eta) - shift
        if logw <= ell - uval:
            return r
        if k < _MAX_HULL_POINTS:
            pos = 0
            while pos < k and x[pos] < r:
                pos += 1
            for i in range(k, pos, -1):
                x[i] = x[i - 1]
                h[i] = h[i - 1]
                dh[i] = dh[i - 1]
            x[pos] = r
            h[pos] = ell
            dh[pos] = _radial_dlogpdf(r, m, c, eta)
            k += 1
            total = 0.0
            z[0] = 0.0
            for i in range(k - 1):
                denom = dh[i] - dh[i + 1]
                if denom <= 0.0:
                    zi = 0.5 * (x[i] + x[i + 1])
                else:
                    zi = (h[i + 1] - h[i] + x[i] * dh[i] - x[i + 1] * dh[i + 1]) / denom
                if zi < x[i]:
                    zi = x[i]
                if zi > x[i + 1]:
                    zi = x[i + 1]
                z[i + 1] = zi
            z[k] = INFINITY
            for i in range(k):
                mass[i] = _seg_mass(h[i], dh[i], x[i], z[i], z[i + 1])
                total += mass[i]
    raise RuntimeError("adaptive rejection sampling failed to accept within budget")
