"""Fused hot-path kernels for the solver and stepper inner loops.

Each function has a plain numpy reference built on _stencils (the *_np
names) and, when numba is importable, a fused sequential jit variant
that the dispatch names point to. Fusion only reassociates per-point
arithmetic, so the two paths agree to rounding; the equivalence is
pinned by tests. Reductions accumulate sequentially in float64, which
keeps repeated runs bit-identical.
"""

from __future__ import annotations

import numpy as np

from . import _stencils

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


# ---------------------------------------------------------------- numpy path

def apply_system_np(phi, c0, c1, c2, h):
    """N(phi) together with the vertex gradient it computed on the way."""
    gx, gy = _stencils.skew_grad(phi, h)
    r = gx * gx + gy * gy
    out = (
        c0 * phi
        - c1 * _stencils.skew_div(r * gx, r * gy, h)
        + c2 * _stencils.bih(phi, h)
    )
    return out, gx, gy


def line_pass_np(gx, gy, d, h):
    """Vertex sums (|g|^2|e|^2, (g.e)^2, (g.e)|e|^2, |e|^4), e = G d."""
    ex, ey = _stencils.skew_grad(d, h)
    e2 = ex * ex + ey * ey
    ge = gx * ex + gy * ey
    g2 = gx * gx + gy * gy
    return (
        float(np.sum(g2 * e2)),
        float(np.sum(ge * ge)),
        float(np.sum(ge * e2)),
        float(np.sum(e2 * e2)),
    )


def lap_sumsq_np(a, h):
    lap = _stencils.lap(a, h)
    return float(np.dot(lap.ravel(), lap.ravel()))


def energy_sums_np(phi, h):
    """Sums (|g|^4, |g|^2, (lap phi)^2) without the h^2 weight."""
    gx, gy = _stencils.skew_grad(phi, h)
    g2 = gx * gx + gy * gy
    lap = _stencils.lap(phi, h)
    return (
        float(np.sum(g2 * g2)),
        float(g2.sum()),
        float(np.dot(lap.ravel(), lap.ravel())),
    )


def diff_sums_np(a, b, h):
    """Sums ((a-b)^2, |edge grad (a-b)|^2) without the h^2 weight."""
    d = a - b
    ew, ns = _stencils.edge_grad(d, h)
    return (
        float(np.dot(d.ravel(), d.ravel())),
        float(np.dot(ew.ravel(), ew.ravel()))
        + float(np.dot(ns.ravel(), ns.ravel())),
    )


def bdf2_rhs_np(pk, pkm1, s, A, h):
    """Right-hand side of the BDF2 system on raw arrays."""
    extrap = 2.0 * pk - pkm1
    return (
        0.5 * (4.0 * pk - pkm1)
        - s * _stencils.skew_lap(extrap, h)
        + A * s * s * _stencils.bih(pk, h)
    )


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _apply_system_nb(phi, c0, c1, c2, h):
        m = phi.shape[0]
        inv2h = 1.0 / (2.0 * h)
        invh2 = 1.0 / (h * h)
        gx = np.empty_like(phi)
        gy = np.empty_like(phi)
        rgx = np.empty_like(phi)
        rgy = np.empty_like(phi)
        lapp = np.empty_like(phi)
        for i in range(m):
            ip = i + 1 if i + 1 < m else 0
            im = i - 1 if i > 0 else m - 1
            for j in range(m):
                jp = j + 1 if j + 1 < m else 0
                jm = j - 1 if j > 0 else m - 1
                a = phi[i, j]
                axp = phi[ip, j]
                ayp = phi[i, jp]
                axyp = phi[ip, jp]
                gxv = (axyp - ayp + axp - a) * inv2h
                gyv = (axyp - axp + ayp - a) * inv2h
                gx[i, j] = gxv
                gy[i, j] = gyv
                r = gxv * gxv + gyv * gyv
                rgx[i, j] = r * gxv
                rgy[i, j] = r * gyv
                lapp[i, j] = (
                    axp + phi[im, j] + ayp + phi[i, jm] - 4.0 * a
                ) * invh2
        out = np.empty_like(phi)
        for i in range(m):
            ip = i + 1 if i + 1 < m else 0
            im = i - 1 if i > 0 else m - 1
            for j in range(m):
                jp = j + 1 if j + 1 < m else 0
                jm = j - 1 if j > 0 else m - 1
                div = (
                    rgx[i, j] - rgx[im, j] + rgx[i, jm] - rgx[im, jm]
                    + rgy[i, j] - rgy[i, jm] + rgy[im, j] - rgy[im, jm]
                ) * inv2h
                bi = (
                    lapp[ip, j] + lapp[im, j] + lapp[i, jp] + lapp[i, jm]
                    - 4.0 * lapp[i, j]
                ) * invh2
                out[i, j] = c0 * phi[i, j] - c1 * div + c2 * bi
        return out, gx, gy

    @njit(cache=True)
    def _line_pass_nb(gx, gy, d, h):
        m = d.shape[0]
        inv2h = 1.0 / (2.0 * h)
        s_g2e2 = 0.0
        s_gesq = 0.0
        s_gee2 = 0.0
        s_e4 = 0.0
        for i in range(m):
            ip = i + 1 if i + 1 < m else 0
            for j in range(m):
                jp = j + 1 if j + 1 < m else 0
                a = d[i, j]
                exv = (d[ip, jp] - d[i, jp] + d[ip, j] - a) * inv2h
                eyv = (d[ip, jp] - d[ip, j] + d[i, jp] - a) * inv2h
                e2 = exv * exv + eyv * eyv
                ge = gx[i, j] * exv + gy[i, j] * eyv
                g2 = gx[i, j] * gx[i, j] + gy[i, j] * gy[i, j]
                s_g2e2 += g2 * e2
                s_gesq += ge * ge
                s_gee2 += ge * e2
                s_e4 += e2 * e2
        return s_g2e2, s_gesq, s_gee2, s_e4

    @njit(cache=True)
    def _lap_sumsq_nb(a, h):
        m = a.shape[0]
        invh2 = 1.0 / (h * h)
        total = 0.0
        for i in range(m):
            ip = i + 1 if i + 1 < m else 0
            im = i - 1 if i > 0 else m - 1
            for j in range(m):
                jp = j + 1 if j + 1 < m else 0
                jm = j - 1 if j > 0 else m - 1
                v = (
                    a[ip, j] + a[im, j] + a[i, jp] + a[i, jm] - 4.0 * a[i, j]
                ) * invh2
                total += v * v
        return total

    @njit(cache=True)
    def _energy_sums_nb(phi, h):
        m = phi.shape[0]
        inv2h = 1.0 / (2.0 * h)
        invh2 = 1.0 / (h * h)
        s_g4 = 0.0
        s_g2 = 0.0
        s_lap2 = 0.0
        for i in range(m):
            ip = i + 1 if i + 1 < m else 0
            im = i - 1 if i > 0 else m - 1
            for j in range(m):
                jp = j + 1 if j + 1 < m else 0
                jm = j - 1 if j > 0 else m - 1
                a = phi[i, j]
                gxv = (phi[ip, jp] - phi[i, jp] + phi[ip, j] - a) * inv2h
                gyv = (phi[ip, jp] - phi[ip, j] + phi[i, jp] - a) * inv2h
                g2 = gxv * gxv + gyv * gyv
                s_g2 += g2
                s_g4 += g2 * g2
                v = (
                    phi[ip, j] + phi[im, j] + phi[i, jp] + phi[i, jm]
                    - 4.0 * a
                ) * invh2
                s_lap2 += v * v
        return s_g4, s_g2, s_lap2

    @njit(cache=True)
    def _diff_sums_nb(a, b, h):
        m = a.shape[0]
        invh = 1.0 / h
        s_sq = 0.0
        s_eg = 0.0
        for i in range(m):
            ip = i + 1 if i + 1 < m else 0
            for j in range(m):
                jp = j + 1 if j + 1 < m else 0
                d = a[i, j] - b[i, j]
                s_sq += d * d
                dxe = ((a[ip, j] - b[ip, j]) - d) * invh
                dye = ((a[i, jp] - b[i, jp]) - d) * invh
                s_eg += dxe * dxe + dye * dye
        return s_sq, s_eg

    @njit(cache=True)
    def _bdf2_rhs_nb(pk, pkm1, s, A, h):
        m = pk.shape[0]
        invh2 = 1.0 / (h * h)
        inv2h2 = 0.5 * invh2
        As2 = A * s * s
        lapk = np.empty_like(pk)
        for i in range(m):
            ip = i + 1 if i + 1 < m else 0
            im = i - 1 if i > 0 else m - 1
            for j in range(m):
                jp = j + 1 if j + 1 < m else 0
                jm = j - 1 if j > 0 else m - 1
                lapk[i, j] = (
                    pk[ip, j] + pk[im, j] + pk[i, jp] + pk[i, jm]
                    - 4.0 * pk[i, j]
                ) * invh2
        f = np.empty_like(pk)
        for i in range(m):
            ip = i + 1 if i + 1 < m else 0
            im = i - 1 if i > 0 else m - 1
            for j in range(m):
                jp = j + 1 if j + 1 < m else 0
                jm = j - 1 if j > 0 else m - 1
                e_pp = 2.0 * pk[ip, jp] - pkm1[ip, jp]
                e_pm = 2.0 * pk[ip, jm] - pkm1[ip, jm]
                e_mp = 2.0 * pk[im, jp] - pkm1[im, jp]
                e_mm = 2.0 * pk[im, jm] - pkm1[im, jm]
                e_cc = 2.0 * pk[i, j] - pkm1[i, j]
                slap = (e_pp + e_pm + e_mp + e_mm - 4.0 * e_cc) * inv2h2
                bi = (
                    lapk[ip, j] + lapk[im, j] + lapk[i, jp] + lapk[i, jm]
                    - 4.0 * lapk[i, j]
                ) * invh2
                f[i, j] = (
                    0.5 * (4.0 * pk[i, j] - pkm1[i, j]) - s * slap + As2 * bi
                )
        return f

    apply_system = _apply_system_nb
    line_pass = _line_pass_nb
    lap_sumsq = _lap_sumsq_nb
    energy_sums = _energy_sums_nb
    diff_sums = _diff_sums_nb
    bdf2_rhs = _bdf2_rhs_nb
else:  # pragma: no cover
    apply_system = apply_system_np
    line_pass = line_pass_np
    lap_sumsq = lap_sumsq_np
    energy_sums = energy_sums_np
    diff_sums = diff_sums_np
    bdf2_rhs = bdf2_rhs_np
