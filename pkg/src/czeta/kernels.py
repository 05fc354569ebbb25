"""Hot numeric kernels, each with a numba @njit path and a numpy/python fallback.

Kernels here are deliberately free of library types: plain arrays in, plain
arrays out.  Higher modules own the mathematics; this module owns the loops.

Determinism: parallel kernels partition work into fixed blocks and each output
cell is written by exactly one block, so results are bit-identical across
thread counts.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import USE_NUMBA, njit, pick, prange

# ---------------------------------------------------------------------------
# multiplicative-function sieves
# ---------------------------------------------------------------------------


@njit(cache=True)
def _arith_tables_nb(M):
    spf = np.zeros(M + 1, dtype=np.int64)
    mu = np.zeros(M + 1, dtype=np.int64)
    phi = np.zeros(M + 1, dtype=np.int64)
    phi2 = np.zeros(M + 1, dtype=np.int64)
    low = np.zeros(M + 1, dtype=np.int64)  # spf^multiplicity part of n
    primes = np.zeros(M + 1, dtype=np.int64)
    npr = 0
    mu[1] = 1
    phi[1] = 1
    phi2[1] = 1
    low[1] = 1
    for i in range(2, M + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[npr] = i
            npr += 1
            mu[i] = -1
            phi[i] = i - 1
            phi2[i] = i * i - 1
            low[i] = i
        for idx in range(npr):
            p = primes[idx]
            ip = i * p
            if p > spf[i] or ip > M:
                break
            spf[ip] = p
            if i % p == 0:
                low[ip] = low[i] * p
                if low[ip] == ip:
                    # prime power p^a, a >= 2
                    mu[ip] = 0
                    phi[ip] = ip - ip // p
                    phi2[ip] = ip * ip - (ip // p) * (ip // p)
                else:
                    rest = ip // low[ip]
                    mu[ip] = mu[low[ip]] * mu[rest]
                    phi[ip] = phi[low[ip]] * phi[rest]
                    phi2[ip] = phi2[low[ip]] * phi2[rest]
                break
            low[ip] = p
            mu[ip] = -mu[i]
            phi[ip] = (p - 1) * phi[i]
            phi2[ip] = (p * p - 1) * phi2[i]
    return mu, phi, phi2


def _arith_tables_np(M):
    mu = np.ones(M + 1, dtype=np.int64)
    phi = np.arange(M + 1, dtype=np.int64)
    phi2 = phi * phi
    is_comp = np.zeros(M + 1, dtype=bool)
    for p in range(2, M + 1):
        if is_comp[p]:
            continue
        is_comp[p * p :: p] = True
        mu[p::p] *= -1
        pp = p * p
        if pp <= M:
            mu[pp::pp] = 0
        phi[p::p] -= phi[p::p] // p
        phi2[p::p] -= phi2[p::p] // pp
    mu[0] = phi[0] = phi2[0] = 0
    if M >= 1:
        mu[1] = phi[1] = phi2[1] = 1
    return mu, phi, phi2


def arith_tables(M):
    """Return (mu, phi, phi2) on 0..M; phi2 = (squares * mu) Dirichlet product."""
    mu, phi, phi2 = pick(_arith_tables_nb, _arith_tables_np)(int(M))
    return mu, phi, phi2


def mu_star_mu(mu):
    """lambda = mu * mu (Dirichlet), from a mu table.  Supported on cubefree n."""
    M = mu.size - 1
    lam = np.zeros(M + 1, dtype=np.int64)
    for d in range(1, M + 1):
        if mu[d]:
            lam[d::d] += mu[d] * mu[1 : M // d + 1]
    return lam


@njit(cache=True)
def _convolve_divisor_nb(f, g):
    M = f.size - 1
    out = np.zeros(M + 1, dtype=np.int64)
    for d in range(1, M + 1):
        fd = f[d]
        if fd == 0:
            continue
        for q in range(1, M // d + 1):
            out[d * q] += fd * g[q]
    return out


def _convolve_divisor_np(f, g):
    M = f.size - 1
    out = np.zeros(M + 1, dtype=np.int64)
    for d in range(1, M + 1):
        if f[d]:
            out[d::d] += f[d] * g[1 : M // d + 1]
    return out


def convolve_divisor(f, g):
    """Dirichlet convolution of integer tables indexed 0..M (index 0 unused)."""
    f = np.ascontiguousarray(f, dtype=np.int64)
    g = np.ascontiguousarray(g, dtype=np.int64)
    if f.size != g.size:
        raise ValueError("tables must share length")
    return pick(_convolve_divisor_nb, _convolve_divisor_np)(f, g)


# ---------------------------------------------------------------------------
# uniform-grid phase sums:  S_j = sum_n w_n exp(-i lam_n (t0 + j h))
#
# Backbone of every vertical-line evaluation (Dirichlet series on a contour,
# Fourier-type spectral transforms).  The numba path advances each term by a
# unit-modulus rotation; n <= ~1e5 and block <= 16384 keep the accumulated
# roundoff near 1e-12 relative, well under the quadrature tolerances.
# ---------------------------------------------------------------------------

_PHASE_BLOCK = 16384


@njit(parallel=True, cache=True, fastmath=True)
def _phase_grid_sum_nb(lam, wre, wim, t0, h, M):
    # j-blocks in parallel; inside a block the n-loop is vectorizable
    # (independent rotations), which keeps the complex multiply off the
    # latency chain.  Each out[j] is written by exactly one block, so the
    # result is bit-stable across thread counts; fastmath reassociation is
    # fixed by the compiled code, not the schedule.
    out_re = np.zeros(M)
    out_im = np.zeros(M)
    N = lam.size
    nblocks = (M + _PHASE_BLOCK - 1) // _PHASE_BLOCK
    for b in prange(nblocks):
        j0 = b * _PHASE_BLOCK
        j1 = min(M, j0 + _PHASE_BLOCK)
        zr = np.empty(N)
        zi = np.empty(N)
        dr = np.empty(N)
        di = np.empty(N)
        for n in range(N):
            ang0 = -lam[n] * (t0 + j0 * h)
            zr[n] = math.cos(ang0) * wre[n] - math.sin(ang0) * wim[n]
            zi[n] = math.cos(ang0) * wim[n] + math.sin(ang0) * wre[n]
            dr[n] = math.cos(-lam[n] * h)
            di[n] = math.sin(-lam[n] * h)
        for j in range(j0, j1):
            acc_r = 0.0
            acc_i = 0.0
            for n in range(N):
                acc_r += zr[n]
                acc_i += zi[n]
                tmp = zr[n] * dr[n] - zi[n] * di[n]
                zi[n] = zr[n] * di[n] + zi[n] * dr[n]
                zr[n] = tmp
            out_re[j] = acc_r
            out_im[j] = acc_i
    return out_re, out_im


def _phase_grid_sum_np(lam, wre, wim, t0, h, M):
    out = np.zeros(M, dtype=np.complex128)
    t = t0 + h * np.arange(M)
    w = wre + 1j * wim
    chunk = max(1, (1 << 22) // max(M, 1))
    for i in range(0, lam.size, chunk):
        block = np.exp(np.outer(lam[i : i + chunk], t) * (-1j))
        out += w[i : i + chunk] @ block
    return out.real, out.imag


def phase_grid_sum(lam, w, t0, h, M):
    """Evaluate sum_n w_n e^{-i lam_n t} on the grid t = t0 + h*arange(M)."""
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    w = np.asarray(w)
    wre = np.ascontiguousarray(w.real, dtype=np.float64)
    wim = np.ascontiguousarray(w.imag if np.iscomplexobj(w) else np.zeros_like(wre))
    re, im = pick(_phase_grid_sum_nb, _phase_grid_sum_np)(lam, wre, wim, float(t0), float(h), int(M))
    return re + 1j * im


# ---------------------------------------------------------------------------
# conjugacy classes of trace t in SL2(Z) via reduced indefinite forms
#
# Classes of matrices with trace t>2 correspond to proper classes of integral
# binary quadratic forms of discriminant t^2-4, imprimitive forms included.
# A form (a,b,c) with b^2-4ac = D > 0 nonsquare is reduced iff
#     0 < b < sqrt(D)  and  sqrt(D) - b < 2|a| < sqrt(D) + b,
# and classes correspond to cycles of the reduction step
#     rho(a,b,c) = (c, b', (b'^2-D)/(4c)),   b' = -b mod 2|c|,
#                  b' the unique residue in (sqrt(D)-2|c|, sqrt(D)).
# ---------------------------------------------------------------------------


@njit(cache=True)
def _class_count_one_nb(t):
    D = t * t - 4
    s = int(math.sqrt(D))
    while s * s > D:
        s -= 1
    while (s + 1) * (s + 1) <= D:
        s += 1
    # count reduced forms
    nf = 0
    bstart = 1 if D % 2 else 2
    for b in range(bstart, s + 1, 2):
        num = D - b * b  # = -4ac > 0
        alo = (s - b) // 2 + 1
        ahi = (s + b + 1) // 2  # 2a < sqrt(D)+b  =>  a <= ceil((s+b)/2) bounded below
        for aa in range(alo, ahi + 1):
            if 2 * aa >= s + b + 1:
                break
            if num % (4 * aa) == 0:
                nf += 2  # a = +aa and a = -aa
    if nf == 0:
        return 0
    fa = np.empty(nf, dtype=np.int64)
    fb = np.empty(nf, dtype=np.int64)
    keys = np.empty(nf, dtype=np.int64)
    k = 0
    span = 2 * s + 3
    for b in range(bstart, s + 1, 2):
        num = D - b * b
        alo = (s - b) // 2 + 1
        for aa in range(alo, (s + b) // 2 + 1):
            if 2 * aa >= s + b + 1:
                break
            if num % (4 * aa) == 0:
                for sign in (1, -1):
                    a = sign * aa
                    fa[k] = a
                    fb[k] = b
                    keys[k] = (a + s + 1) * span + b
                    k += 1
    order = np.argsort(keys)
    skeys = keys[order]
    visited = np.zeros(nf, dtype=np.uint8)
    ncycles = 0
    nerr = 0
    for start in range(nf):
        if visited[start]:
            continue
        ncycles += 1
        idx = start
        while not visited[idx]:
            visited[idx] = 1
            a = fa[order[idx]]
            b = fb[order[idx]]
            c = (b * b - D) // (4 * a)
            cab = c if c > 0 else -c
            b2 = s - ((s + b) % (2 * cab))
            key2 = (c + s + 1) * span + b2
            lo = 0
            hi = nf - 1
            pos = -1
            while lo <= hi:
                mid = (lo + hi) // 2
                if skeys[mid] == key2:
                    pos = mid
                    break
                elif skeys[mid] < key2:
                    lo = mid + 1
                else:
                    hi = mid - 1
            if pos < 0:
                nerr += 1
                break
            idx = pos
    if nerr:
        return -1
    return ncycles


@njit(parallel=True, cache=True)
def _class_counts_all_nb(t_max):
    out = np.zeros(t_max + 1, dtype=np.int64)
    for t in prange(3, t_max + 1):
        out[t] = _class_count_one_nb(t)
    return out


def _class_count_one_py(t):
    D = t * t - 4
    s = math.isqrt(D)
    forms = {}
    bstart = 1 if D % 2 else 2
    for b in range(bstart, s + 1, 2):
        num = D - b * b
        for aa in range((s - b) // 2 + 1, (s + b) // 2 + 1):
            if 2 * aa >= s + b + 1:
                break
            if num % (4 * aa) == 0:
                for a in (aa, -aa):
                    forms[(a, b)] = False
    ncycles = 0
    for start in forms:
        if forms[start]:
            continue
        ncycles += 1
        a, b = start
        while not forms[(a, b)]:
            forms[(a, b)] = True
            c = (b * b - D) // (4 * a)
            b2 = s - ((s + b) % (2 * abs(c)))
            if (c, b2) not in forms:
                raise RuntimeError(f"reduction left the reduced set at t={t}")
            a, b = c, b2
    return ncycles


def _class_counts_all_py(t_max):
    out = np.zeros(t_max + 1, dtype=np.int64)
    for t in range(3, t_max + 1):
        out[t] = _class_count_one_py(t)
    return out


def class_counts_all(t_max):
    """Number of SL2(Z) conjugacy classes of matrices of trace t, 3 <= t <= t_max.

    Counts classes of group elements (primitive or not); the primitive
    refinement is a cheap post-pass in :mod:`czeta.stf`.
    """
    out = pick(_class_counts_all_nb, _class_counts_all_py)(int(t_max))
    if np.any(out[3:] < 0):
        raise RuntimeError("form reduction escaped the reduced set")
    return out


# ---------------------------------------------------------------------------
# discrete-series counting: per-weight newform totals
# ---------------------------------------------------------------------------


@njit(cache=True)
def _newform_total_nb(dims_prefix, lam, M):
    total = 0
    for e in range(1, M + 1):
        le = lam[e]
        if le:
            total += le * dims_prefix[M // e]
    return total


def _newform_total_np(dims_prefix, lam, M):
    e = np.nonzero(lam[1 : M + 1])[0] + 1
    return int(np.sum(lam[e] * dims_prefix[M // e]))


def newform_total(dims_prefix, lam, M):
    """sum_{N<=M} (lambda * dims)(N) given prefix sums of the dims table."""
    return int(pick(_newform_total_nb, _newform_total_np)(dims_prefix, lam, int(M)))
