"""Shared special-function kernel.

Everything here targets 1e-12 absolute error in binary64:

* digamma by recurrence shift into Re(z) >= 12 plus the Bernoulli
  asymptotic series (complex arguments, vectorized),
* completed-gamma-factor log derivatives for the real and complex place,
* Riemann zeta and zeta'/zeta by Euler-Maclaurin, with exact Laurent data
  at s = 1 exposed instead of a hard failure,
* a batched Euler-Maclaurin evaluator for zeta on vertical lines built on
  the phase-rotation kernel (used by the contour-shift engine),
* K-Bessel via scipy, with the domain fenced to order in [0, 50],
* Dirichlet L at s = 1 for real quadratic characters through the finite
  log-sine sum.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .config import Precision
from .errors import DivergenceError, DomainError, PoleError
from .kernels import phase_grid_sum

EULER_GAMMA = 0.5772156649015328606
# Stieltjes constants gamma_1..gamma_3 (zeta Laurent coefficients at s=1)
STIELTJES = (-0.07281584548367672486, -0.009690363192872318484, 0.002053834420303345866)
LN_PI = math.log(math.pi)
LN_2PI = math.log(2.0 * math.pi)

# B_{2k} for k = 1..12
_BERNOULLI2K = np.array(
    [
        1.0 / 6,
        -1.0 / 30,
        1.0 / 42,
        -1.0 / 30,
        5.0 / 66,
        -691.0 / 2730,
        7.0 / 6,
        -3617.0 / 510,
        43867.0 / 798,
        -174611.0 / 330,
        854513.0 / 138,
        -236364091.0 / 2730,
    ]
)

_DEFAULT_PREC = Precision()


def _is_nonpositive_integer(z, tol=1e-12):
    zr = np.real(z)
    zi = np.imag(z)
    return (np.abs(zi) < tol) & (zr < 0.5) & (np.abs(zr - np.round(zr)) < tol)


def digamma(z):
    """psi(z) = Gamma'(z)/Gamma(z) for complex z away from the poles.

    Recurrence psi(z) = psi(z+1) - 1/z shifts the argument into
    Re(z) >= 12 where the Bernoulli asymptotic series converges to below
    1e-13; reflection handles Re(z) < 1/2.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(_is_nonpositive_integer(z)):
        raise DomainError("digamma pole at non-positive integer")
    out = np.zeros_like(z)

    refl = np.real(z) < 0.5
    zz = np.where(refl, 1.0 - z, z)
    # shift into Re >= 12
    nmax = int(max(0, math.ceil(12.0 - np.min(np.real(zz)))))
    corr = np.zeros_like(zz)
    for j in range(nmax):
        need = np.real(zz) < 12.0
        corr = np.where(need, corr + 1.0 / zz, corr)
        zz = np.where(need, zz + 1.0, zz)
    w2 = 1.0 / (zz * zz)
    series = np.zeros_like(zz)
    pw = w2.copy()
    for k in range(1, 8):
        series = series + _BERNOULLI2K[k - 1] / (2 * k) * pw
        pw = pw * w2
    val = np.log(zz) - 0.5 / zz - series - corr
    if np.any(refl):
        val[refl] -= math.pi / np.tan(math.pi * z[refl])
    out[...] = val
    return out[0] if scalar else out


def gamma_factor_logderiv(kind, s):
    """Log derivative of the completed gamma factor at a real or complex place.

    kind "R": d/ds log(pi^{-s/2} Gamma(s/2)) = -log(pi)/2 + psi(s/2)/2
    kind "C": d/ds log((2 pi)^{-s} Gamma(s)) = -log(2 pi) + psi(s)
    """
    s = np.asarray(s, dtype=complex)
    if kind == "R":
        if np.any(_is_nonpositive_integer(s / 2)):
            raise DomainError("gamma factor pole (kind R)")
        return -0.5 * LN_PI + 0.5 * digamma(s / 2)
    if kind == "C":
        if np.any(_is_nonpositive_integer(s)):
            raise DomainError("gamma factor pole (kind C)")
        return -LN_2PI + digamma(s)
    raise DomainError(f"gamma factor kind must be 'R' or 'C', got {kind!r}")


# ---------------------------------------------------------------------------
# Riemann zeta: Euler-Maclaurin with complex s
# ---------------------------------------------------------------------------


def _em_nterms(s, prec):
    tmax = float(np.max(np.abs(np.imag(np.atleast_1d(s)))))
    return int(min(prec.series_terms, max(32, math.ceil(tmax / 2.0) + 16)))


def _zeta_em(s, N, derivative=0):
    """Euler-Maclaurin for zeta (derivative=0) or zeta' (derivative=1),
    vectorized over an array of s with a shared truncation N."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    n = np.arange(1, N, dtype=float)
    ln_n = np.log(n)
    # sum_{n<N} n^{-s}, with -log weights for the derivative
    npow = np.exp(-np.outer(s, ln_n))
    if derivative:
        main = -(npow @ ln_n)
    else:
        main = npow.sum(axis=1)
    lnN = math.log(N)
    Nms = np.exp(-s * lnN)
    N1ms = N * Nms
    sm1 = s - 1.0
    if derivative:
        main = main - lnN * N1ms / sm1 - N1ms / (sm1 * sm1) - 0.5 * lnN * Nms
    else:
        main = main + N1ms / sm1 + 0.5 * Nms
    # Bernoulli tail: c_k(s) * N^{-s-2k+1}, c_k = B_{2k}/(2k)! * prod_{j=0}^{2k-2}(s+j)
    ck = s.copy()  # k=1: B2/2! * s ... start with the rising product s
    fact = 1.0
    for k in range(1, 13):
        fact *= (2 * k) * (2 * k - 1)
        coeff = _BERNOULLI2K[k - 1] / fact
        Npow = np.exp(-(s + 2 * k - 1) * lnN)
        if derivative:
            # d/ds [c_k(s) N^{-s-2k+1}] = (c_k'(s) - c_k(s) ln N) N^{-s-2k+1}
            dlog = np.zeros_like(s)
            for j in range(0, 2 * k - 1):
                dlog = dlog + 1.0 / (s + j)
            main = main + coeff * ck * (dlog - lnN) * Npow
        else:
            main = main + coeff * ck * Npow
        ck = ck * (s + 2 * k - 1) * (s + 2 * k)
    return main


def riemann_zeta(s, prec: Precision = _DEFAULT_PREC):
    """zeta(s) on Re(s) > 0, s != 1 (PoleError with Laurent data at s=1)."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(np.real(s_arr) <= 0):
        raise DomainError("riemann_zeta requires Re(s) > 0")
    if np.any(np.abs(s_arr - 1.0) < 1e-6):
        raise PoleError("zeta pole at s=1", location=1.0, residue=1.0,
                        constant_term=EULER_GAMMA)
    val = _zeta_em(s_arr, _em_nterms(s_arr, prec))
    return val[0] if np.ndim(s) == 0 else val


def zeta_laurent():
    """Laurent data of zeta at s=1: (residue, constant term, next Stieltjes)."""
    return 1.0, EULER_GAMMA, STIELTJES


def zeta_logderiv(s, prec: Precision = _DEFAULT_PREC):
    """zeta'(s)/zeta(s); near s=1 the exact Laurent expansion is used."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(np.real(s_arr) <= 0):
        raise DomainError("zeta_logderiv requires Re(s) > 0")
    w = s_arr - 1.0
    near = np.abs(w) < 5e-3
    out = np.empty_like(s_arr)
    if np.any(near):
        g0 = EULER_GAMMA
        g1, g2, g3 = STIELTJES
        wn = w[near]
        # log-derivative of the zeta Laurent series at s = 1+w
        A, B, C, D = g0, -g1, g2 / 2, -g3 / 6
        c3 = 4 * (D - A * C - B * B / 2 + A * A * B - A ** 4 / 4)
        out[near] = (-1.0 / wn + g0 - (g0 * g0 + 2 * g1) * wn
                     + (1.5 * g2 + 3 * g0 * g1 + g0 ** 3) * wn * wn
                     + c3 * wn ** 3)
    if np.any(~near):
        sf = s_arr[~near]
        N = _em_nterms(sf, prec)
        out[~near] = _zeta_em(sf, N, derivative=1) / _zeta_em(sf, N)
    return out[0] if np.ndim(s) == 0 else out


def hurwitz_zeta(s, q, prec: Precision = _DEFAULT_PREC):
    """Hurwitz zeta(s, q) for complex s (Re s > 0, s != 1) and real q > 0."""
    s = complex(s)
    if s.real <= 0:
        raise DomainError("hurwitz_zeta requires Re(s) > 0")
    if abs(s - 1.0) < 1e-6:
        raise PoleError("hurwitz zeta pole at s=1", location=1.0, residue=1.0)
    q = float(q)
    if q <= 0:
        raise DomainError("hurwitz_zeta requires q > 0")
    N = int(max(32, math.ceil(abs(s.imag) / 2.0) + 16))
    n = np.arange(0, N, dtype=float) + q
    main = np.sum(np.exp(-s * np.log(n)))
    Nq = N + q
    lnN = math.log(Nq)
    Nms = np.exp(-s * lnN)
    main += Nq * Nms / (s - 1.0) + 0.5 * Nms
    ck = s
    fact = 1.0
    for k in range(1, 13):
        fact *= (2 * k) * (2 * k - 1)
        main += _BERNOULLI2K[k - 1] / fact * ck * np.exp(-(s + 2 * k - 1) * lnN)
        ck = ck * (s + 2 * k - 1) * (s + 2 * k)
    return complex(main)


def dirichlet_L(s, chi_values, prec: Precision = _DEFAULT_PREC):
    """L(s, chi) for a character given by its value table chi_values[a], a = 0..q-1,
    via the Hurwitz decomposition L(s,chi) = q^-s sum_a chi(a) zeta(s, a/q)."""
    q = len(chi_values)
    s = complex(s)
    total = 0.0 + 0.0j
    for a in range(1, q):
        cv = chi_values[a]
        if cv:
            total += cv * hurwitz_zeta(s, a / q, prec)
    return total * np.exp(-s * math.log(q))


def zeta_line(sigma, t0, h, M, prec: Precision = _DEFAULT_PREC):
    """zeta(sigma + i t) on the uniform grid t = t0 + h*arange(M).

    Single Euler-Maclaurin truncation shared across the grid; the main
    Dirichlet block runs through the phase-rotation kernel.
    """
    if sigma <= 0:
        raise DomainError("zeta_line requires sigma > 0")
    tmax = abs(t0) + h * max(M - 1, 0)
    N = int(min(prec.series_terms, max(32, math.ceil(tmax / 2.0) + 16)))
    n = np.arange(1, N, dtype=float)
    vals = phase_grid_sum(np.log(n), n ** (-sigma), t0, h, M)
    t = t0 + h * np.arange(M)
    s = sigma + 1j * t
    lnN = math.log(N)
    Nms = np.exp(-s * lnN)
    vals = vals + N * Nms / (s - 1.0) + 0.5 * Nms
    ck = s.copy()
    fact = 1.0
    for k in range(1, 13):
        fact *= (2 * k) * (2 * k - 1)
        vals = vals + _BERNOULLI2K[k - 1] / fact * ck * np.exp(-(s + 2 * k - 1) * lnN)
        ck = ck * (s + 2 * k - 1) * (s + 2 * k)
    return vals


# ---------------------------------------------------------------------------
# K-Bessel and Dirichlet L(1, chi_D)
# ---------------------------------------------------------------------------


def bessel_k(order, x):
    """Modified Bessel K_order(x), order in [0, 50], x in (0, 200]."""
    order = float(order)
    if not 0 <= order <= 50:
        raise DomainError("bessel_k order restricted to [0, 50]")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise DomainError("bessel_k requires x > 0")
    if np.any(x_arr > 200):
        raise DomainError("bessel_k fenced to x <= 200; use direct quadrature beyond")
    out = _sp.kv(order, x_arr)
    return float(out) if np.ndim(x) == 0 else out


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out twos from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol on odd n
    result = sign
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    def squarefree(m):
        i = 2
        while i * i <= m:
            if m % (i * i) == 0:
                return False
            i += 1
        return True

    if D == 1:
        return True
    if D % 4 == 1:
        return squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree(abs(m))
    return False


def dirichlet_L_at_1(D: int) -> float:
    """L(1, chi_D) for a fundamental discriminant D > 1.

    Finite Gauss-sum closed form for even real primitive characters:
        L(1, chi_D) = -(1/sqrt(D)) sum_{a=1}^{D-1} chi_D(a) log sin(pi a / D).
    """
    if D <= 1 or not is_fundamental_discriminant(D):
        raise DomainError(f"{D} is not a fundamental discriminant > 1")
    a = np.arange(1, D)
    chi = np.array([kronecker_symbol(D, int(x)) for x in a], dtype=float)
    logsin = np.log(np.sin(math.pi * a / D))
    # pairwise summation via numpy keeps roundoff harmless even for large D
    return float(-(chi @ logsin) / math.sqrt(D))
