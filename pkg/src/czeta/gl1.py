"""Hecke-character counting over the rationals and real quadratic support.

Over the rationals everything is exact: Dirichlet characters are enumerated
through the CRT structure of the unit group with exact root-of-unity
exponents, conductors come from local orders, and the parity-refined
primitive count has the closed form

    N_m(q) = (1/2) [ (mu*phi)(q) + (-1)^m ( mu(q) + [2|q] mu(q/2) ) ],

which the enumeration reproduces integer for integer.  The same dual-lattice
argument normalizes the archimedean component measure: the two parity atoms
each carry dual mass 1/2, which is what the brute-force counting constant
pins down.

For a real quadratic field the module provides the conductor on the
norm-zero spectral line nu -> (nu, -nu), its Fourier transform computed two
independent ways (direct oscillatory quadrature and a contour shift into the
analyticity tube), the sublevel-volume growth exponent, and the closed-form
polar part of the conductor zeta function.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate as _int

from .config import Precision
from .conductor import GL1ArchCharacter, axiomatic_conductor
from .errors import DivergenceError, DomainError, PoleError
from .kernels import arith_tables, convolve_divisor
from .report import CountReport
from .specfun import (dirichlet_L, dirichlet_L_at_1, gamma_factor_logderiv,
                      hurwitz_zeta, is_fundamental_discriminant, kronecker_symbol,
                      riemann_zeta, zeta_laurent)
from . import arith

_DEFAULT_PREC = Precision()


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rationals:
    degree: int = 1
    r: int = 0


@dataclass(frozen=True)
class RealQuadratic:
    """Real quadratic field of fundamental discriminant D.

    The fundamental unit is stored exactly as (p + q sqrt(D)) / 2.
    """

    D: int
    unit_p: int
    unit_q: int
    r: int = 1

    def __post_init__(self):
        if not is_fundamental_discriminant(self.D) or self.D <= 1:
            raise DomainError(f"{self.D} is not a real quadratic fundamental discriminant")
        norm4 = self.unit_p ** 2 - self.D * self.unit_q ** 2
        if norm4 not in (4, -4):
            raise DomainError("unit must satisfy p^2 - D q^2 = +-4")
        if self.unit_value() <= 1.0:
            raise DomainError("fundamental unit must exceed 1")

    def unit_value(self) -> float:
        return (self.unit_p + self.unit_q * math.sqrt(self.D)) / 2.0

    @classmethod
    def from_discriminant(cls, D: int) -> "RealQuadratic":
        if not is_fundamental_discriminant(D) or D <= 1:
            raise DomainError(f"{D} is not a real quadratic fundamental discriminant")
        for q in range(1, 10 ** 6):
            for sq in (D * q * q - 4, D * q * q + 4):
                p = math.isqrt(sq)
                if p * p == sq and p > 0:
                    return cls(D=D, unit_p=p, unit_q=q)
        raise DomainError(f"no fundamental unit found for D={D}")


# ---------------------------------------------------------------------------
# Dirichlet characters over Q, exact
# ---------------------------------------------------------------------------


def _local_units(pe: int, p: int):
    """Generators and orders of the unit group mod p^e (pe > 2)."""
    if p == 2:
        if pe == 4:
            return [(3, 2)]                       # <-1>
        return [(pe - 1, 2), (5, pe // 4)]        # <-1> x <5>, pe >= 8
    # odd prime power: find a primitive root
    phi = pe - pe // p
    fac = arith.factorize(phi)
    for g in range(2, pe):
        if g % p == 0:
            continue
        if all(pow(g, phi // f, pe) != 1 for f, _ in fac):
            return [(g, phi)]
    raise RuntimeError(f"no primitive root mod {pe}")


class DirichletCharacter:
    """A Dirichlet character mod q with exact root-of-unity exponents.

    Values are chi(n) = zeta_e^{log(n)} with e the group exponent; the
    integer logs make parity and conductor computations exact.
    """

    __slots__ = ("q", "components", "exponents", "group_exponent", "_parity",
                 "_conductor")

    def __init__(self, q, components, exponents, group_exponent):
        self.q = q
        self.components = components      # list of (prime, pe, generator, order, dlog table)
        self.exponents = tuple(exponents)  # chi(g_i) = zeta_{s_i}^{a_i}
        self.group_exponent = group_exponent
        self._parity = None
        self._conductor = None

    def log_value(self, n: int):
        """Exponent L with chi(n) = e^{2 pi i L / e}, or None if gcd(n,q) > 1."""
        if math.gcd(n, self.q) != 1:
            return None
        e = self.group_exponent
        total = 0
        for (p, pe, g, order, dlog), a in zip(self.components, self.exponents):
            r = n % pe
            l = dlog[r]
            total = (total + a * l * (e // order)) % e
        return total

    def __call__(self, n: int) -> complex:
        l = self.log_value(n)
        if l is None:
            return 0.0 + 0.0j
        return complex(np.exp(2j * math.pi * l / self.group_exponent))

    @property
    def parity(self) -> int:
        """0 for even, 1 for odd."""
        if self._parity is None:
            l = self.log_value(self.q - 1) if self.q > 1 else 0
            e = self.group_exponent
            if l == 0 or self.q <= 2:
                self._parity = 0
            elif 2 * l == e:
                self._parity = 1
            else:  # pragma: no cover - impossible for order-2 element
                raise RuntimeError("chi(-1) is not a sign")
        return self._parity

    @property
    def conductor(self) -> int:
        """Minimal inducing modulus, as a product of local conductors."""
        if self._conductor is None:
            odd = 1
            cond2 = 1
            for (p, pe, g, order, dlog), a in zip(self.components, self.exponents):
                if a % order == 0:
                    continue
                chi_order = order // math.gcd(order, a)
                if p == 2:
                    if g == pe - 1:
                        cond2 = max(cond2, 4)       # the <-1> component
                    else:
                        # <5> component: order 2^j forces modulus 2^{j+2}
                        cond2 = max(cond2, 4 * chi_order)
                else:
                    f = 1
                    while (p ** f - p ** (f - 1)) % chi_order:
                        f += 1
                    odd *= p ** f
            self._conductor = odd * cond2
        return self._conductor

    def is_primitive(self) -> bool:
        return self.conductor == self.q


@lru_cache(maxsize=64)
def _group_structure(q: int):
    comps = []
    for p, e in arith.factorize(q):
        pe = p ** e
        if p == 2 and e == 1:
            continue  # trivial unit group mod 2
        for g, order in _local_units(pe, p):
            dlog = np.full(pe, -1, dtype=np.int64)
            if p == 2 and pe == 4:
                dlog[1] = 0
                dlog[3] = 1
            elif p == 2 and g == pe - 1:
                # mod 2^e (e>=3): n = +-5^b; tabulate the sign exponent
                pw = 1
                for _ in range(pe // 4):
                    dlog[pw] = 0
                    dlog[pe - pw] = 1
                    pw = pw * 5 % pe
            elif p == 2:
                # the <5> component: exponent b in n = +-5^b
                pw = 1
                for b in range(pe // 4):
                    dlog[pw] = b
                    dlog[pe - pw] = b
                    pw = pw * 5 % pe
            else:
                pw = 1
                for b in range(order):
                    dlog[pw] = b
                    pw = pw * g % pe
            comps.append((p, pe, g, order, dlog))
    exponent = 1
    for _, _, _, order, _ in comps:
        exponent = exponent * order // math.gcd(exponent, order)
    return tuple(comps), max(exponent, 1)


def enumerate_characters(q: int):
    """All phi(q) Dirichlet characters mod q, exact."""
    if q < 1:
        raise DomainError("modulus must be positive")
    if q > 10 ** 5:
        raise DomainError("character enumeration capped at q = 1e5")
    comps, exponent = _group_structure(q)
    out = []
    idx = [0] * len(comps)
    while True:
        out.append(DirichletCharacter(q, comps, tuple(idx), exponent))
        j = 0
        while j < len(comps):
            idx[j] += 1
            if idx[j] < comps[j][3]:
                break
            idx[j] = 0
            j += 1
        else:
            break
    return out


def parity_primitive_count(q: int, m: int) -> int:
    """Primitive characters mod q of parity m, by the dual-lattice closed form."""
    if q < 1:
        raise DomainError("modulus must be positive")
    if m not in (0, 1):
        raise DomainError("parity m must be 0 or 1")
    musphi = int(arith.mult_eval("mu_star_phi", q))
    corr = int(arith.mult_eval("mu", q))
    if q % 2 == 0:
        corr += int(arith.mult_eval("mu", q // 2))
    val = (musphi + (-1) ** m * corr) // 2
    return max(val, 0)


def _conductor_constants():
    chars = [GL1ArchCharacter(1, 0, (m,), (0.0,)) for m in (0, 1)]
    return tuple(axiomatic_conductor(c) for c in chars)


def count_gl1_Q(X: float, prec: Precision = _DEFAULT_PREC) -> CountReport:
    """Exact count of Hecke characters of the rationals with analytic
    conductor q * c_m <= X, plus the polar main-term prediction."""
    t0 = time.perf_counter()
    X = float(X)
    if X <= 0 or X > 1e9:
        raise DomainError("X must lie in (0, 1e9]")
    c0, c1 = _conductor_constants()
    qmax = int(max(X / c0, X / c1))
    if qmax > 5 * 10 ** 7:
        raise DomainError("sweep would exceed the q <= 5e7 time guard")
    total = 0
    per_parity = [0, 0]
    if qmax >= 1:
        mu, phi, _ = arith_tables(qmax)
        musphi = convolve_divisor(mu, phi)
        for m, cm in ((0, c0), (1, c1)):
            qm = int(X / cm)
            if qm < 1:
                continue
            sgn = 1 if m == 0 else -1
            corr = mu[1:qm + 1].copy()
            half = qm // 2
            if half >= 1:
                corr[1::2] += mu[1:half + 1]
            vals = (musphi[1:qm + 1] + sgn * corr) // 2
            per_parity[m] = int(np.maximum(vals, 0).sum())
            total += per_parity[m]
    z2 = float(np.real(riemann_zeta(2.0, prec)))
    residues = [0.5 / (c0 * c0 * z2 * z2), 0.5 / (c1 * c1 * z2 * z2)]
    prediction = sum(residues) * X * X / 2.0
    return CountReport(
        params={"X": X},
        value=float(total),
        prediction=prediction,
        error_estimate=abs(total - prediction),
        diagnostics={"exact": total, "per_parity": per_parity,
                     "conductor_constants": [c0, c1],
                     "residues": residues},
        timing=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# real quadratic spectral line
# ---------------------------------------------------------------------------


def spectral_conductor(field: RealQuadratic, m, nu):
    """Conductor of the character with parameter (nu, -nu), continued in nu.

    Accepts real or complex nu (|Im nu| < 1/2), scalar or array.
    """
    m1, m2 = m
    if m1 not in (0, 1) or m2 not in (0, 1):
        raise DomainError("real-place discrete components lie in {0,1}")
    nu = np.asarray(nu, dtype=complex)
    if np.any(np.abs(nu.imag) >= 0.5):
        raise DomainError("spectral parameter outside the analyticity tube")
    a1 = 0.5 + m1
    a2 = 0.5 + m2
    tot = (gamma_factor_logderiv("R", a1 + 1j * nu) + gamma_factor_logderiv("R", a1 - 1j * nu)
           + gamma_factor_logderiv("R", a2 + 1j * nu) + gamma_factor_logderiv("R", a2 - 1j * nu))
    return np.exp(tot)


def pick_shift(field, m, s, requested: float = 0.4, spike_cap: float = 50.0) -> float:
    """Largest contour shift <= requested kept numerically well conditioned.

    The continued conductor dips near the strip edge (the gamma-factor log
    derivative has a pole at argument 0), so |c(-ic)^{-s}| grows roughly like
    exp(2 Re s/(1/2 - c)).  Shifting further than the point where the shifted
    peak exceeds spike_cap times the real-axis peak buys nothing numerically:
    the extracted e^{-c x} is repaid in cancellation.
    """
    s = complex(s)
    peak0 = abs(complex(spectral_conductor(field, m, 0.0)) ** (-s))
    shift = min(requested, 0.49)
    while shift > 0.02:
        peak = abs(complex(spectral_conductor(field, m, -1j * shift)) ** (-s))
        if peak <= spike_cap * peak0:
            return shift
        shift *= 0.8
    return shift


def fourier_gm(field: RealQuadratic, m, s, x: float, prec: Precision = _DEFAULT_PREC,
               shift: float = None):
    """g_m(x) = int_R c(nu)^{-s} e^{-i nu x} d nu, two independent ways.

    Returns (direct, contour_shifted).  Direct: oscillatory quadrature on the
    real line.  Shifted: the contour moves to Im nu = -shift (sign following
    x), extracting the factor e^{-shift |x|}.  With shift=None a well
    conditioned displacement is chosen automatically; see pick_shift.
    """
    s = complex(s)
    if s.real < 0.55:
        raise DivergenceError("need Re(s) >= 0.55 = 1/2 + margin for convergence")
    if shift is None:
        shift = pick_shift(field, m, s)
    if not 0 < shift < 0.5:
        raise DomainError("shift must lie in (0, 1/2)")
    x = float(x)
    sgn = 1.0 if x >= 0 else -1.0
    ax = abs(x)
    scale = abs(complex(spectral_conductor(field, m, 0.0)) ** (-s))
    epsabs = max(prec.quad_tol, 1e-11 * scale)
    pts = [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0]

    def quad_half(f, weight, wvar):
        """int_0^inf f(v) * (1 or cos/sin(v*wvar)) dv for complex-valued f."""
        re_fn = lambda v: float(np.real(f(v)))
        im_fn = lambda v: float(np.imag(f(v)))
        if wvar == 0.0:
            re = im = 0.0
            breaks = [0.0] + pts
            for lo, hi in zip(breaks, breaks[1:] + [np.inf]):
                r, _ = _int.quad(re_fn, lo, hi, epsabs=epsabs / 16, limit=200)
                i, _ = _int.quad(im_fn, lo, hi, epsabs=epsabs / 16, limit=200)
                re += r
                im += i
            return re + 1j * im
        re, _ = _int.quad(re_fn, 0, np.inf, weight=weight, wvar=wvar,
                          epsabs=epsabs, limit=400, maxp1=200)
        im, _ = _int.quad(im_fn, 0, np.inf, weight=weight, wvar=wvar,
                          epsabs=epsabs, limit=400, maxp1=200)
        return re + 1j * im

    def cpow(nu):
        return np.asarray(spectral_conductor(field, m, nu)) ** (-s)

    if ax == 0.0:
        direct = 2.0 * quad_half(cpow, None, 0.0)
    else:
        direct = 2.0 * quad_half(cpow, "cos", ax)

    c_sh = sgn * shift

    def shifted_fn(nu):
        return np.asarray(spectral_conductor(field, m, nu - 1j * c_sh)) ** (-s)

    even = lambda v: 0.5 * (shifted_fn(v) + shifted_fn(-v))
    odd = lambda v: 0.5 * (shifted_fn(v) - shifted_fn(-v))
    if ax == 0.0:
        shifted = 2.0 * quad_half(even, None, 0.0)
    else:
        shifted = 2.0 * quad_half(even, "cos", ax) - 2.0j * quad_half(odd, "sin", ax)
    shifted = math.exp(-shift * ax) * shifted
    return complex(direct), complex(shifted)


def fit_decay_rate(xs, values) -> float:
    """Least-squares exponential rate: slope of -log|g| against x."""
    xs = np.asarray(xs, dtype=float)
    vals = np.abs(np.asarray(values, dtype=complex))
    if np.any(vals <= 0):
        raise DomainError("decay fit needs nonvanishing samples")
    return float(-np.polyfit(xs, np.log(vals), 1)[0])


def conductor_volume_growth(field: RealQuadratic, m, X_grid, prec: Precision = _DEFAULT_PREC):
    """Sublevel volumes vol{nu: c(nu) <= X} and the log-log slope.

    The conductor is increasing in |nu| on the real line, so each volume is
    2 nu*(X) with c(nu*) = X found by bisection.
    """
    X_grid = np.asarray(sorted(X_grid), dtype=float)
    if X_grid.size < 3:
        raise DomainError("need at least 3 grid points")
    c0 = float(np.real(spectral_conductor(field, m, 0.0)))
    vols = []
    for X in X_grid:
        if X <= c0:
            vols.append(0.0)
            continue
        lo, hi = 0.0, 1.0
        while float(np.real(spectral_conductor(field, m, hi))) < X:
            hi *= 2.0
            if hi > 1e12:
                raise RuntimeError("bisection bracket blew up")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if float(np.real(spectral_conductor(field, m, mid))) < X:
                lo = mid
            else:
                hi = mid
        vols.append(lo + hi)
    vols = np.asarray(vols)
    mask = vols > 0
    if mask.sum() < 2:
        slope = 0.0
    else:
        slope = float(np.polyfit(np.log(X_grid[mask]), np.log(vols[mask]), 1)[0])
    return vols, slope


def unit_sum_geometric(field: RealQuadratic, rate: float = 0.4):
    """(numeric, closed_form) for sum_{n != 0} e^{-rate |n| 2 log eps}."""
    logeps = math.log(field.unit_value())
    q = math.exp(-rate * 2.0 * logeps)
    closed = 2.0 * q / (1.0 - q)
    total = 0.0
    n = 1
    term = q
    while term > 1e-18:
        total += 2.0 * term
        n += 1
        term = q ** n
    return total, closed


# ---------------------------------------------------------------------------
# closed-form polar part of the conductor zeta function
# ---------------------------------------------------------------------------


def _arch_integral(field, m, s, prec):
    """int_R c(nu)^{-s} d nu on the spectral line (real quadratic)."""
    s = complex(s)

    def f_re(nu):
        return float(np.real(np.asarray(spectral_conductor(field, m, nu)) ** (-s)))

    def f_im(nu):
        return float(np.imag(np.asarray(spectral_conductor(field, m, nu)) ** (-s)))

    re, _ = _int.quad(f_re, 0, np.inf, epsabs=prec.quad_tol, limit=400)
    im, _ = _int.quad(f_im, 0, np.inf, epsabs=prec.quad_tol, limit=400)
    return 2.0 * (re + 1j * im)


def _chi_table(D: int):
    return [kronecker_symbol(D, a) for a in range(D)]


def gl1_volume(field) -> float:
    """Canonical torus volume: sqrt(D) * residue of the gamma-completed
    Dedekind zeta (1 over the rationals)."""
    if isinstance(field, Rationals):
        return 1.0
    return math.sqrt(field.D) * dirichlet_L_at_1(field.D)


def z1_closed_form(field, m, s, prec: Precision = _DEFAULT_PREC) -> complex:
    """Polar component of the conductor zeta function:

        Z1_m(s) = vol * (zeta_F(s-1)/zeta_F(s)^2) * I_m(s),

    I_m the archimedean conductor integral over the m-component (over the
    rationals the component atom carries dual mass 1/2, the normalization
    pinned by the exact counting identity).
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DivergenceError("Z1 requires Re(s) > 1")
    if abs(s - 2.0) < 1e-9:
        raise PoleError("Z1 pole at s=2", location=2.0,
                        residue=z1_residue_at_2(field, m, prec))
    vol = gl1_volume(field)
    if isinstance(field, Rationals):
        cm = axiomatic_conductor(GL1ArchCharacter(1, 0, (int(m),), (0.0,)))
        arch = 0.5 * cm ** (-s)
        num = riemann_zeta(s - 1.0, prec) if abs(s - 1.0) >= 1e-6 else None
        zf_num = complex(num)
        zf_den = complex(riemann_zeta(s, prec))
        return vol * zf_num / zf_den ** 2 * arch
    chi = _chi_table(field.D)
    zf = lambda w: complex(riemann_zeta(w, prec)) * complex(dirichlet_L(w, chi, prec))
    arch = _arch_integral(field, m, s, prec)
    return vol * zf(s - 1.0) / zf(s) ** 2 * arch


def z1_residue_at_2(field, m, prec: Precision = _DEFAULT_PREC) -> float:
    """Residue of Z1_m at s=2: vol * zeta_F^*(1)/zeta_F(2)^2 * I_m(2)."""
    vol = gl1_volume(field)
    if isinstance(field, Rationals):
        cm = axiomatic_conductor(GL1ArchCharacter(1, 0, (int(m),), (0.0,)))
        arch = 0.5 * cm ** -2.0
        z2 = float(np.real(riemann_zeta(2.0, prec)))
        return vol * arch / z2 ** 2
    chi = _chi_table(field.D)
    LD1 = dirichlet_L_at_1(field.D)
    zf2 = float(np.real(riemann_zeta(2.0, prec))) * float(np.real(dirichlet_L(2.0, chi, prec)))
    arch = float(np.real(_arch_integral(field, m, 2.0, prec)))
    return vol * LD1 / zf2 ** 2 * arch
