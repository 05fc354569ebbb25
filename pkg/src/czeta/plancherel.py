"""Spectral densities and conductor-zeta integrals for the real group,
plus exact local mass tables at the finite places.

The tempered dual splits into discrete series (weight k >= 2, spectral atom
(k-1)/4pi), weight-zero principal series (density nu tanh(pi nu)/4pi) and
weight-one principal series (density nu coth(pi nu)/4pi).  At a finite prime
the mass carried by conductor exponent a is an exact integer obtained by
inverting the oldform dimension pattern (f - a + 1) against the unit-group
index phi2(p^f); the generating identity

    sum_a m_a p^{-as} = zeta_p(s-2) / zeta_p(s)^3

is then an exact rational fact, testable with zero tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate as _int

from .config import Precision
from .conductor import AdmissibleConductor, DiscreteSeriesConductor, default_conductor
from .errors import DivergenceError, DomainError
from .specfun import is_prime, riemann_zeta

_DEFAULT_PREC = Precision()
_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class ArchPoint:
    """A point of the tempered archimedean dual: D (k >= 2) or P0/P1 (real nu)."""

    series: str
    parameter: float

    def __post_init__(self):
        if self.series not in ("D", "P0", "P1"):
            raise DomainError("series must be one of D, P0, P1")
        if self.series == "D":
            k = self.parameter
            if int(k) != k or k < 2:
                raise DomainError("discrete series need integer weight k >= 2")
        else:
            if not math.isfinite(self.parameter):
                raise DomainError("principal series parameter must be finite")


def _nu_tanh(nu):
    nu = np.asarray(nu, dtype=float)
    return nu * np.tanh(math.pi * nu)


def _nu_coth(nu):
    """nu*coth(pi*nu), smooth through nu = 0 (limit 1/pi)."""
    nu = np.asarray(nu, dtype=float)
    out = np.empty_like(nu)
    small = np.abs(nu) < 1e-4
    x = math.pi * nu[small]
    out[small] = (1.0 + x * x / 3.0 - x ** 4 / 45.0) / math.pi
    nb = nu[~small]
    out[~small] = nb / np.tanh(math.pi * nb)
    return out


def plancherel_density(pt: ArchPoint) -> float:
    if pt.series == "D":
        return (pt.parameter - 1.0) / _FOUR_PI
    w = _nu_tanh(pt.parameter) if pt.series == "P0" else _nu_coth(pt.parameter)
    return float(w) / _FOUR_PI


@dataclass(frozen=True)
class ArchZetaResult:
    value: complex
    trunc_error: float

    def __complex__(self):
        return complex(self.value)

    def __float__(self):
        return float(np.real(self.value))


def arch_conductor_zeta(series, c=None, s=3.0, prec: Precision = _DEFAULT_PREC) -> ArchZetaResult:
    """Conductor-zeta integral of one archimedean series at s (Re s > 1).

    D:  sum_{k>=2} (k-1)/(4 pi) * (k^2)^{-s}
    Pk: (1/4pi) int_R c(nu)^{-s} nu tanh/coth(pi nu) d nu

    Returns the value together with a certified truncation error.
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 1.0:
        raise DivergenceError("arch conductor zeta requires Re(s) > 1")
    if series == "D":
        if c is not None and not isinstance(c, DiscreteSeriesConductor):
            raise DomainError("discrete series use the exact k^2 conductor")
        # tail sum_{k>K} (k-1) k^{-2s} <= K^{2-2sigma}/(2sigma-2)
        K = int(min(prec.series_terms,
                    max(64, math.ceil((prec.quad_tol * (2 * sigma - 2)) ** (1.0 / (2.0 - 2 * sigma))))))
        k = np.arange(2, K + 1, dtype=float)
        value = np.sum((k - 1.0) * np.exp(-2.0 * s * np.log(k)), dtype=complex) / _FOUR_PI
        tail = K ** (2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0) / _FOUR_PI
        return ArchZetaResult(complex(value), float(tail))

    if series not in ("P0", "P1"):
        raise DomainError("series must be D, P0 or P1")
    if c is None:
        c = default_conductor()
    weight = _nu_tanh if series == "P0" else _nu_coth

    # comparability floor |c(nu)| >= kappa_lo (1+nu)^2 certifies the tail
    kappa_lo = 0.5 if c.evaluator is None else None
    if kappa_lo is None:
        probe = np.geomspace(1.0, 1e4, 64)
        kappa_lo = float(np.min(np.abs(np.asarray(c(probe))) / (1.0 + probe) ** 2))
        if kappa_lo <= 0:
            raise DomainError("conductor vanishes on the real axis; not admissible")
    lam = max(25.0, (prec.quad_tol * (2 * sigma - 2) * _FOUR_PI / 2.0) ** (1.0 / (2.0 - 2 * sigma)) / kappa_lo)

    def integrand_re(nu):
        return (np.asarray(c(nu)) ** (-s)).real * weight(nu)

    def integrand_im(nu):
        return (np.asarray(c(nu)) ** (-s)).imag * weight(nu)

    val = 0.0 + 0.0j
    quad_err = 0.0
    for a, b in ((0.0, 20.0), (20.0, lam)):
        re, er = _int.quad(integrand_re, a, b, epsabs=prec.quad_tol, epsrel=1e-12, limit=400)
        val += re
        quad_err += er
        if s.imag != 0.0:
            im, ei = _int.quad(integrand_im, a, b, epsabs=prec.quad_tol, epsrel=1e-12, limit=400)
            val += 1j * im
            quad_err += ei
    # even integrand: double the half-line
    val = 2.0 * val / _FOUR_PI
    quad_err = 2.0 * quad_err / _FOUR_PI
    tail = 2.0 * kappa_lo ** (-sigma) * (1.0 + lam) ** (2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0) / _FOUR_PI
    # tanh/coth replaced by nothing here; both are within 2e^{-2 pi nu} of
    # |nu| for nu >= 20, absorbed into the tail constant
    return ArchZetaResult(complex(val), float(tail + quad_err))


# ---------------------------------------------------------------------------
# exact local masses
# ---------------------------------------------------------------------------


def _phi2_prime_power(p: int, f: int) -> int:
    if f == 0:
        return 1
    return p ** (2 * f) - p ** (2 * f - 2)


@dataclass(frozen=True)
class LocalMassTable:
    """Plancherel mass per conductor exponent at a finite prime, exact."""

    p: int
    masses: tuple  # m_0 .. m_{f_max}, integers

    @property
    def f_max(self):
        return len(self.masses) - 1

    def oldform_sum(self, f: int) -> int:
        """sum_{a<=f} (f-a+1) m_a; equals phi2(p^f) identically."""
        if f > self.f_max:
            raise DomainError("table too short for requested f")
        return sum((f - a + 1) * m for a, m in enumerate(self.masses[: f + 1]))

    def zeta_partial(self, s: int) -> Fraction:
        """sum_{a<=f_max} m_a p^{-as} as an exact rational (integer s >= 3)."""
        return sum(Fraction(m, self.p ** (a * s)) for a, m in enumerate(self.masses))

    def zeta_tail(self, s: int) -> Fraction:
        """Exact geometric tail sum_{a>f_max} m_a p^{-as} for f_max >= 3.

        Masses stabilize at m_a = p^{2a} (1 - p^{-2})^3 from a = 3 on, so the
        tail is a geometric series in p^{2-s}.
        """
        if self.f_max < 3:
            raise DomainError("need f_max >= 3 for the stabilized tail")
        if s <= 2:
            raise DivergenceError("local conductor zeta diverges for s <= 2")
        p = Fraction(self.p)
        unit = (1 - p ** -2) ** 3
        r = p ** (2 - s)
        return unit * p ** (2 * (self.f_max + 1)) * p ** (-(self.f_max + 1) * s) / (1 - r)

    def zeta_value(self, s: int) -> Fraction:
        return self.zeta_partial(s) + self.zeta_tail(s)


def local_masses(p: int, f_max: int) -> LocalMassTable:
    """Invert the oldform pattern against phi2(p^f): m = phi2 * mu * mu at p-powers."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if not 0 <= f_max <= 64:
        raise DomainError("f_max must lie in [0, 64]")
    masses = []
    for a in range(f_max + 1):
        m = _phi2_prime_power(p, a)
        if a >= 1:
            m -= 2 * _phi2_prime_power(p, a - 1)
        if a >= 2:
            m += _phi2_prime_power(p, a - 2)
        masses.append(m)
    table = LocalMassTable(p=p, masses=tuple(masses))
    if table.masses[0] != 1 or any(m < 0 for m in table.masses):
        raise RuntimeError("mass table failed its basic invariants")
    return table


def local_zeta_quotient(p: int, s: int) -> Fraction:
    """zeta_p(s-2)/zeta_p(s)^3 as an exact rational, zeta_p(s) = 1/(1-p^-s)."""
    pf = Fraction(p)
    return (1 - pf ** -s) ** 3 / (1 - pf ** (2 - s))


def global_volume(omega: str, c: AdmissibleConductor = None,
                  prec: Precision = _DEFAULT_PREC) -> float:
    """Spectral volume of one component (or all) of the limiting measure:
    (1/zeta(3)^3) * arch_conductor_zeta(omega, c, 3)."""
    z3 = float(np.real(riemann_zeta(3.0, prec)))
    if omega == "all":
        return sum(global_volume(w, c, prec) for w in ("D", "P0", "P1"))
    if omega not in ("D", "P0", "P1"):
        raise DomainError("omega must be D, P0, P1 or all")
    arch = arch_conductor_zeta(omega, None if omega == "D" else c, 3.0, prec)
    return float(np.real(arch.value)) / z3 ** 3
