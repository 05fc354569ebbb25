"""Level-one spectral trace identity, term by term, with certified truncations.

Geometric side: identity, hyperbolic (class numbers of indefinite binary
quadratic forms, enumerated by reduction cycles), elliptic (orders 2 and 3,
one class each), parabolic (one cusp).  Spectral side: the cuspidal sum,
the scattering term of the continuous spectrum, and, in weight zero, the
residual atom of the constant function at nu = i/2.

Weight one is evaluated formula-level only (the honest domain for a full
spectral cross-check starts at levels without -I); its terms are exercised
through internal identities, never against a spectrum.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate as _int
from scipy import special as _sp

from .config import Precision
from .errors import DomainError
from .kernels import class_counts_all
from .specfun import digamma, zeta_logderiv
from . import arith

_DEFAULT_PREC = Precision()
_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------


@dataclass
class TestFunction:
    """An even test function h on the spectral line with strip margin delta.

    h must accept numpy arrays of complex argument.  For the default family
    h(nu) = (1 + nu^2)^{-s} with real s the Fourier transform has the closed
    Bessel form; otherwise g falls back to oscillatory quadrature.
    g_override, when given, short-circuits both (used for linearity tests).
    """

    h: object
    delta: float = 0.4
    s: float = None
    g_override: object = None

    def h_at(self, nu):
        return np.asarray(self.h(np.asarray(nu, dtype=complex)))

    def g(self, x, prec: Precision = _DEFAULT_PREC):
        if self.g_override is not None:
            return float(self.g_override(x))
        if self.s is not None:
            return _g_closed_form(self.s, x)
        return _g_quadrature(self, x, prec)


def default_test_function(s: float, delta: float = 0.4) -> TestFunction:
    if s <= 1.0:
        raise DomainError("default family needs s > 1 for admissibility")
    return TestFunction(h=lambda nu: (1.0 + nu * nu) ** (-s), delta=delta, s=float(s))


def _g_closed_form(s: float, x: float) -> float:
    """(1/2pi) int (1+nu^2)^{-s} e^{i nu x} d nu for real s > 1/2."""
    ax = abs(float(x))
    if ax < 1e-12:
        return math.sqrt(math.pi) * _sp.gamma(s - 0.5) / _sp.gamma(s) / _TWO_PI
    pref = 2.0 * math.sqrt(math.pi) / _sp.gamma(s) / _TWO_PI
    return pref * (ax / 2.0) ** (s - 0.5) * _sp.kv(s - 0.5, ax)


def _g_quadrature(tf: TestFunction, x: float, prec: Precision) -> float:
    ax = abs(float(x))

    def f(nu):
        return float(np.real(tf.h_at(nu)))

    if ax < 1e-12:
        val, _ = _int.quad(f, 0, np.inf, epsabs=prec.quad_tol, limit=400)
    else:
        val, _ = _int.quad(f, 0, np.inf, weight="cos", wvar=ax,
                           epsabs=prec.quad_tol, limit=400)
    return val / math.pi


def check_admissible(tf: TestFunction, n_samples: int = 64) -> dict:
    """Numerical admissibility probe: evenness, strip finiteness, decay
    |h(nu)| (1+|nu|)^{2+delta} bounded with non-increasing large-|nu| trend."""
    delta = tf.delta
    nu = np.geomspace(0.1, 2000.0, n_samples)
    h_plus = tf.h_at(nu)
    h_minus = tf.h_at(-nu)
    even = bool(np.max(np.abs(h_plus - h_minus)) <= 1e-9 * (1 + np.max(np.abs(h_plus))))
    strip = nu[:24][:, None] + 1j * np.linspace(-0.5 - delta, 0.5 + delta, 7)[None, :]
    h_strip = tf.h_at(strip.ravel())
    finite = bool(np.all(np.isfinite(h_strip)))
    weighted = np.abs(h_plus) * (1.0 + nu) ** (2.0 + delta)
    head = float(np.max(weighted))
    trend_ok = bool(weighted[-1] <= 1.25 * weighted[-16])
    return {
        "even": even,
        "strip_finite": finite,
        "decay_bound": head,
        "decay_trend_ok": trend_ok,
        "admissible": even and finite and trend_ok and math.isfinite(head),
    }


def require_admissible(tf: TestFunction):
    rep = check_admissible(tf)
    if not rep["admissible"]:
        raise DomainError(f"test function fails admissibility: {rep}")
    return rep


# ---------------------------------------------------------------------------
# geometric terms
# ---------------------------------------------------------------------------


def identity_term(vol: float, tf: TestFunction, weight: int,
                  prec: Precision = _DEFAULT_PREC) -> float:
    """(vol/4pi) int h(nu) nu tanh/coth(pi nu) d nu."""
    if vol < 0:
        raise DomainError("volume must be nonnegative")
    if vol == 0.0:
        return 0.0
    if weight not in (0, 1):
        raise DomainError("weight must be 0 or 1")

    def f(nu):
        hv = float(np.real(tf.h_at(nu)))
        if weight == 0:
            return hv * nu * math.tanh(math.pi * nu)
        if nu < 1e-8:
            return hv / math.pi
        return hv * nu / math.tanh(math.pi * nu)

    val, _ = _int.quad(f, 0, np.inf, epsabs=prec.quad_tol, limit=400)
    return vol * 2.0 * val / (4.0 * math.pi)


@dataclass(frozen=True)
class HyperbolicClassRecord:
    """Primitive hyperbolic classes of one trace: norm and multiplicity."""

    t: int
    class_count: int

    @property
    def discriminant(self) -> int:
        return self.t * self.t - 4

    @property
    def norm(self) -> float:
        lam = (self.t + math.sqrt(self.discriminant)) / 2.0
        return lam * lam

    def __post_init__(self):
        if self.t < 3:
            raise DomainError("hyperbolic trace starts at 3")
        if self.class_count < 1:
            raise DomainError("class count must be positive")
        n = self.norm
        tr = math.sqrt(n) + 1.0 / math.sqrt(n)
        if abs(tr - self.t) > 1e-12 * self.t:
            raise DomainError("norm does not recover the trace")


@lru_cache(maxsize=16)
def _counts_with_primitive(t_max: int):
    allc = class_counts_all(t_max)
    prim = allc.copy()
    for t0 in range(3, t_max + 1):
        if prim[t0] <= 0:
            continue
        a, b = 2, t0  # Chebyshev-type lift of traces under powers
        while True:
            a, b = b, t0 * b - a
            if b > t_max:
                break
            prim[b] -= prim[t0]
    return allc, prim


def hyperbolic_classes(t_max: int):
    """One record per trace 3 <= t <= t_max with its primitive class count."""
    if not 3 <= t_max <= 10 ** 4:
        raise DomainError("t_max must lie in [3, 1e4]")
    _, prim = _counts_with_primitive(int(t_max))
    return [HyperbolicClassRecord(t=t, class_count=int(prim[t]))
            for t in range(3, t_max + 1) if prim[t] > 0]


def class_counts_all_elements(t_max: int):
    """All-element class counts (primitive or not), for oracle comparisons."""
    allc, _ = _counts_with_primitive(int(t_max))
    return allc


_LSUM_CAP = 80.0  # drop power terms once ell*log N exceeds this


def hyperbolic_term(tf: TestFunction, weight: int, t_max: int,
                    prec: Precision = _DEFAULT_PREC):
    """sum over primitive classes and powers of (log N / (N^{l/2}-N^{-l/2})) g(l log N).

    Returns (value, tail_bound).  The tail combines the measured prime-
    geodesic density with the decay of g beyond the last computed norm.
    All sign factors are +1 here: at level one every trace-t >= 3 class is
    realized with positive norm convention (the weight-1 sign subtlety for
    lattices containing -I is documented, not resolved).
    """
    if weight not in (0, 1):
        raise DomainError("weight must be 0 or 1")
    records = hyperbolic_classes(t_max)
    total = 0.0
    cum = 0.0
    kappa_w = 0.0
    for rec in records:
        N = rec.norm
        logN = math.log(N)
        sqN = math.sqrt(N)
        lsum = 0.0
        ell = 1
        while ell * logN <= _LSUM_CAP:
            lsum += logN / (sqN ** ell - sqN ** (-ell)) * tf.g(ell * logN, prec)
            ell += 1
        total += rec.class_count * lsum
        cum += rec.class_count * logN
        kappa_w = max(kappa_w, cum / N)
    # tail: sum_{N > Y} count*logN * w(N) <= kappa [ Y w(Y) + int_Y^inf w ]
    Y = records[-1].norm if records else 9.0
    kappa = 1.5 * max(kappa_w, 1.0)

    def w(u):
        su = math.sqrt(u)
        return tf.g(math.log(u), prec) / (su - 1.0 / su)

    wint, _ = _int.quad(lambda v: w(math.exp(v)) * math.exp(v), math.log(Y),
                        math.log(Y) + 80.0, epsabs=prec.quad_tol, limit=300)
    tail = kappa * (Y * w(Y) + wint)
    # the ell-sum cap drops terms beyond ell*logN > _LSUM_CAP, each below
    # g(cap) * cap / (e^{cap/2} - 1), a sub-1e-30 remainder per class
    nclasses = sum(rec.class_count for rec in records)
    tail += nclasses * abs(tf.g(_LSUM_CAP, prec)) * _LSUM_CAP / math.expm1(_LSUM_CAP / 2.0)
    return total, tail


def elliptic_term(tf: TestFunction, weight: int, classes=((2, 1), (3, 1)),
                  prec: Precision = _DEFAULT_PREC):
    """Elliptic contributions for the given (order m, count R_m) inventory.

    Weight 0 integrand: cosh(pi r (1-2l/m)) / cosh(pi r); weight 1 uses the
    sinh ratio and carries the extra -i h(0) per term, so the weight-1 value
    is complex (returned as such; level-one usage is formula-level only).
    """
    total = 0.0 + 0.0j
    for m, count in classes:
        if m < 2:
            raise DomainError("elliptic order must be >= 2")
        for ell in range(1, m):
            coeff = count / (2.0 * m * math.sin(math.pi * ell / m))
            a = 1.0 - 2.0 * ell / m

            def f(r, a=a):
                # cosh/sinh ratios in overflow-safe exponential form; |a| < 1
                hv = float(np.real(tf.h_at(r)))
                x = math.pi * r
                if weight == 0:
                    return hv * ((math.exp(x * (a - 1.0)) + math.exp(-x * (a + 1.0)))
                                 / (1.0 + math.exp(-2.0 * x)))
                if r < 1e-10:
                    return hv * a
                return hv * ((math.exp(x * (a - 1.0)) - math.exp(-x * (a + 1.0)))
                             / (1.0 - math.exp(-2.0 * x)))

            val, _ = _int.quad(f, 0, np.inf, epsabs=prec.quad_tol, limit=400)
            term = 2.0 * val
            if weight == 1:
                term = term - 1j * float(np.real(tf.h_at(0.0)))
            total += coeff * term
    return total if weight == 1 else float(np.real(total))


def parabolic_term(tf: TestFunction, weight: int, kappa: int = 1,
                   prec: Precision = _DEFAULT_PREC) -> complex:
    """-kappa [ (1/2pi) int h psi(1+ir) dr + h(0)/4 - g(0) log 2 ]  (+ weight-1
    extra integral of g against -tanh(u/4)/2 on (0, inf))."""
    if kappa < 1:
        raise DomainError("cusp count must be >= 1")

    def f_re(r):
        return float(np.real(tf.h_at(r)) * np.real(digamma(1.0 + 1j * r)))

    def f_im(r):
        # odd part: psi(1-ir) = conj psi(1+ir) makes the imaginary integral vanish
        return float(np.real(tf.h_at(r)) * np.imag(digamma(1.0 + 1j * r)))

    re, _ = _int.quad(f_re, 0, np.inf, epsabs=prec.quad_tol, limit=400)
    im_plus, _ = _int.quad(f_im, 0, np.inf, epsabs=prec.quad_tol, limit=400)
    psi_int = (2.0 * re + 0.0j) / _TWO_PI  # imaginary halves cancel pairwise
    h0 = float(np.real(tf.h_at(0.0)))
    g0 = tf.g(0.0, prec)
    val = psi_int + h0 / 4.0 - g0 * math.log(2.0)
    if weight == 1:
        extra, _ = _int.quad(lambda u: -tf.g(u, prec) * math.tanh(u / 4.0) / 2.0,
                             0, 60.0, epsabs=prec.quad_tol, limit=300)
        val = val + extra
    return -kappa * val


def xi_logderiv_re(nu, prec: Precision = _DEFAULT_PREC):
    """Re xi'/xi(1 + 2 i nu) for the completed zeta, finite through nu = 0."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    s = 1.0 + 2j * nu
    out = (-0.5 * math.log(math.pi) + 0.5 * digamma(s / 2.0) + zeta_logderiv(s, prec))
    return np.real(out)


def continuous_term_level1(tf: TestFunction, prec: Precision = _DEFAULT_PREC) -> float:
    """Scattering contribution at level one:
    (1/4pi) int h(nu) 4 Re xi'/xi(1+2 i nu) d nu + h(0)/4 * phi(1/2),
    with scattering value phi(1/2) = -1."""

    def f(nu):
        return float(np.real(tf.h_at(nu))) * 4.0 * float(xi_logderiv_re(nu, prec)[0])

    val = 0.0
    for a, b in ((0.0, 5.0), (5.0, 50.0), (50.0, 400.0)):
        part, _ = _int.quad(f, a, b, epsabs=prec.quad_tol, limit=400)
        val += part
    h0 = float(np.real(tf.h_at(0.0)))
    return 2.0 * val / (4.0 * math.pi) + h0 / 4.0 * (-1.0)


def scattering_phi_half(prec: Precision = _DEFAULT_PREC, eps: float = 1e-7) -> float:
    """Numeric limit of the scattering determinant at the central point."""
    from .specfun import riemann_zeta

    def xi(s):
        return math.pi ** (-s / 2) * _sp.gamma(s / 2) * complex(riemann_zeta(s, prec))

    s = 0.5 + eps
    return float(np.real(xi(2 * s - 1) / xi(2 * s)))


# ---------------------------------------------------------------------------
# assembled trace identity
# ---------------------------------------------------------------------------


@dataclass
class STFBreakdown:
    weight: int
    level: int
    identity: float
    hyperbolic: float
    elliptic: complex
    parabolic: complex
    continuous: float
    residual: float
    errors: dict = field(default_factory=dict)

    @property
    def cuspidal(self) -> float:
        geom = (self.identity + self.hyperbolic + float(np.real(self.elliptic))
                + float(np.real(self.parabolic)))
        return geom - self.continuous - self.residual


def stf_cuspidal_estimate(weight: int, tf: TestFunction, t_max: int,
                          prec: Precision = _DEFAULT_PREC) -> STFBreakdown:
    """Evaluate every term at level one and return the implied cuspidal sum.

    Weight 0 subtracts the residual atom h(i/2) of the constant function so
    the result estimates the sum of h over cusp-form parameters only.
    """
    require_admissible(tf)
    vol = arith.vol_y1(1)
    t0 = time.perf_counter()
    ident = identity_term(vol, tf, weight, prec)
    hyp, hyp_tail = hyperbolic_term(tf, weight, t_max, prec)
    ell = elliptic_term(tf, weight, prec=prec)
    para = parabolic_term(tf, weight, kappa=1, prec=prec)
    cont = continuous_term_level1(tf, prec)
    residual = float(np.real(tf.h_at(0.5j))) if weight == 0 else 0.0
    return STFBreakdown(
        weight=weight,
        level=1,
        identity=ident,
        hyperbolic=hyp,
        elliptic=ell,
        parabolic=para,
        continuous=cont,
        residual=residual,
        errors={"hyperbolic_tail": hyp_tail, "quadrature": prec.quad_tol * 10,
                "timing": time.perf_counter() - t0},
    )


# ---------------------------------------------------------------------------
# eigenvalue fixture
# ---------------------------------------------------------------------------


def load_eigenvalues(path) -> np.ndarray:
    """Plain text fixture: one positive spectral parameter per line, ascending,
    '#' comments allowed.  Validated on load."""
    from .errors import FixtureError

    vals = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                r = float(line)
            except ValueError as exc:
                raise FixtureError(f"{path}:{lineno}: not a number: {line!r}") from exc
            if r <= 0:
                raise FixtureError(f"{path}:{lineno}: spectral parameters must be positive")
            if vals and r <= vals[-1]:
                raise FixtureError(f"{path}:{lineno}: values must be strictly ascending")
            vals.append(r)
    if not vals:
        raise FixtureError(f"{path}: empty fixture")
    return np.asarray(vals)


def spectral_sum_with_tail(tf: TestFunction, eigenvalues: np.ndarray,
                           vol: float = None):
    """sum h(r_j) over the fixture plus a Weyl-law bound for the unseen tail.

    The spectral counting function is bounded by vol r^2 / (4 pi) + c1 r with
    a generous linear allowance; integrating h against that density beyond
    the fixture edge bounds the missing mass.
    """
    if vol is None:
        vol = arith.vol_y1(1)
    vals = np.real(tf.h_at(eigenvalues))
    R = float(eigenvalues[-1]) + 0.25
    c1 = 8.0

    def density(r):
        return vol * r / (2.0 * math.pi) + c1

    tail, _ = _int.quad(lambda r: float(np.real(tf.h_at(r))) * density(r), R, np.inf,
                        epsabs=1e-13, limit=300)
    return float(np.sum(vals)), float(abs(tail))
