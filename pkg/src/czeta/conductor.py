"""Archimedean conductor functions.

Two breeds live here:

* the axiomatic conductor of an archimedean unitary character, an exponential
  of gamma-factor log derivatives over the places, with its analytic
  continuation in the spectral parameter, and
* the admissible conductor class for weight-0/1 principal series: even,
  strip-holomorphic, zero-free, comparable to (1+|nu|)^2, real and
  non-negative on the real axis and the central imaginary segment.
  Membership is checked numerically by :func:`validate_conductor`.

Discrete series keep the classical exact value k^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, OutOfTubeError
from .specfun import gamma_factor_logderiv

_SUM_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class GL1ArchCharacter:
    """Unitary character data of the norm-one archimedean torus.

    r1 real places then r2 complex places; m_v in {0,1} at real places and
    any integer at complex places; nu a spectral vector constrained by
    sum_v d_v nu_v = 0 with d_v = 1 (real) or 2 (complex).
    """

    r1: int
    r2: int
    m: tuple
    nu: tuple

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0 or self.r1 + self.r2 == 0:
            raise DomainError("need at least one archimedean place")
        if len(self.m) != self.r1 + self.r2 or len(self.nu) != self.r1 + self.r2:
            raise DomainError("m and nu must have one entry per place")
        for v in range(self.r1):
            if self.m[v] not in (0, 1):
                raise DomainError("real-place discrete components lie in {0,1}")
        for mv in self.m[self.r1:]:
            if int(mv) != mv:
                raise DomainError("complex-place discrete components are integers")
        weighted = sum(complex(nv) * dv for nv, dv in zip(self.nu, self.degrees()))
        if abs(weighted) > _SUM_ZERO_TOL:
            raise DomainError(f"sum d_v nu_v = {weighted} violates the norm-one constraint")

    def degrees(self):
        return (1,) * self.r1 + (2,) * self.r2

    @property
    def nu_is_real(self):
        return all(abs(complex(nv).imag) <= _SUM_ZERO_TOL for nv in self.nu)


def rationals_character(m: int, nu=()):
    """Character over the rationals: one real place, zero-dimensional nu-space."""
    if m not in (0, 1):
        raise DomainError("parity m must be 0 or 1")
    return GL1ArchCharacter(r1=1, r2=0, m=(m,), nu=(0.0,))


def _logderiv_sum_real(chi: GL1ArchCharacter):
    total = 0.0
    for v, (mv, nv, dv) in enumerate(zip(chi.m, chi.nu, chi.degrees())):
        kind = "R" if v < chi.r1 else "C"
        z = 0.5 + abs(mv) / dv + 1j * complex(nv).real
        total += 2.0 * gamma_factor_logderiv(kind, z).real
    return total


def axiomatic_conductor(chi: GL1ArchCharacter) -> float:
    """exp sum_v 2 Re Gamma'_v/Gamma_v(1/2 + |m_v|/d_v + i nu_v), real nu."""
    if not chi.nu_is_real:
        raise DomainError("axiomatic_conductor expects real nu; "
                          "use axiomatic_conductor_analytic for complex arguments")
    return math.exp(_logderiv_sum_real(chi))


def axiomatic_conductor_analytic(chi: GL1ArchCharacter, side_radius: float = 0.4) -> complex:
    """Analytic continuation of the axiomatic conductor into the nu-tube.

    Valid for |Im nu_v| <= side_radius < 1/2; reduces to the real-locus value
    when nu is real, and is even under nu -> -nu by construction.
    """
    if not 0 <= side_radius < 0.5:
        raise DomainError("side_radius must lie in [0, 1/2)")
    total = 0.0 + 0.0j
    for v, (mv, nv, dv) in enumerate(zip(chi.m, chi.nu, chi.degrees())):
        nv = complex(nv)
        if abs(nv.imag) > side_radius + 1e-15:
            raise OutOfTubeError(f"|Im nu_{v}| = {abs(nv.imag)} exceeds side radius {side_radius}")
        kind = "R" if v < chi.r1 else "C"
        a = 0.5 + abs(mv) / dv
        total += gamma_factor_logderiv(kind, a + 1j * nv)
        total += gamma_factor_logderiv(kind, a - 1j * nv)
    value = np.exp(total)
    return complex(value)


# ---------------------------------------------------------------------------
# admissible conductors for the principal series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibleConductor:
    """An evaluable candidate member of the admissible conductor class.

    evaluator must accept complex scalars or numpy arrays.  delta is the
    margin beyond the closed strip |Im nu| <= 1/2 on which holomorphy and
    zero-freeness are claimed.  The default family 1 + nu^2 has zeros at
    +-i, so delta is capped at 0.49.
    """

    delta: float = 0.4
    name: str = "one-plus-nu-squared"
    params: dict = field(default_factory=dict)
    evaluator: object = None

    def __post_init__(self):
        if not 0 < self.delta <= 0.49:
            raise DomainError("delta must lie in (0, 0.49]")

    def __call__(self, nu):
        if self.evaluator is None:
            nu = np.asarray(nu)
            return 1.0 + nu * nu
        return self.evaluator(nu)


@dataclass(frozen=True)
class DiscreteSeriesConductor:
    """Weight-k discrete series carry conductor k^2, exactly."""

    def __call__(self, k: int) -> int:
        k = int(k)
        if k < 2:
            raise DomainError("discrete series require weight k >= 2")
        return k * k


def default_conductor(delta: float = 0.4) -> AdmissibleConductor:
    return AdmissibleConductor(delta=delta)


@dataclass
class ConductorValidationReport:
    """Outcome of the five admissibility checks.

    verdicts[i] for i in 1..5 is True / False / None (None = not evaluated;
    later geometric checks are skipped when evenness already fails, since
    they are meaningless for a non-even candidate).
    """

    name: str
    delta: float
    r_max: float
    verdicts: dict
    diagnostics: dict

    @property
    def failed(self):
        return sorted(i for i, v in self.verdicts.items() if v is False)

    @property
    def passed(self):
        return all(v is True for v in self.verdicts.values())


def validate_conductor(
    c: AdmissibleConductor,
    r_max: float = 1000.0,
    n_grid: int = 48,
    cr_tol: float = 1e-6,
    reality_tol: float = 1e-9,
    ratio_window: tuple = (1e-3, 1e3),
) -> ConductorValidationReport:
    """Numerically test the five admissibility conditions on a strip grid.

    (1) evenness on a complex grid; (2) holomorphy via Cauchy-Riemann
    residuals; (3) comparability with (1+|nu|)^2 on real samples
    |nu| in [1, r_max] (the asymptotic regime; behaviour near 0 is governed
    by (4) and (5)); (4) zero-freeness via the boundary winding number;
    (5) reality and non-negativity on R union i[-1/2, 1/2].
    """
    delta = c.delta
    verdicts = {i: None for i in range(1, 6)}
    diag = {}

    re_grid = np.concatenate([
        -np.geomspace(1e-2, r_max, n_grid)[::-1],
        [0.0],
        np.geomspace(1e-2, r_max, n_grid),
    ])
    im_grid = np.linspace(-(0.5 + delta), 0.5 + delta, 9)
    zz = (re_grid[:, None] + 1j * im_grid[None, :]).ravel()

    vals = np.asarray(c(zz), dtype=complex)
    vals_neg = np.asarray(c(-zz), dtype=complex)
    even_resid = float(np.max(np.abs(vals - vals_neg) / (1.0 + np.abs(vals))))
    diag["evenness_residual"] = even_resid
    verdicts[1] = even_resid <= 1e-9
    if not verdicts[1]:
        return ConductorValidationReport(c.name, delta, r_max, verdicts, diag)

    # (2) Cauchy-Riemann residuals, central differences in both directions
    h = 1e-5
    inner = zz[np.abs(zz.imag) <= 0.5 + delta - 2 * h]
    fx = (np.asarray(c(inner + h)) - np.asarray(c(inner - h))) / (2 * h)
    fy = (np.asarray(c(inner + 1j * h)) - np.asarray(c(inner - 1j * h))) / (2j * h)
    cr_resid = float(np.max(np.abs(fx - fy) / (1.0 + np.abs(fx))))
    diag["cauchy_riemann_residual"] = cr_resid
    verdicts[2] = np.all(np.isfinite(fx)) and np.all(np.isfinite(fy)) and cr_resid <= cr_tol

    # (3) comparability window on the asymptotic real samples
    nu_real = np.geomspace(1.0, r_max, 4 * n_grid)
    ratio = np.asarray(c(nu_real), dtype=complex) / (1.0 + nu_real) ** 2
    ratio_ok = np.all(np.abs(ratio.imag) <= reality_tol * (1 + np.abs(ratio)))
    rmin, rmax_ = float(np.min(ratio.real)), float(np.max(ratio.real))
    diag["ratio_window"] = (rmin, rmax_)
    verdicts[3] = bool(ratio_ok and ratio_window[0] <= rmin and rmax_ <= ratio_window[1])

    # (4) winding number along the rectangle boundary
    H = 0.5 + delta
    per_unit = 8
    top = np.linspace(-r_max + 1j * H, r_max + 1j * H, int(2 * r_max * per_unit) + 2)
    right = np.linspace(r_max + 1j * H, r_max - 1j * H, int(2 * H * per_unit) + 2)
    bottom = np.linspace(r_max - 1j * H, -r_max - 1j * H, int(2 * r_max * per_unit) + 2)
    left = np.linspace(-r_max - 1j * H, -r_max + 1j * H, int(2 * H * per_unit) + 2)
    boundary = np.concatenate([top, right, bottom, left])
    bvals = np.asarray(c(boundary), dtype=complex)
    if np.any(bvals == 0) or np.any(~np.isfinite(bvals)):
        verdicts[4] = False
        diag["winding"] = None
    else:
        dphase = np.angle(bvals[1:] / bvals[:-1])
        winding = float(np.sum(dphase) / (2 * math.pi))
        diag["winding"] = winding
        diag["max_phase_step"] = float(np.max(np.abs(dphase)))
        verdicts[4] = abs(winding) < 0.25 and diag["max_phase_step"] < 0.5 * math.pi

    # (5) reality and non-negativity on R and on i[-1/2, 1/2]
    seg = np.concatenate([nu_real, -nu_real, [0.0], 1j * np.linspace(-0.5, 0.5, 101)])
    sv = np.asarray(c(seg), dtype=complex)
    real_ok = np.all(np.abs(sv.imag) <= reality_tol * (1 + np.abs(sv)))
    nonneg_ok = np.all(sv.real >= -reality_tol)
    diag["segment_min_real"] = float(np.min(sv.real))
    verdicts[5] = bool(real_ok and nonneg_ok)

    return ConductorValidationReport(c.name, delta, r_max, verdicts, diag)
