"""Cold-atom realization: effective two-level parameters, rates, fields and couplings.

Units are arbitrary but shared (hbar = 1).  Every function is a closed-form
evaluation; :func:`effective_params` chains them and attaches the validity
report.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class LambdaSystemParams:
    """Lambda scheme |g> - |e> - |r> used for the engineered decay."""

    omega1: float
    omega2: float
    delta_re: float
    omega_re: float
    gamma_eg: float
    gamma_er: float
    delta_gr: float
    eta1: float
    nu: float

    def __post_init__(self):
        if self.gamma_eg < 0 or self.gamma_er < 0:
            raise ValueError("decay rates must be nonnegative")
        if self.nu <= 0:
            raise ValueError("nu must be positive")
        if not 0 < self.eta1 < 1:
            raise ValueError("eta1 must lie in (0, 1)")
        if self.eta1 >= 0.3:
            warnings.warn(f"eta1 = {self.eta1:g} is outside the Lamb-Dicke regime", stacklevel=2)

    @classmethod
    def from_wavenumber(cls, k1: float, mass: float, **kw) -> "LambdaSystemParams":
        """Derive eta1 from the laser wave number and the atomic mass."""
        return cls(eta1=lamb_dicke(k1, mass, kw["nu"]), **kw)


@dataclass(frozen=True)
class RamanFieldParams:
    omega_a: float
    omega_b: float
    eta_b: float
    delta_e: float

    def __post_init__(self):
        if self.delta_e == 0:
            raise ValueError("delta_e must be nonzero")


@dataclass(frozen=True)
class HubbardParams:
    t0: float
    t1: float
    u00: float
    u11: float
    u01: float

    def __post_init__(self):
        if min(self.u00, self.u11, self.u01) <= 0:
            raise ValueError("on-site interactions must be positive")
        ratio = max(abs(self.t0), abs(self.t1)) / min(self.u00, self.u11, self.u01)
        if ratio > 0.1:
            warnings.warn(f"|t|/U = {ratio:.3g} > 0.1; second-order couplings are unreliable",
                          stacklevel=2)


@dataclass(frozen=True)
class ConditionRecord:
    """One validity condition.  ``margin`` > 0 means satisfied with room to spare."""

    condition: str
    lhs: float
    rhs: float
    satisfied: bool
    margin: float


@dataclass(frozen=True)
class EffectiveParams:
    omega_eff: float
    delta_r: float
    big_gamma: float
    small_gamma: float
    s_plus: float
    s_minus: float
    nu_tilde: float
    delta_r_tilde: float
    a_plus: float
    a_minus: float
    b_x: float
    alpha1: float
    alpha2: float
    b_z: float
    validity: list[ConditionRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return _finite_or_none(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _finite_or_none(obj):
    # JSON has no inf/nan; infinite ratios show up as null
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite_or_none(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_or_none(v) for v in obj]
    return obj


def lamb_dicke(k: float, mass: float, nu: float) -> float:
    """eta = k / sqrt(2 M nu)."""
    if mass <= 0 or nu <= 0:
        raise ValueError("mass and nu must be positive")
    return k / math.sqrt(2 * mass * nu)


def _saturation(p: LambdaSystemParams) -> float:
    half_width = 0.5 * (p.gamma_eg + p.gamma_er)
    return (0.5 * p.omega_re) ** 2 / (half_width ** 2 + p.delta_re ** 2)


def effective_two_level(p: LambdaSystemParams) -> tuple[float, float, float, float]:
    """(omega_eff, delta_r, Gamma, gamma) after eliminating |e> and |r>."""
    if p.delta_re == 0:
        raise ValueError("delta_re must be nonzero")
    s = _saturation(p)
    omega_eff = p.omega1 * p.omega2 / p.delta_re
    delta_r = p.delta_gr - p.delta_re * s
    big_gamma = s * p.gamma_eg
    small_gamma = s * 0.5 * (p.gamma_eg + p.gamma_er)
    return omega_eff, delta_r, big_gamma, small_gamma


def _lorentz_pair(omega_eff, eta1, big_gamma, small_gamma, detuning, nu):
    width = big_gamma + small_gamma
    if width <= 0:
        raise ValueError("Gamma + gamma must be positive")
    pref = omega_eff ** 2 * eta1 ** 2
    return pref, width, (detuning + nu, detuning - nu)


def decay_rates(omega_eff: float, eta1: float, big_gamma: float, small_gamma: float,
                delta_r_tilde: float, nu: float) -> tuple[float, float]:
    """(A+, A-) heating and decay rates; A- is resonant at delta_r_tilde = nu."""
    pref, width, (dp, dm) = _lorentz_pair(omega_eff, eta1, big_gamma, small_gamma,
                                          delta_r_tilde, nu)
    a_plus = pref * width / (width ** 2 + dp ** 2)
    a_minus = pref * width / (width ** 2 + dm ** 2)
    return a_plus, a_minus


def stark_and_nu_tilde(omega_eff: float, eta1: float, big_gamma: float, small_gamma: float,
                       delta_r: float, nu: float, b_z: float) -> tuple[float, float, float, float]:
    """(s_plus, s_minus, nu_tilde, delta_r_tilde).

    The Stark shifts use the bare delta_r.  The renormalized detuning is fixed
    by delta_r_tilde - nu = delta_r - nu_tilde, i.e.
    delta_r_tilde = delta_r - (b_z + s_minus - s_plus).
    """
    pref, width, (dp, dm) = _lorentz_pair(omega_eff, eta1, big_gamma, small_gamma, delta_r, nu)
    s_plus = pref * dp / (width ** 2 + dp ** 2)
    s_minus = pref * dm / (width ** 2 + dm ** 2)
    nu_tilde = nu + b_z + s_minus - s_plus
    delta_r_tilde = delta_r + nu - nu_tilde
    return s_plus, s_minus, nu_tilde, delta_r_tilde


def transverse_field(p: RamanFieldParams) -> float:
    """B_x = 2 Omega_a Omega_b eta_b / delta_e."""
    return 2 * p.omega_a * p.omega_b * p.eta_b / p.delta_e


def spin_couplings(p: HubbardParams) -> tuple[float, float, float]:
    """(alpha1, alpha2, B_z) from second-order tunneling.

    alpha1 = -4 t0 t1 / U01
    alpha2 = 2 [(t0^2 + t1^2) / (2 U01) - t0^2 / U00 - t1^2 / U11]
    B_z    = t0^2 / U00 - t1^2 / U11
    """
    t0, t1 = p.t0, p.t1
    alpha1 = -4 * t0 * t1 / p.u01
    alpha2 = 2 * ((t0 ** 2 + t1 ** 2) / (2 * p.u01) - t0 ** 2 / p.u00 - t1 ** 2 / p.u11)
    b_z = t0 ** 2 / p.u00 - t1 ** 2 / p.u11
    return alpha1, alpha2, b_z


def _much_less(name, lhs, rhs, threshold) -> ConditionRecord:
    ratio = lhs / rhs if rhs > 0 else math.inf
    # tiny slack so that ratios landing exactly on the threshold count as satisfied
    ok = ratio <= threshold * (1 + 1e-12)
    return ConditionRecord(name, float(lhs), float(rhs), bool(ok), float(1 - ratio / threshold))


def _strictly_less(name, lhs, rhs) -> ConditionRecord:
    margin = 1 - lhs / rhs if rhs > 0 else -math.inf
    return ConditionRecord(name, float(lhs), float(rhs), bool(lhs < rhs), float(margin))


def validity_report(lam: LambdaSystemParams, raman: RamanFieldParams | None,
                    omega_eff: float, delta_r: float, big_gamma: float, small_gamma: float,
                    a_plus: float, a_minus: float, margin: float = 0.1) -> list[ConditionRecord]:
    """Evaluate cond1..cond4 and the saturation requirement.

    "<<" is read as lhs / rhs <= ``margin``.  Without Raman parameters cond4
    is reported as vacuously satisfied (lhs = rhs = 0).
    """
    out = [
        _much_less("cond1", abs(omega_eff),
                   min(big_gamma, small_gamma, lam.nu, abs(delta_r)), margin),
        _strictly_less("cond2", big_gamma + small_gamma, lam.nu),
        _much_less("cond3", a_plus, a_minus, margin),
    ]
    if raman is None:
        out.append(ConditionRecord("cond4", 0.0, 0.0, True, 1.0))
    else:
        out.append(_much_less("cond4", max(abs(raman.omega_a), abs(raman.omega_b)),
                              abs(raman.delta_e), margin))
    out.append(_much_less("saturation", _saturation(lam), 1.0, margin))
    return out


def effective_params(lam: LambdaSystemParams, raman: RamanFieldParams | None = None,
                     hubbard: HubbardParams | None = None, margin: float = 0.1) -> EffectiveParams:
    """Chain all closed forms; missing blocks contribute zero fields/couplings."""
    omega_eff, delta_r, big_gamma, small_gamma = effective_two_level(lam)
    alpha1, alpha2, b_z = spin_couplings(hubbard) if hubbard is not None else (0.0, 0.0, 0.0)
    s_plus, s_minus, nu_tilde, delta_r_tilde = stark_and_nu_tilde(
        omega_eff, lam.eta1, big_gamma, small_gamma, delta_r, lam.nu, b_z)
    a_plus, a_minus = decay_rates(omega_eff, lam.eta1, big_gamma, small_gamma,
                                  delta_r_tilde, lam.nu)
    b_x = transverse_field(raman) if raman is not None else 0.0
    validity = validity_report(lam, raman, omega_eff, delta_r, big_gamma, small_gamma,
                               a_plus, a_minus, margin)
    return EffectiveParams(omega_eff, delta_r, big_gamma, small_gamma, s_plus, s_minus,
                           nu_tilde, delta_r_tilde, a_plus, a_minus, b_x,
                           alpha1, alpha2, b_z, validity)
