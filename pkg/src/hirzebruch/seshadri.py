"""Seshadri-type constants and minimality of non-positive-at-infinity valuations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cluster import DivisorialValuation, is_npi
from .errors import NotBig, NotNPI, NotNefBig


@dataclass(frozen=True)
class BigDivisor:
    """The class ``a F + b M`` on the base surface."""

    a: int
    b: int

    def is_nef(self) -> bool:
        return self.a >= 0 and self.b >= 0

    def is_big(self, delta: int) -> bool:
        return self.b > 0 and self.a > -delta * self.b

    def is_pseudoeffective(self, delta: int) -> bool:
        return self.b >= 0 and self.a + delta * self.b >= 0


def as_divisor(d) -> BigDivisor:
    if isinstance(d, BigDivisor):
        return d
    a, b = d
    return BigDivisor(int(a), int(b))


def _require_npi(val: DivisorialValuation) -> None:
    if not is_npi(val):
        raise NotNPI("the valuation is not non-positive at infinity")


def _require_big(val: DivisorialValuation, d: BigDivisor) -> None:
    if not d.is_big(val.delta):
        raise NotBig(f"{d.a} F + {d.b} M is not big on the delta={val.delta} surface")


def theta(val: DivisorialValuation, d) -> int:
    """The sign invariant steering every breakpoint formula.

    Special valuations: ``a*phi_f1 - b*phi_m``; non-special ones replace the
    section value by its excess over ``delta`` fibers.
    """
    d = as_divisor(d)
    if val.is_special:
        return d.a * val.phi_f1 - d.b * val.phi_m
    return d.a * val.phi_f1 - d.b * (val.phi_m - val.delta * val.phi_f1)


def vol(val: DivisorialValuation, d) -> Fraction:
    """Volume of a big class on the base surface: the self-pairing of its
    positive part."""
    d = as_divisor(d)
    _require_big(val, d)
    if d.is_nef():
        return Fraction(2 * d.a * d.b + d.b * d.b * val.delta)
    scale = d.b + Fraction(d.a, val.delta)
    return scale * scale * val.delta


def mu_hat(val: DivisorialValuation, d) -> Fraction:
    """The Seshadri-type constant of the pair, in closed form.

    Special valuations: ``(a + b*delta)*phi_f1 + b*phi_m`` for every big
    class (the fiber-and-section witness stays effective even when ``a`` is
    negative).  Non-special valuations use ``a*phi_f1 + b*phi_m`` on nef
    classes and reduce along the positive part otherwise.
    """
    d = as_divisor(d)
    _require_npi(val)
    _require_big(val, d)
    if val.is_special:
        return Fraction((d.a + d.b * val.delta) * val.phi_f1 + d.b * val.phi_m)
    if d.a >= 0:
        return Fraction(d.a * val.phi_f1 + d.b * val.phi_m)
    return (d.b + Fraction(d.a, val.delta)) * val.phi_m


def bigness_threshold(val: DivisorialValuation, d) -> Fraction:
    """Largest ``t`` with ``D* - t E_r`` big: the sweep range of the body.

    Equals :func:`mu_hat` except for a non-nef class centered on the
    negative section, where the fixed part of the linear systems carries
    extra valuation.
    """
    d = as_divisor(d)
    _require_npi(val)
    _require_big(val, d)
    if d.is_nef():
        return mu_hat(val, d)
    scale = d.b + Fraction(d.a, val.delta)
    return scale * mu_hat(val, BigDivisor(0, 1))


def lower_bound(val: DivisorialValuation, d) -> tuple[Fraction, Fraction, bool]:
    """Squared comparison ``mu_hat^2 >= vol(D) * beta_bar[-1]``.

    Returns both sides and the verified inequality.
    """
    d = as_divisor(d)
    _require_npi(val)
    mu = mu_hat(val, d)
    rhs = vol(val, d) * val.last_contact
    return mu * mu, rhs, mu * mu >= rhs


def _equality_case(val: DivisorialValuation) -> bool:
    quad = val.delta * val.phi_f1 * val.phi_f1
    base = 2 * val.phi_m * val.phi_f1
    if val.is_special:
        return base + quad == val.last_contact
    return base - quad == val.last_contact


def is_minimal(val: DivisorialValuation, d) -> bool:
    """Whether the constant attains the volume lower bound for this class."""
    d = as_divisor(d)
    _require_npi(val)
    if not (d.is_nef() and d.is_big(val.delta)):
        raise NotNefBig("minimality is decided for nef and big classes")
    result = _equality_case(val) and theta(val, d) == 0
    mu2, rhs, holds = lower_bound(val, d)
    assert holds and (mu2 == rhs) == result
    return result


def never_minimal(val: DivisorialValuation) -> bool:
    """Strict inequality form: non-minimal with respect to every big class."""
    _require_npi(val)
    quad = val.delta * val.phi_f1 * val.phi_f1
    base = 2 * val.phi_m * val.phi_f1
    if val.is_special:
        return base + quad > val.last_contact
    return base - quad > val.last_contact


def mu_hat_bisection_check(val: DivisorialValuation, d) -> bool:
    """Certify the constant as the bigness threshold through decompositions.

    Checks a strictly positive volume just below the constant and a zero
    self-pairing of the positive part exactly at it.
    """
    from .lattice import curve_basis, pair, pullback
    from .zariski import zariski_decompose

    d = as_divisor(d)
    _require_npi(val)
    if not (d.is_nef() and d.is_big(val.delta)):
        raise NotNefBig("the bisection certificate needs a nef and big class")
    mu = mu_hat(val, d)
    basis = curve_basis(val)
    base = pullback(val.delta, d.a, d.b, val.r)

    def positive_part(t):
        from .lattice import exceptional

        cls = base - t * exceptional(val.delta, val.r, val.r)
        return zariski_decompose(cls, basis).positive

    just_below = mu * Fraction(1023, 1024)
    p_below = positive_part(just_below)
    p_at = positive_part(mu)
    return pair(p_below, p_below) > 0 and pair(p_at, p_at) == 0
