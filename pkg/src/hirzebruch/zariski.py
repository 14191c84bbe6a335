"""Zariski decompositions on the base surface and on the blown-up surface.

Two independent routes are provided.  The iterative engine
(:func:`zariski_decompose`) grows the support of the negative part inside
the finite list of cone generators until the remainder is nef, solving the
orthogonality conditions exactly at each step.  The closed forms
(:func:`closed_form_decomposition`) evaluate the explicit positive and
negative parts at the two distinguished breakpoints of each sign regime, so
the engine and the formulas can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cluster import (
    DivisorialValuation,
    FlagValuation,
    chain_value,
    truncate_valuation,
    truncation_values,
)
from .errors import (
    NegativePartOnEr,
    NotPseudoeffective,
    WrongSignCase,
)
from .lattice import (
    CurveBasis,
    DivisorClassZ,
    curve_basis,
    div_class,
    exceptional,
    is_negative_definite,
    pair,
    pullback,
)
from .seshadri import BigDivisor, as_divisor, mu_hat, theta, _require_npi


@dataclass(frozen=True)
class ZariskiPair:
    """An exact decomposition ``input = positive + negative``.

    The negative part is stored as coefficients on named cone generators,
    in the basis order.  The positive part is nef against the generator
    list, orthogonal to every component and the support Gram matrix is
    negative definite; these are enforced at construction sites.
    """

    positive: DivisorClassZ
    components: tuple[tuple[str, Fraction], ...]
    basis: CurveBasis

    def coefficient(self, name: str) -> Fraction:
        for n, c in self.components:
            if n == name:
                return c
        return Fraction(0)

    def negative_class(self) -> DivisorClassZ:
        total = 0 * self.positive
        for name, coeff in self.components:
            total = total + coeff * self.basis.get(name)
        return total

    def support(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.components)


@dataclass(frozen=True)
class BaseDecomposition:
    """Decomposition of ``a F + b M`` on the base surface itself."""

    positive: tuple[Fraction, Fraction]
    negative_m0: Fraction


def zariski_fano_base(delta: int, d) -> BaseDecomposition:
    """Positive and negative parts of a pseudoeffective class on the base.

    Nef classes are their own positive part; a big-but-not-nef class sheds a
    multiple of the negative section.
    """
    d = as_divisor(d)
    if not d.is_pseudoeffective(delta):
        raise NotPseudoeffective(f"{d.a} F + {d.b} M is not pseudoeffective")
    if d.a >= 0:
        return BaseDecomposition((Fraction(d.a), Fraction(d.b)), Fraction(0))
    coeff = Fraction(-d.a, delta)
    return BaseDecomposition((Fraction(0), d.b - coeff), coeff)


def _solve(matrix, rhs):
    # Gaussian elimination with partial pivoting over exact rationals.
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = None
        for row in range(col, n):
            if a[row][col] != 0:
                piv = row
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for row in range(n):
            if row != col and a[row][col] != 0:
                factor = a[row][col]
                a[row] = [x - factor * y for x, y in zip(a[row], a[col])]
    return [a[i][n] for i in range(n)]


def zariski_decompose(d: DivisorClassZ, basis: CurveBasis) -> ZariskiPair:
    """Iterative decomposition over the finite cone-generator list.

    Starting from an empty support, repeatedly solve for the negative part
    orthogonal to the remainder and enlarge the support by every generator
    the remainder still meets negatively.  The support only grows, so the
    loop stabilizes; failure to produce non-negative coefficients with a
    negative-definite support means the class is not pseudoeffective.
    """
    items = basis.items()
    gram = [[pair(a, b) for _, b in items] for _, a in items]
    inner = [pair(d, c) for _, c in items]
    support: list[int] = []
    coeffs: list[Fraction] = []
    for _ in range(len(items) + 1):
        if support:
            sub = [[gram[i][j] for j in support] for i in support]
            rhs = [inner[i] for i in support]
            solved = _solve(sub, rhs)
            if solved is None:
                raise NotPseudoeffective("orthogonality system is singular")
            coeffs = solved
            positive = d
            for idx, lam in zip(support, coeffs):
                positive = positive - lam * items[idx][1]
        else:
            positive = d
        bad = [
            k
            for k in range(len(items))
            if k not in support and pair(positive, items[k][1]) < 0
        ]
        if not bad:
            break
        support.extend(bad)
    else:
        raise NotPseudoeffective("support enlargement did not stabilize")
    if any(c < 0 for c in coeffs):
        raise NotPseudoeffective("negative part would need a negative coefficient")
    chosen = [(idx, c) for idx, c in zip(support, coeffs) if c > 0]
    chosen.sort(key=lambda pc: pc[0])
    if chosen and not is_negative_definite([items[idx][1] for idx, _ in chosen]):
        raise NotPseudoeffective("support Gram matrix is not negative definite")
    return ZariskiPair(
        positive, tuple((items[idx][0], c) for idx, c in chosen), basis
    )


def _require_nef_big(val: DivisorialValuation, d: BigDivisor) -> None:
    from .errors import NotNefBig

    if not (d.is_nef() and d.is_big(val.delta)):
        raise NotNefBig("breakpoints are defined for nef and big classes")


def t_values(val: DivisorialValuation, d) -> tuple[Fraction, Fraction]:
    """The two breakpoints of the negative-part support for this sign regime.

    Both are certified to lie between 0 and the Seshadri-type constant.
    """
    d = as_divisor(d)
    _require_npi(val)
    _require_nef_big(val, d)
    th = theta(val, d)
    total = val.last_contact
    if th >= 0:
        lo = Fraction(d.b * total, val.phi_f1)
        hi = lo + th
    elif val.is_special:
        lo = Fraction(d.a * total, val.phi_m)
        hi = Fraction(
            (d.a + d.b * val.delta) * total - th * val.phi_m,
            val.phi_m + val.delta * val.phi_f1,
        )
    else:
        w = val.phi_m - val.delta * val.phi_f1
        lo = Fraction((d.a + d.b * val.delta) * total, val.phi_m)
        hi = Fraction(d.a * total - th * val.phi_m, w)
    mu = mu_hat(val, d)
    if not (0 <= lo <= hi <= mu):
        raise AssertionError(f"breakpoints {lo}, {hi} escape [0, {mu}]")
    return lo, hi


def _scaled_exceptional_sum(val: DivisorialValuation) -> DivisorClassZ:
    return div_class(val.delta, 0, 0, tuple(-x for x in val.m))


def closed_form_decomposition(
    val: DivisorialValuation, d, which: str, regime: str | None = None
) -> ZariskiPair:
    """Exact positive and negative parts at a breakpoint, without iteration.

    ``which`` selects the ``lower`` or ``upper`` breakpoint of
    :func:`t_values`.  The sign of the invariant together with the
    classification picks one of the four regimes; passing ``regime``
    ("fiber" for the non-negative sign, "section" for the negative one)
    asserts the expectation and raises :class:`WrongSignCase` on mismatch.
    """
    d = as_divisor(d)
    _require_npi(val)
    _require_nef_big(val, d)
    if which not in ("lower", "upper"):
        raise ValueError("which must be 'lower' or 'upper'")
    th = theta(val, d)
    if regime is not None:
        expected = "fiber" if th >= 0 else "section"
        if regime != expected:
            raise WrongSignCase(f"sign invariant {th} selects the {expected} regime")
    basis = curve_basis(val)
    values = truncation_values(val)
    delta, r = val.delta, val.r
    base = pullback(delta, d.a, d.b, r)
    esum = _scaled_exceptional_sum(val)
    f1_chain = val.config.f1_chain
    m_chain = val.config.m_chain

    def trunc_chain(i, chain):
        return chain_value(truncate_valuation(val, i), chain)

    def build(positive, named, coeff_fn):
        comps = []
        if named is not None and named[1] != 0:
            comps.append(named)
        for i in range(1, r):
            c = coeff_fn(i)
            if c != 0:
                comps.append((f"E{i}", c))
        order = {name: k for k, name in enumerate(basis.names)}
        comps.sort(key=lambda nc: order[nc[0]])
        return ZariskiPair(positive, tuple(comps), basis)

    if th >= 0:
        scale = Fraction(d.b, val.phi_f1)
        if which == "lower":
            positive = base + scale * esum
            return build(positive, None, lambda i: scale * values[i - 1])
        if val.is_special:
            ray = div_class(delta, val.phi_m, val.phi_f1, tuple(-x for x in val.m))
        else:
            ray = div_class(
                delta,
                val.phi_m - delta * val.phi_f1,
                val.phi_f1,
                tuple(-x for x in val.m),
            )
        positive = scale * ray
        named = ("F1", Fraction(th, val.phi_f1))
        return build(
            positive,
            named,
            lambda i: Fraction(
                d.b * values[i - 1] + th * trunc_chain(i, f1_chain), val.phi_f1
            ),
        )

    if val.is_special:
        denom = val.phi_m + delta * val.phi_f1
        if which == "lower":
            scale = Fraction(d.a, val.phi_m)
            positive = base + scale * esum
            return build(positive, None, lambda i: scale * values[i - 1])
        ray = div_class(delta, val.phi_m, val.phi_f1, tuple(-x for x in val.m))
        positive = Fraction(d.a + d.b * delta, denom) * ray
        named = ("M0", Fraction(-th, denom))
        return build(
            positive,
            named,
            lambda i: Fraction(
                (d.a + d.b * delta) * values[i - 1] - th * trunc_chain(i, m_chain),
                denom,
            ),
        )

    w = val.phi_m - delta * val.phi_f1
    if which == "lower":
        scale = Fraction(d.a + d.b * delta, val.phi_m)
        positive = base + scale * esum
        return build(positive, None, lambda i: scale * values[i - 1])
    ray = div_class(delta, w, val.phi_f1, tuple(-x for x in val.m))
    positive = Fraction(d.a, w) * ray
    named = ("M1", Fraction(-th, w))
    return build(
        positive,
        named,
        lambda i: Fraction(d.a * values[i - 1] - th * trunc_chain(i, m_chain), w),
    )


def alpha_beta(flag: FlagValuation, d, t) -> tuple[Fraction, Fraction]:
    """Lower and upper boundary values of the body above abscissa ``t``.

    Decomposes ``D* - t E_r``; the lower value is the negative-part
    coefficient on the second divisor through the flag point (zero for a
    free flag point), the upper value adds the pairing of the positive part
    with the last exceptional curve.
    """
    val = flag.base
    d = as_divisor(d)
    t = Fraction(t)
    if t < 0:
        raise ValueError("the sweep parameter must be non-negative")
    basis = curve_basis(val)
    cls = pullback(val.delta, d.a, d.b, val.r) - t * exceptional(
        val.delta, val.r, val.r
    )
    zp = zariski_decompose(cls, basis)
    last = f"E{val.r}"
    if zp.coefficient(last) != 0:
        raise NegativePartOnEr(
            f"E{val.r} entered the negative part at t = {t}; "
            "the position contract is violated"
        )
    alpha = zp.coefficient(f"E{flag.eta}") if flag.is_satellite else Fraction(0)
    beta = alpha + pair(zp.positive, basis.get(last))
    return alpha, beta
