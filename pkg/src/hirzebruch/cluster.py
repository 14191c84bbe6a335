"""Clusters of infinitely near points and their divisorial valuations.

A configuration records the centers ``p_1, ..., p_r`` of a chain of point
blow-ups starting at a closed point of a ruled surface, together with two
kinds of combinatorial data:

* proximity: ``p_{i+1}`` always lies on the exceptional divisor of ``p_i``;
  a *satellite* point additionally lies on the strict transform of one older
  exceptional divisor, recorded in ``extra``;
* incidence: whether a point lies on the strict transform of the fiber
  through ``p_1`` (``on_f1``) or of the distinguished section (``on_m``).

Everything else is derived from this data by exact integer arithmetic: the
multiplicity vector of the associated divisorial valuation, values of curve
germs, the minimal generators of the value semigroup, the special or
non-special classification and the non-positivity-at-infinity test.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadIncidence,
    BadSatellite,
    ChainBroken,
    DimensionMismatch,
    NotRealizable,
    NotSatellite,
    SemigroupOverflow,
    raise_config_errors,
)

SPECIAL = "special"
GENERAL = "general"
NON_SPECIAL = "non-special"

# Bit width cap for the semigroup sieve; germ values beyond this are refused.
_SEMIGROUP_VALUE_CAP = 1 << 24


@dataclass(frozen=True)
class Surface:
    """A ruled surface of invariant ``delta`` with a marked closed point.

    ``point_kind`` records whether the marked point lies on the negative
    section.  For ``delta == 0`` every point is declared special and the
    distinguished section is the member of the second ruling through it.
    """

    delta: int
    point_kind: str = SPECIAL

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be a non-negative integer")
        if self.point_kind not in (SPECIAL, GENERAL):
            raise ValueError(f"unknown point kind {self.point_kind!r}")
        if self.delta == 0 and self.point_kind != SPECIAL:
            raise ValueError("every point of the delta=0 surface is special")


@dataclass(frozen=True)
class ClusterPoint:
    extra: int | None = None
    on_f1: bool = False
    on_m: bool = False


@dataclass(frozen=True)
class Configuration:
    """A validated chain of infinitely near points."""

    points: tuple[ClusterPoint, ...]

    @property
    def r(self) -> int:
        return len(self.points)

    def extra(self, i: int) -> int | None:
        return self.points[i - 1].extra

    def is_free(self, i: int) -> bool:
        return self.points[i - 1].extra is None

    def proximate_to(self, i: int, r: int | None = None) -> tuple[int, ...]:
        """Indices ``j <= r`` of the points proximate to ``p_i``."""
        r = self.r if r is None else r
        out = []
        if i + 1 <= r:
            out.append(i + 1)
        for j in range(i + 2, r + 1):
            if self.points[j - 1].extra == i:
                out.append(j)
        return tuple(out)

    @property
    def f1_chain(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.points, 1) if p.on_f1)

    @property
    def m_chain(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.points, 1) if p.on_m)


def _coerce_point(rec, index: int):
    if isinstance(rec, ClusterPoint):
        return None, rec.extra, rec.on_f1, rec.on_m
    if isinstance(rec, Mapping):
        known = {"parent", "extra_proximity", "extra", "on_f1", "on_m"}
        unknown = set(rec) - known
        if unknown:
            raise ChainBroken([f"p{index}: unknown fields {sorted(unknown)}"])
        extra = rec.get("extra_proximity", rec.get("extra"))
        return rec.get("parent"), extra, bool(rec.get("on_f1")), bool(rec.get("on_m"))
    raise ChainBroken([f"p{index}: unsupported point record {rec!r}"])


def build_configuration(surface: Surface, points: Sequence) -> Configuration:
    """Validate raw point records and assemble a :class:`Configuration`.

    Every violated constraint is collected; the raised error carries the
    full diagnostic list.
    """
    records = [_coerce_point(rec, i) for i, rec in enumerate(points, 1)]
    if not records:
        raise ChainBroken(["a configuration needs at least one point"])

    violations = []
    pts = []
    for i, (parent, extra, on_f1, on_m) in enumerate(records, 1):
        if i == 1:
            if parent is not None:
                violations.append((ChainBroken, "p1 has no parent"))
        elif parent is not None and parent != i - 1:
            violations.append(
                (ChainBroken, f"parent of p{i} must be p{i - 1}, got p{parent}")
            )
        if extra is not None:
            allowed = set()
            if i >= 3:
                allowed.add(i - 2)
                prev_extra = records[i - 2][1]
                if prev_extra is not None:
                    allowed.add(prev_extra)
            if extra not in allowed:
                violations.append(
                    (BadSatellite, f"p{i} cannot be proximate to p{extra}")
                )
        pts.append(ClusterPoint(extra, on_f1, on_m))

    f1 = [i for i, p in enumerate(pts, 1) if p.on_f1]
    m = [i for i, p in enumerate(pts, 1) if p.on_m]
    if not f1 or f1[0] != 1:
        violations.append((BadIncidence, "the fiber through the center contains p1"))
    for name, chain in (("fiber", f1), ("section", m)):
        if chain and chain != list(range(1, len(chain) + 1)):
            violations.append(
                (BadIncidence, f"{name} incidences must form an initial chain")
            )
        for i in chain:
            if i > 1 and pts[i - 1].extra is not None:
                violations.append(
                    (BadIncidence, f"{name} chain contains the satellite point p{i}")
                )
    if surface.point_kind == SPECIAL and 1 not in m:
        violations.append(
            (BadIncidence, "the distinguished section contains p1 for this center")
        )
    if len(f1) > 1 and len(m) > 1:
        violations.append(
            (BadIncidence, "fiber and section germs separate after one blow-up")
        )

    raise_config_errors(violations)
    return Configuration(tuple(pts))


def truncate(config: Configuration, k: int) -> Configuration:
    """The configuration of the first ``k`` points."""
    if not 1 <= k <= config.r:
        raise ValueError(f"truncation index {k} out of range 1..{config.r}")
    return Configuration(config.points[:k])


def multiplicities(config: Configuration, r: int | None = None) -> tuple[int, ...]:
    """Multiplicity vector of the valuation of the first ``r`` points.

    Solves the proximity equalities backwards: the last point has
    multiplicity one and each earlier multiplicity is the sum over the
    points proximate to it.
    """
    r = config.r if r is None else r
    if not 1 <= r <= config.r:
        raise ValueError(f"index {r} out of range 1..{config.r}")
    m = [0] * (r + 1)
    for i in range(r, 0, -1):
        prox = config.proximate_to(i, r)
        m[i] = sum(m[j] for j in prox) if prox else 1
    return tuple(m[1:])


@lru_cache(maxsize=None)
def _truncation_multiplicities(config: Configuration) -> tuple[tuple[int, ...], ...]:
    return tuple(multiplicities(config, i) for i in range(1, config.r + 1))


@dataclass(frozen=True)
class GermVector:
    """Multiplicities of a curve germ at the points of a configuration."""

    mult: tuple[int, ...]

    def __add__(self, other: "GermVector") -> "GermVector":
        if len(self.mult) != len(other.mult):
            raise DimensionMismatch("germ vectors index different configurations")
        return GermVector(tuple(x + y for x, y in zip(self.mult, other.mult)))

    def scale(self, k: int) -> "GermVector":
        return GermVector(tuple(k * x for x in self.mult))


def germ_vector(config: Configuration, mult: Iterable[int]) -> GermVector:
    """Validate germ multiplicities against the proximity inequalities."""
    v = tuple(int(x) for x in mult)
    if len(v) != config.r:
        raise DimensionMismatch(
            f"expected {config.r} multiplicities, got {len(v)}"
        )
    if any(x < 0 for x in v):
        raise ValueError("germ multiplicities must be non-negative")
    for i in range(1, config.r + 1):
        s = sum(v[j - 1] for j in config.proximate_to(i))
        if v[i - 1] < s:
            raise ValueError(f"proximity inequality fails at p{i}: {v[i - 1]} < {s}")
    return GermVector(v)


def curvette(config: Configuration, i: int) -> GermVector:
    """Generic irreducible germ whose resolution ends transversally at stage ``i``.

    Its multiplicities are those of the truncated valuation, padded by zeros.
    """
    mi = _truncation_multiplicities(config)[i - 1]
    return GermVector(mi + (0,) * (config.r - i))


def fiber_germ(config: Configuration) -> GermVector:
    """Germ of the fiber through the center (multiplicity one along its chain)."""
    return GermVector(tuple(1 if p.on_f1 else 0 for p in config.points))


def section_germ(config: Configuration) -> GermVector:
    """Germ of the declared section through the center (zero if it misses it)."""
    return GermVector(tuple(1 if p.on_m else 0 for p in config.points))


def maximal_contact_values(config: Configuration, r: int | None = None) -> tuple[int, ...]:
    """Minimal generators of the value semigroup, plus the final contact value.

    Valid germs correspond one-to-one with non-negative combinations of the
    curvettes at the cluster points (the proximity excesses are the
    coefficients), so the value semigroup is generated by the curvette
    values.  The minimal generating set is extracted with an exact
    subset-sum sieve; the appended last entry is the self-pairing of the
    multiplicity vector, the reciprocal volume of the valuation.
    """
    r = config.r if r is None else r
    m = multiplicities(config, r)
    total = sum(x * x for x in m)
    if total >= _SEMIGROUP_VALUE_CAP:
        raise SemigroupOverflow(f"semigroup value bound {total} exceeds cap")
    sub = config if r == config.r else truncate(config, r)
    truncs = _truncation_multiplicities(sub)
    values = sorted(
        {sum(a * b for a, b in zip(m, truncs[i - 1])) for i in range(1, r + 1)}
    )
    mask = (1 << (total + 1)) - 1
    reach = 1
    generators = []
    for v in values:
        if (reach >> v) & 1:
            continue
        generators.append(v)
        step = v
        while step <= total:
            reach |= (reach << step) & mask
            step <<= 1
    g = 0
    for v in generators:
        g = gcd(g, v)
    if g != 1:
        raise NotRealizable(f"value semigroup has non-trivial content {g}")
    return tuple(generators) + (total,)


def _euclid_multiplicities(a: int, b: int) -> list[int]:
    # Staircase of a single Puiseux step: each division quotient repeats the
    # smaller entry that many times, stopping at the gcd.
    out = []
    while b:
        q, rem = divmod(a, b)
        out.extend([b] * q)
        a, b = b, rem
    return out


def _proximities_from_multiplicities(mults: Sequence[int]) -> list[int | None]:
    r = len(mults)
    extras: list[int | None] = [None] * (r + 1)
    for i in range(1, r):
        s = 0
        j = i + 1
        while j <= r and s < mults[i - 1]:
            s += mults[j - 1]
            if j > i + 1:
                if extras[j] is not None:
                    raise NotRealizable(
                        f"conflicting proximities for p{j} in {list(mults)}"
                    )
                extras[j] = i
            j += 1
        if s != mults[i - 1]:
            raise NotRealizable(
                f"proximity equality at p{i} unsolvable for {list(mults)}"
            )
    return extras


def from_maximal_contact(
    surface: Surface,
    beta_bar: Sequence[int],
    on_f1: int = 1,
    on_m: int | None = None,
) -> Configuration:
    """Reconstruct a configuration from its maximal contact values.

    The generator quotients are expanded into Euclidean staircases, one per
    satellite block; a shortfall of the final value against the blocks is
    filled with trailing free points.  The result is validated by an exact
    round trip through :func:`maximal_contact_values`.

    ``on_f1`` and ``on_m`` give the lengths of the fiber and section chains;
    incidences are not determined by the value data.
    """
    seq = [int(x) for x in beta_bar]
    if len(seq) < 2:
        raise NotRealizable("need at least the first and last contact values")
    if any(x <= 0 for x in seq):
        raise NotRealizable("contact values must be positive")
    gens, total = seq[:-1], seq[-1]
    if any(x >= y for x, y in zip(gens, gens[1:])):
        raise NotRealizable("semigroup generators must strictly increase")

    e = [gens[0]]
    for v in gens[1:]:
        e.append(gcd(e[-1], v))
    if e[-1] != 1:
        raise NotRealizable("generators have non-trivial common divisor")
    g = len(gens) - 1
    for j in range(1, g + 1):
        if e[j] == e[j - 1]:
            raise NotRealizable(f"generator {gens[j]} is redundant")
    for j in range(1, g):
        if gens[j + 1] <= (e[j - 1] // e[j]) * gens[j]:
            raise NotRealizable("generators do not increase strongly enough")

    mults: list[int] = []
    if g >= 1:
        mults.extend(_euclid_multiplicities(gens[1], gens[0]))
        for j in range(2, g + 1):
            n = e[j - 2] // e[j - 1]
            mults.extend(_euclid_multiplicities(gens[j] - n * gens[j - 1], e[j - 1]))
    tail = total - sum(x * x for x in mults)
    if tail < 0:
        raise NotRealizable("final contact value is smaller than the blocks allow")
    mults.extend([1] * tail)
    if not mults:
        raise NotRealizable("empty configuration")

    extras = _proximities_from_multiplicities(mults)
    if on_m is None:
        on_m = 1 if surface.point_kind == SPECIAL else 0
    records = [
        {
            "extra_proximity": extras[i],
            "on_f1": i <= on_f1,
            "on_m": i <= on_m,
        }
        for i in range(1, len(mults) + 1)
    ]
    config = build_configuration(surface, records)
    if maximal_contact_values(config) != tuple(seq):
        raise NotRealizable("round trip through the value semigroup failed")
    return config


@dataclass(frozen=True)
class DivisorialValuation:
    """A divisorial valuation with its derived invariants.

    ``m`` is the multiplicity vector, ``beta_bar`` the maximal contact
    values, ``phi_f1`` and ``phi_m`` the values of the fiber and of the
    distinguished section germs.  For a special valuation centered off the
    negative section, ``phi_m`` is zero.
    """

    surface: Surface
    config: Configuration
    r: int
    m: tuple[int, ...]
    beta_bar: tuple[int, ...]
    phi_f1: int
    phi_m: int
    kind: str

    @property
    def delta(self) -> int:
        return self.surface.delta

    @property
    def is_special(self) -> bool:
        return self.kind == SPECIAL

    @property
    def last_contact(self) -> int:
        return self.beta_bar[-1]


def divisorial_valuation(surface: Surface, config: Configuration) -> DivisorialValuation:
    m = multiplicities(config)
    beta = maximal_contact_values(config)
    f1 = config.f1_chain
    mc = config.m_chain
    phi_f1 = sum(m[i - 1] for i in f1)
    if surface.point_kind == GENERAL and surface.delta - len(mc) < 0:
        kind = NON_SPECIAL
    else:
        kind = SPECIAL
    if kind == NON_SPECIAL or surface.point_kind == SPECIAL:
        phi_m = sum(m[i - 1] for i in mc)
    else:
        # The negative section misses a general center; curves declared in
        # on_m keep non-negative self-intersection and play no further role.
        phi_m = 0
    return DivisorialValuation(surface, config, config.r, m, beta, phi_f1, phi_m, kind)


def classify(val: DivisorialValuation) -> str:
    """``special`` or ``non-special``, from the center and the section chain."""
    return val.kind


def is_npi(val: DivisorialValuation) -> bool:
    """Exact test for non-positivity at infinity.

    Special: ``2*phi_m*phi_f1 + delta*phi_f1**2 >= beta_bar[-1]``;
    non-special uses the opposite sign on the quadratic term.
    """
    quad = val.delta * val.phi_f1 * val.phi_f1
    base = 2 * val.phi_m * val.phi_f1
    if val.is_special:
        return base + quad >= val.last_contact
    return base - quad >= val.last_contact


def germ_value(val: DivisorialValuation, germ: GermVector) -> int:
    """Value of a germ under the valuation: the product with the multiplicities."""
    if len(germ.mult) != val.r:
        raise DimensionMismatch(
            f"germ indexes {len(germ.mult)} points, valuation has {val.r}"
        )
    return sum(a * b for a, b in zip(germ.mult, val.m))


@lru_cache(maxsize=None)
def truncate_valuation(val: DivisorialValuation, k: int) -> DivisorialValuation:
    return divisorial_valuation(val.surface, truncate(val.config, k))


@lru_cache(maxsize=None)
def truncation_values(val: DivisorialValuation) -> tuple[int, ...]:
    """Values of the curvettes at every stage: ``nu_r(phi_i)`` for ``i = 1..r``."""
    truncs = _truncation_multiplicities(val.config)
    return tuple(
        sum(a * b for a, b in zip(val.m, truncs[i - 1])) for i in range(1, val.r + 1)
    )


def chain_value(val: DivisorialValuation, chain: Iterable[int]) -> int:
    """Value of the unit germ along ``chain``, restricted to this valuation."""
    return sum(val.m[i - 1] for i in chain if i <= val.r)


def truncation_pairing(config: Configuration, i: int, j: int) -> int:
    """Noether pairing of two stages: the value of one curvette under the
    other truncated valuation (symmetric in ``i`` and ``j``)."""
    truncs = _truncation_multiplicities(config)
    return sum(a * b for a, b in zip(truncs[i - 1], truncs[j - 1]))


@dataclass(frozen=True)
class FlagValuation:
    """A divisorial valuation with a marked point on its last exceptional divisor.

    ``eta`` names the older exceptional divisor through the flag point when
    that point is satellite; a free flag point is generic on the last
    divisor.
    """

    base: DivisorialValuation
    eta: int | None = None

    @property
    def is_satellite(self) -> bool:
        return self.eta is not None


def flag_valuation(base: DivisorialValuation, eta: int | None = None) -> FlagValuation:
    if eta is None:
        return FlagValuation(base, None)
    r = base.r
    targets = set()
    if r >= 2:
        targets.add(r - 1)
    extra = base.config.extra(r)
    if extra is not None:
        targets.add(extra)
    if eta not in targets:
        raise BadSatellite(
            [f"E{eta} does not meet E{r}; valid satellite positions: {sorted(targets)}"]
        )
    return FlagValuation(base, eta)


def eta_valuation(flag: FlagValuation) -> DivisorialValuation:
    """The truncated valuation at the second divisor through the flag point."""
    if flag.eta is None:
        raise NotSatellite("a free flag point has no second exceptional divisor")
    return truncate_valuation(flag.base, flag.eta)
