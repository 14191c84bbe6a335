"""Exact intersection theory on the surface obtained by blowing up the cluster.

Divisor classes are written over the orthogonal pullback basis
``F*, M*, E_1*, ..., E_r*`` with the form ``F*^2 = 0``, ``F*.M* = 1``,
``M*^2 = delta`` and ``E_i*.E_j* = -delta_ij``.  Strict transforms of the
fiber, the distinguished sections and the exceptional divisors are derived
classes; in the non-positive-at-infinity regime they generate the cone of
curves, which is what the nefness test relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cluster import NON_SPECIAL, SPECIAL, DivisorialValuation
from .errors import DimensionMismatch, NotATree


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class DivisorClassZ:
    """A rational divisor class over the pullback basis."""

    delta: int
    f: Fraction
    m: Fraction
    e: tuple[Fraction, ...]

    @property
    def r(self) -> int:
        return len(self.e)

    def _check(self, other: "DivisorClassZ") -> None:
        if self.delta != other.delta or self.r != other.r:
            raise DimensionMismatch("classes live on different surfaces")

    def __add__(self, other: "DivisorClassZ") -> "DivisorClassZ":
        self._check(other)
        return DivisorClassZ(
            self.delta,
            self.f + other.f,
            self.m + other.m,
            tuple(a + b for a, b in zip(self.e, other.e)),
        )

    def __sub__(self, other: "DivisorClassZ") -> "DivisorClassZ":
        return self + (-other)

    def __neg__(self) -> "DivisorClassZ":
        return DivisorClassZ(self.delta, -self.f, -self.m, tuple(-a for a in self.e))

    def __rmul__(self, scalar) -> "DivisorClassZ":
        s = _frac(scalar)
        return DivisorClassZ(
            self.delta, s * self.f, s * self.m, tuple(s * a for a in self.e)
        )

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return self.f == 0 and self.m == 0 and all(a == 0 for a in self.e)


def div_class(delta: int, f=0, m=0, e=()) -> DivisorClassZ:
    return DivisorClassZ(delta, _frac(f), _frac(m), tuple(_frac(x) for x in e))


def pullback(delta: int, a, b, r: int) -> DivisorClassZ:
    """Total transform of the class ``a F + b M``."""
    return div_class(delta, a, b, (0,) * r)


def exceptional(delta: int, r: int, i: int) -> DivisorClassZ:
    """The pullback class ``E_i*``."""
    return div_class(delta, 0, 0, tuple(1 if j == i else 0 for j in range(1, r + 1)))


def pair(x: DivisorClassZ, y: DivisorClassZ) -> Fraction:
    """The intersection form in the pullback basis."""
    x._check(y)
    return (
        x.f * y.m
        + x.m * y.f
        + x.delta * x.m * y.m
        - sum(a * b for a, b in zip(x.e, y.e))
    )


@dataclass(frozen=True)
class CurveBasis:
    """Strict-transform classes generating the cone of curves.

    ``names`` and ``classes`` run in the fixed order ``F1``, ``M0``,
    optionally ``M1`` (non-special valuations only), then ``E1 .. Er``.
    """

    delta: int
    names: tuple[str, ...]
    classes: tuple[DivisorClassZ, ...]

    def items(self) -> tuple[tuple[str, DivisorClassZ], ...]:
        return tuple(zip(self.names, self.classes))

    def get(self, name: str) -> DivisorClassZ:
        try:
            return self.classes[self.names.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def exceptional(self, i: int) -> DivisorClassZ:
        return self.get(f"E{i}")


@lru_cache(maxsize=None)
def curve_basis(val: DivisorialValuation) -> CurveBasis:
    delta, r = val.delta, val.r
    config = val.config

    def strict_exceptional(i):
        coords = [0] * r
        coords[i - 1] = 1
        for j in config.proximate_to(i):
            coords[j - 1] = -1
        return div_class(delta, 0, 0, coords)

    def chain_class(f, m, chain):
        coords = [-1 if i in chain else 0 for i in range(1, r + 1)]
        return div_class(delta, f, m, coords)

    f1 = chain_class(1, 0, set(config.f1_chain))
    names = ["F1", "M0"]
    if val.kind == NON_SPECIAL:
        classes = [
            f1,
            chain_class(-delta, 1, set()),
            chain_class(0, 1, set(config.m_chain)),
        ]
        names.append("M1")
    else:
        m0_chain = set(config.m_chain) if val.surface.point_kind == SPECIAL else set()
        classes = [f1, chain_class(-delta, 1, m0_chain)]
    for i in range(1, r + 1):
        names.append(f"E{i}")
        classes.append(strict_exceptional(i))
    return CurveBasis(delta, tuple(names), tuple(classes))


@lru_cache(maxsize=None)
def dual_graph(val: DivisorialValuation) -> tuple[tuple[int, ...], ...]:
    """Adjacency lists of the exceptional curves, checked to form a tree."""
    basis = curve_basis(val)
    r = val.r
    strict = [basis.exceptional(i) for i in range(1, r + 1)]
    adj: list[list[int]] = [[] for _ in range(r + 1)]
    edges = 0
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            p = pair(strict[i - 1], strict[j - 1])
            if p not in (0, 1):
                raise NotATree(f"E{i}.E{j} = {p}")
            if p == 1:
                adj[i].append(j)
                adj[j].append(i)
                edges += 1
    if edges != r - 1:
        raise NotATree(f"{edges} edges on {r} vertices")
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != r:
        raise NotATree("intersection graph is disconnected")
    return tuple(tuple(a) for a in adj)


def precedes(graph: tuple[tuple[int, ...], ...], alpha: int, beta: int) -> bool:
    """Whether the path from vertex 1 to ``beta`` passes through ``alpha``."""
    parent = {1: None}
    stack = [1]
    while stack:
        v = stack.pop()
        if v == beta:
            break
        for w in graph[v]:
            if w not in parent:
                parent[w] = v
                stack.append(w)
    v = beta
    while v is not None:
        if v == alpha:
            return True
        v = parent[v]
    return False


def is_nef_against(d: DivisorClassZ, basis: CurveBasis) -> bool:
    """Nefness against the listed cone generators (valid in the NPI regime)."""
    return all(pair(d, c) >= 0 for c in basis.classes)


def is_negative_definite(classes) -> bool:
    """Exact negative-definiteness of the Gram matrix of the given classes.

    Gaussian elimination without pivoting: the leading principal minors
    alternate in sign exactly when every pivot is negative.
    """
    classes = list(classes)
    if not classes:
        raise ValueError("need at least one class")
    n = len(classes)
    g = [[pair(a, b) for b in classes] for a in classes]
    for k in range(n):
        piv = g[k][k]
        if piv >= 0:
            return False
        for i in range(k + 1, n):
            factor = g[i][k] / piv
            if factor == 0:
                continue
            for j in range(k, n):
                g[i][j] -= factor * g[k][j]
    return True
