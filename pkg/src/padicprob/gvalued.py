"""Probabilities valued in a metrized abelian group.

A GroupContext fixes the carrier (exact rationals under the usual or a
p-adic absolute value, or a finite product of such), the group law and
the distance to the neutral element. A GDistribution assigns a group
element to each outcome of a finite experiment; "probabilities" may be
negative, larger than one, or p-adic, and the classical calculus of
events survives verbatim as long as every identity is checked exactly.

Significance is a neighborhood of the neutral element: an event whose
probability falls inside is practically impossible, and a critical
region is an event whose probability is practically impossible under
the null, so observing it rejects the null at that level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoRingStructure, NotInvertible, RegionNotSignificant
from .padic import Prime, abs_p, as_fraction

PRACTICALLY_IMPOSSIBLE = "PracticallyImpossible"
SIGNIFICANT = "Significant"


class GroupContext:
    """Carrier + group law + exact metric to the neutral element.

    Subclasses fix element coercion, add/negate/neutral and rho, and may
    expose a ring structure (mul, one, inverses). rho returns an exact
    Fraction, so every comparison against a significance radius is exact.
    """

    tag: str = "abstract"
    is_ring = False

    def coerce(self, x):
        raise NotImplementedError

    def add(self, x, y):
        raise NotImplementedError

    def negate(self, x):
        raise NotImplementedError

    @property
    def neutral(self):
        raise NotImplementedError

    def rho(self, x) -> Fraction:
        """Distance from the neutral element, as an exact Fraction."""
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.negate(y))

    # -- optional ring structure -----------------------------------------

    def _no_ring(self):
        raise NoRingStructure(f"context {self.tag} has no ring multiplication")

    def mul(self, x, y):
        self._no_ring()

    @property
    def one(self):
        self._no_ring()

    def is_invertible(self, x) -> bool:
        self._no_ring()

    def inverse(self, x):
        self._no_ring()

    def __repr__(self):
        return f"{type(self).__name__}({self.tag!r})"


class RationalRealContext(GroupContext):
    """(Q, +) with rho(0, x) = |x|."""

    tag = "real"
    is_ring = True

    def coerce(self, x):
        return as_fraction(x)

    def add(self, x, y):
        return x + y

    def negate(self, x):
        return -x

    @property
    def neutral(self):
        return Fraction(0)

    def rho(self, x) -> Fraction:
        return abs(as_fraction(x))

    def mul(self, x, y):
        return x * y

    @property
    def one(self):
        return Fraction(1)

    def is_invertible(self, x) -> bool:
        return x != 0

    def inverse(self, x):
        if x == 0:
            raise NotInvertible("0 has no inverse")
        return 1 / as_fraction(x)


class RationalPadicContext(GroupContext):
    """(Q, +) with rho(0, x) = |x|_p."""

    is_ring = True

    def __init__(self, prime):
        self.prime = Prime(prime)
        self.tag = f"padic:{self.prime}"

    def coerce(self, x):
        return as_fraction(x)

    def add(self, x, y):
        return x + y

    def negate(self, x):
        return -x

    @property
    def neutral(self):
        return Fraction(0)

    def rho(self, x) -> Fraction:
        return abs_p(x, self.prime).as_fraction()

    def mul(self, x, y):
        return x * y

    @property
    def one(self):
        return Fraction(1)

    def is_invertible(self, x) -> bool:
        return x != 0

    def inverse(self, x):
        if x == 0:
            raise NotInvertible("0 has no inverse")
        return 1 / as_fraction(x)


class ProductContext(GroupContext):
    """Finite product of contexts; elements are tuples, the metric is
    the max of the component metrics. A ring exactly when every
    component is one (componentwise multiplication)."""

    def __init__(self, *components: GroupContext):
        if not components:
            raise ValueError("product of zero contexts")
        self.components = tuple(components)
        self.tag = "product(" + ",".join(c.tag for c in self.components) + ")"
        self.is_ring = all(c.is_ring for c in self.components)

    def coerce(self, x):
        xs = tuple(x)
        if len(xs) != len(self.components):
            raise ValueError(
                f"{self.tag} elements have {len(self.components)} components, got {len(xs)}"
            )
        return tuple(c.coerce(v) for c, v in zip(self.components, xs))

    def add(self, x, y):
        return tuple(c.add(a, b) for c, a, b in zip(self.components, x, y))

    def negate(self, x):
        return tuple(c.negate(a) for c, a in zip(self.components, x))

    @property
    def neutral(self):
        return tuple(c.neutral for c in self.components)

    def rho(self, x) -> Fraction:
        return max(c.rho(a) for c, a in zip(self.components, x))

    def mul(self, x, y):
        if not self.is_ring:
            self._no_ring()
        return tuple(c.mul(a, b) for c, a, b in zip(self.components, x, y))

    @property
    def one(self):
        if not self.is_ring:
            self._no_ring()
        return tuple(c.one for c in self.components)

    def is_invertible(self, x) -> bool:
        if not self.is_ring:
            self._no_ring()
        return all(c.is_invertible(a) for c, a in zip(self.components, x))

    def inverse(self, x):
        if not self.is_ring:
            self._no_ring()
        return tuple(c.inverse(a) for c, a in zip(self.components, x))


def context_from_tag(tag: str) -> GroupContext:
    if tag == "real":
        return RationalRealContext()
    if tag.startswith("padic:"):
        return RationalPadicContext(int(tag.split(":", 1)[1]))
    raise ValueError(f"unknown context tag {tag!r}")


class GDistribution:
    """A finite experiment whose event weights live in a group.

    weights maps each outcome label to a group element; the measure of
    an event is the exact group sum of its outcome weights, and E is the
    measure of the whole outcome set. An optional range_check predicate
    declares the admissible weight set and is enforced at construction.
    """

    def __init__(self, context: GroupContext, weights, range_check=None):
        self.context = context
        items = list(weights.items() if hasattr(weights, "items") else weights)
        if not items:
            raise ValueError("distribution needs at least one outcome")
        self.outcomes = tuple(om for om, _ in items)
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError("repeated outcome")
        self._w = {om: context.coerce(w) for om, w in items}
        if range_check is not None:
            bad = [om for om in self.outcomes if not range_check(self._w[om])]
            if bad:
                raise ValueError(f"weights at {bad} outside the declared range set")

    def weight(self, outcome):
        return self._w[outcome]

    def probability(self, event):
        """Group measure of a subset of the outcomes."""
        ctx = self.context
        total = ctx.neutral
        seen = set()
        for om in event:
            if om in seen:
                raise ValueError(f"repeated outcome {om!r} in event")
            seen.add(om)
            total = ctx.add(total, self._w[om])
        return total

    @property
    def total(self):
        """E, the measure of the full outcome set."""
        return self.probability(self.outcomes)

    def to_json(self) -> str:
        if isinstance(self.context, ProductContext):
            raise ValueError("JSON form covers rational-weight contexts only")
        return json.dumps(
            {
                "context": self.context.tag,
                "outcomes": list(self.outcomes),
                "weights": [
                    f"{self._w[om].numerator}/{self._w[om].denominator}"
                    for om in self.outcomes
                ],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "GDistribution":
        data = json.loads(text)
        ctx = context_from_tag(data["context"])
        outcomes = data["outcomes"]
        weights = [Fraction(w) for w in data["weights"]]
        if len(outcomes) != len(weights):
            raise ValueError("outcomes and weights differ in length")
        return cls(ctx, list(zip(outcomes, weights)))

    def __repr__(self):
        pairs = ", ".join(f"{om!r}: {self._w[om]}" for om in self.outcomes)
        return f"GDistribution({self.context.tag}, {{{pairs}}})"


def powerset_field(outcomes) -> tuple[frozenset, ...]:
    """All subsets of a small outcome set, smallest first."""
    oms = tuple(outcomes)
    if len(oms) > 16:
        raise ValueError("power set limited to 16 outcomes")
    out = []
    for mask in range(1 << len(oms)):
        out.append(frozenset(om for i, om in enumerate(oms) if mask >> i & 1))
    return tuple(sorted(out, key=lambda s: (len(s), sorted(map(repr, s)))))


@dataclass(frozen=True)
class AdditivityReport:
    ok: bool
    pairs_checked: int
    failures: tuple = ()


def additivity_check(d: GDistribution, family) -> AdditivityReport:
    """P(A u B) = P(A) + P(B) over every disjoint pair of the family,
    all sums exact. Pointwise-defined measures pass structurally; the
    check exists to pin the additivity contract down, not to surprise."""
    sets = [frozenset(a) for a in family]
    checked = 0
    failures = []
    for i, a in enumerate(sets):
        for b in sets[i:]:
            if a & b:
                continue
            checked += 1
            lhs = d.probability(a | b)
            rhs = d.context.add(d.probability(a), d.probability(b))
            if lhs != rhs:
                failures.append((a, b, lhs, rhs))
    return AdditivityReport(not failures, checked, tuple(failures))


@dataclass(frozen=True)
class UnitAxiomReport:
    holds: bool
    sup: Fraction
    expected: Fraction
    witness: frozenset


def unit_axiom_check(d: GDistribution, family) -> UnitAxiomReport:
    """Does max_{A in family} rho(0, P(A)) equal rho(0, E)?

    Classical probabilities satisfy this with the sup attained at the
    whole space; signed weights can overshoot (a set can outweigh E),
    and the report then carries the witnessing event.
    """
    ctx = d.context
    expected = ctx.rho(d.total)
    sup = None
    witness = None
    for a in family:
        a = frozenset(a)
        r = ctx.rho(d.probability(a))
        if sup is None or r > sup:
            sup, witness = r, a
    if sup is None:
        raise ValueError("empty family")
    return UnitAxiomReport(sup == expected, sup, expected, witness)


def convolve(m1: GDistribution, m2: GDistribution) -> GDistribution:
    """M1 * M2: the law of a sum of independent experiments whose
    outcomes are themselves elements of a ring context. Weight at s is
    sum over x1 + x2 = s of w1(x1) w2(x2); totals multiply."""
    ctx = m1.context
    if m2.context.tag != ctx.tag:
        raise ValueError(f"mismatched contexts {ctx.tag} vs {m2.context.tag}")
    if not ctx.is_ring:
        raise NoRingStructure(f"convolution needs ring weights; context {ctx.tag}")
    acc: dict = {}
    for x1 in m1.outcomes:
        c1 = ctx.coerce(x1)
        w1 = m1.weight(x1)
        for x2 in m2.outcomes:
            s = ctx.add(c1, ctx.coerce(x2))
            w = ctx.mul(w1, m2.weight(x2))
            acc[s] = ctx.add(acc[s], w) if s in acc else w
    return GDistribution(ctx, [(s, acc[s]) for s in sorted(acc)])


def dirac(context: GroupContext, point) -> GDistribution:
    """The unit of convolution: all weight at one point."""
    if not context.is_ring:
        raise NoRingStructure(f"dirac unit needs ring weights; context {context.tag}")
    return GDistribution(context, [(context.coerce(point), context.one)])


def conditional(d: GDistribution, a, b):
    """Bayes quotient P(A n B) P(A)**-1 in the context's ring."""
    ctx = d.context
    if not ctx.is_ring:
        raise NoRingStructure(f"conditioning needs a ring; context {ctx.tag}")
    a = frozenset(a)
    b = frozenset(b)
    pa = d.probability(a)
    if not ctx.is_invertible(pa):
        raise NotInvertible(f"P(A) = {pa} is not invertible")
    return ctx.mul(d.probability(a & b), ctx.inverse(pa))


class SignificanceNeighborhood:
    """V_eps = {x : rho(0, x) < eps}: the events deemed practically
    impossible. Always contains the neutral element."""

    def __init__(self, context: GroupContext, epsilon):
        self.context = context
        self.epsilon = as_fraction(epsilon)
        if self.epsilon <= 0:
            raise ValueError("significance radius must be positive")

    def contains(self, value) -> bool:
        return self.context.rho(value) < self.epsilon

    def __repr__(self):
        return f"SignificanceNeighborhood({self.context.tag}, eps={self.epsilon})"


def significance_classify(value, v: SignificanceNeighborhood) -> str:
    return PRACTICALLY_IMPOSSIBLE if v.contains(value) else SIGNIFICANT


@dataclass(frozen=True)
class CriticalRegion:
    event: frozenset
    level: SignificanceNeighborhood


@dataclass(frozen=True)
class RegionTestResult:
    rejected: bool
    strongest_epsilon: Fraction | None
    triggered: tuple[CriticalRegion, ...]


class CriticalRegionTest:
    """Hypothesis test from critical regions: each region must have a
    practically impossible probability at its level (checked at setup;
    RegionNotSignificant otherwise), and an observed outcome rejects at
    every level whose region contains it. The report carries the
    strongest (smallest-radius) rejecting level."""

    def __init__(self, d: GDistribution, regions):
        self.distribution = d
        checked = []
        for region in regions:
            if not isinstance(region, CriticalRegion):
                event, level = region
                region = CriticalRegion(frozenset(event), level)
            p = d.probability(region.event)
            if not region.level.contains(p):
                raise RegionNotSignificant(
                    f"P(region) = {p} is outside the level (eps={region.level.epsilon})"
                )
            checked.append(region)
        self.regions = tuple(checked)

    def run(self, outcome) -> RegionTestResult:
        if outcome not in self.distribution.outcomes:
            raise ValueError(f"outcome {outcome!r} outside the experiment")
        hit = tuple(r for r in self.regions if outcome in r.event)
        if not hit:
            return RegionTestResult(False, None, ())
        strongest = min(r.level.epsilon for r in hit)
        return RegionTestResult(True, strongest, hit)
