"""Pairwise fairness criteria, reports, envy graphs, Pareto checks.

A comparison criterion looks at one ordered pair of bundles through one
agent's eyes: the agent's own bundle B_I against another bundle B_U. The
goods bases are EF, EF1, EFX and EFL. Two orthogonal modifiers produce the
rest of the family:

  * chores orientation is the complement: evaluate the base on the negated
    valuation with the bundles swapped;
  * "without commons" (suffix _wc) strips the shared types first, comparing
    B_I minus B_U against B_U minus B_I.

The two modifiers commute, so applying strip-then-complement is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .model import (
    Allocation,
    Instance,
    NotACycleError,
    OrientationError,
    require_valid,
)

BASES = ("ef", "ef1", "efx", "efl")

# Strict implications among the goods notions, checked by the sweep harness:
# every allocation satisfying the left notion must satisfy the right one.
HIERARCHY_EDGES = (
    ("efx", "efx_wc"),
    ("efx_wc", "efl_wc"),
    ("efl_wc", "ef1_wc"),
    ("ef1_wc", "ef1"),
    ("efx", "efl"),
    ("efl", "ef1"),
)


@dataclass(frozen=True)
class ComparisonCriterion:
    """One member of the criterion family."""

    base: str
    orientation: str = "goods"
    without_commons: bool = False

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown base criterion {self.base!r}")
        if self.orientation not in ("goods", "chores"):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    @property
    def notion(self) -> str:
        """The notion string: base plus optional _wc suffix."""
        return self.base + ("_wc" if self.without_commons else "")

    def __str__(self) -> str:
        return f"{self.notion}[{self.orientation}]"


def parse_notion(notion: str) -> tuple:
    """Split a notion string like "efx_wc" into (base, without_commons)."""
    base, wc = notion, False
    if notion.endswith("_wc"):
        base, wc = notion[: -len("_wc")], True
    if base not in BASES:
        raise ValueError(f"unknown notion {notion!r}")
    return base, wc


def criterion_for(
    instance: Instance, notion: str, orientation: Optional[str] = None
) -> ComparisonCriterion:
    """Build a criterion for this instance, inferring orientation from sign.

    An explicit orientation wins; otherwise the instance must be sign-pure
    and its own orientation is used.
    """
    base, wc = parse_notion(notion)
    if orientation is None:
        orientation = instance.orientation()
        if orientation is None:
            raise OrientationError(
                "instance mixes goods and chores; pass an orientation explicitly"
            )
    return ComparisonCriterion(base, orientation, wc)


def _base_eval(base: str, valuation: dict, inside, outside) -> bool:
    """Evaluate a goods base criterion on already-prepared bundles."""
    own = sum((valuation[g] for g in inside), Fraction(0))
    other = sum((valuation[g] for g in outside), Fraction(0))
    if base == "ef":
        return own >= other
    if base == "ef1":
        if not outside:
            return True
        return own >= other - max(valuation[g] for g in outside)
    if base == "efx":
        if not outside:
            return True
        return own >= other - min(valuation[g] for g in outside)
    if base == "efl":
        if len(outside) <= 1:
            return True
        return any(
            own >= other - valuation[g] and own >= valuation[g] for g in outside
        )
    raise ValueError(f"unknown base criterion {base!r}")


def criterion_eval(
    criterion: ComparisonCriterion, valuation: dict, bundle_i, bundle_u
) -> bool:
    """Decide whether the criterion accepts bundle_i against bundle_u.

    `valuation` maps type names to Fractions (one agent's values). True
    means fair for this ordered pair.
    """
    inside = frozenset(bundle_i)
    outside = frozenset(bundle_u)
    if criterion.without_commons:
        inside, outside = inside - outside, outside - inside
    if criterion.orientation == "chores":
        negated = {name: -v for name, v in valuation.items()}
        return _base_eval(criterion.base, negated, outside, inside)
    return _base_eval(criterion.base, valuation, inside, outside)


def _offending_item(
    criterion: ComparisonCriterion, instance: Instance, agent: int, bundle_i, bundle_u
) -> Optional[str]:
    """For a failing pair, the item that demonstrates the failure, if any.

    Only the universally-quantified bases (EF, EFX) have a single
    demonstrating item: the smallest-index item whose removal leaves the
    agent envious. The existential bases (EF1, EFL) fail for every item, so
    no single item is reported.
    """
    if criterion.base not in ("ef", "efx"):
        return None
    inside = frozenset(bundle_i)
    outside = frozenset(bundle_u)
    if criterion.without_commons:
        inside, outside = inside - outside, outside - inside
    valuation = {t.name: instance.values[agent][p] for p, t in enumerate(instance.types)}
    if criterion.orientation == "chores":
        valuation = {name: -v for name, v in valuation.items()}
        inside, outside = outside, inside
    own = sum((valuation[g] for g in inside), Fraction(0))
    other = sum((valuation[g] for g in outside), Fraction(0))
    if criterion.base == "ef":
        # Nothing is removed; report no item.
        return None
    for name in sorted(outside, key=instance.position):
        if own < other - valuation[name]:
            return name
    return None


@dataclass(frozen=True)
class Witness:
    """One violating ordered pair, with an optional demonstrating item."""

    envious: int
    envied: Optional[int] = None
    item: Optional[str] = None


@dataclass(frozen=True)
class FairnessReport:
    """Verdict of a fairness check plus every violating pair."""

    fair: bool
    notion: ComparisonCriterion
    witnesses: tuple = ()

    @property
    def verdict(self) -> str:
        return "fair" if self.fair else "unfair"


def is_fair(
    instance: Instance, allocation: Allocation, criterion: ComparisonCriterion
) -> FairnessReport:
    """Check the criterion on every ordered agent pair.

    The instance must be sign-pure and match the criterion's orientation
    (an all-zero instance matches both). Witnesses come out in
    lexicographic (envious, envied) order.
    """
    require_valid(instance, allocation)
    if criterion.orientation == "goods" and not instance.goods_pure:
        raise OrientationError("goods criterion on an instance that is not goods-pure")
    if criterion.orientation == "chores" and not instance.chores_pure:
        raise OrientationError("chores criterion on an instance that is not chores-pure")
    witnesses = []
    for i in range(instance.agents):
        valuation = {
            t.name: instance.values[i][p] for p, t in enumerate(instance.types)
        }
        for j in range(instance.agents):
            if i == j:
                continue
            if not criterion_eval(
                criterion, valuation, allocation.bundles[i], allocation.bundles[j]
            ):
                item = _offending_item(
                    criterion, instance, i, allocation.bundles[i], allocation.bundles[j]
                )
                witnesses.append(Witness(i, j, item))
    return FairnessReport(
        fair=not witnesses, notion=criterion, witnesses=tuple(witnesses)
    )


@dataclass(frozen=True)
class EnvyGraph:
    """Directed envy edges: i -> j when i values j's bundle strictly more."""

    agents: int
    edges: frozenset

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def successors(self, i: int) -> tuple:
        return tuple(sorted(j for (a, j) in self.edges if a == i))


def envy_graph(instance: Instance, allocation: Allocation) -> EnvyGraph:
    """Build the envy graph of a valid allocation (any sign pattern)."""
    require_valid(instance, allocation)
    edges = set()
    for i in range(instance.agents):
        own = instance.bundle_value(i, allocation.bundles[i])
        for j in range(instance.agents):
            if i != j and own < instance.bundle_value(i, allocation.bundles[j]):
                edges.add((i, j))
    return EnvyGraph(instance.agents, frozenset(edges))


def cancel_envy_cycle(
    instance: Instance, allocation: Allocation, cycle: Sequence
) -> Allocation:
    """Rotate bundles along an envy cycle; every agent on it strictly gains.

    `cycle` lists distinct agents such that each envies the next (the last
    envies the first). An empty cycle returns the allocation unchanged.
    """
    cycle = list(cycle)
    if not cycle:
        return allocation
    if len(set(cycle)) != len(cycle):
        raise NotACycleError(f"agents repeat in {cycle}")
    graph = envy_graph(instance, allocation)
    for pos, agent in enumerate(cycle):
        nxt = cycle[(pos + 1) % len(cycle)]
        if not graph.has_edge(agent, nxt):
            raise NotACycleError(f"agent {agent} does not envy agent {nxt}")
    bundles = list(allocation.bundles)
    for pos, agent in enumerate(cycle):
        nxt = cycle[(pos + 1) % len(cycle)]
        bundles[agent] = allocation.bundles[nxt]
    return Allocation(tuple(bundles))


def pareto_dominates(instance: Instance, first: Allocation, second: Allocation) -> bool:
    """Whether `first` weakly improves every agent and strictly improves one."""
    strict = False
    for i in range(instance.agents):
        a = instance.bundle_value(i, first.bundles[i])
        b = instance.bundle_value(i, second.bundles[i])
        if a < b:
            return False
        if a > b:
            strict = True
    return strict


def is_pareto_optimal(
    instance: Instance, allocation: Allocation, budget: Optional[int] = None
):
    """Search every allocation for a Pareto improvement.

    Returns (True, None) or (False, dominating allocation), taking the
    first dominator in enumeration order. Budget caps the number of
    allocations examined.
    """
    from .search import enumerate_allocations

    require_valid(instance, allocation)
    for other in enumerate_allocations(instance, budget=budget):
        if pareto_dominates(instance, other, allocation):
            return False, other
    return True, None
