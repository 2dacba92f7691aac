"""Share-based fairness: proportional, maximin, truncated proportional, anyprice.

All four shares are per-agent numbers an allocation can be measured
against. PROP is linear, MMS is an exhaustive max-min over complete
exclusive allocations, TPS truncates large items before averaging, and the
anyprice share is the value an agent can guarantee by buying a bundle
within an entitlement budget at adversarial prices.

Anyprice prices live on the simplex over free types: types held by every
agent are forced into each bundle, contribute their value as a constant,
and carry no price. A price vector lists one weight per free type, summing
to one; the per-copy view (each of the k copies of a type priced equally
at weight/k) is available through `per_copy`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .exactlp import maximize
from .model import (
    Allocation,
    BudgetExceededError,
    Instance,
    InstanceError,
    OrientationError,
    require_valid,
)
from .search import DEFAULT_ENUM_CAP, _bundles_for_choice, enumeration_plan

SHARE_KINDS = ("prop", "mms", "tps", "aps")

# Free-type subsets are enumerated explicitly, so cap their count.
MAX_FREE_TYPES = 20


@dataclass(frozen=True)
class ShareSpec:
    """Which share to compute for which agent."""

    kind: str
    agent: int
    alpha: Fraction = Fraction(1)
    entitlement: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in SHARE_KINDS:
            raise ValueError(f"unknown share kind {self.kind!r}")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.entitlement is not None and not 0 < self.entitlement < 1:
            raise ValueError("entitlement must lie strictly between 0 and 1")
        if self.entitlement is not None and self.kind != "aps":
            raise ValueError("entitlement applies to the anyprice share only")


@dataclass(frozen=True)
class ShareValue:
    """A share with whatever certifies it.

    The certificate is an Allocation for mms, a PriceVector for aps, the
    number of truncated copies for the goods tps, and None otherwise.
    """

    value: Fraction
    certificate: object = None


@dataclass(frozen=True)
class PriceVector:
    """Adversarial prices over the free types, summing to one."""

    prices: tuple  # (type name, weight) pairs
    entitlement: Fraction

    def __post_init__(self):
        total = sum(w for _, w in self.prices)
        if self.prices and total != 1:
            raise ValueError(f"prices sum to {total}, not 1")
        if any(w < 0 for _, w in self.prices):
            raise ValueError("negative price")

    def price(self, name: str) -> Fraction:
        for t, w in self.prices:
            if t == name:
                return w
        return Fraction(0)

    def per_copy(self, instance: Instance, name: str) -> Fraction:
        """Price of one copy; all copies of a type cost the same."""
        return self.price(name) / instance.copies(name)

    def weight(self, bundle) -> Fraction:
        return sum((w for t, w in self.prices if t in bundle), Fraction(0))


def prop_share(instance: Instance, agent: int) -> Fraction:
    return instance.total_value(agent) / instance.agents


def mms_share(
    instance: Instance, agent: int, budget: Optional[int] = None
) -> ShareValue:
    """Exact maximin share by exhausting every complete exclusive allocation.

    The certificate is a maximizing allocation. Raises BudgetExceededError
    when the plan is larger than the budget; large instances go through
    verify_mms_lower_bound with a hand-picked witness instead.
    """
    cap = DEFAULT_ENUM_CAP if budget is None else budget
    plan = enumeration_plan(instance)
    if plan.total > cap:
        raise BudgetExceededError(
            f"maximin enumeration needs {plan.total} allocations, budget {cap}; "
            "supply a witness to verify_mms_lower_bound instead"
        )
    row = instance.values[agent]
    n = instance.agents
    # min bundle value can never beat the average, so stop at PROP.
    ceiling = prop_share(instance, agent)
    best: Optional[Fraction] = None
    best_choice = None
    for choice in product(*plan.subsets):
        totals = [Fraction(0)] * n
        for pos, holders in enumerate(choice):
            for a in holders:
                totals[a] += row[pos]
        worst = min(totals)
        if best is None or worst > best:
            best, best_choice = worst, choice
            if best == ceiling:
                break
    allocation = Allocation(_bundles_for_choice(instance, best_choice))
    return ShareValue(value=best, certificate=allocation)


def verify_mms_lower_bound(
    instance: Instance, agent: int, witness: Allocation
) -> Fraction:
    """Certified maximin lower bound: the witness's minimum bundle value."""
    require_valid(instance, witness)
    return min(instance.bundle_value(agent, b) for b in witness.bundles)


@dataclass(frozen=True)
class AlphaMMSReport:
    """Per-agent comparison of own-bundle value against alpha * maximin."""

    fair: bool
    alpha: Fraction
    shares: tuple
    ratios: tuple  # value/share per agent, None where the share is zero
    failing: tuple


def check_alpha_mms(
    instance: Instance,
    allocation: Allocation,
    alpha: Fraction,
    mms_values: Optional[Sequence] = None,
    budget: Optional[int] = None,
) -> AlphaMMSReport:
    """Does every agent get at least alpha times their maximin share?

    Pass mms_values (one per agent) to skip the exhaustive computation,
    e.g. on fixtures whose shares are certified by witness partitions.
    """
    require_valid(instance, allocation)
    if mms_values is None:
        shares = tuple(
            mms_share(instance, i, budget=budget).value for i in range(instance.agents)
        )
    else:
        shares = tuple(Fraction(v) for v in mms_values)
        if len(shares) != instance.agents:
            raise ValueError("one maximin value per agent required")
    ratios = []
    failing = []
    for i in range(instance.agents):
        own = instance.bundle_value(i, allocation.bundles[i])
        ratios.append(own / shares[i] if shares[i] != 0 else None)
        if own < alpha * shares[i]:
            failing.append(i)
    return AlphaMMSReport(
        fair=not failing,
        alpha=Fraction(alpha),
        shares=shares,
        ratios=tuple(ratios),
        failing=tuple(failing),
    )


def tps_share(instance: Instance, agent: int) -> ShareValue:
    """Truncated proportional share.

    Goods: the largest z with (1/n) * sum over copies of min(value, z)
    equal to z, found by scanning how many copies get truncated. Chores:
    min of the proportional share and the single worst chore.
    """
    orientation = instance.orientation()
    if orientation is None:
        raise OrientationError("truncated proportional share needs a sign-pure instance")
    row = instance.values[agent]
    if orientation == "chores":
        worst = min(row) if row else Fraction(0)
        return ShareValue(value=min(prop_share(instance, agent), worst))
    per_copy = sorted(
        (row[pos] for pos, t in enumerate(instance.types) for _ in range(t.copies)),
        reverse=True,
    )
    n = instance.agents
    total = sum(per_copy, Fraction(0))
    best: Optional[Fraction] = None
    best_truncated = None
    prefix = Fraction(0)
    for j in range(min(len(per_copy), n - 1) + 1):
        z = (total - prefix) / (n - j)
        if (j == 0 or per_copy[j - 1] >= z) and (j == len(per_copy) or z >= per_copy[j]):
            if best is None or z > best:
                best, best_truncated = z, j
        if j < len(per_copy):
            prefix += per_copy[j]
    assert best is not None
    return ShareValue(value=best, certificate=best_truncated)


def forced_types(instance: Instance) -> frozenset:
    """Types every agent holds in every complete allocation."""
    return frozenset(t.name for t in instance.types if t.copies == instance.agents)


def _free_subset_values(instance, agent, free_positions):
    """Bundle value of every subset of the free types, indexed by bitmask."""
    row = instance.values[agent]
    f = len(free_positions)
    values = [Fraction(0)] * (1 << f)
    for mask in range(1, 1 << f):
        low = (mask & -mask).bit_length() - 1
        values[mask] = values[mask ^ (1 << low)] + row[free_positions[low]]
    return values


def _excludable(values, f, threshold, b, orientation):
    """Can prices make every bundle worth at least `threshold` miss the budget?

    Returns the slack-maximizing LP outcome: (excludable, prices or None).
    Goods: qualifying bundles must cost strictly more than b, so only
    subset-minimal qualifying bundles constrain. Chores: strictly less,
    so subset-maximal ones do.
    """
    qualifying = [m for m in range(1 << f) if values[m] >= threshold]
    marks = set(qualifying)
    frontier = []
    for m in qualifying:
        if orientation == "goods":
            boundary = all(
                (m ^ (1 << i)) not in marks for i in range(f) if m & (1 << i)
            )
        else:
            boundary = all(
                (m | (1 << i)) not in marks for i in range(f) if not m & (1 << i)
            )
        if boundary:
            frontier.append(m)
    objective = [Fraction(0)] * f + [Fraction(1)]
    eq = [([Fraction(1)] * f + [Fraction(0)], Fraction(1))]
    leq = []
    for m in frontier:
        member = [Fraction(1) if m & (1 << i) else Fraction(0) for i in range(f)]
        if orientation == "goods":
            leq.append(([-c for c in member] + [Fraction(1)], -b))
        else:
            leq.append((member + [Fraction(1)], b))
    result = maximize(objective, leq=leq, eq=eq, free=[f])
    if result.optimum > 0:
        return True, result.solution[:f]
    return False, None


def aps_share(
    instance: Instance, agent: int, entitlement: Optional[Fraction] = None
) -> ShareValue:
    """Anyprice share at the given entitlement (default 1/n).

    Goods: the best bundle value the agent can afford no matter how the
    adversary prices the free types; chores: the least bad bundle the
    agent can be forced into among those weighing at least the
    entitlement. Either way the share is the largest bundle-value
    threshold the adversary cannot exclude, found by binary search with an
    exact slack-maximizing feasibility program per probe.

    The certificate prices witness the value from above: under them no
    strictly better bundle fits the budget, and re-verification by direct
    enumeration is asserted before returning.
    """
    orientation = instance.orientation()
    if orientation is None:
        raise OrientationError("anyprice share needs a sign-pure instance")
    b = Fraction(1, instance.agents) if entitlement is None else Fraction(entitlement)
    if not 0 <= b <= 1:
        raise ValueError("entitlement must lie in [0, 1]")
    forced = forced_types(instance)
    base = instance.bundle_value(agent, forced)
    free_positions = [
        pos for pos, t in enumerate(instance.types) if t.name not in forced
    ]
    f = len(free_positions)
    if f > MAX_FREE_TYPES:
        raise BudgetExceededError(
            f"{f} free types exceed the {MAX_FREE_TYPES}-type bundle enumeration limit"
        )
    if f == 0:
        return ShareValue(value=base, certificate=PriceVector((), b))
    values = _free_subset_values(instance, agent, free_positions)
    thresholds = sorted(set(values))
    # Exclusion is monotone in the threshold: find the last non-excludable.
    lo, hi = 0, len(thresholds) - 1
    prices_at_cut = None
    excl_hi, prices_hi = _excludable(values, f, thresholds[hi], b, orientation)
    if not excl_hi:
        lo = hi
    else:
        prices_at_cut = prices_hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            excl, prices = _excludable(values, f, thresholds[mid], b, orientation)
            if excl:
                hi, prices_at_cut = mid, prices
            else:
                lo = mid
    free_value = thresholds[lo]
    names = [instance.types[p].name for p in free_positions]
    if prices_at_cut is None:
        weights = [Fraction(1, f)] * f
    else:
        weights = list(prices_at_cut)
    vector = PriceVector(tuple(zip(names, weights)), b)

    # Re-verify by enumeration: the best affordable (goods) or forceable
    # (chores) bundle under the certificate prices is worth exactly the share.
    best = None
    for m in range(1 << f):
        w = sum((weights[i] for i in range(f) if m & (1 << i)), Fraction(0))
        feasible = w <= b if orientation == "goods" else w >= b
        if feasible and (best is None or values[m] > best):
            best = values[m]
    assert best == free_value, "certificate failed re-verification"
    return ShareValue(value=base + free_value, certificate=vector)


def check_aps_entitlement_duality(
    instance: Instance, allocation: Allocation, entitlement: Fraction
) -> bool:
    """Anyprice fairness at entitlement b mirrors the dual at 1 - b.

    Verifies, per agent, that the dual share equals the primal share minus
    the typeset value, and that own-bundle fairness agrees on both sides.
    """
    from .duality import dualize

    b = Fraction(entitlement)
    if not 0 < b < 1:
        raise ValueError("entitlement must lie strictly between 0 and 1")
    dual = dualize(instance, allocation)
    for i in range(instance.agents):
        primal = aps_share(instance, i, b).value
        mirrored = aps_share(dual.instance, i, 1 - b).value
        if mirrored != primal - instance.typeset_value(i):
            return False
        fair_here = instance.bundle_value(i, allocation.bundles[i]) >= primal
        fair_dual = (
            dual.instance.bundle_value(i, dual.allocation.bundles[i]) >= mirrored
        )
        if fair_here != fair_dual:
            return False
    return True


def aps_copy_shift_check(
    instance: Instance,
    agent: int,
    value: Fraction,
    entitlement: Optional[Fraction] = None,
) -> bool:
    """Adding a full-copy good moves the anyprice share by exactly its value."""
    if not instance.goods_pure:
        raise OrientationError("copy-shift check expects a goods-pure instance")
    shift = Fraction(value)
    if shift < 0:
        raise ValueError("a good's value cannot be negative")
    name = "shifted"
    while any(t.name == name for t in instance.types):
        name += "_"
    from .model import ItemType

    extended = Instance(
        agents=instance.agents,
        types=instance.types + (ItemType(name, instance.agents),),
        values=tuple(row + (shift,) for row in instance.values),
    )
    before = aps_share(instance, agent, entitlement).value
    after = aps_share(extended, agent, entitlement).value
    return after == before + shift


def share_value(
    instance: Instance, spec: ShareSpec, budget: Optional[int] = None
) -> ShareValue:
    """Dispatch a ShareSpec to the right computation."""
    if spec.kind == "prop":
        return ShareValue(value=prop_share(instance, spec.agent))
    if spec.kind == "mms":
        return mms_share(instance, spec.agent, budget=budget)
    if spec.kind == "tps":
        return tps_share(instance, spec.agent)
    return aps_share(instance, spec.agent, spec.entitlement)
