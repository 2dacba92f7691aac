"""Share computations against hand-checked and oracle-frozen values.

The maximin value 6 for the four-doubled-types instance and the anyprice
values -16 / 4 / 1 come from the standalone scripts in tests/oracles/,
which recompute them from scratch without importing the package.
"""

import random
from fractions import Fraction

import pytest

from fairdual.criteria import OrientationError
from fairdual.duality import dualize
from fairdual.model import Allocation, BudgetExceededError, Instance, ItemType
from fairdual.randgen import random_instance
from fairdual.shares import (
    PriceVector,
    ShareSpec,
    aps_copy_shift_check,
    aps_share,
    check_alpha_mms,
    check_aps_entitlement_duality,
    forced_types,
    mms_share,
    prop_share,
    share_value,
    tps_share,
    verify_mms_lower_bound,
)


def section_instance():
    return Instance(
        agents=3,
        types=(
            ItemType("t1", 2),
            ItemType("t2", 2),
            ItemType("t3", 2),
            ItemType("t4", 2),
        ),
        values=tuple(
            (Fraction(1), Fraction(2), Fraction(3), Fraction(9)) for _ in range(3)
        ),
    )


def chores_instance():
    """Five single chores -2..-6, each in three copies, four agents."""
    return Instance(
        agents=4,
        types=tuple(ItemType(f"c{k}", 3) for k in range(2, 7)),
        values=tuple(
            tuple(Fraction(-k) for k in range(2, 7)) for _ in range(4)
        ),
    )


def trio_instance():
    return Instance(
        agents=3,
        types=(ItemType("a", 1), ItemType("b", 1), ItemType("c", 1)),
        values=((Fraction(2), Fraction(3), Fraction(5)),) * 3,
    )


def test_prop_share_is_total_over_agents():
    instance = section_instance()
    assert prop_share(instance, 0) == Fraction(30, 3)
    chores = chores_instance()
    assert prop_share(chores, 0) == Fraction(-60, 4)


def test_mms_of_doubled_types_is_six():
    instance = section_instance()
    result = mms_share(instance, 0)
    assert result.value == 6
    assert min(
        instance.bundle_value(0, b) for b in result.certificate.bundles
    ) == 6


def test_mms_certificate_is_achievable_partition():
    rng = random.Random(17)
    for _ in range(30):
        instance = random_instance(rng, max_agents=3, max_types=4)
        result = mms_share(instance, 0)
        floor = verify_mms_lower_bound(instance, 0, result.certificate)
        assert floor == result.value
        assert result.value <= prop_share(instance, 0)


def test_mms_budget_guard():
    instance = section_instance()
    with pytest.raises(BudgetExceededError):
        mms_share(instance, 0, budget=80)


def test_verify_mms_lower_bound_uses_witness_minimum():
    instance = section_instance()
    witness = Allocation.of(
        ["t1", "t2", "t3", "t4"], ["t1", "t2", "t3"], ["t4"]
    )
    assert verify_mms_lower_bound(instance, 0, witness) == 6


def test_check_alpha_mms_report():
    instance = section_instance()
    allocation = Allocation.of(["t1", "t2", "t4"], ["t3", "t4"], ["t1", "t2", "t3"])
    report = check_alpha_mms(instance, allocation, Fraction(1, 2))
    assert report.fair
    assert report.shares == (Fraction(6),) * 3
    assert report.ratios == (Fraction(2), Fraction(2), Fraction(1))
    strict = check_alpha_mms(instance, allocation, Fraction(3, 2))
    assert not strict.fair and strict.failing == (2,)
    supplied = check_alpha_mms(
        instance, allocation, Fraction(1, 2), mms_values=(6, 6, 6)
    )
    assert supplied.shares == report.shares


def test_tps_trio_is_two():
    assert tps_share(trio_instance(), 0).value == 2


def test_tps_forced_type_shifts_nonlinearly():
    trio = trio_instance()
    extended = Instance(
        agents=3,
        types=trio.types + (ItemType("d", 3),),
        values=tuple(row + (Fraction(3),) for row in trio.values),
    )
    assert tps_share(extended, 0).value == Fraction(19, 3)
    # the shift is 13/3, not the added type's value of 3
    assert tps_share(extended, 0).value - tps_share(trio, 0).value == Fraction(13, 3)


def test_tps_large_item_truncates():
    instance = Instance(
        agents=4,
        types=tuple(
            ItemType(name, 1) for name in ("a", "b", "c", "d", "e", "f")
        ),
        values=(
            (
                Fraction(1),
                Fraction(3),
                Fraction(4),
                Fraction(6),
                Fraction(7),
                Fraction(19),
            ),
        )
        * 4,
    )
    result = tps_share(instance, 0)
    assert result.value == 7
    assert prop_share(instance, 0) == 10
    dual = dualize(instance).instance
    assert tps_share(dual, 0).value == -30
    assert prop_share(dual, 0) == -30


def test_tps_chores_is_prop_or_worst_chore():
    chores = chores_instance()
    assert tps_share(chores, 0).value == -15
    lopsided = Instance(
        agents=3,
        types=(ItemType("big", 1), ItemType("small", 1)),
        values=((Fraction(-20), Fraction(-1)),) * 3,
    )
    assert tps_share(lopsided, 0).value == -20


def test_tps_needs_sign_purity():
    mixed = Instance(
        agents=2,
        types=(ItemType("a", 1), ItemType("b", 1)),
        values=((Fraction(1), Fraction(-1)),) * 2,
    )
    with pytest.raises(OrientationError):
        tps_share(mixed, 0)


def test_forced_types_detection():
    instance = Instance(
        agents=2,
        types=(ItemType("a", 2), ItemType("b", 1)),
        values=((Fraction(1), Fraction(1)),) * 2,
    )
    assert forced_types(instance) == frozenset({"a"})


def test_aps_chores_value_and_certificate():
    chores = chores_instance()
    result = aps_share(chores, 0, Fraction(3, 4))
    assert result.value == -16
    prices = result.certificate
    assert isinstance(prices, PriceVector)
    assert sum(w for _, w in prices.prices) == 1
    # the certificate excludes everything better than the share: any bundle
    # of weight >= 3/4 is worth at most -16
    names = [t.name for t in chores.types]
    from itertools import combinations

    for size in range(len(names) + 1):
        for subset in combinations(names, size):
            if prices.weight(frozenset(subset)) >= Fraction(3, 4):
                assert chores.bundle_value(0, frozenset(subset)) <= -16


def test_aps_goods_dual_value():
    dual = dualize(chores_instance()).instance
    result = aps_share(dual, 0, Fraction(1, 4))
    assert result.value == 4
    prices = result.certificate
    names = [t.name for t in dual.types]
    from itertools import combinations

    for size in range(len(names) + 1):
        for subset in combinations(names, size):
            if prices.weight(frozenset(subset)) <= Fraction(1, 4):
                assert dual.bundle_value(0, frozenset(subset)) <= 4


def test_aps_entitlement_duality_identity():
    chores = chores_instance()
    allocation = Allocation.of(
        ["c2", "c3", "c4", "c6"],
        ["c2", "c3", "c4", "c5"],
        ["c2", "c3", "c5", "c6"],
        ["c4", "c5", "c6"],
    )
    assert check_aps_entitlement_duality(chores, allocation, Fraction(3, 4))
    dual_value = aps_share(dualize(chores).instance, 0, Fraction(1, 4)).value
    assert aps_share(chores, 0, Fraction(3, 4)).value == dual_value - 20


def test_aps_unit_pair_and_forced_shift():
    pair = Instance(
        agents=2,
        types=(ItemType("a", 1), ItemType("b", 1)),
        values=((Fraction(1), Fraction(1)),) * 2,
    )
    assert aps_share(pair, 0).value == 1
    assert aps_copy_shift_check(pair, 0, Fraction(3))


def test_aps_forced_only_instance():
    forced = Instance(
        agents=2,
        types=(ItemType("a", 2),),
        values=((Fraction(4),), (Fraction(4),)),
    )
    result = aps_share(forced, 0)
    assert result.value == 4
    assert result.certificate.prices == ()


def test_aps_at_most_prop_at_default_entitlement():
    rng = random.Random(29)
    for _ in range(40):
        instance = random_instance(rng, max_agents=3, max_types=4,
                                   orientation="goods")
        for agent in range(instance.agents):
            assert aps_share(instance, agent).value <= prop_share(instance, agent)


def test_aps_entitlement_validation():
    pair = chores_instance()
    with pytest.raises(ValueError):
        aps_share(pair, 0, Fraction(3, 2))


def test_share_value_dispatch():
    instance = section_instance()
    assert share_value(instance, ShareSpec("prop", 0)).value == 10
    assert share_value(instance, ShareSpec("mms", 0)).value == 6
    assert share_value(instance, ShareSpec("tps", 0)).value == 10
    aps = share_value(
        instance, ShareSpec("aps", 0, entitlement=Fraction(1, 3))
    )
    assert aps.value <= 10
