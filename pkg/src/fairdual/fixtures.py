"""Bundled example corpus: instances, allocations, and scripted claims.

Each fixture is a JSON data file naming an instance, zero or more
allocations, and a list of claims. Claims are small declarative checks
(an allocation passes a notion, a share has an exact value, and so on)
so the corpus stays auditable without reading any code. `replicate`
evaluates the claims of one fixture; the CLI exposes the whole corpus.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional

from .criteria import cancel_envy_cycle, criterion_for, is_fair
from .duality import dualize
from .model import (
    Allocation,
    FairdualError,
    Instance,
    allocation_from_json,
    format_rational,
    instance_from_json,
    parse_rational,
)
from .search import exists_fair, max_nash_welfare
from .shares import (
    ShareSpec,
    check_aps_entitlement_duality,
    prop_share,
    share_value,
    verify_mms_lower_bound,
)


@dataclass(frozen=True)
class Fixture:
    id: str
    title: str
    instance: Instance
    allocations: dict
    claims: tuple


@dataclass(frozen=True)
class ClaimResult:
    fixture: str
    description: str
    passed: bool
    detail: str = ""


def _data_root():
    return resources.files(__package__) / "fixtures"


def fixture_ids() -> tuple:
    """Sorted ids of every bundled fixture."""
    names = [
        entry.name[: -len(".json")]
        for entry in _data_root().iterdir()
        if entry.name.endswith(".json")
    ]
    return tuple(sorted(names))


def load_fixture(fixture_id: str) -> Fixture:
    path = _data_root() / (fixture_id + ".json")
    try:
        raw = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FairdualError(
            f"unknown fixture {fixture_id!r}; known ids: {', '.join(fixture_ids())}"
        ) from None
    data = json.loads(raw)
    instance = instance_from_json(data["instance"])
    allocations = {
        name: allocation_from_json(payload)
        for name, payload in data.get("allocations", {}).items()
    }
    return Fixture(
        id=data["id"],
        title=data["title"],
        instance=instance,
        allocations=allocations,
        claims=tuple(data["claims"]),
    )


def _witness_pairs(report) -> list:
    return [[w.envious, w.envied] for w in report.witnesses]


def _claim_is_fair(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    name = claim["allocation"]
    notion = claim["notion"]
    criterion = criterion_for(fixture.instance, notion, claim.get("orientation"))
    report = is_fair(fixture.instance, fixture.allocations[name], criterion)
    passed = report.fair == claim["expect"]
    detail = ""
    if passed and "witnesses" in claim:
        pairs = _witness_pairs(report)
        if pairs != claim["witnesses"]:
            passed = False
            detail = f"witnesses {pairs} != {claim['witnesses']}"
    elif not passed:
        detail = f"expected fair={claim['expect']}, got {report.fair}"
    verb = "satisfies" if claim["expect"] else "violates"
    return ClaimResult(fixture.id, f"{name} {verb} {notion}", passed, detail)


def _claim_exists(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    notion = claim["notion"]
    criterion = criterion_for(fixture.instance, notion, claim.get("orientation"))
    certificate = exists_fair(fixture.instance, criterion, budget=budget)
    passed = certificate.exists == claim["expect"]
    detail = ""
    if passed and "checked" in claim and certificate.checked != claim["checked"]:
        passed = False
        detail = f"checked {certificate.checked} != {claim['checked']}"
    elif not passed:
        detail = f"expected exists={claim['expect']}, got {certificate.exists}"
    kind = "admits" if claim["expect"] else "refutes"
    return ClaimResult(fixture.id, f"instance {kind} {notion}", passed, detail)


def _claim_dual_allocation(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    name = claim["allocation"]
    result = dualize(fixture.instance, fixture.allocations[name])
    expected = Allocation(tuple(frozenset(b) for b in claim["expect"]))
    passed = result.allocation == expected
    detail = "" if passed else f"dual bundles differ: {result.allocation.bundles}"
    return ClaimResult(fixture.id, f"dual of {name} matches", passed, detail)


def _claim_dual_is_fair(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    name = claim["allocation"]
    notion = claim["notion"]
    result = dualize(fixture.instance, fixture.allocations[name])
    criterion = criterion_for(result.instance, notion, claim.get("orientation"))
    report = is_fair(result.instance, result.allocation, criterion)
    passed = report.fair == claim["expect"]
    verb = "satisfies" if claim["expect"] else "violates"
    detail = "" if passed else f"expected fair={claim['expect']}, got {report.fair}"
    return ClaimResult(
        fixture.id, f"dual of {name} {verb} {notion} on the dual instance",
        passed, detail,
    )


def _claim_cancel_cycle(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    name = claim["allocation"]
    before = fixture.allocations[name]
    after = cancel_envy_cycle(fixture.instance, before, claim["cycle"])
    expected = fixture.allocations[claim["expect"]]
    passed = after == expected
    detail = "" if passed else "rotated allocation differs"
    if passed:
        for agent in claim.get("improves", []):
            gained = fixture.instance.bundle_value(agent, after.bundles[agent])
            held = fixture.instance.bundle_value(agent, before.bundles[agent])
            if gained <= held:
                passed = False
                detail = f"agent {agent} does not strictly gain"
                break
    cycle = "-".join(str(a) for a in claim["cycle"])
    return ClaimResult(
        fixture.id, f"cancelling cycle {cycle} on {name} gives {claim['expect']}",
        passed, detail,
    )


def _claim_mnw(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    best, welfare = max_nash_welfare(fixture.instance, budget=budget)
    expected = fixture.allocations[claim["expect"]]
    target = parse_rational(claim["welfare"])
    passed = best == expected and welfare == target
    detail = ""
    if not passed:
        detail = f"welfare {format_rational(welfare)}, target {claim['welfare']}"
    return ClaimResult(
        fixture.id,
        f"Nash welfare maximum is {claim['expect']} with welfare {claim['welfare']}",
        passed, detail,
    )


def _claim_share(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    entitlement = claim.get("entitlement")
    spec = ShareSpec(
        kind=claim["share"],
        agent=claim["agent"],
        entitlement=None if entitlement is None else parse_rational(entitlement),
    )
    result = share_value(fixture.instance, spec, budget=budget)
    target = parse_rational(claim["expect"])
    passed = result.value == target
    detail = "" if passed else f"got {format_rational(result.value)}"
    return ClaimResult(
        fixture.id,
        f"{claim['share']} share of agent {claim['agent']} is {claim['expect']}",
        passed, detail,
    )


def _claim_dual_share(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    dual = dualize(fixture.instance).instance
    entitlement = claim.get("entitlement")
    spec = ShareSpec(
        kind=claim["share"],
        agent=claim["agent"],
        entitlement=None if entitlement is None else parse_rational(entitlement),
    )
    result = share_value(dual, spec, budget=budget)
    target = parse_rational(claim["expect"])
    passed = result.value == target
    detail = "" if passed else f"got {format_rational(result.value)}"
    return ClaimResult(
        fixture.id,
        f"dual {claim['share']} share of agent {claim['agent']} is {claim['expect']}",
        passed, detail,
    )


def _claim_mms_lower_bound(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    witness = fixture.allocations[claim["witness"]]
    bound = verify_mms_lower_bound(fixture.instance, claim["agent"], witness)
    target = parse_rational(claim["expect"])
    passed = bound == target
    detail = "" if passed else f"got {format_rational(bound)}"
    return ClaimResult(
        fixture.id,
        f"witness gives agent {claim['agent']} a maximin bound of {claim['expect']}",
        passed, detail,
    )


def _claim_value_ratio(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    agent = claim["agent"]
    allocation = fixture.allocations[claim["allocation"]]
    value = fixture.instance.bundle_value(agent, allocation.bundles[agent])
    ratio = value / parse_rational(claim["share"])
    target = parse_rational(claim["expect"])
    passed = ratio == target
    detail = "" if passed else f"got {format_rational(ratio)}"
    return ClaimResult(
        fixture.id,
        f"agent {agent}'s value is {claim['expect']} of the {claim['share']} share",
        passed, detail,
    )


def _claim_alpha_bound_via_prop(fixture: Fixture, claim: dict, budget) -> ClaimResult:
    allocation = fixture.allocations[claim["allocation"]]
    alpha = parse_rational(claim["alpha"])
    excluded = set(claim.get("exclude", []))
    failing = []
    for agent in range(fixture.instance.agents):
        if agent in excluded:
            continue
        value = fixture.instance.bundle_value(agent, allocation.bundles[agent])
        if value < alpha * prop_share(fixture.instance, agent):
            failing.append(agent)
    passed = not failing
    detail = "" if passed else f"agents below the bound: {failing}"
    return ClaimResult(
        fixture.id,
        f"remaining agents clear {claim['alpha']} of their proportional share",
        passed, detail,
    )


def _claim_aps_entitlement_duality(fixture, claim, budget) -> ClaimResult:
    allocation = fixture.allocations[claim["allocation"]]
    ok = check_aps_entitlement_duality(
        fixture.instance, allocation, parse_rational(claim["entitlement"])
    )
    passed = ok == claim["expect"]
    detail = "" if passed else f"checker returned {ok}"
    return ClaimResult(
        fixture.id,
        f"entitlement duality holds at {claim['entitlement']}",
        passed, detail,
    )


_CLAIM_EVALUATORS = {
    "is_fair": _claim_is_fair,
    "exists": _claim_exists,
    "dual_allocation": _claim_dual_allocation,
    "dual_is_fair": _claim_dual_is_fair,
    "cancel_cycle": _claim_cancel_cycle,
    "mnw": _claim_mnw,
    "share": _claim_share,
    "dual_share": _claim_dual_share,
    "mms_lower_bound": _claim_mms_lower_bound,
    "value_ratio": _claim_value_ratio,
    "alpha_bound_via_prop": _claim_alpha_bound_via_prop,
    "aps_entitlement_duality": _claim_aps_entitlement_duality,
}


def replicate(fixture: Fixture, budget: Optional[int] = None) -> tuple:
    """Evaluate every claim of one fixture, in order."""
    results = []
    for claim in fixture.claims:
        try:
            evaluator = _CLAIM_EVALUATORS[claim["kind"]]
        except KeyError:
            raise FairdualError(
                f"fixture {fixture.id}: unknown claim kind {claim.get('kind')!r}"
            ) from None
        results.append(evaluator(fixture, claim, budget))
    return tuple(results)


def replicate_all(budget: Optional[int] = None) -> tuple:
    """Evaluate the whole corpus; results keep fixture order within each id."""
    results = []
    for fixture_id in fixture_ids():
        results.extend(replicate(load_fixture(fixture_id), budget=budget))
    return tuple(results)
