"""Test sequencing and expected-cost evaluation under a single-fault assumption.

Exactly one of a symptom's components is at fault. Tests are performed one at
a time in a fixed order; each test takes a known number of minutes and tells
with certainty whether its component is the culprit. The expected time to
find the fault is minimized by testing in ascending order of the ratio
cost / probability: cheap, likely components first. Swapping any adjacent
pair (j, k) of an order changes the expected cost by C_j*p_k - C_k*p_j, which
is what makes the ratio sort optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import permutations

from .model import Symptom, TestStrategy

# Enumerating permutations beyond this size is pointless: 11! evaluations of
# an O(n) formula when the ratio sort gives the optimum in O(n log n).
BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True)
class SequencedTest:
    """One slot of a recommended test order."""

    component_id: str
    cost: float
    prob: float
    cp_ratio: float  # cost / prob; +inf when prob == 0
    rank: int  # 1-based position in the recommended order


@dataclass(frozen=True)
class PositionTerm:
    """Contribution of one test slot to the expected cost."""

    component_id: str
    cost: float
    weight: float  # probability that this test ends up being performed
    term: float  # cost * weight


@dataclass(frozen=True)
class EvaluatedStrategy:
    strategy: TestStrategy
    expected_cost: float
    terms: tuple[PositionTerm, ...]


def _check_permutation(strategy: TestStrategy, symptom: Symptom) -> None:
    if strategy.symptom_id != symptom.id:
        raise ValueError(
            f"strategy is for symptom {strategy.symptom_id!r}, "
            f"not {symptom.id!r}"
        )
    expected = set(symptom.component_ids())
    order = strategy.order
    duplicates = sorted({cid for cid in order if order.count(cid) > 1})
    missing = sorted(expected - set(order))
    unexpected = sorted(set(order) - expected)
    if duplicates or missing or unexpected:
        problems = []
        if missing:
            problems.append(f"missing: {', '.join(missing)}")
        if unexpected:
            problems.append(f"unexpected: {', '.join(unexpected)}")
        if duplicates:
            problems.append(f"duplicated: {', '.join(duplicates)}")
        raise ValueError(
            f"order is not a permutation of symptom {symptom.id!r} components "
            f"({'; '.join(problems)})"
        )


def _position_weights(probs: list[float]) -> list[float]:
    """Probability that each slot of an order is actually tested.

    The first test is always performed. A later test runs only when every
    earlier test passed, so it carries weight 1 minus the probability mass
    placed before it; the final slot carries its own component's probability,
    the mass left over once every predecessor has passed. When probabilities
    sum to one these weights all equal the suffix sums sum(p[j:]).
    """
    n = len(probs)
    weights = [1.0]
    prefix = probs[0]
    for j in range(1, n - 1):
        weights.append(1.0 - prefix)
        prefix += probs[j]
    if n >= 2:
        weights.append(probs[-1])
    return weights


def expected_cost(strategy: TestStrategy, symptom: Symptom) -> EvaluatedStrategy:
    """Expected minutes to find the fault testing in the given order.

    The order must be a permutation of the symptom's component ids.
    Probabilities are used as stored; callers that need a proper
    distribution normalize the symptom first.
    """
    _check_permutation(strategy, symptom)
    ordered = [symptom.component(cid) for cid in strategy.order]
    weights = _position_weights([c.prob for c in ordered])
    terms = tuple(
        PositionTerm(
            component_id=c.id, cost=c.cost, weight=w, term=c.cost * w
        )
        for c, w in zip(ordered, weights)
    )
    return EvaluatedStrategy(
        strategy=strategy,
        expected_cost=sum(t.term for t in terms),
        terms=terms,
    )


def cp_sequence(symptom: Symptom) -> tuple[SequencedTest, ...]:
    """Order components by ascending cost/probability ratio.

    Ties keep the symptom's input order. Components with probability zero
    get an infinite ratio and sort to the end; they are still tested when
    reached rather than skipped.
    """
    ratios = [
        c.cost / c.prob if c.prob > 0.0 else math.inf for c in symptom.components
    ]
    order = sorted(range(len(ratios)), key=ratios.__getitem__)
    return tuple(
        SequencedTest(
            component_id=symptom.components[i].id,
            cost=symptom.components[i].cost,
            prob=symptom.components[i].prob,
            cp_ratio=ratios[i],
            rank=rank,
        )
        for rank, i in enumerate(order, start=1)
    )


def cp_strategy(symptom: Symptom) -> TestStrategy:
    """The cp_sequence order as a strategy usable with expected_cost."""
    return TestStrategy(
        symptom_id=symptom.id,
        order=tuple(t.component_id for t in cp_sequence(symptom)),
    )


def swap_delta(symptom: Symptom, strategy: TestStrategy, position: int) -> float:
    """Change in expected cost from swapping slots `position` and `position`+1.

    `position` is 1-based. Returns EC(as given) - EC(swapped), i.e.
    C_j*p_k - C_k*p_j for the components j, k at the two slots; a positive
    value means the swap would improve the order.
    """
    _check_permutation(strategy, symptom)
    n = len(strategy.order)
    if not 1 <= position <= n - 1:
        raise ValueError(
            f"position must be in [1, {n - 1}] for a {n}-component order, "
            f"got {position}"
        )
    first = symptom.component(strategy.order[position - 1])
    second = symptom.component(strategy.order[position])
    return first.cost * second.prob - second.cost * first.prob


def brute_force_optimum(symptom: Symptom) -> tuple[TestStrategy, float]:
    """Minimum-expected-cost order by exhaustive enumeration.

    Independent of the ratio sort, for cross-checking it. Guards against
    factorial blowup above BRUTE_FORCE_LIMIT components. Among equally
    cheap orders the first in lexicographic order (by position in the
    symptom's component list) wins, so the result is deterministic.
    """
    n = len(symptom.components)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"symptom {symptom.id!r} has {n} components; enumeration is "
            f"capped at {BRUTE_FORCE_LIMIT} (use cp_sequence instead)"
        )
    costs = [c.cost for c in symptom.components]
    probs = [c.prob for c in symptom.components]
    best_order: tuple[int, ...] | None = None
    best_ec = math.inf
    for order in permutations(range(n)):
        ec = costs[order[0]]
        if n >= 2:
            prefix = probs[order[0]]
            for j in range(1, n - 1):
                i = order[j]
                ec += costs[i] * (1.0 - prefix)
                prefix += probs[i]
            last = order[-1]
            ec += costs[last] * probs[last]
        if ec < best_ec:
            best_ec = ec
            best_order = order
    assert best_order is not None
    ids = symptom.component_ids()
    return (
        TestStrategy(symptom_id=symptom.id, order=tuple(ids[i] for i in best_order)),
        best_ec,
    )


def condition_on_pass(symptom: Symptom, passed_id: str) -> Symptom:
    """Posterior symptom after a component tested clean.

    Removes the passed component and rescales the remaining probabilities
    by 1 / (1 - p_passed). Expects a normalized symptom, so the result sums
    to one again. The relative order of the survivors' cost/probability
    ratios is unchanged, hence so is their recommended order.
    """
    passed = symptom.component(passed_id)
    if passed.prob >= 1.0:
        raise ValueError(
            f"component {passed_id!r} has probability 1; a pass would "
            f"contradict the single-fault assumption"
        )
    rest = [c for c in symptom.components if c.id != passed_id]
    if not rest:
        raise ValueError(
            f"component {passed_id!r} is the only candidate for symptom "
            f"{symptom.id!r}; nothing remains to renormalize"
        )
    scale = 1.0 / (1.0 - passed.prob)
    return replace(
        symptom,
        components=tuple(replace(c, prob=c.prob * scale) for c in rest),
    )
