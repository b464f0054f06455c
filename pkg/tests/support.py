"""Shared test helpers: instance builders, random instances, oracles."""

from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from diagseq.model import Component, Symptom, TestStrategy


def make_symptom(costs, probs, sid="sym", source="synthetic") -> Symptom:
    components = tuple(
        Component(id=f"c{i}", name=f"component {i}", cost=float(c), prob=float(p))
        for i, (c, p) in enumerate(zip(costs, probs))
    )
    return Symptom(id=sid, name=sid, components=components, source=source)


def random_symptom(rng: np.random.Generator, n: int, normalized: bool = True) -> Symptom:
    costs = rng.uniform(1.0, 100.0, size=n)
    probs = rng.uniform(0.01, 1.0, size=n)
    if normalized:
        probs = probs / probs.sum()
    return make_symptom(costs, probs)


def strategy_for(symptom: Symptom, order=None) -> TestStrategy:
    ids = symptom.component_ids()
    if order is None:
        order = ids
    return TestStrategy(symptom_id=symptom.id, order=tuple(order))


def simulated_mean_cost(
    symptom: Symptom, strategy: TestStrategy, n_draws: int, seed: int
) -> tuple[float, float]:
    """Draw faults from the symptom's probabilities and walk the strategy.

    The realized cost of a fault at slot k is the sum of the first k test
    costs (the failing test is performed, then testing stops). Returns
    (mean realized cost, standard error of the mean). Probabilities must
    form a distribution, so pass a normalized symptom.
    """
    probs = np.array([symptom.component(cid).prob for cid in strategy.order])
    costs = np.array([symptom.component(cid).cost for cid in strategy.order])
    cumulative = np.cumsum(costs)
    rng = np.random.default_rng(seed)
    fault_slots = rng.choice(len(probs), size=n_draws, p=probs / probs.sum())
    realized = cumulative[fault_slots]
    return float(realized.mean()), float(realized.std(ddof=1) / math.sqrt(n_draws))


@st.composite
def symptoms(draw, min_n: int = 1, max_n: int = 7) -> Symptom:
    """Random normalized symptom for property tests."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    costs = draw(
        st.lists(
            st.floats(min_value=0.5, max_value=100.0, allow_nan=False),
            min_size=n,
            max_size=n,
        )
    )
    weights = draw(
        st.lists(
            st.floats(min_value=0.01, max_value=1.0, allow_nan=False),
            min_size=n,
            max_size=n,
        )
    )
    total = sum(weights)
    return make_symptom(costs, [w / total for w in weights])
