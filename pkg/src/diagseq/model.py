"""Fault models: symptoms, their candidate causes, and recorded test orders.

A fault model groups troubleshooting knowledge for one machine. Each symptom
lists the components that could explain it, with the time a test/repair of
that component takes and the assessed probability that it is the culprit.
Expert rules record the order in which a human troubleshooter works through
the candidates, so they can be compared against computed orders.

Probabilities are stored exactly as assessed. Elicited numbers rarely sum
to one, so normalization is a separate, explicit step rather than something
that happens silently on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources

SOURCES = ("paper", "synthetic")


class ModelValidationError(ValueError):
    """A fault-model document violated the schema.

    ``path`` points at the offending element, e.g.
    ``symptoms[1].components[0].cost``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Component:
    """A testable candidate cause of a symptom."""

    id: str
    name: str
    cost: float  # minutes to test (and repair if at fault), > 0
    prob: float  # probability this component is the fault, in [0, 1]


@dataclass(frozen=True)
class Symptom:
    """One observable failure and the components that could explain it."""

    id: str
    name: str
    components: tuple[Component, ...]
    source: str  # "paper": transcribed assessed values; "synthetic": placeholders

    def component(self, component_id: str) -> Component:
        for comp in self.components:
            if comp.id == component_id:
                return comp
        raise ValueError(
            f"unknown component {component_id!r} for symptom {self.id!r}; "
            f"known: {', '.join(c.id for c in self.components)}"
        )

    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def total_prob(self) -> float:
        return sum(c.prob for c in self.components)


@dataclass(frozen=True)
class TestStrategy:
    """A fixed order in which to test one symptom's components."""

    __test__ = False  # keeps pytest from collecting this as a test class

    symptom_id: str
    order: tuple[str, ...]


@dataclass(frozen=True)
class ExpertRule:
    """A recorded troubleshooter's test order for one symptom."""

    expert: str
    symptom_id: str
    order: tuple[str, ...]

    @property
    def strategy(self) -> TestStrategy:
        return TestStrategy(self.symptom_id, self.order)


@dataclass(frozen=True)
class FaultModel:
    name: str
    symptoms: tuple[Symptom, ...]
    expert_rules: tuple[ExpertRule, ...]

    def symptom(self, symptom_id: str) -> Symptom:
        for sym in self.symptoms:
            if sym.id == symptom_id:
                return sym
        raise ValueError(
            f"unknown symptom {symptom_id!r}; known: "
            f"{', '.join(s.id for s in self.symptoms)}"
        )

    def expert_rule(self, expert: str, symptom_id: str) -> ExpertRule:
        for rule in self.expert_rules:
            if rule.expert == expert and rule.symptom_id == symptom_id:
                return rule
        raise ValueError(
            f"no rule by expert {expert!r} for symptom {symptom_id!r}; "
            f"recorded rules: "
            f"{', '.join(f'({r.expert}, {r.symptom_id})' for r in self.expert_rules)}"
        )

    def rules_for(self, symptom_id: str) -> tuple[ExpertRule, ...]:
        return tuple(r for r in self.expert_rules if r.symptom_id == symptom_id)

    def experts(self) -> tuple[str, ...]:
        seen: list[str] = []
        for rule in self.expert_rules:
            if rule.expert not in seen:
                seen.append(rule.expert)
        return tuple(seen)


def normalize(symptom: Symptom) -> Symptom:
    """Rescale the symptom's probabilities to sum to one.

    Assessed numbers keep their relative sizes, so cost/probability
    ratio comparisons are unchanged. Raises ValueError when every
    probability is zero.
    """
    total = symptom.total_prob()
    if total <= 0.0:
        raise ValueError(
            f"symptom {symptom.id!r}: all probabilities are zero, cannot normalize"
        )
    return replace(
        symptom,
        components=tuple(replace(c, prob=c.prob / total) for c in symptom.components),
    )


# ---------------------------------------------------------------------------
# Parsing / serialization
# ---------------------------------------------------------------------------

def _require_keys(obj: dict, path: str, required: tuple[str, ...]) -> None:
    for key in required:
        if key not in obj:
            raise ModelValidationError(path, f"missing required field {key!r}")
    for key in obj:
        if key not in required:
            raise ModelValidationError(f"{path}.{key}", "unknown field")


def _require_str(value, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ModelValidationError(path, "must be a non-empty string")
    return value


def _require_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelValidationError(path, "must be a number")
    return float(value)


def _parse_component(obj, path: str) -> Component:
    if not isinstance(obj, dict):
        raise ModelValidationError(path, "must be an object")
    _require_keys(obj, path, ("id", "name", "cost", "prob"))
    cid = _require_str(obj["id"], f"{path}.id")
    name = _require_str(obj["name"], f"{path}.name")
    cost = _require_number(obj["cost"], f"{path}.cost")
    if cost <= 0:
        raise ModelValidationError(f"{path}.cost", f"must be > 0, got {cost}")
    prob = _require_number(obj["prob"], f"{path}.prob")
    if not 0.0 <= prob <= 1.0:
        raise ModelValidationError(f"{path}.prob", f"must be in [0, 1], got {prob}")
    return Component(id=cid, name=name, cost=cost, prob=prob)


def _parse_symptom(obj, path: str) -> Symptom:
    if not isinstance(obj, dict):
        raise ModelValidationError(path, "must be an object")
    _require_keys(obj, path, ("id", "name", "source", "components"))
    sid = _require_str(obj["id"], f"{path}.id")
    name = _require_str(obj["name"], f"{path}.name")
    source = _require_str(obj["source"], f"{path}.source")
    if source not in SOURCES:
        raise ModelValidationError(
            f"{path}.source", f"must be one of {SOURCES}, got {source!r}"
        )
    raw_components = obj["components"]
    if not isinstance(raw_components, list) or not raw_components:
        raise ModelValidationError(f"{path}.components", "must be a non-empty array")
    components = tuple(
        _parse_component(c, f"{path}.components[{i}]")
        for i, c in enumerate(raw_components)
    )
    seen: set[str] = set()
    for i, comp in enumerate(components):
        if comp.id in seen:
            raise ModelValidationError(
                f"{path}.components[{i}].id", f"duplicate component id {comp.id!r}"
            )
        seen.add(comp.id)
    return Symptom(id=sid, name=name, components=components, source=source)


def _parse_rule(obj, path: str, symptoms: tuple[Symptom, ...]) -> ExpertRule:
    if not isinstance(obj, dict):
        raise ModelValidationError(path, "must be an object")
    _require_keys(obj, path, ("expert", "symptom", "order"))
    expert = _require_str(obj["expert"], f"{path}.expert")
    symptom_id = _require_str(obj["symptom"], f"{path}.symptom")
    by_id = {s.id: s for s in symptoms}
    if symptom_id not in by_id:
        raise ModelValidationError(
            f"{path}.symptom", f"references unknown symptom {symptom_id!r}"
        )
    raw_order = obj["order"]
    if not isinstance(raw_order, list):
        raise ModelValidationError(f"{path}.order", "must be an array of component ids")
    order = tuple(
        _require_str(cid, f"{path}.order[{i}]") for i, cid in enumerate(raw_order)
    )
    expected = set(by_id[symptom_id].component_ids())
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
        raise ModelValidationError(
            f"{path}.order",
            f"not a permutation of symptom {symptom_id!r} components "
            f"({'; '.join(problems)})",
        )
    return ExpertRule(expert=expert, symptom_id=symptom_id, order=order)


def parse_model(text: str | bytes) -> FaultModel:
    """Parse a fault-model JSON document.

    Raises ModelValidationError with the path of the offending element on
    any schema violation; unknown fields are rejected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelValidationError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelValidationError("$", "top level must be an object")
    _require_keys(doc, "$", ("name", "symptoms", "expert_rules"))
    name = _require_str(doc["name"], "$.name")
    if not isinstance(doc["symptoms"], list):
        raise ModelValidationError("$.symptoms", "must be an array")
    symptoms = tuple(
        _parse_symptom(s, f"symptoms[{i}]") for i, s in enumerate(doc["symptoms"])
    )
    seen: set[str] = set()
    for i, sym in enumerate(symptoms):
        if sym.id in seen:
            raise ModelValidationError(
                f"symptoms[{i}].id", f"duplicate symptom id {sym.id!r}"
            )
        seen.add(sym.id)
    if not isinstance(doc["expert_rules"], list):
        raise ModelValidationError("$.expert_rules", "must be an array")
    rules = tuple(
        _parse_rule(r, f"expert_rules[{i}]", symptoms)
        for i, r in enumerate(doc["expert_rules"])
    )
    seen_pairs: set[tuple[str, str]] = set()
    for i, rule in enumerate(rules):
        pair = (rule.expert, rule.symptom_id)
        if pair in seen_pairs:
            raise ModelValidationError(
                f"expert_rules[{i}]", f"duplicate rule for {pair}"
            )
        seen_pairs.add(pair)
    return FaultModel(name=name, symptoms=symptoms, expert_rules=rules)


def model_to_dict(model: FaultModel) -> dict:
    return {
        "name": model.name,
        "symptoms": [
            {
                "id": s.id,
                "name": s.name,
                "source": s.source,
                "components": [
                    {"id": c.id, "name": c.name, "cost": c.cost, "prob": c.prob}
                    for c in s.components
                ],
            }
            for s in model.symptoms
        ],
        "expert_rules": [
            {"expert": r.expert, "symptom": r.symptom_id, "order": list(r.order)}
            for r in model.expert_rules
        ],
    }


def serialize_model(model: FaultModel) -> str:
    """Inverse of parse_model: ids and numeric values round-trip bit-exactly."""
    return json.dumps(model_to_dict(model), indent=2) + "\n"


@lru_cache(maxsize=1)
def bundled_dataset() -> FaultModel:
    """The motorcycle troubleshooting model shipped with the package."""
    text = resources.files("diagseq.data").joinpath("motorcycle.json").read_text()
    return parse_model(text)
