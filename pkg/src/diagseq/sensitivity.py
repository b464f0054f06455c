"""Monte Carlo robustness analysis of test-order comparisons.

Assessed costs and probabilities are rough numbers. This module asks how
rough they can be before a conclusion of the form "this recorded rule wastes
time versus the cost/probability order" stops holding. Uncertainty about each
input is expressed with a single multiplicative error factor s: the interval
[m/s, m*s] around an assessed value m is taken to carry 70% of the belief.
Costs get lognormal noise around their assessed value; probabilities get the
same noise applied to their odds p/(1-p), which keeps samples inside (0, 1).

Everything is driven by a seeded generator, so any summary reproduces
bit-for-bit given the same configuration.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import Symptom, TestStrategy, normalize

# Standard normal 0.85-quantile: +/- Z70 standard deviations bound the
# central 70% of a normal, which ties the error factor s to a sigma.
Z70 = 1.036433

# Default for every randomized entry point, so results are reproducible
# without any flags.
DEFAULT_SEED = 42


class CriticalFactorNotFound(RuntimeError):
    """The lower quantile band never reached zero on the searched range."""

    def __init__(self, s_max: float, quantile: float):
        self.s_max = s_max
        self.quantile = quantile
        super().__init__(
            f"lower-band quantile is still {quantile:.3f} at s={s_max:g}; "
            f"the cost/probability order keeps its advantage for error "
            f"factors up to {s_max:g}"
        )


def log_sigma(error_factor: float) -> float:
    """Lognormal sigma for which [m/s, m*s] carries 70% of the mass.

    The noise is centered on the assessed value as the median: exp(sigma*z)
    multiplies it, with z standard normal.
    """
    if error_factor < 1.0:
        raise ValueError(f"error factor must be >= 1, got {error_factor}")
    return math.log(error_factor) / Z70


def sample_cost(cost: float, error_factor: float, z: float) -> float:
    """One noisy cost draw: cost * exp(sigma * z), always positive."""
    if cost <= 0.0:
        raise ValueError(f"cost must be > 0, got {cost}")
    return cost * math.exp(log_sigma(error_factor) * z)


def sample_prob(prob: float, error_factor: float, z: float) -> float:
    """One noisy probability draw via multiplicative noise on the odds.

    Degenerate beliefs (exactly 0 or 1) carry no uncertainty in odds space
    and are returned unchanged, with a warning.
    """
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {prob}")
    if prob in (0.0, 1.0):
        warnings.warn(
            f"probability {prob} is degenerate and was left unperturbed",
            RuntimeWarning,
            stacklevel=2,
        )
        return prob
    odds = prob / (1.0 - prob) * math.exp(log_sigma(error_factor) * z)
    return odds / (1.0 + odds)


@dataclass(frozen=True)
class SensitivityConfig:
    error_factor: float
    n_samples: int = 10000
    seed: int = DEFAULT_SEED
    band_mass: float = 0.70
    renormalize_samples: bool = True

    def __post_init__(self):
        if self.error_factor < 1.0:
            raise ValueError(
                f"error factor must be >= 1, got {self.error_factor}"
            )
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if not 0.0 < self.band_mass < 1.0:
            raise ValueError(
                f"band_mass must be in (0, 1), got {self.band_mass}"
            )

    @property
    def band_quantiles(self) -> tuple[float, float]:
        # rounded so levels make clean dict keys (0.15, not 0.15000000000000002)
        lo = round((1.0 - self.band_mass) / 2.0, 10)
        return (lo, round(1.0 - lo, 10))


@dataclass(frozen=True)
class SensitivitySummary:
    config: SensitivityConfig
    nominal_diff: float
    mean_diff: float
    quantiles: dict[float, float]  # level -> value; includes the band edges
    prob_positive: float
    cdf_points: tuple[tuple[float, float], ...]  # (diff value, cumulative fraction)


# ---------------------------------------------------------------------------
# Vectorized internals
# ---------------------------------------------------------------------------

def _order_indices(symptom: Symptom, strategy: TestStrategy) -> np.ndarray:
    if strategy.symptom_id != symptom.id:
        raise ValueError(
            f"strategy is for symptom {strategy.symptom_id!r}, not {symptom.id!r}"
        )
    index = {c.id: i for i, c in enumerate(symptom.components)}
    if sorted(strategy.order) != sorted(index):
        raise ValueError(
            f"order is not a permutation of symptom {symptom.id!r} components"
        )
    return np.array([index[cid] for cid in strategy.order], dtype=np.intp)


def _expected_costs(
    costs: np.ndarray, probs: np.ndarray, order: np.ndarray
) -> np.ndarray:
    """Row-wise expected cost of one order; mirrors engine.expected_cost."""
    oc = costs[:, order]
    op = probs[:, order]
    n = op.shape[1]
    weights = np.empty_like(op)
    weights[:, 0] = 1.0
    if n >= 2:
        prefix = np.cumsum(op, axis=1)
        weights[:, 1:] = 1.0 - prefix[:, :-1]
        weights[:, -1] = op[:, -1]
    return (oc * weights).sum(axis=1)


def _perturb(
    costs: np.ndarray,
    probs: np.ndarray,
    error_factor: float,
    draws: np.ndarray,
    renormalize: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Apply multiplicative noise to base values. draws: (m, n, 2) normals."""
    sigma = log_sigma(error_factor)
    cost_samples = costs * np.exp(sigma * draws[:, :, 0])
    degenerate = (probs <= 0.0) | (probs >= 1.0)
    safe = np.where(degenerate, 0.5, probs)  # placeholder, masked out below
    odds = safe / (1.0 - safe)
    noisy = odds * np.exp(sigma * draws[:, :, 1])
    prob_samples = np.where(degenerate, probs, noisy / (1.0 + noisy))
    if renormalize:
        totals = prob_samples.sum(axis=1, keepdims=True)
        if np.any(totals <= 0.0):
            raise ValueError("cannot renormalize: probabilities sum to zero")
        prob_samples = prob_samples / totals
    return cost_samples, prob_samples


def _base_arrays(symptom: Symptom) -> tuple[np.ndarray, np.ndarray]:
    costs = np.array([c.cost for c in symptom.components], dtype=float)
    probs = np.array([c.prob for c in symptom.components], dtype=float)
    return costs, probs


def _warn_degenerate(symptom: Symptom) -> None:
    fixed = [c.id for c in symptom.components if c.prob in (0.0, 1.0)]
    if fixed:
        warnings.warn(
            f"probabilities of {', '.join(fixed)} are degenerate (0 or 1) "
            f"and were left unperturbed",
            RuntimeWarning,
            stacklevel=3,
        )


def _nominal_diff(
    symptom: Symptom,
    expert_idx: np.ndarray,
    cp_idx: np.ndarray,
    renormalize: bool,
) -> float:
    base = normalize(symptom) if renormalize else symptom
    costs, probs = _base_arrays(base)
    costs = costs[None, :]
    probs = probs[None, :]
    return float(
        _expected_costs(costs, probs, expert_idx)[0]
        - _expected_costs(costs, probs, cp_idx)[0]
    )


def diff_distribution(
    symptom: Symptom,
    expert_strategy: TestStrategy,
    cp_strategy: TestStrategy,
    config: SensitivityConfig,
    extra_quantiles: tuple[float, ...] = (),
) -> SensitivitySummary:
    """Distribution of EC(expert order) - EC(cp order) under input noise.

    Each sample perturbs every stored cost and probability with independent
    noise at the configured error factor, optionally rescales the perturbed
    probabilities to sum to one (`renormalize_samples`), and evaluates both
    fixed orders on the same perturbed values. A positive diff means the
    expert order wastes time versus the cp order for that input scenario.
    """
    expert_idx = _order_indices(symptom, expert_strategy)
    cp_idx = _order_indices(symptom, cp_strategy)
    for level in extra_quantiles:
        if not 0.0 < level < 1.0:
            raise ValueError(f"quantile levels must be in (0, 1), got {level}")
    _warn_degenerate(symptom)

    costs, probs = _base_arrays(symptom)
    rng = np.random.default_rng(config.seed)
    draws = rng.standard_normal((config.n_samples, len(costs), 2))
    cost_samples, prob_samples = _perturb(
        costs, probs, config.error_factor, draws, config.renormalize_samples
    )
    diffs = _expected_costs(cost_samples, prob_samples, expert_idx) - _expected_costs(
        cost_samples, prob_samples, cp_idx
    )

    lo, hi = config.band_quantiles
    levels = sorted({lo, 0.5, hi, *extra_quantiles})
    values = np.quantile(diffs, levels, method="linear")
    ordered = np.sort(diffs)
    fractions = np.arange(1, len(ordered) + 1, dtype=float) / len(ordered)
    return SensitivitySummary(
        config=config,
        nominal_diff=_nominal_diff(
            symptom, expert_idx, cp_idx, config.renormalize_samples
        ),
        mean_diff=float(diffs.mean()),
        quantiles={level: float(v) for level, v in zip(levels, values)},
        prob_positive=float(np.mean(diffs > 0.0)),
        cdf_points=tuple(zip(ordered.tolist(), fractions.tolist())),
    )


def critical_error_factor(
    symptom: Symptom,
    expert_strategy: TestStrategy,
    cp_strategy: TestStrategy,
    config: SensitivityConfig,
    s_max: float = 4.0,
) -> float:
    """Smallest error factor at which the lower band of the diff reaches zero.

    Bisects s on [1, s_max] to width 0.01, reusing one set of normal draws
    across every s evaluated (common random numbers), and returns the first
    s whose lower band quantile (e.g. the 0.15-quantile for band_mass 0.70)
    is <= 0. Below the returned factor the conclusion "the expert order is
    more expensive" survives input noise at the band's confidence.

    `config.error_factor` is ignored; the search scans s itself. Returns 1.0
    immediately when the nominal diff is already <= 0. Raises
    CriticalFactorNotFound when even s_max leaves the lower band positive.
    """
    if s_max < 1.0:
        raise ValueError(f"s_max must be >= 1, got {s_max}")
    expert_idx = _order_indices(symptom, expert_strategy)
    cp_idx = _order_indices(symptom, cp_strategy)
    _warn_degenerate(symptom)

    if _nominal_diff(symptom, expert_idx, cp_idx, config.renormalize_samples) <= 0.0:
        return 1.0

    costs, probs = _base_arrays(symptom)
    rng = np.random.default_rng(config.seed)
    draws = rng.standard_normal((config.n_samples, len(costs), 2))
    level = config.band_quantiles[0]

    def lower_band(s: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            cost_samples, prob_samples = _perturb(
                costs, probs, s, draws, config.renormalize_samples
            )
        diffs = _expected_costs(
            cost_samples, prob_samples, expert_idx
        ) - _expected_costs(cost_samples, prob_samples, cp_idx)
        return float(np.quantile(diffs, level, method="linear"))

    at_max = lower_band(s_max)
    if at_max > 0.0:
        raise CriticalFactorNotFound(s_max, at_max)
    lo_s, hi_s = 1.0, s_max
    while hi_s - lo_s > 0.01:
        mid = 0.5 * (lo_s + hi_s)
        if lower_band(mid) <= 0.0:
            hi_s = mid
        else:
            lo_s = mid
    return hi_s
