"""Dominant strategies when the queue length is invisible or irrelevant.

In a clearing system a joining customer's sojourn ends at the next clearing
epoch, so it never depends on how many others are present or on what they
decide. Strategic interaction therefore disappears in three information
regimes and the best response is outright dominant:

* fully unobservable: the customer sees nothing; joining pays off iff
  R/C exceeds the critical value V_fu, the arrival-rate-weighted average
  of the per-environment mean clearing times;
* almost unobservable: the customer sees the environment e only; joining
  pays off iff R/C exceeds E[S_e], giving a per-environment pair of
  decisions;
* fully observable: seeing the queue length on top of the environment adds
  nothing (the sojourn does not depend on it), so the answer coincides
  with the almost unobservable one.

Equalities produce indifference: any mixture is dominant, reported as a
free coordinate plus a knife-edge flag since the classification is
tolerance-dependent in floating point.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass

from .model import RewardCost, ValidatedModel

#: Relative equality band when comparing R/C against a critical value.
KNIFE_TOLERANCE = 1e-9


class Regime(enum.Enum):
    FULLY_UNOBSERVABLE = "fu"
    ALMOST_UNOBSERVABLE = "au"
    FULLY_OBSERVABLE = "fo"


class DominanceKind(enum.Enum):
    UNIQUE_PURE = "unique-pure"
    INDIFFERENCE_FAMILY = "indifference-family"


@dataclass(frozen=True)
class CriticalValues:
    """Critical values of R/C separating balk from join decisions.

    ``v_fu`` applies when nothing is observed; ``v_au_min``/``v_au_max``
    are the smaller and larger of the two per-environment mean clearing
    times and bracket ``v_fu``.
    """

    v_fu: float
    v_au_min: float
    v_au_max: float


@dataclass(frozen=True)
class DominantStrategySet:
    """Dominant strategy report for one information regime.

    ``join`` is a single joining probability for the fully unobservable
    regime and a per-environment pair otherwise; ``None`` marks a free
    coordinate (any value in [0, 1] is dominant). ``net_benefit`` is the
    joining customer's expected net benefit, a scalar or per-environment
    pair accordingly.
    """

    regime: Regime
    kind: DominanceKind
    join: float | None | tuple[float | None, float | None]
    net_benefit: float | tuple[float, float]
    critical: CriticalValues
    knife_edge: bool


def critical_values(model: ValidatedModel) -> CriticalValues:
    """Closed-form critical values of R/C for the unobservable regimes.

    V_fu averages the mean clearing times with weights proportional to
    lambda_e * p_E(e): the environment mix seen by an arriving customer.
    The almost-unobservable critical values are the per-environment mean
    clearing times themselves.
    """
    p = model.params
    k = p.mu1 * p.mu2 + p.mu1 * p.q21 + p.mu2 * p.q12
    weight_den = p.lambda1 * p.q21 + p.lambda2 * p.q12
    v_fu = ((p.lambda1 * p.q21 * p.mu2 + p.lambda2 * p.q12 * p.mu1) / (weight_den * k)
            + (p.q21 + p.q12) / k)
    s1, s2 = model.mean_clearing
    return CriticalValues(v_fu=v_fu, v_au_min=min(s1, s2), v_au_max=max(s1, s2))


def _compare(ratio: float, critical: float, tolerance: float) -> int:
    """Sign of ratio - critical with a relative equality band."""
    band = tolerance * max(abs(ratio), abs(critical))
    diff = ratio - critical
    if abs(diff) <= band:
        return 0
    return 1 if diff > 0.0 else -1


def dominant_fully_unobservable(model: ValidatedModel, rc: RewardCost,
                                tolerance: float = KNIFE_TOLERANCE) -> DominantStrategySet:
    """Dominant joining probability when nothing is observed.

    Join (q=1) when R/C > V_fu, balk (q=0) when R/C < V_fu, and report the
    whole family q in [0, 1] at equality within the relative tolerance.
    """
    crit = critical_values(model)
    ratio = rc.reward / rc.cost
    sign = _compare(ratio, crit.v_fu, tolerance)
    net = rc.reward - rc.cost * crit.v_fu
    if sign == 0:
        return DominantStrategySet(Regime.FULLY_UNOBSERVABLE,
                                   DominanceKind.INDIFFERENCE_FAMILY,
                                   join=None, net_benefit=net,
                                   critical=crit, knife_edge=True)
    return DominantStrategySet(Regime.FULLY_UNOBSERVABLE, DominanceKind.UNIQUE_PURE,
                               join=1.0 if sign > 0 else 0.0, net_benefit=net,
                               critical=crit, knife_edge=False)


def dominant_almost_unobservable(model: ValidatedModel, rc: RewardCost,
                                 tolerance: float = KNIFE_TOLERANCE) -> DominantStrategySet:
    """Dominant per-environment joining pair when only the environment is seen."""
    crit = critical_values(model)
    ratio = rc.reward / rc.cost
    pair: list[float | None] = []
    knife = False
    for mean_s in model.mean_clearing:
        sign = _compare(ratio, mean_s, tolerance)
        if sign == 0:
            pair.append(None)
            knife = True
        else:
            pair.append(1.0 if sign > 0 else 0.0)
    net = (rc.reward - rc.cost * model.mean_clearing[0],
           rc.reward - rc.cost * model.mean_clearing[1])
    kind = (DominanceKind.INDIFFERENCE_FAMILY if knife
            else DominanceKind.UNIQUE_PURE)
    return DominantStrategySet(Regime.ALMOST_UNOBSERVABLE, kind,
                               join=(pair[0], pair[1]), net_benefit=net,
                               critical=crit, knife_edge=knife)


def dominant_fully_observable(model: ValidatedModel, rc: RewardCost,
                              tolerance: float = KNIFE_TOLERANCE) -> DominantStrategySet:
    """Same decisions as the almost unobservable regime.

    The observed queue length never changes a joiner's sojourn in a
    clearing system, so the extra information is superfluous.
    """
    base = dominant_almost_unobservable(model, rc, tolerance)
    return dataclasses.replace(base, regime=Regime.FULLY_OBSERVABLE)
