"""Strategy classes and their string descriptors.

A (symmetric, mixed) strategy assigns each observed queue length n a joining
probability. Five structured families cover everything the closed-form
analysis handles, plus a raw probability vector for the simulator:

* ``AlwaysJoin``: join at every n. Equivalent to a threshold at infinity
  and to the reverse threshold at 0 with certain joining.
* ``AlwaysBalk``: never join. Equivalent to a pure threshold at 0.
* ``PureThreshold(n0)``: join while fewer than n0 are present, balk at n0
  and above.
* ``MixedThreshold(n0, theta)``: join below n0, join with probability theta
  at exactly n0, balk above.
* ``ReverseThreshold(n0, theta)``: balk below n0, join with probability
  theta at exactly n0, join above. For n0 >= 1 the empty system is never
  left in steady state, so these behave like AlwaysBalk there.
* ``JoinVector(probs)``: explicit per-level joining probabilities, balking
  beyond the last entry. Only the simulation oracle evaluates these.

The descriptor grammar used by the command-line interface and by report
serialization maps each family to a compact string; ``parse_strategy`` and
``format_strategy`` are exact inverses of each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import StrategyParseError


def _check_level(n0: int) -> None:
    if not isinstance(n0, int) or isinstance(n0, bool) or n0 < 0:
        raise ValueError(f"threshold level must be a nonnegative integer, got {n0!r}")


def _check_probability(theta: float, what: str = "theta") -> None:
    if not isinstance(theta, (int, float)) or isinstance(theta, bool) \
            or not math.isfinite(theta) or theta < 0.0 or theta > 1.0:
        raise ValueError(f"{what} must lie in [0, 1], got {theta!r}")


@dataclass(frozen=True)
class AlwaysJoin:
    """Join regardless of the observed queue length."""

    def join_prob(self, n: int) -> float:
        return 1.0

    def support_bound(self) -> int | None:
        return None


@dataclass(frozen=True)
class AlwaysBalk:
    """Never join; the stationary queue is empty."""

    def join_prob(self, n: int) -> float:
        return 0.0

    def support_bound(self) -> int:
        return 0


@dataclass(frozen=True)
class PureThreshold:
    """Join iff the observed queue length is strictly below ``n0``."""

    n0: int

    def __post_init__(self) -> None:
        _check_level(self.n0)

    def join_prob(self, n: int) -> float:
        return 1.0 if n < self.n0 else 0.0

    def support_bound(self) -> int:
        return self.n0


@dataclass(frozen=True)
class MixedThreshold:
    """Join below ``n0``, join with probability ``theta`` at ``n0``, balk above."""

    n0: int
    theta: float

    def __post_init__(self) -> None:
        _check_level(self.n0)
        _check_probability(self.theta)

    def join_prob(self, n: int) -> float:
        if n < self.n0:
            return 1.0
        if n == self.n0:
            return self.theta
        return 0.0

    def support_bound(self) -> int:
        return self.n0 + 1 if self.theta > 0.0 else self.n0


@dataclass(frozen=True)
class ReverseThreshold:
    """Balk below ``n0``, join with probability ``theta`` at ``n0``, join above."""

    n0: int
    theta: float

    def __post_init__(self) -> None:
        _check_level(self.n0)
        _check_probability(self.theta)

    def join_prob(self, n: int) -> float:
        if n < self.n0:
            return 0.0
        if n == self.n0:
            return self.theta
        return 1.0

    def support_bound(self) -> int | None:
        # Starting from an empty system, the first join must happen at the
        # level where the joining probability first becomes positive.
        if self.n0 >= 1 or self.theta == 0.0:
            return 0
        return None


@dataclass(frozen=True)
class JoinVector:
    """Raw per-level joining probabilities; levels past the end balk."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.probs:
            raise ValueError("join vector must have at least one entry")
        for i, p in enumerate(self.probs):
            _check_probability(p, what=f"probs[{i}]")

    def join_prob(self, n: int) -> float:
        return self.probs[n] if n < len(self.probs) else 0.0

    def support_bound(self) -> int:
        n = 0
        while n < len(self.probs) and self.probs[n] > 0.0:
            n += 1
        return n


Strategy = AlwaysJoin | AlwaysBalk | PureThreshold | MixedThreshold | ReverseThreshold | JoinVector


def format_strategy(strategy: Strategy) -> str:
    """Render a strategy as its descriptor string (inverse of parse_strategy)."""
    if isinstance(strategy, AlwaysJoin):
        return "always-join"
    if isinstance(strategy, AlwaysBalk):
        return "always-balk"
    if isinstance(strategy, PureThreshold):
        return f"threshold:{strategy.n0}"
    if isinstance(strategy, MixedThreshold):
        return f"mixed-threshold:{strategy.n0}:{strategy.theta!r}"
    if isinstance(strategy, ReverseThreshold):
        return f"reverse:{strategy.n0}:{strategy.theta!r}"
    if isinstance(strategy, JoinVector):
        return "vector:" + ",".join(repr(p) for p in strategy.probs)
    raise TypeError(f"not a strategy: {strategy!r}")


def _parse_int(text: str, what: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise StrategyParseError(f"{what} must be an integer, got {text!r}") from exc
    if value < 0:
        raise StrategyParseError(f"{what} must be nonnegative, got {value}")
    return value


def _parse_prob(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise StrategyParseError(f"{what} must be a number, got {text!r}") from exc
    if not math.isfinite(value) or value < 0.0 or value > 1.0:
        raise StrategyParseError(f"{what} must lie in [0, 1], got {text!r}")
    return value


def parse_strategy(text: str) -> Strategy:
    """Parse a descriptor string into a strategy value.

    Grammar: ``always-join`` | ``always-balk`` | ``threshold:<n0>`` |
    ``mixed-threshold:<n0>:<theta>`` | ``reverse:<n0>:<theta>`` |
    ``vector:<p0>,<p1>,...``.

    Raises:
        StrategyParseError: If the string does not match the grammar or a
            numeric field is out of range.
    """
    text = text.strip()
    if text == "always-join":
        return AlwaysJoin()
    if text == "always-balk":
        return AlwaysBalk()
    head, sep, rest = text.partition(":")
    if not sep:
        raise StrategyParseError(f"unknown strategy descriptor {text!r}")
    if head == "threshold":
        return PureThreshold(_parse_int(rest, "threshold level"))
    if head == "mixed-threshold":
        n0_text, sep2, theta_text = rest.partition(":")
        if not sep2:
            raise StrategyParseError(
                f"mixed-threshold needs <n0>:<theta>, got {text!r}")
        return MixedThreshold(_parse_int(n0_text, "threshold level"),
                              _parse_prob(theta_text, "theta"))
    if head == "reverse":
        n0_text, sep2, theta_text = rest.partition(":")
        if not sep2:
            raise StrategyParseError(f"reverse needs <n0>:<theta>, got {text!r}")
        return ReverseThreshold(_parse_int(n0_text, "threshold level"),
                                _parse_prob(theta_text, "theta"))
    if head == "vector":
        parts = rest.split(",") if rest else []
        if not parts or any(not p.strip() for p in parts):
            raise StrategyParseError(f"vector needs comma-separated entries, got {text!r}")
        return JoinVector(tuple(_parse_prob(p.strip(), f"vector entry {i}")
                                for i, p in enumerate(parts)))
    raise StrategyParseError(f"unknown strategy descriptor {text!r}")
