"""Stationary distribution by direct solve of the truncated balance equations.

This module never touches the spectral closed forms. It builds the
generator of the level/environment chain from the raw transition rates
(arrival with the strategy's joining probability, clearing back to an
empty system, environment switch), truncates at a level ``N`` with
arrival transitions out of level ``N`` suppressed, and solves
``pi Q = 0`` with the normalization ``sum(pi) = 1``.

For strategies whose joining probabilities vanish from some level on, a
truncation at that level is exact. For infinite-support strategies the
level is doubled until the mass stranded at the top is below a target,
which bounds the truncation error at the same order because the
suppressed arrivals only ever push mass back down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from ..errors import ConsistencyError, SingularSystem
from ..model import ValidatedModel
from ..strategies import Strategy

#: Largest state count solved densely; beyond it the sparse path is used.
DENSE_STATE_LIMIT = 600

#: Starting truncation level of the adaptive search.
ADAPTIVE_START = 64

#: Hard cap on the adaptive truncation level.
ADAPTIVE_LIMIT = 1 << 17

#: Adaptive search stops once the top-level mass drops below this.
TAIL_TARGET = 1e-12


@dataclass(frozen=True)
class TruncatedSolution:
    """Normalized solution of the truncated balance equations.

    ``masses[n, e]`` is the stationary probability of level ``n`` in
    environment ``e + 1`` for ``n <= level``; ``residual`` is the largest
    balance-equation violation of the returned vector, and ``tail_mass``
    estimates the probability beyond the truncation (exactly 0.0 when the
    strategy's support ends at or below ``level``).
    """

    level: int
    masses: np.ndarray
    residual: float
    tail_mass: float

    def pmf(self, n: int, env: int) -> float:
        if not 1 <= env <= 2:
            raise ValueError(f"environment must be 1 or 2, got {env}")
        if n < 0 or n > self.level:
            return 0.0
        return float(self.masses[n, env - 1])

    def env_marginal(self, env: int) -> float:
        if not 1 <= env <= 2:
            raise ValueError(f"environment must be 1 or 2, got {env}")
        return float(self.masses[:, env - 1].sum())

    def tail(self, m: int, env: int) -> float:
        """Mass at levels >= m in the given environment (within truncation)."""
        if not 1 <= env <= 2:
            raise ValueError(f"environment must be 1 or 2, got {env}")
        if m > self.level:
            return 0.0
        return float(self.masses[max(m, 0):, env - 1].sum())

    def total_mass(self) -> float:
        return float(self.masses.sum())


def _build_generator(model: ValidatedModel, strategy: Strategy, level: int,
                     dense: bool):
    p = model.params
    lam = (p.lambda1, p.lambda2)
    mu = (p.mu1, p.mu2)
    switch = (p.q12, p.q21)
    size = 2 * (level + 1)
    if dense:
        gen = np.zeros((size, size))
    else:
        gen = scipy.sparse.lil_matrix((size, size))

    def idx(n: int, e: int) -> int:
        return 2 * n + e

    for n in range(level + 1):
        join = strategy.join_prob(n)
        for e in (0, 1):
            i = idx(n, e)
            # arrivals out of the top level are suppressed by truncation
            arrive = lam[e] * join if n < level else 0.0
            if arrive > 0.0:
                gen[i, idx(n + 1, e)] += arrive
                gen[i, i] -= arrive
            if n >= 1:
                gen[i, idx(0, e)] += mu[e]
                gen[i, i] -= mu[e]
            gen[i, idx(n, 1 - e)] += switch[e]
            gen[i, i] -= switch[e]
    return gen


def _solve_generator(gen, dense: bool) -> tuple[np.ndarray, float]:
    size = gen.shape[0]
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    if dense:
        system = gen.T.copy()
        system[-1, :] = 1.0
        try:
            pi = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"balance system of {size} states is singular") from exc
    else:
        system = gen.T.tolil()
        system[-1, :] = 1.0
        pi = scipy.sparse.linalg.spsolve(system.tocsr(), rhs)
        if not np.all(np.isfinite(pi)):
            raise SingularSystem(f"sparse balance system of {size} states is singular")
    low = float(pi.min())
    if low < -1e-9:
        raise SingularSystem(f"balance solution has negative mass {low!r}")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    residual_vec = pi @ gen if dense else gen.tocsr().T @ pi
    residual = float(np.max(np.abs(residual_vec)))
    return pi, residual


def _solve_at_level(model: ValidatedModel, strategy: Strategy,
                    level: int) -> tuple[np.ndarray, float]:
    dense = 2 * (level + 1) <= DENSE_STATE_LIMIT
    gen = _build_generator(model, strategy, level, dense)
    pi, residual = _solve_generator(gen, dense)
    return pi.reshape(level + 1, 2), residual


def solve_truncated_balance(model: ValidatedModel, strategy: Strategy,
                            level: int | None = None) -> TruncatedSolution:
    """Solve the balance equations truncated at ``level``.

    With ``level=None`` the truncation is chosen automatically: the
    strategy's support bound plus a margin of two when joining stops at
    some finite level, otherwise adaptive doubling from
    ``ADAPTIVE_START`` until the top-level mass falls below
    ``TAIL_TARGET``.

    Raises:
        SingularSystem: If the linear system cannot be solved to a valid
            probability vector.
        ConsistencyError: If the adaptive search hits ``ADAPTIVE_LIMIT``
            without meeting the tail target.
    """
    bound = strategy.support_bound()
    if level is not None:
        masses, residual = _solve_at_level(model, strategy, level)
        exact = bound is not None and level >= bound
        tail = 0.0 if exact else float(masses[level].sum())
        return TruncatedSolution(level=level, masses=masses,
                                 residual=residual, tail_mass=tail)

    if bound is not None:
        level = bound + 2
        masses, residual = _solve_at_level(model, strategy, level)
        return TruncatedSolution(level=level, masses=masses,
                                 residual=residual, tail_mass=0.0)

    level = ADAPTIVE_START
    while True:
        masses, residual = _solve_at_level(model, strategy, level)
        top = float(masses[level].sum())
        if top < TAIL_TARGET:
            return TruncatedSolution(level=level, masses=masses,
                                     residual=residual, tail_mass=top)
        if level >= ADAPTIVE_LIMIT:
            raise ConsistencyError(
                f"truncation level {level} still leaves top mass {top!r}; "
                "the chain appears unstable under this strategy")
        level *= 2
