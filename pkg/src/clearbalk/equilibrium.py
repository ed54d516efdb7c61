"""Equilibrium strategy sets: classification, bounds, and enumeration.

A symmetric strategy is an equilibrium when it is a best response against
itself. Because the conditional benefit of joining at observed queue
length n against a threshold population reduces to sign questions about
the discounted aggregate F(n, theta), the entire equilibrium set follows
from a handful of integer bounds:

* congestion case A (benefit falls with n): candidate equilibria are
  threshold strategies. Subcase I (joining already loses at an empty
  system) leaves only always-balk; subcase III (joining still wins in the
  large-n limit) only always-join; in between, the pure thresholds from
  n_l through n_u are all equilibria, plus one mixed threshold at every
  level where F crosses zero strictly inside (0, 1).
* congestion case B (benefit rises with n): candidate equilibria are
  reverse thresholds, and exactly one of always-join, always-balk, or the
  mixed reverse threshold at the empty system survives.
* congestion case C: the observed queue length carries no information, so
  the sign of the constant benefit picks always-balk, always-join, or
  declares every threshold and reverse-threshold strategy an equilibrium.

Sign tests run on F values normalized by G(n, 1) with an absolute band;
band hits follow the weak/strict-inequality conventions of the exact
theory and set a knife-edge flag, since the classification is then
tolerance-dependent.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .benefit import BenefitCoefficients, f_eval, g_eval, h_upper_limit
from .errors import NoInteriorRoot, ScanLimitExceeded
from .model import CaseKind, CaseLabel, RewardCost, ValidatedModel, congestion_case
from .spectral import SpectralData
from .strategies import (
    AlwaysBalk,
    AlwaysJoin,
    MixedThreshold,
    PureThreshold,
    ReverseThreshold,
    Strategy,
    format_strategy,
    parse_strategy,
)

#: Absolute band for sign tests on G(n,1)-normalized F values.
SIGN_TOLERANCE = 1e-9

#: Iteration cap for the ascending threshold scan.
SCAN_LIMIT = 10 ** 6


class Orientation(enum.Enum):
    THRESHOLD = "threshold"
    REVERSE = "reverse"


class Subcase(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class ThresholdBounds:
    """Integer bounds delimiting the equilibrium strategies.

    For the threshold orientation, ``n_l``..``n_u`` is the pure-threshold
    equilibrium range and mixed thresholds live at levels
    ``n_l_plus``..``n_u_minus - 1``; the strict variants refine the plain
    bounds by strict-sign tests. The reverse orientation stores the
    mirrored quantities. Subcase I sets every bound to 0, subcase III to
    infinity.
    """

    orientation: Orientation
    subcase: Subcase
    n_l: float
    n_u: float
    n_l_plus: float
    n_u_minus: float
    knife_edge: bool

    def to_dict(self) -> dict:
        def enc(v: float) -> float | str:
            return "inf" if math.isinf(v) else v
        return {
            "orientation": self.orientation.value,
            "subcase": self.subcase.value,
            "n_l": enc(self.n_l),
            "n_u": enc(self.n_u),
            "n_l_plus": enc(self.n_l_plus),
            "n_u_minus": enc(self.n_u_minus),
            "knife_edge": self.knife_edge,
        }


def bounds_from_dict(d: dict) -> ThresholdBounds:
    def dec(v: float | str) -> float:
        return math.inf if v == "inf" else v
    return ThresholdBounds(
        orientation=Orientation(d["orientation"]),
        subcase=Subcase(d["subcase"]),
        n_l=dec(d["n_l"]), n_u=dec(d["n_u"]),
        n_l_plus=dec(d["n_l_plus"]), n_u_minus=dec(d["n_u_minus"]),
        knife_edge=d["knife_edge"],
    )


class _SignTester:
    """Banded sign tests on normalized F values, tracking band hits."""

    def __init__(self, coef: BenefitCoefficients, tolerance: float):
        self.coef = coef
        self.tolerance = tolerance
        self.band_hit = False

    def sign_f(self, n: int, theta: float) -> int:
        value = f_eval(self.coef, n, theta) / g_eval(self.coef, n, 1.0)
        return self._sign(value)

    def _sign(self, value: float) -> int:
        if abs(value) <= self.tolerance:
            self.band_hit = True
            return 0
        return 1 if value > 0.0 else -1


def threshold_bounds(coef: BenefitCoefficients, orientation: Orientation,
                     tolerance: float = SIGN_TOLERANCE,
                     scan_limit: int = SCAN_LIMIT) -> ThresholdBounds:
    """Classify the subcase and compute the equilibrium bounds.

    The subcase follows from the signs of the benefit at an empty system
    and of its analytic large-n limit; only subcase II requires a scan.
    The ascending scan for the upper bound is capped at ``scan_limit``,
    which is unreachable for well-posed inputs because the limit test has
    already excluded the divergent direction.

    Raises:
        ScanLimitExceeded: If the ascending scan passes the cap.
    """
    tester = _SignTester(coef, tolerance)
    sign_at_zero = tester.sign_f(0, 1.0)
    limit = h_upper_limit(coef)
    sign_limit = tester._sign(limit)

    def bounds(subcase: Subcase, nl: float, nu: float,
               nlp: float, num: float) -> ThresholdBounds:
        return ThresholdBounds(orientation=orientation, subcase=subcase,
                               n_l=nl, n_u=nu, n_l_plus=nlp, n_u_minus=num,
                               knife_edge=tester.band_hit)

    if orientation is Orientation.THRESHOLD:
        if sign_at_zero < 0:
            return bounds(Subcase.I, 0, 0, 0, 0)
        if sign_limit >= 0:
            return bounds(Subcase.III, math.inf, math.inf, math.inf, math.inf)
        n_u = 0
        while tester.sign_f(n_u, 1.0) >= 0:
            n_u += 1
            if n_u > scan_limit:
                raise ScanLimitExceeded(f"upper-threshold scan passed {scan_limit}")
        n_l = n_u
        while n_l >= 1 and tester.sign_f(n_l - 1, 0.0) <= 0:
            n_l -= 1
        n_l_plus = n_l if tester.sign_f(n_l, 0.0) < 0 else n_l + 1
        n_u_minus = n_u if tester.sign_f(n_u - 1, 1.0) > 0 else n_u - 1
        return bounds(Subcase.II, n_l, n_u, n_l_plus, n_u_minus)

    if sign_at_zero > 0:
        return bounds(Subcase.I, 0, 0, 0, 0)
    if sign_limit <= 0:
        return bounds(Subcase.III, math.inf, math.inf, math.inf, math.inf)
    m_u = 0
    while tester.sign_f(m_u, 1.0) <= 0:
        m_u += 1
        if m_u > scan_limit:
            raise ScanLimitExceeded(f"upper-reverse scan passed {scan_limit}")
    m_l = m_u
    while m_l >= 1 and tester.sign_f(m_l - 1, 0.0) >= 0:
        m_l -= 1
    m_l_plus = m_l if tester.sign_f(m_l, 0.0) > 0 else m_l + 1
    m_u_minus = m_u if tester.sign_f(m_u - 1, 1.0) < 0 else m_u - 1
    return bounds(Subcase.II, m_l, m_u, m_l_plus, m_u_minus)


def mixing_probability(coef: BenefitCoefficients, n0: int,
                       validate_tol: float = 1e-10) -> float:
    """Joining probability theta(n0) solving F(n0, theta) = 0.

    Clearing the denominators makes F linear in u = 1 - theta, giving the
    closed form u = F(n0, 1) / (alpha*r1**n0*r2 + beta*r2**n0*r1). The
    result is validated by substituting back; if the residual exceeds
    ``validate_tol``, a bracketing root solve on [0, 1] is attempted as a
    fallback.

    Raises:
        NoInteriorRoot: If the computed theta does not lie strictly inside
            (0, 1), which signals that n0 is outside the admissible mixed
            range.
    """
    f_at_one = f_eval(coef, n0, 1.0)
    denom = (coef.alpha * coef.r1 ** n0 * coef.r2
             + coef.beta * coef.r2 ** n0 * coef.r1)
    if denom == 0.0:
        raise NoInteriorRoot(f"F(n={n0}, theta) has no interior root (degenerate)")
    theta = 1.0 - f_at_one / denom
    slack = 1e-12
    if not slack < theta < 1.0 - slack:
        raise NoInteriorRoot(f"computed theta {theta!r} is outside (0, 1) at n0={n0}")
    if abs(f_eval(coef, n0, theta)) >= validate_tol:
        try:
            theta = brentq(lambda th: f_eval(coef, n0, th), 0.0, 1.0,
                           xtol=1e-15, rtol=8.9e-16)
        except ValueError as exc:
            raise NoInteriorRoot(
                f"F(n={n0}, theta) does not change sign on [0, 1]") from exc
        if not slack < theta < 1.0 - slack:
            raise NoInteriorRoot(f"refined theta {theta!r} is outside (0, 1) at n0={n0}")
    return theta


@dataclass(frozen=True)
class EquilibriumItem:
    """One member of the equilibrium set.

    ``strategy`` is None for the all-strategies family of congestion case
    C at the knife edge, where enumeration is impossible; ``tag`` is one
    of ``pure``, ``mixed``, ``reverse``, ``family``.
    """

    strategy: Strategy | None
    tag: str
    verification: "object | None" = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "strategy": None if self.strategy is None else format_strategy(self.strategy),
            "tag": self.tag,
            "verification": None if self.verification is None else self.verification.to_dict(),
            "note": self.note,
        }


@dataclass(frozen=True)
class EquilibriumReport:
    """Complete equilibrium analysis of one model and reward structure."""

    case: CaseLabel
    subcase: Subcase
    bounds: ThresholdBounds | None
    equilibria: tuple[EquilibriumItem, ...]
    social_optimum: Strategy | None
    social_coincides: bool
    knife_edge: bool
    tolerance: float = field(default=SIGN_TOLERANCE)

    def to_dict(self) -> dict:
        return {
            "case": {"kind": self.case.kind.value, "product": self.case.product},
            "subcase": self.subcase.value,
            "bounds": None if self.bounds is None else self.bounds.to_dict(),
            "equilibria": [item.to_dict() for item in self.equilibria],
            "social_optimum": (None if self.social_optimum is None
                               else format_strategy(self.social_optimum)),
            "social_coincides": self.social_coincides,
            "knife_edge": self.knife_edge,
            "tolerance": self.tolerance,
        }


def report_from_dict(d: dict) -> EquilibriumReport:
    """Rebuild an EquilibriumReport from its JSON dictionary form."""
    from .oracle.verify import verification_from_dict

    items = tuple(
        EquilibriumItem(
            strategy=None if i["strategy"] is None else parse_strategy(i["strategy"]),
            tag=i["tag"],
            verification=(None if i["verification"] is None
                          else verification_from_dict(i["verification"])),
            note=i["note"],
        )
        for i in d["equilibria"]
    )
    return EquilibriumReport(
        case=CaseLabel(kind=CaseKind(d["case"]["kind"]), product=d["case"]["product"]),
        subcase=Subcase(d["subcase"]),
        bounds=None if d["bounds"] is None else bounds_from_dict(d["bounds"]),
        equilibria=items,
        social_optimum=(None if d["social_optimum"] is None
                        else parse_strategy(d["social_optimum"])),
        social_coincides=d["social_coincides"],
        knife_edge=d["knife_edge"],
        tolerance=d["tolerance"],
    )


def compute_equilibria(model: ValidatedModel, spec: SpectralData,
                       coef: BenefitCoefficients, rc: RewardCost,
                       verify: bool = True,
                       tolerance: float = SIGN_TOLERANCE,
                       scan_limit: int = SCAN_LIMIT,
                       verify_tolerance: float = 1e-8) -> EquilibriumReport:
    """Compute the complete equilibrium set with optional oracle checks.

    Congestion case A emits the contiguous pure-threshold range plus every
    admissible mixed threshold; case B emits its single reverse-threshold
    equilibrium; case C picks always-balk, always-join, or the
    all-strategies family by the sign of the constant benefit. In case A
    subcase II the highest pure threshold is also the socially optimal
    strategy (joining imposes no externality on others, and among
    equilibria the widest joining range maximizes realized reward);
    elsewhere the equilibrium outcome is itself socially optimal, reported
    by the coincidence flag.

    When ``verify`` is set, every concrete equilibrium is checked by the
    balance-oracle best-response verifier and the per-strategy report is
    attached.
    """
    from .oracle.verify import verify_equilibrium

    case = congestion_case(model)
    tester = _SignTester(coef, tolerance)

    items: list[EquilibriumItem] = []
    bounds: ThresholdBounds | None = None
    social: Strategy | None = None
    coincides = True
    root_knife = False

    if case.kind is CaseKind.CASE_A:
        bounds = threshold_bounds(coef, Orientation.THRESHOLD, tolerance, scan_limit)
        if bounds.subcase is Subcase.I:
            items.append(EquilibriumItem(AlwaysBalk(), "pure"))
        elif bounds.subcase is Subcase.III:
            items.append(EquilibriumItem(AlwaysJoin(), "pure"))
        else:
            for n0 in range(int(bounds.n_l), int(bounds.n_u) + 1):
                items.append(EquilibriumItem(PureThreshold(n0), "pure"))
            for n0 in range(int(bounds.n_l_plus), int(bounds.n_u_minus)):
                try:
                    theta = mixing_probability(coef, n0)
                except NoInteriorRoot:
                    # interior root pushed onto 0 or 1 by rounding: the
                    # mixed candidate collapses onto an adjacent pure one
                    root_knife = True
                    continue
                items.append(EquilibriumItem(MixedThreshold(n0, theta), "mixed"))
            social = PureThreshold(int(bounds.n_u))
            coincides = False
        subcase = bounds.subcase
        knife = bounds.knife_edge or root_knife
    elif case.kind is CaseKind.CASE_B:
        bounds = threshold_bounds(coef, Orientation.REVERSE, tolerance, scan_limit)
        if bounds.subcase is Subcase.I:
            items.append(EquilibriumItem(AlwaysJoin(), "reverse"))
        elif bounds.subcase is Subcase.III:
            items.append(EquilibriumItem(AlwaysBalk(), "reverse"))
        else:
            if bounds.n_u_minus == 0:
                items.append(EquilibriumItem(AlwaysJoin(), "reverse"))
            elif bounds.n_l_plus >= 1:
                items.append(EquilibriumItem(AlwaysBalk(), "reverse"))
            else:
                try:
                    theta = mixing_probability(coef, 0)
                    items.append(EquilibriumItem(ReverseThreshold(0, theta), "reverse"))
                except NoInteriorRoot:
                    # root rounded onto an endpoint: report the nearer pure
                    root_knife = True
                    join_side = abs(f_eval(coef, 0, 1.0)) <= abs(f_eval(coef, 0, 0.0))
                    edge = AlwaysJoin() if join_side else AlwaysBalk()
                    items.append(EquilibriumItem(edge, "reverse"))
        subcase = bounds.subcase
        knife = bounds.knife_edge or root_knife
    else:
        sign = tester.sign_f(0, 1.0)
        if sign < 0:
            subcase = Subcase.I
            items.append(EquilibriumItem(AlwaysBalk(), "pure"))
        elif sign > 0:
            subcase = Subcase.III
            items.append(EquilibriumItem(AlwaysJoin(), "pure"))
        else:
            subcase = Subcase.II
            items.append(EquilibriumItem(
                None, "family",
                note="every threshold and reverse-threshold strategy is an equilibrium"))
        knife = tester.band_hit

    if verify:
        verified: list[EquilibriumItem] = []
        for item in items:
            if item.strategy is None:
                verified.append(item)
                continue
            report = verify_equilibrium(model, rc, item.strategy, tol=verify_tolerance)
            verified.append(EquilibriumItem(item.strategy, item.tag,
                                            verification=report, note=item.note))
        items = verified

    return EquilibriumReport(
        case=case, subcase=subcase, bounds=bounds,
        equilibria=tuple(items),
        social_optimum=social, social_coincides=coincides,
        knife_edge=knife, tolerance=tolerance,
    )
