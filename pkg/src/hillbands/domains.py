"""Inductive domain constructions, proper subtraction systems, symmetrization.

Scale-1 domains are plain balls B(2 R^(1)); at scale s >= 2 the ball B(3 R^(s))
sheds every lower-level translated set that straddles its boundary. Centers m of
those lower sets come from the threshold sets on |v(m,k) - v(0,k)| (normalized
diagonal), built top-down with the subtracted corrections. Translated sets are
memoized on the exact rational momentum offset, so the recursion terminates
without floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ExcludedK, NotProper, PreconditionFailed
from .lattice import GroupElement, QuotientLattice
from .scales import ScaleSchedule


@dataclass(frozen=True)
class Domain:
    """Finite subset of the quotient with a (scale, center, kind) label."""

    elements: frozenset[GroupElement]
    scale: int
    center: GroupElement
    kind: str = "plain"  # plain | sym | Tsym

    def __post_init__(self):
        if self.center not in self.elements:
            raise ValueError("domain must contain its center")

    def __len__(self):
        return len(self.elements)

    def __contains__(self, e: GroupElement) -> bool:
        return e in self.elements

    def sorted_elements(self) -> list[GroupElement]:
        return sorted(self.elements, key=GroupElement.key)

    def boundary_distance(self, m: GroupElement, lat: QuotientLattice) -> int:
        """mu_Lambda(m) = dist(m, T \\ Lambda) in the quotient metric."""
        if m not in self.elements:
            return 0
        r = 1
        while True:
            for d in lat.ball(r):
                if d.norm < r:
                    continue
                if lat.add(m, d) not in self.elements:
                    return r
            r += 1

    def reps(self) -> list[list[int]]:
        return [list(e.rep) for e in self.sorted_elements()]


def _chained(a: frozenset, b: frozenset) -> bool:
    """Nonempty intersection with neither containing the other."""
    if a.isdisjoint(b):
        return False
    return not (a <= b or b <= a)


def set_distance(a, b, lat: QuotientLattice) -> int:
    return min(lat.sub(x, y).norm for x in a for y in b)


@dataclass
class SubtractionSystem:
    """Family of (set, level) pairs with the pairing already merged into classes."""

    sets: list[tuple[frozenset, int]]
    class_members: list[tuple] = field(default_factory=list)  # parallel metadata

    def check_proper(self, lat: QuotientLattice) -> dict[int, int]:
        """Condition (i): distinct same-level sets have positive distance.

        Returns the per-level separation radii R_a. Raises NotProper on overlap.
        """
        by_level: dict[int, list[frozenset]] = {}
        for s, t in self.sets:
            by_level.setdefault(t, []).append(s)
        radii = {}
        for t, group in by_level.items():
            best = None
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    if not group[i].isdisjoint(group[j]):
                        raise NotProper(
                            f"same-level ({t}) class sets overlap"
                        )
                    d = set_distance(group[i], group[j], lat)
                    best = d if best is None else min(best, d)
            if best is not None:
                if best <= 0:
                    raise NotProper(f"level {t} separation {best} <= 0")
                radii[t] = best
        return radii


def subtract_stabilize(start: frozenset, system: SubtractionSystem,
                       lat: QuotientLattice,
                       ell_bound: int | None = None) -> tuple[frozenset, int]:
    """Iterate removal of system sets straddling the current set until stable.

    Returns (stabilized set, ell0). Asserts the Lemma-7.5-style dichotomy on the
    result and, when ``ell_bound`` is given (2^s from symmetrization), that
    ell0 < ell_bound.
    """
    system.check_proper(lat)
    current = frozenset(start)
    ell = 0
    while True:
        straddlers = [s for s, _ in system.sets if _chained(s, current)]
        if not straddlers:
            break
        removed = frozenset().union(*straddlers)
        current = current - removed
        ell += 1
    for s, _ in system.sets:
        if not (s <= current or s.isdisjoint(current)):
            raise NotProper("stabilized set still chained with a system set")
    if ell_bound is not None and not ell < ell_bound:
        raise NotProper(f"stabilization took {ell} >= bound {ell_bound}")
    return current, ell


class DomainBuilder:
    """Builds the per-momentum hierarchy Lambda^(s)_k(m) with exact-offset memoization.

    ``v_shift(m, offset)`` is the normalized diagonal difference
    v(m, k+offset) - v(0, k+offset); ``check_exclusions`` gates every scale on
    the k-axis exclusion intervals (raising ExcludedK).
    """

    def __init__(self, k: float, schedule: ScaleSchedule, lat: QuotientLattice,
                 lam: float = 256.0, check_exclusions: bool = True,
                 exempt_modes=frozenset()):
        self.k = k
        self.schedule = schedule
        self.lat = lat
        self.lam = lam
        self.check_exclusions = check_exclusions
        self.exempt_modes = frozenset(exempt_modes)
        self._memo: dict[tuple[int, Fraction], frozenset] = {}
        self._level_memo: dict[tuple[int, Fraction], dict] = {}

    def v_shift(self, m: GroupElement, offset: Fraction) -> float:
        """v(m,k') - v(0,k') = xi(m)(xi(m) + 2k') / lambda at k' = k + offset."""
        xi = float(m.xi)
        kk = self.k + float(offset)
        return xi * (xi + 2.0 * kk) / self.lam

    def momentum(self, offset: Fraction) -> float:
        return self.k + float(offset)

    def threshold(self, s_prime: int, s: int) -> float:
        """Membership threshold for level s' inside the scale-s build."""
        delta = self.schedule.delta
        if s_prime == s - 1:
            if s_prime == 1:
                return delta[0] / 16.0
            return 0.75 * delta[s_prime - 1]
        correction = sum(delta[t - 1] for t in range(s_prime + 1, s))
        if s_prime == 1:
            return delta[0] / 16.0 - correction
        return 0.75 * delta[s_prime - 1] - correction

    def _check_excluded(self, s: int, offset: Fraction) -> None:
        if not self.check_exclusions:
            return
        from .scales import excluded_blocker

        k = self.momentum(offset)
        hit = excluded_blocker(self.schedule, self.lat, k, s,
                               exempt=self.exempt_modes)
        if hit is not None:
            raise ExcludedK(k, s, hit[0], hit[1])

    def lambda0(self, s: int, offset: Fraction = Fraction(0)) -> frozenset:
        """Lambda^(s)_{k+offset}(0) as a frozenset of elements."""
        self.schedule.require_feasible(s)
        key = (s, offset)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        self._check_excluded(s, offset)
        if s == 1:
            out = frozenset(self.lat.ball(2.0 * self.schedule.R[1]))
        else:
            levels = self.level_sets(s, offset)
            ball = frozenset(self.lat.ball(3.0 * self.schedule.R[s]))
            straddlers = []
            for per_level in levels.values():
                for dom in per_level.values():
                    if _chained(dom, ball):
                        straddlers.append(dom)
            out = ball
            if straddlers:
                out = ball - frozenset().union(*straddlers)
        self._memo[key] = out
        return out

    def level_sets(self, s: int, offset: Fraction = Fraction(0)) -> dict:
        """Threshold sets M^(s')_{k,s-1} and their translated domains, s' = s-1..1.

        Returns {s': {center: frozenset}}, built top-down; a center already
        swallowed by a higher level is skipped (the paper's exclusion clause).
        """
        key = (s, offset)
        cached = self._level_memo.get(key)
        if cached is not None:
            return cached
        out: dict[int, dict[GroupElement, frozenset]] = {}
        claimed: set[GroupElement] = set()
        scan = self.lat.ball(3.0 * self.schedule.R[s] + 3.0 * self.schedule.R[s - 1] + 1)
        for s_prime in range(s - 1, 0, -1):
            tau = self.threshold(s_prime, s)
            sets_here: dict[GroupElement, frozenset] = {}
            if tau > 0:
                for m in scan:
                    if m in claimed:
                        continue
                    if abs(self.v_shift(m, offset)) <= tau:
                        inner = self.lambda0(s_prime, offset + m.xi)
                        dom = frozenset(self.lat.add(m, e) for e in inner)
                        sets_here[m] = dom
            out[s_prime] = sets_here
            for dom in sets_here.values():
                claimed.update(dom)
        self._level_memo[key] = out
        return out

    def domain(self, s: int, kind: str = "plain") -> Domain:
        return Domain(elements=self.lambda0(s), scale=s,
                      center=self.lat.identity, kind=kind)


def build_level_sets(k: float, s: int, schedule: ScaleSchedule,
                     lat: QuotientLattice, lam: float = 256.0,
                     check_exclusions: bool = True):
    """One-shot wrapper: returns (level sets, Lambda^(s)_k(0) Domain, builder)."""
    builder = DomainBuilder(k, schedule, lat, lam=lam,
                            check_exclusions=check_exclusions)
    levels = builder.level_sets(s) if s >= 2 else {}
    dom = builder.domain(s)
    return levels, dom, builder


@dataclass(frozen=True)
class NestingReport:
    passed: bool
    violations: tuple
    checked_pairs: int


def nesting_audit(sets: Sequence[tuple[frozenset, int]]) -> NestingReport:
    """Containment-or-disjointness for every (lower level, higher level) pair."""
    violations = []
    checked = 0
    for i in range(len(sets)):
        for j in range(len(sets)):
            a, ta = sets[i]
            b, tb = sets[j]
            if ta >= tb:
                continue
            checked += 1
            if _chained(a, b):
                violations.append((i, j))
    return NestingReport(passed=not violations, violations=tuple(violations),
                         checked_pairs=checked)


def partition_audit(level_sets: dict) -> bool:
    """Translated sets used in a Schur step must be pairwise disjoint."""
    flat = [dom for per_level in level_sets.values() for dom in per_level.values()]
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            if not flat[i].isdisjoint(flat[j]):
                return False
    return True


def _reflection_classes(level_sets: dict, reflect: Callable[[GroupElement], GroupElement],
                        lat: QuotientLattice) -> SubtractionSystem:
    """Classes Lambda(m-class) = union of Lambda(m') and reflect(Lambda(m')) over {m, Sm}."""
    sets: list[tuple[frozenset, int]] = []
    for s_prime, per_level in level_sets.items():
        done: set[GroupElement] = set()
        for m, dom in per_level.items():
            if m in done:
                continue
            partner = reflect(m)
            members = [dom, frozenset(reflect(e) for e in dom)]
            done.add(m)
            if partner != m and partner in per_level:
                pdom = per_level[partner]
                members.append(pdom)
                members.append(frozenset(reflect(e) for e in pdom))
                done.add(partner)
            merged = frozenset().union(*members)
            sets.append((merged, s_prime))
    return SubtractionSystem(sets=sets)


def symmetrize_S(k: float, s: int, builder: DomainBuilder,
                 schedule: ScaleSchedule, lat: QuotientLattice,
                 enforce_small_k: bool = True) -> tuple[Domain, int]:
    """S-symmetrized Lambda^(s)_{k,sym}(0): start from B(3 R^(s)), subtract
    reflection-merged classes to a fixed point; result is S-invariant.

    Precondition: |k| < delta0^(s-2) (the small-k regime), checked unless
    disabled for synthetic tests.
    """
    if s < 2:
        raise PreconditionFailed("S-symmetrization needs s >= 2")
    if enforce_small_k and not abs(k) < schedule.delta[s - 2]:
        raise PreconditionFailed(
            f"|k|={abs(k)} not below delta0^({s-2})={schedule.delta[s-2]:.3e}"
        )
    levels = builder.level_sets(s)
    system = _reflection_classes(levels, lat.neg, lat)
    start = frozenset(lat.ball(3.0 * schedule.R[s]))
    stabilized, ell0 = subtract_stabilize(start, system, lat, ell_bound=2**s)
    for e in stabilized:
        if lat.neg(e) not in stabilized:
            raise NotProper("S-symmetrized set is not S-invariant")
    return Domain(elements=stabilized, scale=s, center=lat.identity,
                  kind="sym"), ell0


def symmetrize_T(k: float, s: int, n0: GroupElement, builder: DomainBuilder,
                 schedule: ScaleSchedule, lat: QuotientLattice) -> tuple[Domain, int]:
    """T-symmetrized domain for the pair {0, n0}: start from
    B(3 R^(s)) union T(B(3 R^(s))), T(n) = n0 - n; subtract to a fixed point.

    The result is T-invariant and must contain B(0, R^(s)) and B(n0, R^(s)).
    The principal pair's own exclusion intervals are the allowed exception, so
    the builder is re-derived with {n0, -n0} exempted if necessary.
    """
    reflect = lambda e: lat.sub(n0, e)
    if n0 not in builder.exempt_modes:
        builder = DomainBuilder(
            builder.k, builder.schedule, builder.lat, lam=builder.lam,
            check_exclusions=builder.check_exclusions,
            exempt_modes=builder.exempt_modes | {n0, lat.neg(n0)})
    levels = builder.level_sets(s) if s >= 2 else {}
    system = _reflection_classes(levels, reflect, lat)
    ball = frozenset(lat.ball(3.0 * schedule.R[s]))
    start = ball | frozenset(reflect(e) for e in ball)
    stabilized, ell0 = subtract_stabilize(start, system, lat, ell_bound=2**s)
    for e in stabilized:
        if reflect(e) not in stabilized:
            raise NotProper("T-symmetrized set is not T-invariant")
    for e in lat.ball(schedule.R[s]):
        if e not in stabilized or lat.add(n0, e) not in stabilized:
            raise NotProper(
                "T-symmetrized set lost a point of B(0,R^(s)) or B(n0,R^(s))"
            )
    return Domain(elements=stabilized, scale=s, center=lat.identity,
                  kind="Tsym"), ell0


def separation_audit(level_sets: dict, schedule: ScaleSchedule,
                     lat: QuotientLattice,
                     reflect: Callable[[GroupElement], GroupElement]) -> list:
    """Lemma-7.11(2)-style audit: distinct same-level reflected classes are
    more than 6 R^(s') apart. Returns violation records (empty = pass)."""
    violations = []
    for s_prime, per_level in level_sets.items():
        centers = list(per_level)
        for i in range(len(centers)):
            for j in range(len(centers)):
                if i == j:
                    continue
                m1, m2 = centers[i], centers[j]
                if reflect(m1) == m2:
                    continue
                mirrored = frozenset(reflect(e) for e in per_level[m1])
                d = set_distance(mirrored, per_level[m2], lat)
                if not d > 6.0 * schedule.R[s_prime]:
                    violations.append((s_prime, m1, m2, d))
    return violations
