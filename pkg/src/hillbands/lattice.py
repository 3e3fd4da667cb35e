"""Exact arithmetic on the quotient group T = Z^nu / N(omega).

Frequency vectors are exact rationals; the null lattice N(omega) is the integer
kernel of m -> m.omega; group elements are canonical coset representatives of
minimal ell-infinity norm with a lexicographic tie-break. The linear functional
xi and all coset arithmetic stay in Fraction; only norms and analysis
quantities are floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionFailed


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class FrequencyVector:
    """Rational frequency vector omega with the admissibility rescale baked in.

    ``components`` are the raw rationals; ``xi`` evaluations use
    ``effective = components / rescale`` with rescale = max(1, ceil(sum |omega_j|))
    so that |xi(n)| <= |n| holds for the ell-infinity norm. rescale == 1 whenever
    sum |omega_j| <= 1, i.e. the rescale is a no-op for the usual configurations.
    """

    components: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("empty frequency vector")
        if all(c == 0 for c in self.components):
            raise ValueError("frequency vector must be nonzero")

    @classmethod
    def parse(cls, items: Iterable) -> "FrequencyVector":
        """Build from 'p/q' strings (or ints/Fractions)."""
        comps = tuple(Fraction(str(it)) for it in items)
        return cls(comps)

    @property
    def nu(self) -> int:
        return len(self.components)

    @property
    def rescale(self) -> int:
        s = sum(abs(c) for c in self.components)
        return max(1, _ceil_fraction(s))

    @property
    def effective(self) -> tuple[Fraction, ...]:
        r = self.rescale
        if r == 1:
            return self.components
        return tuple(c / r for c in self.components)

    @property
    def denominators(self) -> tuple[int, ...]:
        """Reduced denominators t_j of the raw components (zero components -> 1)."""
        return tuple(c.denominator for c in self.components)

    @property
    def integer_form(self) -> tuple[int, ...]:
        """w with w_j = L * effective_j for L = lcm of effective denominators."""
        L = self.common_denominator
        return tuple(int(c * L) for c in self.effective)

    @property
    def common_denominator(self) -> int:
        L = 1
        for c in self.effective:
            L = math.lcm(L, c.denominator)
        return L

    def xi_raw(self, vec: Sequence[int]) -> Fraction:
        return sum((Fraction(int(v)) * c for v, c in zip(vec, self.effective)),
                   Fraction(0))


@dataclass(frozen=True)
class NullLattice:
    """Integer basis of N(omega) = { m : m.omega = 0 }, saturated by construction."""

    basis: tuple[tuple[int, ...], ...]
    rank: int

    def __post_init__(self):
        assert self.rank == len(self.basis)


def null_lattice(omega: FrequencyVector) -> NullLattice:
    """Kernel of m -> m.omega by unimodular row reduction on the integer form."""
    w = list(omega.integer_form)
    nu = len(w)
    rows = [[1 if i == j else 0 for j in range(nu)] for i in range(nu)]
    g = list(w)
    while True:
        nz = [i for i in range(nu) if g[i] != 0]
        if len(nz) <= 1:
            break
        pivot = min(nz, key=lambda i: abs(g[i]))
        for j in nz:
            if j == pivot:
                continue
            q = g[j] // g[pivot]
            if q:
                g[j] -= q * g[pivot]
                rows[j] = [a - q * b for a, b in zip(rows[j], rows[pivot])]
    basis = [tuple(rows[i]) for i in range(nu) if g[i] == 0]
    basis = [_sign_normalize(b) for b in basis]
    basis.sort()
    return NullLattice(basis=tuple(basis), rank=len(basis))


def _sign_normalize(vec: tuple[int, ...]) -> tuple[int, ...]:
    for v in vec:
        if v != 0:
            return vec if v > 0 else tuple(-x for x in vec)
    return vec


@dataclass(frozen=True)
class GroupElement:
    """Canonical coset representative with cached norm and xi value.

    ``rep`` minimizes the ell-infinity norm over the coset; among minimizers it
    is lexicographically smallest. Equality and hashing are by ``rep`` alone.
    """

    rep: tuple[int, ...]
    norm: int = field(compare=False)
    xi: Fraction = field(compare=False)

    def key(self):
        """Deterministic sort key: (norm, rep)."""
        return (self.norm, self.rep)

    @property
    def is_identity(self) -> bool:
        return self.norm == 0

    def __repr__(self):
        return f"[{','.join(str(v) for v in self.rep)}]"


def _linf(vec: Sequence[int]) -> int:
    return max(abs(int(v)) for v in vec)


class QuotientLattice:
    """The quotient group with canonicalization, balls and the group operation."""

    def __init__(self, omega: FrequencyVector):
        self.omega = omega
        self.null = null_lattice(omega)
        self.nu = omega.nu
        self._canon: dict[tuple[int, ...], GroupElement] = {}
        self._ball_cache: dict[int, tuple[GroupElement, ...]] = {}
        self._coeff_rows = self._pinv_row_norms()

    def _pinv_row_norms(self):
        if self.null.rank == 0:
            return []
        import numpy as np

        B = np.array(self.null.basis, dtype=float).T  # nu x rank
        pinv = np.linalg.pinv(B)  # rank x nu
        return [float(np.sum(np.abs(pinv[i]))) for i in range(self.null.rank)]

    def xi(self, vec: Sequence[int]) -> Fraction:
        return self.omega.xi_raw(vec)

    @property
    def identity(self) -> GroupElement:
        return self.canonicalize([0] * self.nu)

    def xi_spacing(self) -> Fraction:
        """Exact spacing of the (always discrete, rational data) subgroup xi(T)."""
        w = self.omega.integer_form
        g = 0
        for v in w:
            g = math.gcd(g, abs(v))
        return Fraction(g, self.omega.common_denominator)

    def _null_points_in_box(self, radius: int):
        """All p in N(omega) with |p|_inf <= radius."""
        if self.null.rank == 0:
            return [tuple([0] * self.nu)]
        ranges = []
        for rn in self._coeff_rows:
            bound = int(math.floor(rn * radius)) + 1
            ranges.append(range(-bound, bound + 1))
        pts = []
        basis = self.null.basis
        for coeffs in itertools.product(*ranges):
            p = tuple(
                sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(self.nu)
            )
            if _linf(p) <= radius:
                pts.append(p)
        return pts

    def canonicalize(self, vec: Sequence[int]) -> GroupElement:
        """Minimal-ell-infinity, lexicographically-smallest coset representative.

        The search over N-translates is confined to the box of the input's norm:
        any farther translate has a larger norm.
        """
        v = tuple(int(x) for x in vec)
        cached = self._canon.get(v)
        if cached is not None:
            return cached
        if self.null.rank == 0:
            elem = GroupElement(rep=v, norm=_linf(v), xi=self.xi(v))
            self._canon[v] = elem
            return elem
        r = _linf(v)
        best = v
        best_norm = r
        for p in self._null_points_in_box(2 * r):
            cand = tuple(a - b for a, b in zip(v, p))
            n = _linf(cand)
            if n < best_norm or (n == best_norm and cand < best):
                best, best_norm = cand, n
        elem = GroupElement(rep=best, norm=best_norm, xi=self.xi(best))
        self._canon[v] = elem
        if best != v:
            self._canon[best] = elem
        return elem

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.canonicalize(tuple(x + y for x, y in zip(a.rep, b.rep)))

    def sub(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.canonicalize(tuple(x - y for x, y in zip(a.rep, b.rep)))

    def neg(self, a: GroupElement) -> GroupElement:
        return self.canonicalize(tuple(-x for x in a.rep))

    def dist(self, a: GroupElement, b: GroupElement) -> int:
        return self.sub(a, b).norm

    def ball(self, R: float) -> list[GroupElement]:
        """B(R) = { m : |m| <= R }, sorted by (norm, rep).

        Enumerates the integer box of radius floor(R) and deduplicates cosets.
        Norms are integers, so only the integer part of R matters (cached).
        """
        if R < 0:
            raise ValueError("R must be nonnegative")
        r = int(math.floor(R + 1e-12))
        cached = self._ball_cache.get(r)
        if cached is None:
            seen: dict[tuple[int, ...], GroupElement] = {}
            for vec in itertools.product(range(-r, r + 1), repeat=self.nu):
                e = self.canonicalize(vec)
                if e.norm <= r:
                    seen[e.rep] = e
            cached = tuple(sorted(seen.values(), key=GroupElement.key))
            self._ball_cache[r] = cached
        return list(cached)


def group_op(lat: QuotientLattice, a: GroupElement, b: GroupElement,
             sign: int = +1) -> GroupElement:
    """a +/- b on the quotient; xi is additive exactly in rational arithmetic."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    out = lat.add(a, b) if sign == +1 else lat.sub(a, b)
    # xi is constant on cosets, so the canonical rep carries the exact sum.
    assert out.xi == a.xi + sign * b.xi
    return out


def ball_growth_constant(lat: QuotientLattice, radii: Sequence[float]) -> float:
    """Empirical C with |B(R)| <= C R^nu, maximized over the sampled radii."""
    best = 0.0
    for R in radii:
        if R <= 0:
            continue
        count = len(lat.ball(R))
        best = max(best, count / R**lat.nu)
    return best


@dataclass(frozen=True)
class DiophantineReport:
    a0: float
    b0: float
    Rbar0: float
    worst_pair: tuple[GroupElement, float] | None
    satisfied: bool
    box_condition_ok: bool
    checked_count: int


def check_diophantine(lat: QuotientLattice, a0: float, b0: float,
                      Rbar0: float) -> DiophantineReport:
    """Exhaustive |xi(n)| >= a0 |n|^{-b0} check over 0 < |n| <= Rbar0.

    Margins are |xi(n)| |n|^{b0} / a0; satisfied iff the worst margin >= 1.
    Also reports the box condition Rbar0^{b0} > prod t_j on the raw denominators.
    """
    if not (0 < a0 < 1):
        raise PreconditionFailed("require 0 < a0 < 1")
    if not (b0 > lat.nu):
        raise PreconditionFailed("require b0 > nu")
    worst = None
    count = 0
    for e in lat.ball(Rbar0):
        if e.is_identity:
            continue
        count += 1
        margin = abs(float(e.xi)) * (e.norm ** b0) / a0
        if worst is None or margin < worst[1]:
            worst = (e, margin)
    prod_t = 1
    for t in lat.omega.denominators:
        prod_t *= t
    box_ok = Rbar0 ** b0 > prod_t
    satisfied = worst is None or worst[1] >= 1.0
    return DiophantineReport(
        a0=a0, b0=b0, Rbar0=Rbar0, worst_pair=worst,
        satisfied=satisfied, box_condition_ok=box_ok, checked_count=count,
    )
