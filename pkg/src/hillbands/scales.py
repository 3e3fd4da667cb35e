"""Scale schedule, coupling budget, resonance geometry of k and reflection sets.

The schedule follows R^(u) = (delta0^(u-1))^(-beta), delta0^(u) = exp(-(log R^(u))^2)
with the base delta0^(0) = R1^(-1/beta). Strict mode fixes beta = 1/(32 b0) and
computes the worst-case constants of the theory in log space (they underflow
float64 by construction); practical mode takes user beta and R1. Scale s is
feasible iff R^(s) is float-finite and delta0^(s-1) does not underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BudgetExhausted, PreconditionFailed, ScheduleInfeasible
from .lattice import GroupElement, QuotientLattice

LOG_FLOAT_MAX = math.log(1.7976931348623157e308)


@dataclass(frozen=True)
class ScaleSchedule:
    """Arrays R^(u), delta0^(u), eps_s plus the base constants.

    Index u runs 0..s_max; R[0] = 0 by convention (the paper's R^(0) := 0),
    delta[0] is the base delta0^(0). The log arrays stay meaningful even where
    the plain values underflow (delta[u] == 0.0 then).
    """

    mode: str  # "strict" | "practical"
    beta: float
    s_max: int
    log_R: tuple[float, ...]
    log_delta: tuple[float, ...]
    R: tuple[float, ...]
    delta: tuple[float, ...]
    delta0: float         # base delta0 = (delta0^(0))^(1/4)
    eps0: float
    log_eps0: float
    eps: tuple[float, ...]  # eps_s = eps0 - sum_{s'<=s} delta0^(s'), index 0..s_max
    feasible_s: int
    a0: float
    b0: float
    kappa0: float
    alpha0: float
    sigma_scale: float = 1.0
    strict_delta_condition_ok: bool | None = None

    def require_feasible(self, s: int) -> None:
        if s > self.feasible_s:
            raise ScheduleInfeasible(s, self.feasible_s)

    def shell_of(self, norm: float) -> int | None:
        """Shell index s with 12 R^(s-1) < |m| <= 12 R^(s); None beyond s_max."""
        for s in range(1, self.s_max + 1):
            lo = 12.0 * self.R[s - 1]
            hi = 12.0 * self.R[s]
            if lo < norm <= hi:
                return s
        return None

    def sigma(self, norm: float) -> float | None:
        """sigma(m) = 32 (delta0^(s-1))^(1/6) on shell s; sigma(0) from delta0^(0)."""
        if norm == 0:
            return 32.0 * self.delta[0] ** (1.0 / 6.0) * self.sigma_scale
        s = self.shell_of(norm)
        if s is None:
            return None
        return 32.0 * self.delta[s - 1] ** (1.0 / 6.0) * self.sigma_scale

    def to_dict(self) -> dict:
        return {
            "mode": self.mode, "beta": self.beta, "s_max": self.s_max,
            "R": list(self.R), "delta": list(self.delta), "delta0": self.delta0,
            "eps0": self.eps0, "log_eps0": self.log_eps0, "eps": list(self.eps),
            "feasible_s": self.feasible_s, "a0": self.a0, "b0": self.b0,
            "kappa0": self.kappa0, "alpha0": self.alpha0,
            "sigma_scale": self.sigma_scale,
            "strict_delta_condition_ok": self.strict_delta_condition_ok,
        }


def strict_epsilon0_log(log_delta0: float, kappa0: float, alpha0: float,
                        nu: int) -> float:
    """log of the worst-case eps0(delta0, kappa0, alpha0) (cube of a three-way min).

    Works from log(delta0) so it survives the regimes where delta0 itself
    underflows float64.
    """
    na = nu / alpha0
    log_t1 = (-24.0 * na - 4.0) * math.log(2.0) + 4.0 * na * math.log(kappa0)
    log_t2 = (2.0**9) * log_delta0
    log_d_inv = -log_delta0
    log_t3 = (-10.0 * (na + 1.0)) * math.log(2.0) \
        - 8.0 * na * math.log(4.0 * kappa0 * log_d_inv)
    return 3.0 * min(log_t1, log_t2, log_t3)


def build_schedule(mode: str, s_max: int, R1: float | None = None, *,
                   log_R1: float | None = None,
                   beta: float | None = None,
                   a0: float = 0.5, b0: float = 2.0,
                   kappa0: float = 1.0, alpha0: float = 1.0, nu: int = 1,
                   eps0: float | None = None,
                   sigma_scale: float = 1.0,
                   truncate: bool = False) -> ScaleSchedule:
    """Build the scale schedule.

    Practical mode: user beta in (0,1) and R1 > e. Strict mode: beta = 1/(32 b0)
    and R1 must clear log R1 >= alpha0^-1 max(log(100/a0), 2^34 beta^-1 log kappa0^-1);
    eps0 is then the worst-case constant (kept in log space where it
    underflows). R1 may be given via ``log_R1`` since strict-mode floors can
    overflow float64 themselves.

    Raises ScheduleInfeasible when the requested s_max underflows double
    precision, unless truncate=True; the log arrays always cover the full
    range, feasible_s marks the usable prefix of the float views.
    """
    if log_R1 is None:
        if R1 is None:
            raise PreconditionFailed("give R1 or log_R1")
        log_R1 = math.log(R1)
    if mode == "strict":
        beta = 1.0 / (32.0 * b0)
        floor = max(math.log(100.0 / a0),
                    2.0**34 / beta * math.log(1.0 / kappa0)) / alpha0
        if log_R1 < floor:
            raise PreconditionFailed(
                f"strict mode needs log R1 >= {floor:.6g}, got {log_R1:.6g}"
            )
    elif mode == "practical":
        if beta is None or not (0 < beta < 1):
            raise PreconditionFailed("practical mode needs beta in (0,1)")
        if log_R1 <= 1.0:
            raise PreconditionFailed("practical mode needs R1 > e")
    else:
        raise PreconditionFailed(f"unknown mode {mode!r}")

    log_R = [0.0] * (s_max + 1)   # log_R[0] unused (R^(0) = 0)
    log_delta = [0.0] * (s_max + 1)
    log_delta[0] = -log_R1 / beta                # delta0^(0) = R1^(-1/beta)
    log_R[1] = log_R1
    for u in range(1, s_max + 1):
        if u >= 2:
            log_R[u] = beta * log_R[u - 1] ** 2   # log R^(u) = beta (log R^(u-1))^2
        log_delta[u] = -(log_R[u] ** 2)

    R = [0.0] * (s_max + 1)
    delta = [0.0] * (s_max + 1)
    feasible = 0
    for u in range(s_max + 1):
        if u >= 1:
            R[u] = math.exp(log_R[u]) if log_R[u] <= LOG_FLOAT_MAX else math.inf
        delta[u] = math.exp(log_delta[u]) if log_delta[u] > -746.0 else 0.0
    for s in range(1, s_max + 1):
        if math.isfinite(R[s]) and delta[s - 1] > 0.0:
            feasible = s
        else:
            break

    if feasible < s_max and not truncate:
        raise ScheduleInfeasible(
            s_max, feasible,
            reason=f"delta0^({feasible}) underflows double precision",
        )

    log_delta0 = log_delta[0] / 4.0  # delta0^4 = delta0^(0)
    delta0 = math.exp(log_delta0) if log_delta0 > -746.0 else 0.0
    strict_ok = None
    if mode == "strict":
        log_eps0 = strict_epsilon0_log(log_delta0, kappa0, alpha0, nu)
        eps0_val = math.exp(log_eps0) if log_eps0 > -746.0 else 0.0
        dcond = (2.0**32) / (alpha0 * beta) * math.log(1.0 / kappa0)
        strict_ok = (-log_delta0) > dcond
    else:
        eps0_val = 0.5 if eps0 is None else float(eps0)
        log_eps0 = math.log(eps0_val)

    eps = _epsilon_budget(eps0_val, delta, s_max)
    return ScaleSchedule(
        mode=mode, beta=beta, s_max=s_max,
        log_R=tuple(log_R), log_delta=tuple(log_delta),
        R=tuple(R), delta=tuple(delta), delta0=delta0,
        eps0=eps0_val, log_eps0=log_eps0, eps=tuple(eps),
        feasible_s=feasible,
        a0=a0, b0=b0, kappa0=kappa0, alpha0=alpha0, sigma_scale=sigma_scale,
        strict_delta_condition_ok=strict_ok,
    )


def _epsilon_budget(eps0: float, delta, s_max: int):
    eps = [eps0]
    running = eps0
    for s in range(1, s_max + 1):
        running -= delta[s]
        eps.append(running)
    return eps


def epsilon_budget(schedule: ScaleSchedule) -> tuple[float, ...]:
    """eps_s = eps0 - sum_{1<=s'<=s} delta0^(s'); raises when exhausted."""
    for s, e in enumerate(schedule.eps):
        if e <= 0 and schedule.eps0 > 0:
            raise BudgetExhausted(f"eps_{s} = {e:.3e} <= 0")
    return schedule.eps


# --- k-axis exclusion intervals (Eq.-7K.1 style) ---

@dataclass(frozen=True)
class KpmInterval:
    m: GroupElement
    shell: int
    k_minus: float
    k_plus: float
    k_minus_s: tuple[float, ...]  # index s = 0..s_max, inflated endpoints
    k_plus_s: tuple[float, ...]


def kpm_endpoints(schedule: ScaleSchedule, m: GroupElement,
                  s_inflate: int) -> tuple[float, float] | None:
    """(k^-_{m,s}, k^+_{m,s}) or None when m lies beyond the schedule's shells."""
    sigma = schedule.sigma(m.norm)
    if sigma is None:
        return None
    km = -float(m.xi) / 2.0
    inflate = 0.0
    for r in range(0, s_inflate):
        dr = schedule.delta[r] ** 0.5 * schedule.sigma_scale
        if dr <= sigma:
            inflate += dr
    inflate *= 64.0
    return km - sigma - inflate, km + sigma + inflate


def kpm_intervals(schedule: ScaleSchedule, lat: QuotientLattice,
                  truncation_R: float) -> list[KpmInterval]:
    """All intervals for 0 < |m| <= min(truncation_R, 12 R^(s_max)).

    The mirror identities k+-_{-m,s} = -k-+_{m,s} are asserted on the output.
    """
    out = []
    upper = min(truncation_R, 12.0 * schedule.R[schedule.s_max])
    if not math.isfinite(upper):
        upper = min(truncation_R, 12.0 * schedule.R[schedule.feasible_s])
    for m in lat.ball(upper):
        if m.is_identity:
            continue
        shell = schedule.shell_of(m.norm)
        if shell is None:
            continue
        sigma = schedule.sigma(m.norm)
        km = -float(m.xi) / 2.0
        minus, plus = [], []
        for s in range(0, schedule.s_max + 1):
            lo, hi = kpm_endpoints(schedule, m, s)
            minus.append(lo)
            plus.append(hi)
        out.append(KpmInterval(
            m=m, shell=shell, k_minus=km - sigma, k_plus=km + sigma,
            k_minus_s=tuple(minus), k_plus_s=tuple(plus),
        ))
    by_rep = {iv.m.rep: iv for iv in out}
    for iv in out:
        mirror = by_rep.get(tuple(-v for v in iv.m.rep))
        if mirror is None:
            continue
        for s in range(schedule.s_max + 1):
            assert abs(iv.k_plus_s[s] + mirror.k_minus_s[s]) <= 1e-14 * max(
                1.0, abs(iv.k_plus_s[s]))
            assert abs(iv.k_minus_s[s] + mirror.k_plus_s[s]) <= 1e-14 * max(
                1.0, abs(iv.k_minus_s[s]))
    return out


def excluded_blocker(schedule: ScaleSchedule, lat: QuotientLattice, k: float,
                     scale: int, exempt=frozenset()):
    """First m with 0<|m|<=12R^(scale) whose (k^-_{m,scale-1}, k^+_{m,scale-1})
    contains k, or None. ``exempt`` modes are skipped (the principal pair of a
    resonant construction keeps its own interval as the allowed exception)."""
    upper = 12.0 * schedule.R[min(scale, schedule.s_max)]
    if not math.isfinite(upper):
        upper = 12.0 * schedule.R[schedule.feasible_s]
    for m in lat.ball(upper):
        if m.is_identity or m in exempt:
            continue
        endpoints = kpm_endpoints(schedule, m, scale - 1)
        if endpoints is None:
            continue
        lo, hi = endpoints
        if lo < k < hi:
            return m, (lo, hi)
    return None


# --- resonance profile of a momentum ---

@dataclass(frozen=True)
class ResonanceMember:
    element: GroupElement
    k_n: float
    shell: int
    in_analysis: bool       # |k - k_n| < (delta0^(shell))^(3/4)   (curly-I family)
    in_theorem: bool        # |k - k_n| < a0 (1+|n|)^(-b0-3)       (fraktur-J family)
    margin_analysis: float
    margin_theorem: float


@dataclass(frozen=True)
class ResonanceProfile:
    k: float
    members: tuple[ResonanceMember, ...]
    R_of_k: tuple[GroupElement, ...]      # analysis-family resonances, by norm
    ell: int                              # ell(k); -1 when R(k) is empty
    n_points: tuple[GroupElement, ...]    # n^(0..ell)
    s_levels: tuple[int, ...]
    reflection_sets: tuple[frozenset, ...]  # m^(0..ell)
    in_G: bool
    truncation_R: float

    @property
    def resonant(self) -> bool:
        return self.ell >= 0

    def top(self) -> GroupElement | None:
        return self.n_points[-1] if self.resonant else None

    def top_reflection_set(self) -> frozenset:
        if not self.resonant:
            return frozenset()
        return self.reflection_sets[-1]


def resonance_profile(k: float, schedule: ScaleSchedule, lat: QuotientLattice,
                      truncation_R: float,
                      width_override=None) -> ResonanceProfile:
    """Scan 0 < |n| <= truncation_R for resonances and build the reflection sets.

    Membership is recorded for both interval families; the enumeration and the
    reflection sets m^(ell) use the analysis family. ``width_override`` is a
    testing hook: either {shell: half-width} or a callable
    (element, shell) -> half-width | None (None = schedule width).
    """
    members = []
    for e in lat.ball(truncation_R):
        if e.is_identity:
            continue
        shell = schedule.shell_of(e.norm)
        if shell is None:
            continue
        k_n = -float(e.xi) / 2.0
        width_a = schedule.delta[shell] ** 0.75
        if callable(width_override):
            replaced = width_override(e, shell)
            if replaced is not None:
                width_a = replaced
        elif width_override and shell in width_override:
            width_a = width_override[shell]
        width_t = schedule.a0 * (1.0 + e.norm) ** (-schedule.b0 - 3.0)
        d = abs(k - k_n)
        members.append(ResonanceMember(
            element=e, k_n=k_n, shell=shell,
            in_analysis=d < width_a, in_theorem=d < width_t,
            margin_analysis=(d / width_a if width_a > 0 else math.inf),
            margin_theorem=(d / width_t if width_t > 0 else math.inf),
        ))
    res = sorted((m for m in members if m.in_analysis),
                 key=lambda m: m.element.key())
    n_points = tuple(m.element for m in res)
    s_levels = tuple(m.shell for m in res)
    reflection = []
    if n_points:
        current = frozenset({lat.identity, n_points[0]})
        reflection.append(current)
        for n_ell in n_points[1:]:
            mirrored = frozenset(lat.sub(n_ell, x) for x in current)
            current = current | mirrored
            reflection.append(current)
    return ResonanceProfile(
        k=k, members=tuple(members), R_of_k=n_points,
        ell=len(n_points) - 1, n_points=n_points, s_levels=s_levels,
        reflection_sets=tuple(reflection), in_G=True, truncation_R=truncation_R,
    )


@dataclass(frozen=True)
class OrderingAuditRecord:
    passed: bool
    violations: tuple
    checked_pairs: int


def resonance_gap_ordering_audit(profile: ResonanceProfile,
                                 schedule: ScaleSchedule) -> OrderingAuditRecord:
    """Separation |n^(l+1)| > R^(s^(l)+1)/2 for consecutive resonances (reported)."""
    violations = []
    checked = 0
    for ell in range(profile.ell):
        s_here = profile.s_levels[ell]
        if s_here + 1 > schedule.s_max:
            continue
        checked += 1
        threshold = 0.5 * schedule.R[s_here + 1]
        nxt = profile.n_points[ell + 1]
        if not nxt.norm > threshold:
            violations.append((profile.n_points[ell], nxt, threshold))
    return OrderingAuditRecord(passed=not violations,
                               violations=tuple(violations),
                               checked_pairs=checked)
