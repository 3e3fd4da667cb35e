"""Eigenvalue extraction: fixed point, pair-resonance branches, CFF machinery.

The simple route solves E = v(m0) + Q(m0; E) by a damped fixed point and reads
the eigenvector off the punctured resolvent. The pair route locates the two
roots of the 2x2 Schur determinant chi and assembles both branch eigenvectors.
The continued-fraction-function (CFF) layer tracks nested resonant branches
through the regularized companions chi^{(f)} = mu^{(f)} f, which stay smooth
where f itself blows up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (AdmissibilityFailed, HypothesisFailed, NoConvergence,
                     OrderingFailed, PreconditionFailed, RootCountMismatch)
from .lattice import GroupElement
from .operators import DualMatrix
from .schur import q_g_functions


class PuncturedResolvent:
    """Eigen-decomposed resolvent of the punctured block.

    One Hermitian diagonalization buys O(n) evaluation of Q(p, E), G(p, q, E)
    and the eigenvector tail for every E afterwards; the dense-solve route in
    q_g_functions stays available as the independent cross-check.
    """

    def __init__(self, H: np.ndarray, principal):
        self.principal = tuple(int(p) for p in principal)
        n = H.shape[0]
        self.others = [i for i in range(n) if i not in self.principal]
        if not self.others:
            raise ValueError("puncturing removed the whole domain")
        sub = H[np.ix_(self.others, self.others)]
        self.w, self.V = np.linalg.eigh(sub)
        # projections of the coupling columns h(., p) onto the eigenbasis
        self.proj = {p: self.V.conj().T @ H[self.others, p]
                     for p in self.principal}
        self.H = H

    def _weights(self, E: float) -> np.ndarray:
        d = E - self.w
        if np.min(np.abs(d)) < 1e-300:
            raise SingularBlock("punctured block at E", float(np.min(np.abs(d))))
        return 1.0 / d

    def Q(self, p: int, E: float) -> float:
        return float(np.sum(np.abs(self.proj[p]) ** 2 * self._weights(E)))

    def G(self, p: int, q: int, E: float) -> complex:
        s = np.sum(np.conj(self.proj[p]) * self.proj[q] * self._weights(E))
        return complex(self.H[p, q] + s)

    def tail(self, E: float, rhs_proj: np.ndarray) -> np.ndarray:
        """(E - H_punctured)^{-1} applied to a vector given in projections."""
        return self.V @ (self._weights(E) * rhs_proj)

    def smallest_gap(self, E: float) -> float:
        return float(np.min(np.abs(E - self.w)))


@dataclass(frozen=True)
class EigenPair:
    E: float
    phi: np.ndarray             # over the matrix's domain ordering, phi(m0) = 1
    residual: float             # ||H phi - E phi||_inf
    scale: int
    center: GroupElement
    iterations: int = 0


@dataclass(frozen=True)
class PairBranches:
    E_minus: float
    E_plus: float
    phi_minus: np.ndarray
    phi_plus: np.ndarray
    beta_minus: complex
    beta_plus: complex
    tau0: float                 # ordering margin observed on the bracket grid
    residual_minus: float
    residual_plus: float
    m_plus: GroupElement
    m_minus: GroupElement


def _residual(H: np.ndarray, phi: np.ndarray, E: float) -> float:
    return float(np.max(np.abs(H @ phi - E * phi)))


def solve_simple(matrix: DualMatrix, m0: GroupElement, *, E_init: float | None = None,
                 tol: float = 1e-12, max_iter: int = 200, theta: float = 0.5,
                 scale: int = 1) -> EigenPair:
    """Damped fixed point for E = v(m0) + Q(m0; E); eigenvector phi = -F.

    Starts at E = v(m0); damping theta halves itself whenever the equation
    residual |E - v - Q(E)| increases.
    """
    H = matrix.values
    i0 = matrix.row_of(m0)
    v0 = float(H[i0, i0].real)
    E = v0 if E_init is None else float(E_init)
    punctured = PuncturedResolvent(H, [i0])
    prev_resid = math.inf
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        target = v0 + punctured.Q(i0, E)
        resid = abs(E - target)
        if resid > prev_resid:
            theta = theta / 2.0
        prev_resid = resid
        E_new = (1.0 - theta) * E + theta * target
        if abs(E_new - E) < tol:
            E = E_new
            converged = True
            break
        E = E_new
    if not converged:
        raise NoConvergence(iterations, prev_resid)
    phi = np.zeros(matrix.size, dtype=np.complex128)
    phi[i0] = 1.0
    # phi restricted off m0 solves (E - H_punctured) phi = h(., m0), i.e. +F;
    # the 2x2 closed form pins this sign.
    tail = punctured.tail(E, punctured.proj[i0])
    for pos, j in enumerate(punctured.others):
        phi[j] = tail[pos]
    return EigenPair(E=E, phi=phi, residual=_residual(H, phi, E),
                     scale=scale, center=m0, iterations=iterations)


def pair_chi(matrix: DualMatrix, m_plus: GroupElement, m_minus: GroupElement,
             E: float, audit_tol: float = 1e-10) -> float:
    """chi(eps,E) = (E - v+ - Q+)(E - v- - Q-) - G+- G-+, audited against the
    direct 2x2 Schur-complement determinant."""
    H = matrix.values
    ip, im = matrix.row_of(m_plus), matrix.row_of(m_minus)
    vp, vm = float(H[ip, ip].real), float(H[im, im].real)
    if matrix.size == 2:
        # no interior points: Q = 0 and G is the direct hop
        return float((E - vp) * (E - vm) - abs(H[ip, im]) ** 2)
    qg = q_g_functions(H, [ip, im], E)
    chi = (E - vp - qg.Q[ip]) * (E - vm - qg.Q[im]) \
        - (qg.G[(ip, im)] * qg.G[(im, ip)]).real
    # direct determinant of H2~ = (E-H)_22 - Gamma21 (E-H)_11^-1 Gamma12
    n = matrix.size
    others = list(qg.others)
    M = E * np.eye(n, dtype=np.complex128) - H
    H2 = M[np.ix_([ip, im], [ip, im])]
    G21 = M[np.ix_([ip, im], others)]
    G12 = M[np.ix_(others, [ip, im])]
    H2t = H2 - G21 @ qg.K @ G12
    det = complex(np.linalg.det(H2t)).real
    scale = max(1.0, abs(chi), abs(det))
    if abs(chi - det) > audit_tol * scale:
        raise HypothesisFailed("chi-vs-det", f"|chi - det| = {abs(chi - det):.3e}")
    return float(chi)


def _sign_change_roots(f: Callable[[float], float], lo: float, hi: float,
                       grid_points: int, tol: float) -> list[float]:
    """All roots of f located by sign changes on a grid, refined by
    bisection+secant to ``tol``."""
    xs = np.linspace(lo, hi, grid_points)
    vals = [f(float(x)) for x in xs]
    roots = []
    for i in range(len(xs) - 1):
        a, b = float(xs[i]), float(xs[i + 1])
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0:
            roots.append(_refine_root(f, a, b, fa, fb, tol))
    if vals[-1] == 0.0:
        roots.append(float(xs[-1]))
    return roots


def _refine_root(f, a, b, fa, fb, tol):
    for _ in range(200):
        # secant proposal, guarded by the bracket
        denom = fb - fa
        mid = 0.5 * (a + b)
        x = mid if denom == 0 else b - fb * (b - a) / denom
        if not (a < x < b):
            x = mid
        fx = f(x)
        if fx == 0.0 or (b - a) < tol:
            return x
        if fa * fx < 0:
            b, fb = x, fx
        else:
            a, fa = x, fx
    return 0.5 * (a + b)


def solve_pair(matrix: DualMatrix, m_plus: GroupElement, m_minus: GroupElement,
               bracket: tuple[float, float], *, tau0_required: float = 0.0,
               tol: float = 1e-12, grid_points: int = 257,
               ordering_grid: int = 33) -> PairBranches:
    """Both roots of chi = 0 inside the bracket, with branch eigenvectors.

    Verifies the Schur-complement ordering v+ + Q+ >= v- + Q- + tau0 on the
    bracket grid (OrderingFailed), demands exactly two sign changes
    (RootCountMismatch) and audits |beta+-| <= 1.
    """
    H = matrix.values
    ip, im = matrix.row_of(m_plus), matrix.row_of(m_minus)
    vp, vm = float(H[ip, ip].real), float(H[im, im].real)
    punctured = PuncturedResolvent(H, [ip, im])

    tau_seen = math.inf
    for E in np.linspace(bracket[0], bracket[1], ordering_grid):
        margin = (vp + punctured.Q(ip, float(E))) \
            - (vm + punctured.Q(im, float(E)))
        tau_seen = min(tau_seen, margin)
    # roundoff floor: at an exactly symmetric resonance the true margin is 0
    noise = 64.0 * np.finfo(float).eps * float(np.linalg.norm(H, np.inf))
    if tau_seen < tau0_required - noise:
        raise OrderingFailed(
            f"ordering margin {tau_seen:.3e} below required {tau0_required:.3e}"
        )

    def chi(E: float) -> float:
        g = punctured.G(ip, im, E)
        return ((E - vp - punctured.Q(ip, E)) * (E - vm - punctured.Q(im, E))
                - abs(g) ** 2)

    roots = _sign_change_roots(chi, bracket[0], bracket[1], grid_points, tol)
    if len(roots) != 2:
        raise RootCountMismatch(2, len(roots), roots)
    e_minus, e_plus = sorted(roots)
    if not e_minus < e_plus:
        raise RootCountMismatch(2, 1, roots)

    phis = {}
    betas = {}
    residuals = {}
    for sign, E_val in (("+", e_plus), ("-", e_minus)):
        own = ip if sign == "+" else im
        other = im if sign == "+" else ip
        denom = E_val - float(H[other, other].real) - punctured.Q(other, E_val)
        beta = punctured.G(other, own, E_val) / denom
        phi = np.zeros(matrix.size, dtype=np.complex128)
        phi[own] = 1.0
        phi[other] = beta
        # rows off the pair: (E - H_punctured) phi = h(., own) + h(., other) beta
        phi_rest = punctured.tail(
            E_val, punctured.proj[own] + punctured.proj[other] * beta)
        for pos, j in enumerate(punctured.others):
            phi[j] = phi_rest[pos]
        phis[sign] = phi
        betas[sign] = complex(beta)
        residuals[sign] = _residual(H, phi, E_val)
        if abs(beta) > 1.0 + 1e-9:
            raise HypothesisFailed("beta bound", f"|beta{sign}| = {abs(beta):.3e} > 1")
    return PairBranches(
        E_minus=e_minus, E_plus=e_plus,
        phi_minus=phis["-"], phi_plus=phis["+"],
        beta_minus=betas["-"], beta_plus=betas["+"],
        tau0=tau_seen,
        residual_minus=residuals["-"], residual_plus=residuals["+"],
        m_plus=m_plus, m_minus=m_minus,
    )


# --- quadratic dichotomy ---

@dataclass(frozen=True)
class DichotomyResult:
    case: str           # "plus_case" | "minus_case"
    lam: float
    gamma: float
    bracket_ok: bool


def quadratic_dichotomy(a1: float, a2: float, b: float, u: float) -> DichotomyResult:
    """Classify a solution of |(u-a1)(u-a2) - b^2| < (a1-a2)^2 / 4.

    Exactly one of the two cases holds; the universal bracket
    a2 - |gamma|(a1-a2) - |b| <= u <= a1 + |gamma|(a1-a2) + |b| is asserted.
    """
    if not a1 > a2:
        raise PreconditionFailed("require a1 > a2")
    gap = a1 - a2
    expr = (u - a1) * (u - a2) - b * b
    if not abs(expr) < gap * gap / 4.0:
        raise PreconditionFailed(
            f"|(u-a1)(u-a2) - b^2| = {abs(expr):.3e} not < (a1-a2)^2/4 = {gap*gap/4:.3e}"
        )
    lam = expr / (gap * gap)
    gamma = (math.sqrt(1.0 + 4.0 * lam) - 1.0) / 2.0
    plus = u >= max(a1 - abs(gamma) * gap, 0.5 * (a1 + a2 + 2.0 * abs(b)))
    minus = u <= min(a2 + abs(gamma) * gap, 0.5 * (a1 + a2 - 2.0 * abs(b)))
    if plus == minus:
        raise HypothesisFailed("dichotomy exclusivity",
                               f"plus={plus} minus={minus} at u={u}")
    bracket_ok = (a2 - abs(gamma) * gap - abs(b) <= u
                  <= a1 + abs(gamma) * gap + abs(b))
    if not bracket_ok:
        raise HypothesisFailed("dichotomy bracket", f"u={u} escapes the bracket")
    return DichotomyResult(case="plus_case" if plus else "minus_case",
                           lam=lam, gamma=gamma, bracket_ok=bracket_ok)


# --- continued-fraction-functions ---

@dataclass
class CffNode:
    """Node of the CFF hierarchy.

    Leaves (level 0) are the linear factors u - a(x,u) with chi = f, mu = 1,
    tau = 1. A composite at level l >= 1 is f = f_first - b^2 / f_second with
    mu multiplying in the trailing child and chi = chi1*chi2 - mu1*mu2*b^2
    (smooth through the poles of f). sign/sign_history are set for levels >= 2.
    """

    level: int
    kind: str                        # "leaf" | "composite"
    a: Callable | None = None
    f1: "CffNode | None" = None
    f2: "CffNode | None" = None
    b2: Callable | None = None
    choice: int = 1                  # 1: f = f1 - b^2/f2 ; 2: f = f2 - b^2/f1
    sign: int | None = None
    sign_history: tuple = ()

    def f(self, x: float, u: float) -> float:
        if self.kind == "leaf":
            return u - self.a(x, u)
        lead, trail = (self.f1, self.f2) if self.choice == 1 else (self.f2, self.f1)
        return lead.f(x, u) - self.b2(x, u) / trail.f(x, u)

    def mu(self, x: float, u: float) -> float:
        if self.kind == "leaf":
            return 1.0
        trail = self.f2 if self.choice == 1 else self.f1
        return self.f1.mu(x, u) * self.f2.mu(x, u) * trail.f(x, u)

    def chi(self, x: float, u: float) -> float:
        if self.kind == "leaf":
            return self.f(x, u)
        return (self.f1.chi(x, u) * self.f2.chi(x, u)
                - self.f1.mu(x, u) * self.f2.mu(x, u) * self.b2(x, u))

    def tau(self, x: float, u: float) -> float:
        if self.kind == "leaf":
            return 1.0
        return ((self.f2.chi(x, u) - self.f1.chi(x, u))
                * self.f1.tau(x, u) * self.f2.tau(x, u))

    def children_min_tau(self, x: float, u: float) -> float:
        if self.kind == "leaf":
            return 1.0
        return min(self.f1.tau(x, u), self.f2.tau(x, u))


def leaf(a: Callable) -> CffNode:
    return CffNode(level=0, kind="leaf", a=a)


def _fd(fun, x, u, h=None, order=1):
    # second differences need a larger step: cancellation noise goes like
    # eps/h^2, and the admissibility thresholds can be tiny
    if h is None:
        h = 1e-6 if order == 1 else 1e-4
    if order == 1:
        return (fun(x, u + h) - fun(x, u - h)) / (2 * h)
    return (fun(x, u + h) - 2 * fun(x, u) + fun(x, u - h)) / (h * h)


def cff_build(f1: CffNode, f2: CffNode, b2: Callable,
              grid: Sequence[tuple[float, float]]) -> tuple[CffNode, CffNode]:
    """Build the composite pair {f(.,1), f(.,2)} after checking admissibility
    on the sample grid; raises AdmissibilityFailed naming condition and point.

    For leaf children this is the level-1 construction (the basic smallness
    conditions); for composite children the full (a)-(e) list applies,
    including the consistent dichotomy case and equal sign histories.
    """
    level = max(f1.level, f2.level) + 1
    if f1.level != f2.level:
        raise AdmissibilityFailed("equal-levels", None,
                                  f"children at levels {f1.level} != {f2.level}")
    if level == 1:
        for (x, u) in grid:
            a1v, a2v = f1.a(x, u), f2.a(x, u)
            if not a1v > a2v:
                raise AdmissibilityFailed("(iii) a1 > a2", (x, u))
            for fun, name in ((f1.a, "a1"), (f2.a, "a2")):
                if abs(_fd(fun, x, u, order=1)) >= 0.5:
                    raise AdmissibilityFailed(f"(v) |d_u {name}| < 1/2", (x, u))
                if abs(_fd(fun, x, u, order=2)) >= 1 / 64:
                    raise AdmissibilityFailed(f"|d2_u {name}| < 1/64", (x, u))
            bv = math.sqrt(abs(b2(x, u)))
            db2 = abs(_fd(b2, x, u, order=1))
            if not db2 < max(bv / 4.0, 1e-12):
                raise AdmissibilityFailed("(v) |d_u b^2| < |b|/4", (x, u))
            if not abs(u - a1v) < 1 / 64 or not abs(u - a2v) < 1 / 64:
                raise AdmissibilityFailed("|u - a_i| < 1/64", (x, u))
            if not abs(b2(x, u)) < 1 / 64:
                raise AdmissibilityFailed("b^2 < 1/64", (x, u))
        case = None
    else:
        cases = set()
        for (x, u) in grid:
            chi1, chi2 = f1.chi(x, u), f2.chi(x, u)
            if not chi1 < chi2:
                raise AdmissibilityFailed("(a) chi(f1) < chi(f2)", (x, u))
            min_tau = min(f1.tau(x, u), f2.tau(x, u))
            for fi, name in ((f1, "f1"), (f2, "f2")):
                try:
                    fv = abs(fi.f(x, u))
                except ZeroDivisionError:
                    raise AdmissibilityFailed("(b) f_i finite", (x, u), name)
                if not fv < min_tau**10:
                    raise AdmissibilityFailed(
                        "(b) |f_i| < (min tau)^10", (x, u),
                        f"|{name}| = {fv:.3e} vs {min_tau**10:.3e}")
            bv = abs(math.sqrt(abs(b2(x, u))))
            if not bv < min_tau**10:
                raise AdmissibilityFailed("(d) |b| < (min tau)^10", (x, u))
            db2 = abs(_fd(b2, x, u, order=1))
            if bv > 0 and not db2 < min_tau**10 * bv:
                raise AdmissibilityFailed("(d) |d_u b^2| < (min tau)^10 |b|", (x, u))
            d2b2 = abs(_fd(b2, x, u, order=2))
            if not d2b2 < min_tau**10 + 1e-12:
                raise AdmissibilityFailed("(d) |d2_u b^2| < (min tau)^10", (x, u))
            cases.add(_dichotomy_case_of(f1, f2, x, u))
        if len(cases) > 1:
            raise AdmissibilityFailed("(c) consistent dichotomy case", grid[0],
                                      f"mixed cases {cases}")
        case = cases.pop() if cases else None
        if f1.sign_history != f2.sign_history:
            raise AdmissibilityFailed("(e) equal sign histories", None)
    node1 = CffNode(level=level, kind="composite", f1=f1, f2=f2, b2=b2, choice=1)
    node2 = CffNode(level=level, kind="composite", f1=f1, f2=f2, b2=b2, choice=2)
    if level >= 2 and case is not None:
        sgn = +1 if case == "plus_case" else -1
        base = f1.sign if f1.sign is not None else 1
        for node in (node1, node2):
            node.sign = sgn * base
            node.sign_history = (node.sign,) + f1.sign_history
    return node1, node2


def _dichotomy_case_of(f1: CffNode, f2: CffNode, x: float, u: float) -> str:
    """Dichotomy case of the children's quadratic at (x,u), per the chi data."""
    cases = []
    for fi in (f1, f2):
        chi_lead = fi.f1.chi(x, u)
        chi_trail = fi.f2.chi(x, u)
        a_hi = u - min(chi_lead, chi_trail)
        a_lo = u - max(chi_lead, chi_trail)
        mu_prod = fi.f1.mu(x, u) * fi.f2.mu(x, u)
        b2_eff = mu_prod * fi.b2(x, u)
        if b2_eff < 0:
            raise AdmissibilityFailed("(c) nonnegative effective b^2", (x, u),
                                      "depth beyond validated nesting")
        try:
            res = quadratic_dichotomy(a_hi, a_lo, math.sqrt(b2_eff), u)
        except (PreconditionFailed, HypothesisFailed) as exc:
            raise AdmissibilityFailed("(c) dichotomy applicable", (x, u), str(exc))
        cases.append(res.case)
    if cases[0] != cases[1]:
        raise AdmissibilityFailed("(c) same case for i=1,2", (x, u))
    return cases[0]


@dataclass(frozen=True)
class BranchSolveResult:
    x_grid: tuple
    zeta_minus: tuple
    zeta_plus: tuple
    derivative_split_ok: bool
    convexity_ok: bool
    continuity_ok: bool
    min_tau_grid: float   # grid infimum (not a certified true infimum)


def cff_branch_solve(node: CffNode, x_grid: Sequence[float],
                     u_window: Callable[[float], tuple[float, float]],
                     *, tol: float = 1e-12, scan_points: int = 513,
                     fd_step: float = 1e-5) -> BranchSolveResult:
    """Per x: the two roots of chi^{(f)}(x, .) = 0 with continuation seeding.

    Asserts the derivative-sign split (d_u chi <= -(tau^f)^2 at zeta-, >= +
    at zeta+) and the convexity d2_u chi > (1/2)(min_i tau^{(f_i)})^4 by central
    differences with a Richardson consistency check.
    """
    zminus, zplus = [], []
    split_ok = True
    convex_ok = True
    cont_ok = True
    min_tau = math.inf
    prev = None
    xs = list(x_grid)
    for pos, x in enumerate(xs):
        lo, hi = u_window(x)
        if prev is None:
            roots = _sign_change_roots(lambda u: node.chi(x, u), lo, hi,
                                       scan_points, tol)
        else:
            roots = []
            for seed in prev:
                width = max(4.0 * abs(prev[1] - prev[0]), 64.0 * tol,
                            (hi - lo) / scan_points)
                a, b = seed - width, seed + width
                local = _sign_change_roots(lambda u: node.chi(x, u), a, b,
                                           65, tol)
                roots.extend(local)
            if len(roots) != 2:
                roots = _sign_change_roots(lambda u: node.chi(x, u), lo, hi,
                                           scan_points, tol)
        if len(roots) != 2:
            raise RootCountMismatch(2, len(roots), roots)
        zm, zp = sorted(roots)
        chi_u = lambda u: node.chi(x, u)
        for z, want_negative in ((zm, True), (zp, False)):
            d1 = _fd(lambda _x, u: chi_u(u), x, z, h=fd_step, order=1)
            d1_half = _fd(lambda _x, u: chi_u(u), x, z, h=fd_step / 2, order=1)
            if abs(d1 - d1_half) > 1e-3 * max(1.0, abs(d1)):
                raise HypothesisFailed("finite-difference consistency",
                                       f"Richardson gap at x={x}")
            tau_here = node.tau(x, z)
            threshold = tau_here**2
            if want_negative and not d1 <= -threshold + 1e-12:
                split_ok = False
            if not want_negative and not d1 >= threshold - 1e-12:
                split_ok = False
            d2 = _fd(lambda _x, u: chi_u(u), x, z, h=fd_step, order=2)
            mt = node.children_min_tau(x, z)
            min_tau = min(min_tau, mt)
            if not d2 > 0.5 * mt**4 - 1e-12:
                convex_ok = False
        if prev is not None:
            dx = abs(x - xs[pos - 1])
            for znew, zold in ((zm, prev[0]), (zp, prev[1])):
                slope = abs(_fd(lambda _x, u: node.chi(x, u), x, znew,
                               h=fd_step, order=1))
                dchidx = abs((node.chi(x, znew) - node.chi(xs[pos - 1], znew)) / dx) \
                    if dx > 0 else 0.0
                local_bound = (dchidx / max(slope, 1e-12) + 1e-9) * dx
                if abs(znew - zold) > 10.0 * max(local_bound, tol * 100):
                    cont_ok = False
        prev = (zm, zp)
        zminus.append(zm)
        zplus.append(zp)
    return BranchSolveResult(
        x_grid=tuple(x_grid), zeta_minus=tuple(zminus), zeta_plus=tuple(zplus),
        derivative_split_ok=split_ok, convexity_ok=convex_ok,
        continuity_ok=cont_ok, min_tau_grid=min_tau,
    )


def check_branch_hypotheses(node: CffNode, x_grid, g_minus: Callable,
                            g_plus: Callable, rho: float,
                            rho_ell: float, noise_floor: float = 1e-14) -> dict:
    """Numeric check of the four branch-lemma hypotheses on the grid.

    sigma1 = (1/8) (grid-inf of min_i tau^{(f_i)})^4; infima are grid infima,
    never claimed as true infima. The strict thresholds (sigma1^13 rho^8 / 2^83
    style) can undercut float64 resolution, so comparisons carry an explicit
    ``noise_floor``; the measured worst values are reported alongside.
    """
    taus = []
    for x in x_grid:
        for g in (g_minus, g_plus):
            taus.append(node.children_min_tau(x, g(x)))
    sigma1 = 0.125 * min(taus) ** 4
    out = {"sigma1": sigma1, "alpha": True, "beta": True, "gamma": True,
           "delta": True}
    thr_alpha = sigma1**13 * rho**8 / 2.0**83
    worst_chi = 0.0
    for x in x_grid:
        for g in (g_minus, g_plus):
            worst_chi = max(worst_chi, abs(node.chi(x, g(x))))
    out["worst_chi_on_guides"] = worst_chi
    out["alpha_threshold"] = thr_alpha
    if worst_chi >= max(thr_alpha, noise_floor):
        out["alpha"] = False
    x0 = x_grid[0]
    prod = node.f1.chi(x0, g_minus(x0)) * node.f2.chi(x0, g_minus(x0))
    prod_p = node.f1.chi(x0, g_plus(x0)) * node.f2.chi(x0, g_plus(x0))
    if max(abs(prod), abs(prod_p)) > noise_floor:
        out["beta"] = False
    for x in x_grid:
        dm = _fd(node.chi, x, g_minus(x), order=1)
        dp = _fd(node.chi, x, g_plus(x), order=1)
        gapx = g_plus(x) - g_minus(x)
        if not gapx + sigma1**6 * rho**4 / 2.0**39 >= \
                min((abs(dp) + abs(dm)) / 8.0, rho_ell):
            out["gamma"] = False
        if not sigma1**2 * rho**2 / 128.0 + min(-dm, dp) >= \
                min(sigma1**2 * gapx**2 / 256.0, sigma1**2 * rho**2 / 64.0):
            out["delta"] = False
    return out
