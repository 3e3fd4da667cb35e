import math

import numpy as np
import pytest

from hillbands.eigensolve import (CffNode, cff_branch_solve, cff_build, leaf,
                                  pair_chi, quadratic_dichotomy, solve_pair,
                                  solve_simple)
from hillbands.errors import (AdmissibilityFailed, OrderingFailed,
                              PreconditionFailed, RootCountMismatch)
from hillbands.operators import TWO_PI_SQ, OperatorSpec, assemble
from hillbands.oracle import dense_spectrum
from hillbands.potential import cosine, fold


def test_solve_simple_zero_coupling(line_lattice, cosine_folded):
    m = assemble(line_lattice.ball(5), OperatorSpec(epsilon=0.0, k=0.3),
                 cosine_folded, line_lattice)
    pair = solve_simple(m, line_lattice.identity)
    assert pair.E == pytest.approx(TWO_PI_SQ * 0.09)
    phi = np.zeros(m.size)
    phi[m.row_of(line_lattice.identity)] = 1.0
    assert np.allclose(pair.phi, phi)


def test_solve_simple_matches_dense(line_lattice, cosine_folded):
    m = assemble(line_lattice.ball(10), OperatorSpec(epsilon=0.01, k=0.3),
                 cosine_folded, line_lattice)
    pair = solve_simple(m, line_lattice.identity)
    w, _ = dense_spectrum(m)
    target = TWO_PI_SQ * 0.09
    nearest = float(w[np.argmin(np.abs(w - target))])
    assert abs(pair.E - nearest) <= 1e-10
    assert pair.residual <= 1e-10
    # perturbation bound |E - v(m0)| < eps
    assert abs(pair.E - target) < 0.01


def test_pair_chi_zero_coupling(line_lattice, cosine_folded):
    k = -0.47
    n0 = line_lattice.canonicalize([1])
    m = assemble(line_lattice.ball(4), OperatorSpec(epsilon=0.0, k=k),
                 cosine_folded, line_lattice)
    i0 = m.row_of(line_lattice.identity)
    i1 = m.row_of(n0)
    vp, vm = m.values[i0, i0].real, m.values[i1, i1].real
    for E in (vp - 0.2, 0.5 * (vp + vm), vm + 0.3):
        assert pair_chi(m, line_lattice.identity, n0, E) == pytest.approx(
            (E - vp) * (E - vm), rel=1e-12)


def test_pair_chi_two_by_two_closed_form(line_lattice, cosine_folded):
    # Lambda = {m0+, m0-} only: chi = (E-v+)(E-v-) - eps^2 |c|^2
    k = -0.5
    n0 = line_lattice.canonicalize([1])
    dom = [line_lattice.identity, n0]
    eps = 0.05
    m = assemble(dom, OperatorSpec(epsilon=eps, k=k), cosine_folded,
                 line_lattice)
    vp = m.values[0, 0].real
    vm = m.values[1, 1].real
    c1 = eps * math.exp(-1)
    for E in (vp - 0.1, vp + 0.01, vp + 0.1):
        got = pair_chi(m, line_lattice.identity, n0, E)
        assert got == pytest.approx((E - vp) * (E - vm) - c1**2, rel=1e-10)


def test_pair_chi_vanishes_at_dense_eigenvalue(line_lattice, cosine_folded):
    k = -0.5
    n0 = line_lattice.canonicalize([1])
    ball = line_lattice.ball(6)
    dom = sorted(set(list(ball) + [line_lattice.sub(n0, e) for e in ball]),
                 key=lambda e: e.key())
    m = assemble(dom, OperatorSpec(epsilon=0.05, k=k), cosine_folded,
                 line_lattice)
    w, _ = dense_spectrum(m)
    v0 = TWO_PI_SQ * 0.25
    root = float(w[np.argmin(np.abs(w - v0))])
    scale = max(1.0, abs(root))
    assert abs(pair_chi(m, line_lattice.identity, n0, root)) <= 1e-9 * scale


def test_solve_pair_zero_coupling(line_lattice, cosine_folded):
    # distinct diagonals at k near (not at) the resonance; at eps=0 the roots
    # are exactly v(m0+-). |k| < |k_{n0}| puts the larger diagonal at n0, so
    # n0 plays m0+ (the ordering hypothesis fixes the orientation).
    k = -0.48
    n0 = line_lattice.canonicalize([1])
    m = assemble(line_lattice.ball(4), OperatorSpec(epsilon=0.0, k=k),
                 cosine_folded, line_lattice)
    i0, i1 = m.row_of(line_lattice.identity), m.row_of(n0)
    vp, vm = m.values[i0, i0].real, m.values[i1, i1].real
    lo, hi = min(vp, vm) - 0.05, max(vp, vm) + 0.05
    br = solve_pair(m, n0, line_lattice.identity, (lo, hi))
    assert br.E_minus == pytest.approx(min(vp, vm), abs=1e-11)
    assert br.E_plus == pytest.approx(max(vp, vm), abs=1e-11)


def test_solve_pair_matches_dense(line_lattice, cosine_folded):
    k = -0.5
    n0 = line_lattice.canonicalize([1])
    ball = line_lattice.ball(12)
    dom = sorted(set(list(ball) + [line_lattice.sub(n0, e) for e in ball]),
                 key=lambda e: e.key())
    m = assemble(dom, OperatorSpec(epsilon=0.05, k=k), cosine_folded,
                 line_lattice)
    w, _ = dense_spectrum(m)
    v0 = TWO_PI_SQ * 0.25
    two = np.sort(w[np.argsort(np.abs(w - v0))[:2]])
    spread = two[1] - two[0]
    br = solve_pair(m, line_lattice.identity, n0,
                    (two[0] - 0.1 * spread, two[1] + 0.1 * spread))
    assert br.E_minus == pytest.approx(two[0], abs=1e-9)
    assert br.E_plus == pytest.approx(two[1], abs=1e-9)
    assert br.E_minus < br.E_plus
    assert br.residual_minus <= 1e-9 and br.residual_plus <= 1e-9
    assert abs(br.beta_minus) <= 1.0 + 1e-9
    assert abs(br.beta_plus) <= 1.0 + 1e-9
    # splitting is of order 2 eps |c(1)|
    assert br.E_plus - br.E_minus == pytest.approx(2 * 0.05 * math.exp(-1),
                                                   rel=0.05)


def test_solve_pair_root_count_mismatch(line_lattice, cosine_folded):
    k = -0.5
    n0 = line_lattice.canonicalize([1])
    m = assemble(line_lattice.ball(3), OperatorSpec(epsilon=0.05, k=k),
                 cosine_folded, line_lattice)
    with pytest.raises(RootCountMismatch):
        solve_pair(m, line_lattice.identity, n0, (-1000.0, -999.0))


def test_solve_pair_ordering_hypothesis(line_lattice, cosine_folded):
    # with m+ and m- swapped the ordering margin goes negative
    k = -0.45  # away from exact resonance: v(n0) > v(0)
    n0 = line_lattice.canonicalize([1])
    m = assemble(line_lattice.ball(6), OperatorSpec(epsilon=0.01, k=k),
                 cosine_folded, line_lattice)
    i0, i1 = m.row_of(line_lattice.identity), m.row_of(n0)
    vp, vm = m.values[i0, i0].real, m.values[i1, i1].real
    assert vm > vp
    lo, hi = vp - 0.05, vm + 0.05
    with pytest.raises(OrderingFailed):
        solve_pair(m, line_lattice.identity, n0, (lo, hi),
                   tau0_required=1e-6)
    # correct orientation passes
    br = solve_pair(m, n0, line_lattice.identity, (lo, hi),
                    tau0_required=1e-6)
    assert br.E_minus < br.E_plus


def test_quadratic_dichotomy_examples():
    res = quadratic_dichotomy(1.0, 0.0, 0.0, 1.0)
    assert res.case == "plus_case"
    assert res.lam == 0.0 and res.gamma == 0.0
    res2 = quadratic_dichotomy(1.0, 0.0, 0.0, 0.0)
    assert res2.case == "minus_case"
    with pytest.raises(PreconditionFailed):
        quadratic_dichotomy(0.0, 1.0, 0.0, 0.5)  # a1 <= a2
    with pytest.raises(PreconditionFailed):
        quadratic_dichotomy(1.0, 0.0, 0.0, 0.5)  # u exactly at the midpoint


def test_cff_leaf_and_degenerate_composite():
    a1 = lambda x, u: 0.004
    a2 = lambda x, u: -0.004
    zero = lambda x, u: 0.0
    grid = [(0.0, u) for u in (-0.006, 0.0, 0.006)]
    n1, n2 = cff_build(leaf(a1), leaf(a2), zero, grid)
    # b = 0: f(.,1) = u - a1 and chi = (u-a2)(u-a1)
    for u in (-0.005, 0.0, 0.005):
        assert n1.f(0.0, u) == pytest.approx(u - 0.004)
        assert n1.chi(0.0, u) == pytest.approx((u + 0.004) * (u - 0.004))
        assert n2.f(0.0, u) == pytest.approx(u + 0.004)
        assert n1.tau(0.0, u) == pytest.approx(0.008)


def test_cff_tau_formula_on_polynomials():
    # audit tau^{(f)} = (chi2 - chi1) tau1 tau2 against an independent
    # polynomial expansion at low degree
    a11 = lambda x, u: 0.003 + 0.01 * x
    a12 = lambda x, u: -0.003 + 0.01 * x
    a21 = lambda x, u: 0.004 - 0.01 * x
    a22 = lambda x, u: -0.004 - 0.01 * x
    b2_small = lambda x, u: 1e-40
    grid = [(x, u) for x in (0.0, 0.001) for u in (-0.005, 0.0, 0.005)]
    f1, _ = cff_build(leaf(a11), leaf(a12), b2_small, grid)
    f2, _ = cff_build(leaf(a21), leaf(a22), b2_small, grid)
    for (x, u) in grid:
        chi1 = (u - a11(x, u)) * (u - a12(x, u)) - b2_small(x, u)
        chi2 = (u - a21(x, u)) * (u - a22(x, u)) - b2_small(x, u)
        tau1 = a11(x, u) - a12(x, u)
        tau2 = a21(x, u) - a22(x, u)
        node = CffNode(level=2, kind="composite", f1=f1, f2=f2,
                       b2=lambda x, u: 0.0, choice=1)
        assert node.tau(x, u) == pytest.approx((chi2 - chi1) * tau1 * tau2,
                                               rel=1e-9)


def test_cff_admissibility_violation_named():
    a1 = lambda x, u: 0.004
    a2 = lambda x, u: 0.005  # a1 < a2 violates (iii)
    grid = [(0.0, 0.0)]
    with pytest.raises(AdmissibilityFailed) as exc:
        cff_build(leaf(a1), leaf(a2), lambda x, u: 0.0, grid)
    assert "(iii)" in exc.value.condition


def test_cff_branch_solve_constant_roots():
    # chi = (u - a)(u - a') with no x dependence: zeta(+-) constant
    a1 = lambda x, u: 0.004
    a2 = lambda x, u: -0.004
    grid = [(x, u) for x in (0.0, 0.01) for u in (-0.006, 0.0, 0.006)]
    n1, _ = cff_build(leaf(a1), leaf(a2), lambda x, u: 0.0, grid)
    res = cff_branch_solve(n1, [0.0, 0.005, 0.01],
                           lambda x: (-0.01, 0.01))
    assert np.allclose(res.zeta_minus, -0.004, atol=1e-12)
    assert np.allclose(res.zeta_plus, 0.004, atol=1e-12)
    assert res.derivative_split_ok and res.convexity_ok


def test_cff_branch_solve_symmetric_model():
    c = 0.4
    xs = [i / 1000.0 for i in range(1, 8)]
    grid = [(x, u) for x in xs for u in (-0.005, 0.0, 0.005)]
    n1, _ = cff_build(leaf(lambda x, u: x), leaf(lambda x, u: -x),
                      lambda x, u: (c * x) ** 2, grid)
    res = cff_branch_solve(n1, xs, lambda x: (-0.02, 0.02))
    for x, zm, zp in zip(xs, res.zeta_minus, res.zeta_plus):
        expected = math.sqrt(x * x * (1 + c * c))
        assert zp == pytest.approx(expected, abs=1e-10)
        assert zm == pytest.approx(-expected, abs=1e-10)
    assert res.derivative_split_ok
    assert res.convexity_ok
    assert res.continuity_ok


def test_branch_hypotheses_on_symmetric_model():
    from hillbands.eigensolve import check_branch_hypotheses

    c = 0.4
    xs = [0.0] + [i / 1000.0 for i in range(1, 6)]
    # the admissibility grid avoids x = 0 where a1 = a2 degenerates; the
    # hypothesis check still evaluates at x = 0 (condition beta lives there)
    grid = [(x, u) for x in xs[1:] for u in (-0.005, 0.0, 0.005)]
    n1, _ = cff_build(leaf(lambda x, u: x), leaf(lambda x, u: -x),
                      lambda x, u: (c * x) ** 2, grid)
    root = lambda x: math.sqrt(x * x * (1 + c * c))
    out = check_branch_hypotheses(n1, xs, lambda x: -root(x),
                                  lambda x: root(x), rho=0.01, rho_ell=0.01)
    # the guide curves are the exact roots: (alpha) and (beta) hold; tau at
    # level 1 is the constant 1, so sigma1 = 1/8
    assert out["sigma1"] == pytest.approx(0.125)
    assert out["alpha"] and out["beta"]
    assert out["gamma"] and out["delta"]
