import math

import numpy as np
import pytest

from hillbands.errors import HypothesisFailed, SingularBlock
from hillbands.lattice import FrequencyVector, QuotientLattice
from hillbands.schur import (WeightProfile, enumerate_trajectories,
                             msa_step, mu_of_set,
                             path_norm, q_g_functions, schur_block_inverse,
                             trajectory_weight, two_point_extension,
                             verify_weight_lemma, weight_sum_bruteforce,
                             weight_sum_upper_bound_audit)


@pytest.fixture(scope="module")
def lat():
    return QuotientLattice(FrequencyVector.parse(["1"]))


def random_hermitian(rng, n):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2.0


def test_schur_inverse_diagonal_blockwise():
    H = np.diag([1.0, 3.0]).astype(complex)
    out = schur_block_inverse(H, ([0], [1]), E=5.0)
    assert np.allclose(out, np.diag([1 / 4.0, 1 / 2.0]))


def test_schur_inverse_matches_direct():
    rng = np.random.default_rng(0)
    H = random_hermitian(rng, 8)
    E = float(np.max(np.linalg.eigvalsh(H))) + 1.5
    out = schur_block_inverse(H, ([0, 1, 2, 3, 4], [5, 6, 7]), E)
    direct = np.linalg.inv(E * np.eye(8) - H)
    rel = np.linalg.norm(out - direct) / np.linalg.norm(direct)
    assert rel <= 1e-10


def test_schur_inverse_singular_raises():
    rng = np.random.default_rng(1)
    H = random_hermitian(rng, 6)
    E = float(np.linalg.eigvalsh(H)[2])  # exactly on the spectrum
    with pytest.raises(SingularBlock):
        schur_block_inverse(H, ([0, 1, 2], [3, 4, 5]), E)


def test_q_g_zero_coupling(lat):
    H = np.diag([0.0, 2.0, 5.0]).astype(complex)
    qg = q_g_functions(H, [0], E=0.3)
    assert qg.Q[0] == 0.0
    assert np.allclose(qg.F, 0.0)


def test_q_scalar_closed_form():
    # |Lambda| = 2: Q(m0) = |c|^2 eps^2 / (E - v1)
    eps_c = 0.3 + 0.1j
    H = np.array([[1.0, eps_c], [np.conj(eps_c), 4.0]])
    qg = q_g_functions(H, [0], E=2.0)
    assert qg.Q[0] == pytest.approx(abs(eps_c) ** 2 / (2.0 - 4.0))


def test_q_g_pair_against_dense_punctured_inverse():
    rng = np.random.default_rng(3)
    H = random_hermitian(rng, 5)
    E = float(np.max(np.linalg.eigvalsh(H))) + 2.0
    qg = q_g_functions(H, [0, 2], E)
    others = [1, 3, 4]
    K = np.linalg.inv(E * np.eye(3) - H[np.ix_(others, others)])
    assert np.allclose(qg.K, K)
    for p in (0, 2):
        expected = (H[p, others] @ K @ H[others, p]).real
        assert qg.Q[p] == pytest.approx(expected)
    expected_g = H[0, 2] + H[0, others] @ K @ H[others, 2]
    assert qg.G[(0, 2)] == pytest.approx(expected_g)
    assert qg.G[(0, 2)] == pytest.approx(np.conj(qg.G[(2, 0)]))


def small_profile(lat, reps, D=None, T=8.0, kappa0=0.9):
    domain = [lat.canonicalize([r]) for r in reps]
    if D is None:
        D = {e: 1.0 for e in domain}
    else:
        D = {lat.canonicalize([r]): v for r, v in D.items()}
    return domain, WeightProfile(D=D, T=T, kappa0=kappa0, alpha0=1.0)


def test_weight_sum_length_one(lat):
    domain, prof = small_profile(lat, [0, 1, 2], D={0: 1.5, 1: 1.0, 2: 1.0})
    m = lat.canonicalize([0])
    res = weight_sum_bruteforce(domain, prof, m, m, "R", 1, 0.1, lat)
    assert res.lower_bound == pytest.approx(math.exp(1.5))
    n = lat.canonicalize([1])
    res2 = weight_sum_bruteforce(domain, prof, m, n, "R", 1, 0.1, lat)
    assert res2.lower_bound == 0.0


def test_weight_sum_matches_independent_enumeration(lat):
    # 4 points, uniform D=1, k_max=3: independent second path via products
    reps = [0, 1, 2, 3]
    domain, prof = small_profile(lat, reps)
    eps0 = 0.05
    m, n = domain[0], domain[3]
    res = weight_sum_bruteforce(domain, prof, m, n, "R", 3, eps0, lat)
    # independent enumeration: length 2 and 3 sequences via product loops
    def w(a, b):
        return math.exp(-prof.kappa0 * abs(a - b))

    total = 0.0
    if 0 != 3:
        total += eps0 * w(0, 3) * math.exp(2.0)  # (0, 3)
    for mid in reps:
        if mid != 0 and mid != 3:
            total += eps0**2 * w(0, mid) * w(mid, 3) * math.exp(3.0)
    assert res.lower_bound == pytest.approx(total, rel=1e-12)
    assert res.tail_bound < math.inf


def test_trajectory_admissibility_filters(lat):
    # far-apart large-D interior points make some trajectories inadmissible
    reps = [0, 1000, 2000]
    domain, prof = small_profile(
        lat, reps, D={0: 200.0, 1000: 200.0, 2000: 200.0}, T=8.0, kappa0=0.9)
    m = domain[0]
    res_plain = weight_sum_bruteforce(domain, prof, m, domain[2], "plain",
                                      3, 0.1, lat)
    res_r = weight_sum_bruteforce(domain, prof, m, domain[2], "R", 3, 0.1, lat)
    # adjacent large-D hops are exempt only in the R class, so R admits more
    assert res_r.trajectory_count >= res_plain.trajectory_count
    assert res_plain.rejected_count > 0


def test_verify_weight_lemma_bound_and_hop_sums(lat):
    rng = np.random.default_rng(7)
    reps = sorted(rng.choice(np.arange(-20, 21), size=5, replace=False).tolist())
    domain = [lat.canonicalize([int(r)]) for r in reps]
    prof = WeightProfile(D={e: float(rng.uniform(1, 60)) for e in domain},
                         T=9.0, kappa0=0.8, alpha0=1.0)
    rep = verify_weight_lemma(domain, prof, lat, k_max=4)
    assert rep.passed
    assert rep.hop_sum_ok
    assert rep.checked > 0


def test_weight_sum_upper_bounds(lat):
    domain, prof = small_profile(lat, [-2, -1, 0, 1, 2],
                                 D={r: 2.0 for r in [-2, -1, 0, 1, 2]},
                                 T=8.0, kappa0=0.9)
    rep = weight_sum_upper_bound_audit(domain, prof, eps0=1e-120, lat=lat)
    assert rep.passed and rep.worst_ratio <= 1.0 + 1e-9


def test_mu_of_set(lat):
    domain = [lat.canonicalize([r]) for r in range(-3, 4)]
    assert mu_of_set(domain, lat.canonicalize([0]), lat) == 4
    assert mu_of_set(domain, lat.canonicalize([3]), lat) == 1


def test_msa_step_single_block(lat):
    domain = [lat.canonicalize([r]) for r in range(-2, 3)]
    n = len(domain)
    rng = np.random.default_rng(5)
    H = np.diag(np.linspace(1.0, 2.0, n)).astype(complex)
    eps0 = 1e-40
    for i in range(n):
        for j in range(i + 1, n):
            v = eps0 * math.exp(-0.9 * abs(i - j)) * 0.5
            H[i, j] = v
            H[j, i] = v
    prof = WeightProfile(D={e: 1.2 for e in domain}, T=8.0, kappa0=0.9,
                         alpha0=1.0)
    E = 5.0
    res = msa_step(H, domain, [(domain, prof)], E, eps0, lat, T=8.0,
                   kappa0=0.9, alpha0=1.0)
    assert np.allclose(res.resolvent, np.linalg.inv(E * np.eye(n) - H))
    assert res.audit_ok
    assert res.merged_D == prof.D


def test_msa_step_two_blocks_and_leftover(lat):
    left = [lat.canonicalize([r]) for r in (-6, -5)]
    right = [lat.canonicalize([r]) for r in (5, 6)]
    leftover = [lat.canonicalize([0])]
    domain = left + leftover + right
    index = {e: i for i, e in enumerate(domain)}
    n = len(domain)
    eps0 = 1e-40
    H = np.zeros((n, n), dtype=complex)
    for e in domain:
        H[index[e], index[e]] = 1.0 + 0.1 * e.rep[0]
    for a in domain:
        for b in domain:
            if a != b:
                H[index[a], index[b]] = eps0 * math.exp(
                    -0.9 * lat.sub(a, b).norm)
    profs = [(left, WeightProfile(D={e: 1.0 for e in left}, T=8.0,
                                  kappa0=0.9, alpha0=1.0)),
             (right, WeightProfile(D={e: 1.0 for e in right}, T=8.0,
                                   kappa0=0.9, alpha0=1.0))]
    res = msa_step(H, domain, profs, E=9.0, eps0=eps0, lat=lat, T=8.0,
                   kappa0=0.9, alpha0=1.0)
    assert res.audit_ok
    # leftover point gets the default D = 4T/kappa0
    assert res.merged_D[leftover[0]] == pytest.approx(4 * 8.0 / 0.9)


def test_msa_step_hypothesis_b_fails(lat):
    domain = [lat.canonicalize([r]) for r in (-1, 0, 1)]
    H = np.diag([1.0, 3.0 - 1e-18, 1.5]).astype(complex)
    prof = WeightProfile(D={domain[0]: 1.0}, T=8.0, kappa0=0.9, alpha0=1.0)
    with pytest.raises(HypothesisFailed) as exc:
        # E sits exactly on the leftover diagonal: |E - H(n,n)| below the floor
        msa_step(H, domain, [([domain[0]], WeightProfile(
            D={domain[0]: 1.0}, T=8.0, kappa0=0.9, alpha0=1.0))],
            E=3.0, eps0=1e-40, lat=lat, T=8.0, kappa0=0.9, alpha0=1.0)
    assert exc.value.item == "b"


def test_two_point_extension_pair(lat):
    domain = [lat.canonicalize([r]) for r in range(-3, 4)]
    n = len(domain)
    eps0 = 1e-40
    H = np.diag(np.linspace(1.0, 2.5, n)).astype(complex)
    for i in range(n):
        for j in range(i + 1, n):
            H[i, j] = H[j, i] = eps0 * math.exp(-0.9 * abs(i - j))
    m_plus = lat.canonicalize([0])
    m_minus = lat.canonicalize([1])
    prof = WeightProfile(
        D={e: 1.0 for e in domain if e not in (m_plus, m_minus)},
        T=8.0, kappa0=0.9, alpha0=1.0)
    res = two_point_extension(H, domain, m_plus, m_minus, prof, E=6.0,
                              eps0=eps0, lat=lat, boundary_distance=1e6)
    assert res.extended_D[m_plus] == res.extended_D[m_minus] == res.D0
    assert res.audit_ok


def test_two_point_extension_single_puncture(lat):
    domain = [lat.canonicalize([r]) for r in range(-2, 3)]
    n = len(domain)
    H = np.diag(np.linspace(0.5, 1.5, n)).astype(complex)
    prof = WeightProfile(D={e: 1.0 for e in domain if e.rep != (0,)},
                         T=8.0, kappa0=0.9, alpha0=1.0)
    m0 = lat.canonicalize([0])
    res = two_point_extension(H, domain, m0, m0, prof, E=4.0, eps0=1e-40,
                              lat=lat, boundary_distance=1e6)
    assert res.extended_D[m0] == res.D0


def test_two_point_extension_d0_violation(lat):
    domain = [lat.canonicalize([r]) for r in range(-2, 3)]
    n = len(domain)
    H = np.diag(np.linspace(0.5, 1.5, n)).astype(complex)
    prof = WeightProfile(D={e: 1.0 for e in domain if e.rep != (0,)},
                         T=8.0, kappa0=0.9, alpha0=1.0)
    m0 = lat.canonicalize([0])
    with pytest.raises(HypothesisFailed) as exc:
        two_point_extension(H, domain, m0, m0, prof, E=4.0, eps0=1e-40,
                            lat=lat, boundary_distance=1e-6)
    assert exc.value.item == "D0"


def test_path_norm_and_weights(lat):
    pts = [lat.canonicalize([r]) for r in (0, 2, 5)]
    assert path_norm(pts, lat, 1.0) == pytest.approx(2 + 3)
    assert path_norm(pts[:1], lat, 1.0) == 0.0
    prof = WeightProfile(D={p: 1.0 for p in pts}, T=8.0, kappa0=0.9,
                         alpha0=1.0)
    w = trajectory_weight(pts, prof, lat)
    assert w == pytest.approx(math.exp(-0.9 * 5) * math.exp(3.0))


def test_enumerate_trajectories_counts(lat):
    domain = [lat.canonicalize([r]) for r in (0, 1, 2)]
    m, n = domain[0], domain[1]
    trajs = enumerate_trajectories(domain, m, n, 3)
    # lengths 2: (0,1); length 3: (0,1,?)->no, must END at 1: (0,2,1)
    assert sorted(len(t) for t in trajs) == [2, 3]
    with pytest.raises(ValueError):
        enumerate_trajectories([lat.canonicalize([r]) for r in range(13)],
                               m, n, 2)
