"""Assembly of the dual Hermitian matrices on finite domains.

Raw form: diagonal (2 pi)^2 (xi(n)+k)^2, off-diagonal H[row n, col m] =
eps*c(n-m) -- the orientation under which y(x) = sum phi(n) e^{2 pi i
(xi(n)+k) x} solves the Hill equation exactly (for real coefficient data the
two orientations coincide; for complex data only this one keeps the duality).
Normalized form divides everything by lambda = 256*gamma,
gamma-1 <= |k| <= gamma; the two are related by
H_raw(k, (2 pi)^2 eps) = lambda (2 pi)^2 H_norm(k, eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import OffDiagonalDecayError
from .lattice import GroupElement, QuotientLattice
from .potential import FoldedCoefficients

TWO_PI_SQ = (2.0 * math.pi) ** 2


def gamma_for(k: float) -> float:
    """Smallest admissible gamma >= 1 with gamma - 1 <= |k| <= gamma."""
    return max(1.0, float(math.ceil(abs(k) - 1e-15)))


@dataclass(frozen=True)
class OperatorSpec:
    """Coupling, quasi-momentum and normalization of one dual matrix."""

    epsilon: float
    k: float
    normalized: bool = False
    gamma: float | None = None
    B1: float = 1.0

    def __post_init__(self):
        if not (0 < self.B1 <= 1):
            raise ValueError("B1 must lie in (0, 1]")
        if self.normalized and self.gamma is None:
            object.__setattr__(self, "gamma", gamma_for(self.k))
            g = self.gamma
            # auto gamma must satisfy gamma-1 <= |k| <= gamma
            assert g >= 1 and g - 1 <= abs(self.k) <= g + 1e-12
        elif self.normalized and self.gamma < 1:
            raise ValueError("gamma must be >= 1")

    @property
    def lam(self) -> float:
        """lambda = 256*gamma in normalized mode, 1 otherwise."""
        return 256.0 * self.gamma if self.normalized else 1.0

    def diagonal(self, xi: Fraction, k_offset: Fraction = Fraction(0)) -> float:
        base = (float(xi + k_offset) + self.k) ** 2
        if self.normalized:
            return base / self.lam
        return TWO_PI_SQ * base

    def coupling_scale(self) -> float:
        return self.epsilon / self.lam if self.normalized else self.epsilon


@dataclass(frozen=True)
class DualMatrix:
    """Hermitian dual matrix over an ordered domain."""

    domain: tuple[GroupElement, ...]
    values: np.ndarray
    spec: OperatorSpec
    index: dict = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.domain)

    def row_of(self, e: GroupElement) -> int:
        return self.index[e.rep]

    def norm_bound(self) -> float:
        return float(np.linalg.norm(self.values, ord=np.inf))


def order_domain(domain) -> tuple[GroupElement, ...]:
    """Deterministic layout: sort by (norm, lexicographic rep)."""
    return tuple(sorted(set(domain), key=GroupElement.key))


def assemble(domain: Sequence[GroupElement], spec: OperatorSpec,
             folded: FoldedCoefficients, lat: QuotientLattice,
             check_decay: bool = True) -> DualMatrix:
    """Assemble the matrix; Hermitian exactly (fill upper triangle, mirror-conjugate)."""
    dom = order_domain(domain)
    if not dom:
        raise ValueError("domain must be nonempty")
    n = len(dom)
    H = np.zeros((n, n), dtype=np.complex128)
    scale = spec.coupling_scale()
    for i, a in enumerate(dom):
        H[i, i] = spec.diagonal(a.xi)
        for j in range(i + 1, n):
            diff = lat.sub(a, dom[j])  # H[row, col] = eps * c(row - col)
            val = scale * folded.value(diff)
            if val != 0:
                H[i, j] = val
                H[j, i] = val.conjugate()
    if check_decay:
        bad = _decay_violations(H, dom, spec, folded, lat)
        if bad:
            i, j, a, b = bad[0]
            raise OffDiagonalDecayError(
                f"|H({dom[i]},{dom[j]})| = {a:.3e} > {b:.3e} "
                f"(eps*B1*exp(-kappa0 |m-n|^alpha0))"
            )
    return DualMatrix(domain=dom, values=H, spec=spec,
                      index={e.rep: i for i, e in enumerate(dom)})


def _decay_violations(H, dom, spec, folded, lat):
    bad = []
    eps = abs(spec.coupling_scale())
    for i in range(len(dom)):
        for j in range(i + 1, len(dom)):
            v = abs(H[i, j])
            if v == 0:
                continue
            d = lat.sub(dom[j], dom[i]).norm
            bound = eps * spec.B1 * math.exp(-folded.kappa0 * d**folded.alpha0)
            if v > bound * (1 + 1e-12):
                bad.append((i, j, v, bound))
    return bad


def translated_domain(domain: Sequence[GroupElement], m: GroupElement,
                      lat: QuotientLattice) -> tuple[GroupElement, ...]:
    return order_domain([lat.add(m, e) for e in domain])


def negated_domain(domain: Sequence[GroupElement], lat: QuotientLattice):
    return order_domain([lat.neg(e) for e in domain])


@dataclass(frozen=True)
class ConjugationReport:
    max_eig_difference: float
    tolerance: float
    passed: bool


def translation_conjugation_check(domain: Sequence[GroupElement], m: GroupElement,
                                  spec: OperatorSpec, folded: FoldedCoefficients,
                                  lat: QuotientLattice,
                                  tol: float = 1e-10) -> ConjugationReport:
    """Spectra of H_{m+Lambda, eps, k} and H_{Lambda, eps, k+xi(m)} must agree."""
    left = assemble(translated_domain(domain, m, lat), spec, folded, lat)
    shifted = OperatorSpec(epsilon=spec.epsilon, k=spec.k + float(m.xi),
                           normalized=spec.normalized,
                           gamma=spec.gamma if spec.normalized else None,
                           B1=spec.B1)
    right = assemble(order_domain(domain), shifted, folded, lat)
    dl = np.linalg.eigvalsh(left.values)
    dr = np.linalg.eigvalsh(right.values)
    diff = float(np.max(np.abs(dl - dr)))
    return ConjugationReport(max_eig_difference=diff, tolerance=tol, passed=diff <= tol)


def symmetry_conjugation_check(domain: Sequence[GroupElement], spec: OperatorSpec,
                               folded: FoldedCoefficients, lat: QuotientLattice,
                               tol: float = 1e-10) -> ConjugationReport:
    """Spectra of H_{Lambda, eps, k} and H_{-Lambda, eps, -k} must agree."""
    left = assemble(order_domain(domain), spec, folded, lat)
    flipped = OperatorSpec(epsilon=spec.epsilon, k=-spec.k,
                           normalized=spec.normalized,
                           gamma=spec.gamma if spec.normalized else None,
                           B1=spec.B1)
    right = assemble(negated_domain(domain, lat), flipped, folded, lat)
    dl = np.linalg.eigvalsh(left.values)
    dr = np.linalg.eigvalsh(right.values)
    diff = float(np.max(np.abs(dl - dr)))
    return ConjugationReport(max_eig_difference=diff, tolerance=tol, passed=diff <= tol)
