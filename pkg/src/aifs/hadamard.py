"""Complex Hadamard compatibility between a digit set and a frequency set.

(R, B, L) is compatible when the N x N matrix with entries
N^{-1/2} e^{2 pi i (R^{-1} b) . l} is unitary. That single algebraic fact
makes the dual system (R^T, L) generate orthogonal exponentials for the
invariant measure of (R, B) and powers the whole spectrum construction.
Certification is exact: unitarity reduces to vanishing sums of roots of
unity, one per pair of distinct rows, decided through cyclotomy rather than
by staring at a float defect (which is still reported, for instrumentation).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .cyclotomy import vanishing_sum
from .errors import ExactnessUnavailable
from .fourier import TruncationPolicy, eval_mu_hat
from .ifs_core import AffineSystem
from .linalg_exact import Matrix, fvec, vec_dot, vec_sub

Vec = tuple


@dataclass(frozen=True)
class HadamardTriple:
    R: Matrix
    b_digits: tuple
    l_digits: tuple
    defect: float  # max |(H* H - I)_{jk}|, float instrumentation
    certified: bool  # exact unitarity through vanishing sums

    @property
    def size(self) -> int:
        return len(self.b_digits)


def check_hadamard(r: Matrix, b_digits, l_digits, q_cap=None) -> HadamardTriple:
    """Certify or refute unitarity of the scaled digit matrix.

    Columns indexed by b are orthonormal iff for every pair l != l' the sum
    sum_b e^{2 pi i (R^{-1} b).(l - l')} vanishes; each such sum is decided
    exactly. The float defect is computed independently as a sanity channel.
    """
    b_digits = tuple(fvec(b) for b in b_digits)
    l_digits = tuple(fvec(l) for l in l_digits)
    if len(b_digits) != len(l_digits):
        raise ValueError(
            "digit and frequency sets must have equal size (%d vs %d)"
            % (len(b_digits), len(l_digits))
        )
    if len(set(b_digits)) != len(b_digits) or len(set(l_digits)) != len(l_digits):
        raise ValueError("digit/frequency sets must not repeat elements")
    n = len(b_digits)
    rinv = r.inverse()
    rb = [rinv.mat_vec(b) for b in b_digits]
    # float defect
    phases = np.array(
        [[float(vec_dot(x, l)) for l in l_digits] for x in rb]
    )
    h = np.exp(2j * np.pi * phases) / math.sqrt(n)
    defect = float(np.abs(h.conj().T @ h - np.eye(n)).max())
    # exact certificate
    certified = True
    kwargs = {} if q_cap is None else {"q_cap": q_cap}
    try:
        for i in range(n):
            for j in range(i + 1, n):
                diff = vec_sub(l_digits[i], l_digits[j])
                if not vanishing_sum(
                    [1] * n, [vec_dot(x, diff) for x in rb], **kwargs
                ):
                    certified = False
                    break
            if not certified:
                break
    except ExactnessUnavailable:
        certified = False
    return HadamardTriple(
        R=r, b_digits=b_digits, l_digits=l_digits,
        defect=defect, certified=certified,
    )


@dataclass(frozen=True)
class DualPair:
    """A certified triple packaged as its two working systems: the geometry
    (R, B) carrying the measure, and the dual (R^T, L) whose contractions
    and cycles organise candidate spectra."""

    triple: HadamardTriple
    sys_geom: AffineSystem
    sys_dual: AffineSystem


def make_dual_pair(sys_geom: AffineSystem, l_digits, require: bool = True) -> DualPair:
    triple = check_hadamard(sys_geom.R, sys_geom.digits, l_digits)
    if require and not triple.certified:
        raise ValueError(
            "not a certified compatible pair (float defect %.3g)" % triple.defect
        )
    sys_dual = AffineSystem(
        R=sys_geom.R.transpose(),
        digits=triple.l_digits,
        name=(sys_geom.name + "-dual") if sys_geom.name else "dual",
    )
    return DualPair(triple=triple, sys_geom=sys_geom, sys_dual=sys_dual)


# ---------------------------------------------------------------------------
# change of variables


def conjugate_system(sys: AffineSystem, v: Matrix) -> AffineSystem:
    """The system (V R V^{-1}, V B): same dynamics in new coordinates.

    Its measure transform satisfies mu_V^(x) = mu^(V^T x), which makes the
    pair a strong cross-check on the evaluation pipeline.
    """
    if v.det() == 0:
        raise ValueError("change of variables must be invertible")
    r_v = (v @ sys.R) @ v.inverse()
    digs = tuple(v.mat_vec(b) for b in sys.digits)
    return AffineSystem(
        R=r_v, digits=digs, weights=sys.weights,
        name=(sys.name + "-conj") if sys.name else "",
    )


def covariance_residual(
    sys: AffineSystem,
    v: Matrix,
    x,
    policy: TruncationPolicy = TruncationPolicy(),
) -> float:
    """|mu_V^(x) - mu^(V^T x)| for the conjugated system; zero in theory."""
    conj = conjugate_system(sys, v)
    lhs = eval_mu_hat(conj, x, policy)
    rhs = eval_mu_hat(sys, v.transpose().mat_vec(fvec(x)), policy)
    return abs(lhs.value - rhs.value)


# ---------------------------------------------------------------------------
# two-sided spectral probe


@dataclass(frozen=True)
class OrientationReport:
    label: str
    cycles: tuple
    extreme_cycles: tuple
    spectrum_size: int
    level: int
    pairs_checked: int
    pairs_certified: int
    pairs_rejected: int
    pairs_undetermined: int
    q_min: float
    q_max: float
    verdict: str  # "spectral-evidence" | "counterexample-evidence" | "inconclusive"


@dataclass(frozen=True)
class ProbeReport:
    experimental: bool
    orientations: tuple
    note: str

    @property
    def verdicts(self) -> tuple:
        return tuple(o.verdict for o in self.orientations)


def _probe_level(n_digits: int) -> int:
    level = 1
    while n_digits ** (level + 1) <= 512:
        level += 1
    return max(3, min(level, 8))


def conjecture_probe(
    sys_geom: AffineSystem,
    l_digits,
    level: int | None = None,
    samples: int = 16,
    threshold: float = 0.99,
    pair_budget: int = 300,
    max_period: int = 6,
    seed: int = 7,
) -> ProbeReport:
    """Experimental two-sided check that a compatible pair is spectral both
    ways: the triple (R, B, L) and its swap (R^T, L, B) each get cycles,
    a level-capped spectrum, sampled orthogonality certificates, and
    Parseval sums. Finite-level evidence only -- never a proof -- and the
    report says so.
    """
    from .cycles_spectrum import (
        classify_extreme,
        find_cycles_by_words,
        spectrum_from_cycles,
    )
    from .verify import completeness_q, orthogonal_pair

    triple = check_hadamard(sys_geom.R, sys_geom.digits, l_digits)
    if not triple.certified:
        raise ValueError("probe requires a certified compatible pair")
    orientations = []
    sides = [
        ("R,B,L", sys_geom, triple.l_digits),
        (
            "R^T,L,B",
            AffineSystem(
                R=sys_geom.R.transpose(),
                digits=triple.l_digits,
                name=(sys_geom.name + "-swap") if sys_geom.name else "swap",
            ),
            triple.b_digits,
        ),
    ]
    rng = random.Random(seed)
    for label, geom, spec_digits in sides:
        dual = AffineSystem(
            R=geom.R.transpose(), digits=spec_digits, name=label + "-dual"
        )
        cycles = find_cycles_by_words(dual, max_period=max_period)
        cycles = classify_extreme(geom, cycles)
        extreme = [c for c in cycles if c.extreme]
        lv = level if level is not None else _probe_level(dual.n_digits)
        spectrum = spectrum_from_cycles(dual, extreme, lv)
        elements = list(spectrum.elements)
        pairs = [
            (i, j)
            for i in range(len(elements))
            for j in range(i + 1, len(elements))
        ]
        if len(pairs) > pair_budget:
            pairs = rng.sample(pairs, pair_budget)
        counts = {"certified": 0, "not-orthogonal": 0, "undetermined": 0}
        memo = {}
        for i, j in pairs:
            deltakey = vec_sub(elements[i], elements[j])
            status = memo.get(deltakey)
            if status is None:
                status = orthogonal_pair(geom, elements[i], elements[j]).status
                memo[deltakey] = status
            counts[status] += 1
        qrep = completeness_q(geom, elements, samples=samples)
        slack = qrep.error_bound + 1e-8
        if counts["not-orthogonal"] > 0 or qrep.q_max > 1.0 + slack:
            verdict = "counterexample-evidence"
        elif counts["undetermined"] == 0 and qrep.q_min >= threshold:
            verdict = "spectral-evidence"
        else:
            verdict = "inconclusive"
        orientations.append(
            OrientationReport(
                label=label,
                cycles=tuple(cycles),
                extreme_cycles=tuple(extreme),
                spectrum_size=spectrum.size,
                level=lv,
                pairs_checked=len(pairs),
                pairs_certified=counts["certified"],
                pairs_rejected=counts["not-orthogonal"],
                pairs_undetermined=counts["undetermined"],
                q_min=qrep.q_min,
                q_max=qrep.q_max,
                verdict=verdict,
            )
        )
    return ProbeReport(
        experimental=True,
        orientations=tuple(orientations),
        note=(
            "finite-level sampling of cycles, pair certificates and Parseval "
            "sums; evidence only, not a decision procedure"
        ),
    )
