"""Orthogonality certificates and completeness diagnostics.

Two exponentials e_lam, e_mu are orthogonal for the invariant measure
exactly when mu^(lam - mu) = 0, and the infinite product form of mu^ makes
that decidable: the transform vanishes iff some factor m((R^T)^{-n}(lam-mu))
vanishes, and once the tail of the product is provably within distance 1 of
1, a chain with no zero factor certifies NON-orthogonality too. All
certificates here are exact statements about rational points, never float
comparisons.

Completeness of a candidate spectrum is probed through the Parseval sum
Q(x) = sum_lam |mu^(x + lam)|^2, which equals 1 identically for an
orthonormal basis and drops below it when frequencies are missing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import AifsError, BudgetExceeded
from .fourier import (
    TruncationPolicy,
    _contraction,
    _phase_gradient,
    eval_symbol,
    mu_hat_grid,
)
from .ifs_core import AffineSystem
from .linalg_exact import Matrix, fvec, vec_sub
from .torus_dynamics import ZeroSet, _dist_sq_to_lattice, find_zeros

Vec = tuple


@dataclass(frozen=True)
class OrthogonalityCertificate:
    lam: Vec
    lam_prime: Vec
    status: str  # "certified" | "not-orthogonal" | "undetermined"
    vanishing_index: int | None = None
    zero_point: Vec | None = None

    @property
    def orthogonal(self) -> bool:
        return self.status == "certified"


def _dual_inverse(sys: AffineSystem) -> Matrix:
    cached = sys.__dict__.get("_dual_inv")
    if cached is None:
        cached = sys.r_inverse.transpose()
        object.__setattr__(sys, "_dual_inv", cached)
    return cached


def orthogonal_pair(
    sys: AffineSystem, lam, lam_prime, n_max: int = 48
) -> OrthogonalityCertificate:
    """Decide orthogonality of e_lam and e_lam' for the invariant measure.

    Walks the factor chain m(S^{-n}(lam - lam')): an exact factor zero
    certifies orthogonality at that index; if every factor up to n is
    certified non-zero and the remaining tail is provably closer to 1 than
    its own modulus allows for a zero, the product cannot vanish and the
    pair is certifiedly NOT orthogonal. Anything else is undetermined
    (larger n_max or an exactness cap was hit).
    """
    lam, lam_prime = fvec(lam), fvec(lam_prime)
    delta = vec_sub(lam, lam_prime)
    if all(c == 0 for c in delta):
        raise ValueError("frequencies coincide; orthogonality is ill-posed")
    sinv = _dual_inverse(sys)
    big_c, c = _contraction(sys)
    theta = _phase_gradient(sys)
    dnorm = math.hypot(*[float(v) for v in delta])
    y = delta
    all_factors_certified = True
    for n in range(1, n_max + 1):
        y = sinv.mat_vec(y)
        sv = eval_symbol(sys, y)
        if sv.is_zero:
            return OrthogonalityCertificate(
                lam, lam_prime, "certified", vanishing_index=n, zero_point=y
            )
        if not sv.certified:
            all_factors_certified = False
        tail = theta * big_c * dnorm * c ** (n + 1) / (1.0 - c)
        # expm1 overflows for huge tails, which certainly fail the test
        if all_factors_certified and tail < 0.7 and math.expm1(tail) < 0.999:
            return OrthogonalityCertificate(lam, lam_prime, "not-orthogonal")
    return OrthogonalityCertificate(lam, lam_prime, "undetermined")


@dataclass(frozen=True)
class PairMatrixReport:
    n_frequencies: int
    n_pairs: int
    certified: int
    not_orthogonal: int
    undetermined: int
    bad_pairs: tuple  # the offending (lam, lam') pairs, capped

    @property
    def all_orthogonal(self) -> bool:
        return self.certified == self.n_pairs


def certify_all_pairs(
    sys: AffineSystem, frequencies, n_max: int = 48, keep_bad: int = 16
) -> PairMatrixReport:
    """Pairwise orthogonality over a whole frequency list, memoised on the
    difference vector (certificates depend only on lam - lam')."""
    freqs = [fvec(f) for f in frequencies]
    memo = {}
    counts = {"certified": 0, "not-orthogonal": 0, "undetermined": 0}
    bad = []
    for i in range(len(freqs)):
        for j in range(i + 1, len(freqs)):
            delta = vec_sub(freqs[i], freqs[j])
            status = memo.get(delta)
            if status is None:
                status = orthogonal_pair(sys, freqs[i], freqs[j], n_max).status
                memo[delta] = status
                memo[tuple(-x for x in delta)] = status
            counts[status] += 1
            if status != "certified" and len(bad) < keep_bad:
                bad.append((freqs[i], freqs[j]))
    n = len(freqs)
    return PairMatrixReport(
        n_frequencies=n,
        n_pairs=n * (n - 1) // 2,
        certified=counts["certified"],
        not_orthogonal=counts["not-orthogonal"],
        undetermined=counts["undetermined"],
        bad_pairs=tuple(bad),
    )


# ---------------------------------------------------------------------------
# maximal orthogonal families over candidate grids


@dataclass(frozen=True)
class FamilyReport:
    family: tuple  # one maximum certified-orthogonal subset of the grid
    size: int
    grid_size: int
    certified_maximum: bool  # False when undetermined pairs were dropped
    method: str


def rational_grid_1d(max_den: int, lo, hi) -> list:
    """All rationals with denominator <= max_den in [lo, hi], as 1-vectors."""
    lo, hi = Fraction(lo), Fraction(hi)
    pts = set()
    for q in range(1, max_den + 1):
        a0 = math.ceil(lo * q)
        a1 = math.floor(hi * q)
        for a in range(a0, a1 + 1):
            pts.add((Fraction(a, q),))
    return sorted(pts)


def _max_clique(nodes: int, neighbors) -> list:
    best = [0] if nodes else []

    def expand(cur, cands):
        nonlocal best
        if not cands:
            if len(cur) > len(best):
                best = list(cur)
            return
        cands = set(cands)
        while cands:
            if len(cur) + len(cands) <= len(best):
                return
            v = cands.pop()
            cur.append(v)
            expand(cur, cands & neighbors[v])
            cur.pop()

    order = sorted(range(nodes), key=lambda v: -len(neighbors[v]))
    remaining = set(range(nodes))
    for v in order:
        if 1 + len(neighbors[v] & remaining) <= len(best):
            remaining.discard(v)
            continue
        expand([v], neighbors[v] & remaining)
        remaining.discard(v)
    return sorted(best)


def _certified_difference_set(sys: AffineSystem, zeros: ZeroSet, lo, hi,
                              n_cap: int = 64) -> set:
    """Differences delta in the box [lo, hi] with S^{-n} delta on the zero
    set mod Z^d for some n >= 1: exactly the certified-orthogonal
    differences, provided the zero set is complete and the digits integral
    (integrality makes the symbol Z^d-periodic)."""
    if not all(c.denominator == 1 for b in sys.digits for c in b):
        raise AifsError("difference-set route needs integral digits")
    if not zeros.points:
        return set()
    s = sys.R.transpose()
    d = sys.dim
    # 0.999: breathing room for the float sqrt (the norm bound itself is
    # already inflated upward)
    min_dist = 0.999 * min(
        math.sqrt(float(_dist_sq_to_lattice(z))) for z in zeros.points
    )
    big_c, c = _contraction(sys)
    corner_norm = max(
        math.hypot(*[float(x) for x in corner])
        for corner in product(*zip(lo, hi))
    )
    out = set()
    spow = Matrix.identity(d)
    for n in range(1, n_cap + 1):
        spow = spow @ s
        # if every ||S^{-n} delta|| over the box is already below the zero
        # set's distance to the lattice, no further level contributes
        if big_c * c**n * corner_norm < min_dist:
            break
        sinv_n = spow.inverse()
        kcorners = [
            sinv_n.mat_vec(fvec(corner)) for corner in product(*zip(lo, hi))
        ]
        for z in zeros.points:
            ranges = []
            for i in range(d):
                vals = [kc[i] - z[i] for kc in kcorners]
                ranges.append(
                    range(math.floor(min(vals)), math.ceil(max(vals)) + 1)
                )
            for k in product(*ranges):
                delta = spow.mat_vec(
                    tuple(z[i] + k[i] for i in range(d))
                )
                if all(lo[i] <= delta[i] <= hi[i] for i in range(d)):
                    out.add(delta)
    else:
        raise BudgetExceeded("difference enumeration passed %d levels" % n_cap)
    return out


def max_orthogonal_family(
    sys: AffineSystem,
    grid,
    n_max: int = 48,
    zeros: ZeroSet | None = None,
    pairwise_cap: int = 1500,
) -> FamilyReport:
    """A maximum orthogonal subfamily of {e_g : g in grid}.

    With a certified-complete finite zero set the certified-orthogonal
    differences inside the grid's difference box are enumerated directly
    (zeros pushed forward by S^n) and a maximum clique is taken over the
    resulting graph -- that is the exact maximum. Otherwise every grid pair
    is certified individually; undetermined pairs count as non-edges and
    downgrade the result to a certified lower bound.
    """
    grid = [fvec(g) for g in grid]
    if len(set(grid)) != len(grid):
        raise ValueError("grid has repeated points")
    d = sys.dim
    if zeros is None:
        zeros = find_zeros(sys)
    if zeros.complete and not zeros.families:
        lo = [min(g[i] for g in grid) - max(g[i] for g in grid) for i in range(d)]
        hi = [-x for x in lo]
        hset = _certified_difference_set(sys, zeros, lo, hi)
        index = {g: i for i, g in enumerate(grid)}
        neighbors = [set() for _ in grid]
        for i, g in enumerate(grid):
            for h in hset:
                other = index.get(tuple(g[k] + h[k] for k in range(d)))
                if other is not None:
                    neighbors[i].add(other)
        clique = _max_clique(len(grid), neighbors)
        return FamilyReport(
            family=tuple(grid[i] for i in clique),
            size=len(clique),
            grid_size=len(grid),
            certified_maximum=True,
            method="difference-set",
        )
    if len(grid) > pairwise_cap:
        raise BudgetExceeded(
            "pairwise certification over %d grid points (cap %d)"
            % (len(grid), pairwise_cap)
        )
    memo = {}
    neighbors = [set() for _ in grid]
    any_undetermined = False
    for i in range(len(grid)):
        for j in range(i + 1, len(grid)):
            delta = vec_sub(grid[i], grid[j])
            status = memo.get(delta)
            if status is None:
                status = orthogonal_pair(sys, grid[i], grid[j], n_max).status
                memo[delta] = status
                memo[tuple(-x for x in delta)] = status
            if status == "certified":
                neighbors[i].add(j)
                neighbors[j].add(i)
            elif status == "undetermined":
                any_undetermined = True
    clique = _max_clique(len(grid), neighbors)
    return FamilyReport(
        family=tuple(grid[i] for i in clique),
        size=len(clique),
        grid_size=len(grid),
        certified_maximum=not any_undetermined,
        method="pairwise",
    )


# ---------------------------------------------------------------------------
# Parseval completeness

_PRIMES = (2, 3, 5, 7, 11, 13, 17)


def halton_points(count: int, dim: int, skip: int = 20) -> np.ndarray:
    """Deterministic low-discrepancy sample in [0,1)^dim (van der Corput in
    coprime bases, one per coordinate)."""
    if dim > len(_PRIMES):
        raise ValueError("halton sampler supports up to %d dims" % len(_PRIMES))

    def vdc(i: int, base: int) -> float:
        x, denom = 0.0, 1.0
        while i:
            denom *= base
            i, rem = divmod(i, base)
            x += rem / denom
        return x

    return np.array(
        [
            [vdc(i, _PRIMES[j]) for j in range(dim)]
            for i in range(skip, skip + count)
        ]
    )


@dataclass(frozen=True)
class QReport:
    q_values: tuple
    sample_points: tuple
    error_bound: float

    @property
    def q_min(self) -> float:
        return min(self.q_values)

    @property
    def q_max(self) -> float:
        return max(self.q_values)


def completeness_q(
    sys: AffineSystem,
    frequencies,
    samples: int = 32,
    policy: TruncationPolicy = TruncationPolicy(),
    points=None,
) -> QReport:
    """Parseval sums Q(x) = sum_lam |mu^(x + lam)|^2 at deterministic sample
    points. For an orthonormal family Q <= 1 everywhere (Bessel), with
    equality iff the family is complete; values must stay within truncation
    error of that ceiling."""
    lam = np.array(
        [[float(c) for c in f] for f in (fvec(f) for f in frequencies)]
    )
    if points is None:
        points = halton_points(samples, sys.dim)
    else:
        points = np.atleast_2d(np.asarray(points, dtype=float))
    qs = []
    for x in points:
        vals, err = mu_hat_grid(sys, x[None, :] + lam, policy)
        qs.append(float(np.sum(np.abs(vals) ** 2)))
    # |v+e|^2 <= |v|^2 + 2|v|e + e^2 and sum |v| <= sqrt(n * Q)
    worst = max(qs)
    err_total = 2 * err * math.sqrt(len(lam) * max(worst, 1.0)) + len(lam) * err**2
    return QReport(
        q_values=tuple(qs),
        sample_points=tuple(map(tuple, points)),
        error_bound=err_total,
    )


# ---------------------------------------------------------------------------
# block root-of-unity families (products of full root systems)


@dataclass(frozen=True)
class BlockRootReport:
    p: int
    d: int
    blocks: tuple
    z0: Vec
    z0_is_zero: bool
    family: tuple  # p^n z0 for n = 1..count
    certificates: tuple  # pairwise, with vanishing index = min(m, n)

    @property
    def all_certified(self) -> bool:
        return all(c.status == "certified" for c in self.certificates)


def block_root_family(p: int, d: int, blocks, count: int = 6) -> BlockRootReport:
    """Mutually orthogonal exponentials for the simplex system with scale p
    from a decomposition d + 1 = sum_k q_k * d_k into divisor blocks.

    z0 concatenates, for each block, q_k copies of the full d_k-th root
    system (0, 1/d_k, ..., (d_k-1)/d_k), dropping a single 0 from the first
    copy (the symbol's constant term supplies it). Each block sums to zero,
    so m(z0) = 0 exactly; and because every d_k divides p, multiplying by
    p^j collapses blocks to integers, which pins the vanishing index of
    the pair (p^m z0, p^n z0) at exactly min(m, n).
    """
    from .catalog import simplex_system  # cheap; avoids a constructor copy

    blocks = tuple((int(q), int(dk)) for q, dk in blocks)
    if sum(q * dk for q, dk in blocks) != d + 1:
        raise ValueError("block sizes must decompose d + 1")
    for q, dk in blocks:
        if q < 1 or dk < 2 or p % dk != 0:
            raise ValueError(
                "each block needs q >= 1 and a divisor 2 <= d_k of p"
            )
    coords = []
    first = True
    for q, dk in blocks:
        for _ in range(q):
            root_sys = [Fraction(j, dk) for j in range(dk)]
            if first:
                root_sys = root_sys[1:]  # the symbol's leading 1 stands in
                first = False
            coords.extend(root_sys)
    z0 = tuple(coords)
    assert len(z0) == d
    sys = simplex_system(p, d)
    z0_zero = eval_symbol(sys, z0).is_zero
    family = tuple(
        tuple(Fraction(p) ** n * c for c in z0) for n in range(1, count + 1)
    )
    certs = []
    for i in range(count):
        for j in range(i + 1, count):
            certs.append(orthogonal_pair(sys, family[j], family[i]))
    return BlockRootReport(
        p=p,
        d=d,
        blocks=blocks,
        z0=z0,
        z0_is_zero=z0_zero,
        family=family,
        certificates=tuple(certs),
    )
