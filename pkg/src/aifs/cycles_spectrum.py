"""Lattices, extreme cycles, and candidate spectra.

The digit lattice of a system (R, B) is the smallest lattice containing B
and stable under multiplication by R; its dual is stable under S = R^T and
contains Z^d whenever the digits are integral. Candidate frequencies for an
orthogonal spectrum live in that dual, inside a certified box around the
attractor of the dual system (S, L). Cycles of the expanding map
x -> S x - l that stay in that attractor and on which the geometric side's
|m| is identically 1 are what a spectrum grows from: level n applies every
digit word of length n to the negated cycle points.

Two independent cycle searches are provided -- a graph search over lattice
candidates in the box, and a scan over digit words whose composite fixed
points are computed exactly -- and they cross-check each other in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .errors import BudgetExceeded, RankDeficient
from .fourier import is_symbol_unimodular
from .ifs_core import AffineSystem, bounding_box
from .linalg_exact import Matrix, fvec, vec_add, vec_sub

Vec = tuple


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def integer_span_basis(gens) -> list:
    """Hermite-form basis of the lattice generated by integer vectors.

    Rows are inserted one by one with Euclidean pivot combination, then
    normalised (positive pivots, entries above a pivot reduced modulo it),
    which makes the output canonical: two generating sets span the same
    lattice iff they produce the same list.
    """
    gens = [list(map(int, g)) for g in gens]
    if not gens:
        return []
    d = len(gens[0])
    ech = [None] * d
    for v in gens:
        v = list(v)
        for j in range(d):
            if v[j] == 0:
                continue
            if ech[j] is None:
                ech[j] = v
                break
            a, b = ech[j][j], v[j]
            g, x, y = _xgcd(a, b)
            ech[j], v = (
                [x * p + y * q for p, q in zip(ech[j], v)],
                [(a // g) * q - (b // g) * p for p, q in zip(ech[j], v)],
            )
    pivots = [j for j in range(d) if ech[j] is not None]
    for j in pivots:
        if ech[j][j] < 0:
            ech[j] = [-x for x in ech[j]]
    for j in pivots:
        for i in pivots:
            if i < j and ech[i][j] != 0:
                f = ech[i][j] // ech[j][j]
                ech[i] = [p - f * q for p, q in zip(ech[i], ech[j])]
    return [ech[j] for j in pivots]


@dataclass(frozen=True)
class LatticeBasis:
    """Full-rank lattice given by the columns of an exact matrix."""

    basis: Matrix

    def contains(self, v) -> bool:
        coords = self.basis.inverse().mat_vec(fvec(v))
        return all(c.denominator == 1 for c in coords)

    def dual(self) -> "LatticeBasis":
        # x is dual iff <x, column> is an integer for every basis column,
        # i.e. basis^T x in Z^d
        return LatticeBasis(self.basis.transpose().inverse())

    @property
    def dim(self) -> int:
        return self.basis.n

    def det(self) -> Fraction:
        return abs(self.basis.det())


def build_digit_lattice(sys: AffineSystem, max_rounds: int = 64) -> LatticeBasis:
    """Smallest lattice containing the digits and stable under R.

    Iterates Lambda_{k+1} = lattice(digits united with R * Lambda_k); the
    chain is increasing inside (1/q) Z^d, hence stabilises. Raises
    RankDeficient when the result has rank < d (its dual is then a continuum
    and candidate enumeration is meaningless).
    """
    if not sys.R.is_integer:
        raise ValueError("digit lattice is defined for integer matrices only")
    den = lcm(1, *[c.denominator for b in sys.digits for c in b])
    gens = [[int(c * den) for c in b] for b in sys.digits]
    gens = [g for g in gens if any(g)]
    if not gens:
        raise RankDeficient("all digits are zero", rank=0)
    r_int = [[int(e) for e in row] for row in sys.R.rows]
    basis = integer_span_basis(gens)
    for _ in range(max_rounds):
        imgs = [
            [sum(r_int[i][k] * v[k] for k in range(len(v))) for i in range(len(v))]
            for v in basis
        ]
        new_basis = integer_span_basis(basis + imgs + gens)
        if new_basis == basis:
            break
        basis = new_basis
    else:
        raise BudgetExceeded("digit lattice did not stabilise")
    if len(basis) < sys.dim:
        raise RankDeficient(
            "digit lattice has rank %d < %d" % (len(basis), sys.dim),
            rank=len(basis),
        )
    cols = Matrix(list(zip(*[[Fraction(x, den) for x in v] for v in basis])))
    return LatticeBasis(cols)


def enumerate_box_points(lattice: LatticeBasis, lo, hi, cap: int = 1_000_000) -> list:
    """All lattice points in the closed box [lo, hi], exactly.

    Coordinates k of a point x = G k are bounded by evaluating G^{-1} on the
    box corners; the integer ranges are scanned and each candidate compared
    against the box with a hair of slack for float bounds.
    """
    g = lattice.basis
    ginv = g.inverse()
    d = g.n
    lo_f = [_as_fraction(c) for c in lo]
    hi_f = [_as_fraction(c) for c in hi]
    corners = [
        ginv.mat_vec(
            tuple(hi_f[i] if (mask >> i) & 1 else lo_f[i] for i in range(d))
        )
        for mask in range(2**d)
    ]
    kranges = []
    total = 1
    for i in range(d):
        vals = [c[i] for c in corners]
        kranges.append(range(_floor(min(vals)), _ceil(max(vals)) + 1))
        total *= len(kranges[-1])
        if total > cap:
            raise BudgetExceeded("box enumeration would scan %d points" % total)
    slack = Fraction(1, 10**9)
    out = []
    for k in product(*kranges):
        x = g.mat_vec(fvec(k))
        if all(lo_f[i] - slack <= x[i] <= hi_f[i] + slack for i in range(d)):
            out.append(x)
    return out


def _as_fraction(c) -> Fraction:
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return Fraction(float(c)).limit_denominator(10**12)


def _floor(f: Fraction) -> int:
    return f.numerator // f.denominator


def _ceil(f: Fraction) -> int:
    return -((-f.numerator) // f.denominator)


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True)
class CycleRecord:
    """A cycle of x -> S x - l.

    Invariant: points[(i+1) % m] == S points[i] - digits[digit_indices[i]].
    Each point is therefore the image of the next one under a contraction of
    the dual system, so cycle points always lie in its attractor.
    """

    points: tuple
    digit_indices: tuple
    extreme: bool | None = None  # |m| = 1 at every point (set by classify)

    @property
    def period(self) -> int:
        return len(self.points)

    def key(self) -> frozenset:
        return frozenset(self.points)


def _canonical(points: list, digits: list) -> CycleRecord:
    m = len(points)
    best = min(range(m), key=lambda i: points[i])
    return CycleRecord(
        points=tuple(points[(best + i) % m] for i in range(m)),
        digit_indices=tuple(digits[(best + i) % m] for i in range(m)),
    )


def find_cycles_in_box(
    sys_dual: AffineSystem,
    candidates,
    max_period: int = 64,
    budget: int = 2_000_000,
) -> list:
    """All simple cycles of x -> S x - l with every point in ``candidates``.

    Builds the transition graph on the candidate set (an edge per digit that
    keeps the image inside the set), prunes dead ends to a fixpoint, then
    enumerates simple cycles by rooted DFS (each cycle is reported from its
    smallest node). For certified digit matrices the successor inside the
    attractor is unique, so simple cycles are all there are.
    """
    s = sys_dual.R
    cand = {fvec(c) for c in candidates}
    succ = {}
    for x in cand:
        sx = s.mat_vec(x)
        succ[x] = [
            (i, y)
            for i, l in enumerate(sys_dual.digits)
            if (y := vec_sub(sx, l)) in cand
        ]
    changed = True
    while changed:
        changed = False
        for x in [x for x, outs in succ.items() if not outs]:
            del succ[x]
            changed = True
        if changed:
            for x in succ:
                succ[x] = [(i, y) for i, y in succ[x] if y in succ]
    cycles = {}
    nodes = sorted(succ)
    order = {x: i for i, x in enumerate(nodes)}
    steps = 0
    for start in nodes:
        stack = [(start, [], [])]
        while stack:
            x, path, digs = stack.pop()
            steps += 1
            if steps > budget:
                raise BudgetExceeded("cycle search exceeded %d steps" % budget)
            if len(path) >= max_period:
                continue
            for i, y in succ[x]:
                if y == start:
                    rec = _canonical(path + [x], digs + [i])
                    cycles[rec.key()] = rec
                elif order[y] > order[start] and y not in path:
                    stack.append((y, path + [x], digs + [i]))
    return sorted(cycles.values(), key=lambda r: r.points)


def find_cycles_by_words(
    sys_dual: AffineSystem, max_period: int = 6, budget: int = 2_000_000
) -> list:
    """Cycles of x -> S x - l found through digit words.

    A word (l_1 ... l_m) has exactly one periodic point,
    x0 = (S^m - I)^{-1} sum_j S^{m-j} l_j, and it automatically lies in the
    attractor of the dual system. Scanning every word up to length
    max_period is exhaustive for all cycle periods up to that length and
    needs no candidate box; the price is the N^m word count.
    """
    s = sys_dual.R
    n = sys_dual.n_digits
    d = sys_dual.dim
    if sum(n**m for m in range(1, max_period + 1)) > budget:
        raise BudgetExceeded("word scan would be larger than %d" % budget)
    ident = Matrix.identity(d)
    cycles = {}
    for m in range(1, max_period + 1):
        inv = s.pow(m).add(ident.scale(-1)).inverse()
        spow = [s.pow(j) for j in range(m)]
        for word in product(range(n), repeat=m):
            acc = (Fraction(0),) * d
            for j, li in enumerate(word, start=1):
                acc = vec_add(acc, spow[m - j].mat_vec(sys_dual.digits[li]))
            x = inv.mat_vec(acc)
            pts, digs = [], []
            for li in word:
                pts.append(x)
                digs.append(li)
                x = vec_sub(s.mat_vec(x), sys_dual.digits[li])
            if len(set(pts)) != len(pts):
                continue  # a power of a shorter word; found at smaller m
            rec = _canonical(pts, digs)
            cycles.setdefault(rec.key(), rec)
    return sorted(cycles.values(), key=lambda r: r.points)


def classify_extreme(sys_geom: AffineSystem, cycles) -> list:
    """Mark each cycle by whether the geometric symbol has modulus one on
    every one of its points (only those can seed a spectrum)."""
    return [
        CycleRecord(
            c.points,
            c.digit_indices,
            extreme=all(is_symbol_unimodular(sys_geom, p) for p in c.points),
        )
        for c in cycles
    ]


def extreme_cycles(
    sys_geom: AffineSystem,
    sys_dual: AffineSystem,
    max_period: int = 64,
    via: str = "box",
) -> list:
    """Extreme cycles of the dual system, through either search route."""
    if via == "box":
        dual_lattice = build_digit_lattice(sys_geom).dual()
        lo, hi = bounding_box(sys_dual)
        cands = enumerate_box_points(dual_lattice, lo, hi)
        cycles = find_cycles_in_box(sys_dual, cands, max_period=max_period)
    elif via == "words":
        cycles = find_cycles_by_words(sys_dual, max_period=min(max_period, 8))
    else:
        raise ValueError("via must be 'box' or 'words'")
    return [c for c in classify_extreme(sys_geom, cycles) if c.extreme]


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectrumSet:
    """Level-n candidate spectrum grown from extreme cycles.

    Level 0 is the negated cycle points; level k+1 applies every map
    x -> S x + l. Levels are nested -- following a cycle's own digit word
    reproduces its seeds -- so the stated level contains all lower ones.
    """

    level: int
    elements: tuple  # sorted exact vectors
    per_cycle: tuple  # (CycleRecord, frozenset of elements) pairs

    @property
    def size(self) -> int:
        return len(self.elements)

    def floats(self) -> list:
        return [tuple(float(c) for c in v) for v in self.elements]


def spectrum_from_cycles(
    sys_dual: AffineSystem, cycles, level: int, cap: int = 2_000_000
) -> SpectrumSet:
    s = sys_dual.R
    per_cycle = []
    union = set()
    for cyc in cycles:
        if cyc.extreme is False:
            raise ValueError("spectrum seeds must be extreme cycles")
        layer = {tuple(-c for c in p) for p in cyc.points}
        for _ in range(level):
            nxt = set()
            for x in layer:
                sx = s.mat_vec(x)
                for l in sys_dual.digits:
                    nxt.add(vec_add(sx, l))
                if len(nxt) > cap:
                    raise BudgetExceeded("spectrum grew past %d elements" % cap)
            layer = nxt
        per_cycle.append((cyc, frozenset(layer)))
        union |= layer
    return SpectrumSet(
        level=level,
        elements=tuple(sorted(union)),
        per_cycle=tuple(per_cycle),
    )
