"""Affine iterated function systems and their attractors.

A system is an expansive integer (or rational) matrix R together with a
finite digit set B in R^d; the maps x -> R^{-1}(x + b) for b in B contract
toward a unique compact attractor. A probability weight on the digits
selects the invariant measure the Fourier side of the package works with;
uniform weights are the default and the geometrically natural choice.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded
from .linalg_exact import Matrix, contraction_data, check_expansive, frac, fvec, vec_add
from .errors import NotExpansive


@dataclass(frozen=True)
class AffineSystem:
    """Expansive matrix R, digit set B, and digit weights summing to 1."""

    R: Matrix
    digits: tuple
    weights: tuple = ()
    name: str = ""

    def __post_init__(self):
        d = self.R.n
        digits = tuple(fvec(b) for b in self.digits)
        if not digits:
            raise ValueError("digit set must be non-empty")
        if any(len(b) != d for b in digits):
            raise ValueError("digit dimension does not match the matrix")
        if len(set(digits)) != len(digits):
            raise ValueError("digit set has repeated elements")
        object.__setattr__(self, "digits", digits)
        if self.weights:
            w = tuple(frac(x) for x in self.weights)
            if len(w) != len(digits):
                raise ValueError("need one weight per digit")
            if any(x <= 0 for x in w) or sum(w) != 1:
                raise ValueError("weights must be positive and sum to 1")
        else:
            w = (Fraction(1, len(digits)),) * len(digits)
        object.__setattr__(self, "weights", w)
        if not check_expansive(self.R):
            raise NotExpansive("R must have all eigenvalue moduli > 1")
        if not all(c.denominator == 1 for b in digits for c in b):
            warnings.warn(
                "digit set is not integral; lattice and torus analyses "
                "will not apply to this system",
                stacklevel=3,
            )

    @property
    def dim(self) -> int:
        return self.R.n

    @property
    def n_digits(self) -> int:
        return len(self.digits)

    @property
    def uniform(self) -> bool:
        return len(set(self.weights)) == 1

    def tau(self, i: int, x) -> tuple:
        """The i-th contraction x -> R^{-1}(x + digits[i]), exact."""
        return self.r_inverse.mat_vec(vec_add(fvec(x), self.digits[i]))

    # R^{-1} is needed constantly; cache it on first use (object is frozen,
    # so stash via object.__setattr__)
    @property
    def r_inverse(self) -> Matrix:
        inv = self.__dict__.get("_rinv")
        if inv is None:
            inv = self.R.inverse()
            object.__setattr__(self, "_rinv", inv)
        return inv

    def transpose_matrix(self) -> Matrix:
        return self.R.transpose()

    def describe(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "matrix": [[str(e) for e in row] for row in self.R.rows],
            "digits": [[str(c) for c in b] for b in self.digits],
            "weights": [str(w) for w in self.weights],
        }


def bounding_box(sys: AffineSystem) -> tuple:
    """A closed cube [-r, r]^d certified (up to the 1% norm inflation) to
    contain the attractor.

    Every attractor point is sum_{k>=1} R^{-k} b_k, so its norm is at most
    C*c/(1-c) * max_b |b| with (C, c) the contraction data of R^{-1}.
    """
    if all(all(c == 0 for c in b) for b in sys.digits):
        return (0.0,) * sys.dim, (0.0,) * sys.dim
    big_c, c = contraction_data(sys.r_inverse.to_float())
    bmax = max(
        float(np.linalg.norm([float(x) for x in b])) for b in sys.digits
    )
    r = big_c * c / (1.0 - c) * bmax * 1.01
    return (-r,) * sys.dim, (r,) * sys.dim


@dataclass
class AttractorCloud:
    """A finite approximation of the attractor.

    Deterministic mode returns the exact rational set
    {tau_{b_1} ... tau_{b_n}(x0)} over all digit words of length ``depth``;
    x0 is the fixed point of the first map, so the cloud sits inside the
    attractor itself. Chaos-game mode is float Monte Carlo.
    """

    system: AffineSystem
    mode: str
    depth: int
    points: list = field(default_factory=list)

    def as_floats(self) -> np.ndarray:
        if self.points and isinstance(self.points[0][0], Fraction):
            return np.array(
                [[float(c) for c in p] for p in self.points], dtype=float
            )
        return np.asarray(self.points, dtype=float)


def attractor(
    sys: AffineSystem,
    depth: int = 6,
    mode: str = "deterministic",
    count: int = 4096,
    seed: int = 0,
    max_points: int = 200_000,
) -> AttractorCloud:
    if mode == "deterministic":
        if sys.n_digits**depth > max_points:
            raise BudgetExceeded(
                "deterministic cloud would have %d points (cap %d)"
                % (sys.n_digits**depth, max_points)
            )
        # fixed point of tau_0 solves (R - I) x = b_0
        ident = Matrix.identity(sys.dim)
        x0 = (
            sys.R.add(ident.scale(-1))
        ).inverse().mat_vec(sys.digits[0])
        pts = [x0]
        for _ in range(depth):
            pts = [sys.tau(i, p) for i in range(sys.n_digits) for p in pts]
        return AttractorCloud(system=sys, mode=mode, depth=depth, points=pts)
    if mode == "chaos":
        rng = random.Random(seed)
        rinv = sys.r_inverse.to_float()
        digs = [np.array([float(c) for c in b]) for b in sys.digits]
        wts = [float(w) for w in sys.weights]
        x = np.zeros(sys.dim)
        pts = []
        for k in range(count + 32):
            x = rinv @ (x + rng.choices(digs, weights=wts)[0])
            if k >= 32:  # burn-in
                pts.append(tuple(x))
        return AttractorCloud(system=sys, mode=mode, depth=count, points=pts)
    raise ValueError("mode must be 'deterministic' or 'chaos'")


def self_similarity_check(sys: AffineSystem, depth: int = 5) -> bool:
    """Exact multiset identity A_{n+1} = union of tau_i(A_n) for the
    deterministic clouds; a cheap invariant that exercises the arithmetic."""
    a_n = attractor(sys, depth=depth).points
    a_next = attractor(sys, depth=depth + 1).points
    rebuilt = [sys.tau(i, p) for i in range(sys.n_digits) for p in a_n]
    return sorted(a_next) == sorted(rebuilt)
