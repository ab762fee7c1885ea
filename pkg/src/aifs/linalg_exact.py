"""Exact linear algebra over the rationals.

Everything downstream (torus orbits, lattice duals, cycle detection) depends
on arithmetic that never rounds: matrices are tuples of ``Fraction`` rows and
are inverted by Gauss-Jordan elimination that stays in Q. Floating point
enters only where a quantity is genuinely analytic -- eigenvalue moduli,
operator norms -- and there every comparison carries an explicit safety
margin. The common razor-edge cases (eigenvalue exactly +-1, eigenvalue a
root of unity) are decided exactly before any float is consulted.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .cyclotomy import cyclotomic, poly_divides
from .errors import BorderlineExpansive, NotExpansive

Vec = tuple  # tuple[Fraction, ...]; kept loose so ints pass through helpers

#: below 1 - MARGIN an eigenvalue modulus is treated as certainly subcritical,
#: above 1 + MARGIN as certainly expansive; anything between is refused.
EIG_MARGIN = 1e-9


def frac(x) -> Fraction:
    """Coerce ints, strings like '2/3', floats-free input to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # floats are almost always a bug here (they smuggle rounding into
        # exact code paths); accept only ones that are exactly integral
        if x != int(x):
            raise TypeError("refusing to coerce non-integral float %r to Fraction" % x)
        return Fraction(int(x))
    return Fraction(x)


def fvec(xs) -> Vec:
    return tuple(frac(x) for x in xs)


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Vec) -> Vec:
    c = frac(c)
    return tuple(c * a for a in v)


def vec_dot(u: Vec, v: Vec) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class Matrix:
    """Immutable square matrix with exact rational entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(frac(e) for e in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def is_integer(self) -> bool:
        return all(e.denominator == 1 for row in self.rows for e in row)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def mat_vec(self, v: Vec) -> Vec:
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        return tuple(vec_dot(row, v) for row in self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        cols = other.transpose().rows
        return Matrix([[vec_dot(row, col) for col in cols] for row in self.rows])

    def scale(self, c) -> "Matrix":
        c = frac(c)
        return Matrix([[c * e for e in row] for row in self.rows])

    def add(self, other: "Matrix") -> "Matrix":
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ]
        )

    def pow(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse().pow(-k)
        acc = Matrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                acc = acc @ base
            base = base @ base
            k >>= 1
        return acc

    def inverse(self) -> "Matrix":
        """Gauss-Jordan over Q; raises ValueError on singular input."""
        n = self.n
        aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
               for i, row in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if pivot is None:
                raise ValueError("matrix is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            pv = aug[col][col]
            aug[col] = [e / pv for e in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [e - f * p for e, p in zip(aug[r], aug[col])]
        return Matrix([row[n:] for row in aug])

    def det(self) -> Fraction:
        n = self.n
        a = [list(row) for row in self.rows]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            inv = 1 / a[col][col]
            for r in range(col + 1, n):
                if a[r][col] != 0:
                    f = a[r][col] * inv
                    a[r] = [e - f * p for e, p in zip(a[r], a[col])]
        return det

    def charpoly(self) -> tuple:
        """Coefficients (1, c1, ..., cn) of det(tI - M) = t^n + c1 t^{n-1} + ... + cn.

        Faddeev-LeVerrier recursion, exact over Q.
        """
        n = self.n
        coeffs = [Fraction(1)]
        mk = Matrix.identity(n)
        for k in range(1, n + 1):
            mk = self @ mk
            ck = -sum((mk.rows[i][i] for i in range(n)), Fraction(0)) / k
            coeffs.append(ck)
            if k < n:
                mk = mk.add(Matrix.identity(n).scale(ck))
        return tuple(coeffs)

    def to_float(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.rows], dtype=float)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Matrix(%s)" % (list(list(map(str, row)) for row in self.rows),)


def _totient(q: int) -> int:
    result, n, p = q, q, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def check_expansive(m: Matrix, margin: float = EIG_MARGIN) -> bool:
    """Decide whether every eigenvalue of m has modulus > 1.

    Exact criteria run first: a zero determinant, an eigenvalue at exactly
    +-1 (detected through the characteristic polynomial), or a root-of-unity
    eigenvalue (a cyclotomic factor of the characteristic polynomial; only
    orders with totient <= n can occur) each settle the answer without
    floats. What remains is decided by numpy eigenvalues with a safety
    margin; moduli inside the margin raise BorderlineExpansive rather than
    guessing.
    """
    if m.det() == 0:
        return False
    cp = m.charpoly()
    # value at t = 1 is sum of coefficients; at t = -1, alternating sum
    if sum(cp) == 0 or sum(c * (-1) ** (m.n - i) for i, c in enumerate(cp)) == 0:
        return False
    if all(c.denominator == 1 for c in cp):
        ipoly = [int(c) for c in reversed(cp)]  # ascending order
        q = 1
        while True:
            q += 1
            if _totient(q) > m.n:
                # totients grow; once past 2n^2+2 nothing below n remains
                if q > 2 * m.n * m.n + 2:
                    break
                continue
            if poly_divides(cyclotomic(q), ipoly):
                return False
    moduli = np.abs(np.linalg.eigvals(m.to_float()))
    if moduli.min() >= 1.0 + margin:
        return True
    if (moduli <= 1.0 - margin).any():
        return False
    raise BorderlineExpansive(
        "eigenvalue moduli %s are within %g of the unit circle and no exact "
        "criterion applies" % (np.sort(moduli).tolist(), margin)
    )


def ensure_expansive(m: Matrix) -> None:
    if not check_expansive(m):
        raise NotExpansive("matrix has an eigenvalue of modulus <= 1")


def contraction_data(a: np.ndarray, max_power: int = 32):
    """Return (C, c) with ||a^n||_2 <= C * c^n for all n >= 0 and c < 1.

    Scans powers a^k, takes c = ||a^k||^(1/k) for the k minimising it among
    the contracting powers, and C = max_{j<k} ||a^j|| / c^j. Norms are
    largest singular values inflated by 1%, which absorbs float error in the
    powers; the sub-multiplicative splitting n = q*k + j then certifies the
    bound up to that margin.
    """
    norms = [1.0]
    p = np.eye(a.shape[0])
    best = None  # (c, k)
    for k in range(1, max_power + 1):
        p = p @ a
        nk = float(np.linalg.norm(p, 2)) * 1.01
        norms.append(nk)
        if nk < 1.0:
            c = nk ** (1.0 / k)
            if best is None or c < best[0]:
                best = (c, k)
    if best is None:
        raise NotExpansive(
            "no power up to %d of the inverse is a contraction" % max_power
        )
    c, k = best
    big = max(norms[j] / c**j for j in range(k))
    return max(big, 1.0), c
