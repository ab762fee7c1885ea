"""The digit symbol and the Fourier transform of the invariant measure.

For a system (R, B, w) the symbol is m(x) = sum_b w_b e^{2 pi i b.x}; its
modulus squared W = |m|^2 drives every orthogonality question downstream.
The invariant measure's transform is the infinite product
mu^(x) = prod_{n>=1} m((R^T)^{-n} x), which converges because R^{-1}
contracts; truncation errors are bounded explicitly, so every returned value
carries a certified error radius. Zeros of factors are certified exactly
through cyclotomy when the evaluation point is rational.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cyclotomy import Q_CAP, vanishing_sum
from .errors import BudgetExceeded, ExactnessUnavailable
from .ifs_core import AffineSystem
from .linalg_exact import fvec, vec_dot

#: a symbol value whose float modulus exceeds this is certainly non-zero:
#: the evaluation error of a <=32-term unit sum is below 1e-13, five orders
#: of magnitude smaller
ZERO_PREFILTER = 1e-8


@dataclass(frozen=True)
class SymbolValue:
    value: complex
    is_zero: bool
    certified: bool  # whether the zero/non-zero status is rigorous


def _rational_phases(sys: AffineSystem, x) -> list:
    x = fvec(x)
    return [vec_dot(b, x) % 1 for b in sys.digits]


def eval_symbol(sys: AffineSystem, x, q_cap: int = Q_CAP) -> SymbolValue:
    """Evaluate m(x). Rational x gets an exact zero/non-zero certificate."""
    try:
        xr = fvec(x)
    except (TypeError, ValueError):
        xr = None
    if xr is not None:
        phases = _rational_phases(sys, xr)
        val = sum(
            complex(w) * cmath.exp(2j * math.pi * float(a))
            for w, a in zip(sys.weights, phases)
        )
        if abs(val) > ZERO_PREFILTER:
            return SymbolValue(val, False, True)
        try:
            zero = vanishing_sum(sys.weights, phases, q_cap=q_cap)
        except ExactnessUnavailable:
            return SymbolValue(val, False, False)
        return SymbolValue(0j if zero else val, zero, True)
    val = eval_symbol_float(sys, np.asarray([float(c) for c in x]))
    return SymbolValue(val, False, abs(val) > ZERO_PREFILTER)


def eval_symbol_float(sys: AffineSystem, y: np.ndarray) -> complex:
    b = np.array([[float(c) for c in d] for d in sys.digits])
    w = np.array([float(x) for x in sys.weights])
    return complex(np.exp(2j * np.pi * (b @ y)) @ w)


def is_symbol_unimodular(sys: AffineSystem, x) -> bool:
    """Exact test for |m(x)| = 1 at rational x.

    A convex combination of unit vectors has modulus 1 precisely when all
    the unit vectors coincide, i.e. all phases b.x agree mod 1.
    """
    phases = _rational_phases(sys, x)
    return len(set(phases)) == 1


def eval_wb(sys: AffineSystem, x) -> float:
    sv = eval_symbol(sys, x)
    return abs(sv.value) ** 2


@dataclass(frozen=True)
class TruncationPolicy:
    """How far to unroll the infinite product and when to stop."""

    max_terms: int = 64
    tail_bound: float = 1e-12


@dataclass(frozen=True)
class MuHatValue:
    value: complex
    error_radius: float
    exact_zero: bool
    terms_used: int


def _contraction(sys: AffineSystem):
    cached = sys.__dict__.get("_mu_contraction")
    if cached is None:
        from .linalg_exact import contraction_data

        # (R^T)^{-1} has the same singular values as R^{-1}
        cached = contraction_data(sys.r_inverse.to_float())
        object.__setattr__(sys, "_mu_contraction", cached)
    return cached


def _phase_gradient(sys: AffineSystem) -> float:
    """theta = 2 pi sum_b w_b |b|, the Lipschitz bound |m(y) - 1| <= theta|y|."""
    return 2.0 * math.pi * sum(
        float(w) * math.hypot(*[float(c) for c in b])
        for w, b in zip(sys.weights, sys.digits)
    )


def eval_mu_hat(
    sys: AffineSystem, x, policy: TruncationPolicy = TruncationPolicy()
) -> MuHatValue:
    """Truncated product for mu^(x) with a certified error radius.

    Stops once the unevaluated tail provably multiplies the result by
    1 + O(tail_bound); an exactly-zero factor short-circuits to an exact
    zero. Rational x keeps the iterates (R^T)^{-n} x exact, so factor zeros
    are certified, not guessed.
    """
    exact = True
    try:
        y = fvec(x)
    except (TypeError, ValueError):
        exact = False
        y = tuple(float(c) for c in x)
    sinv = sys.r_inverse.transpose()
    sinv_f = sinv.to_float()
    big_c, c = _contraction(sys)
    theta = _phase_gradient(sys)
    xnorm = math.hypot(*[float(v) for v in y]) or 1.0
    prod = complex(1.0)
    for n in range(1, policy.max_terms + 1):
        y = sinv.mat_vec(y) if exact else tuple(sinv_f @ np.asarray(y))
        sv = eval_symbol(sys, y) if exact else SymbolValue(
            eval_symbol_float(sys, np.asarray(y)), False, False
        )
        if sv.is_zero:
            return MuHatValue(0j, 0.0, True, n)
        prod *= sv.value
        t = theta * big_c * xnorm * c ** (n + 1) / (1.0 - c)
        tail = math.expm1(t) if t < 700.0 else math.inf
        # the rounding floor 5e-14 n is reported but does not gate the
        # budget: the policy bounds the truncation tail, which is the only
        # part more terms can shrink
        err = tail + 5e-14 * (n + 1)
        if tail <= policy.tail_bound or abs(prod) < 1e-300:
            return MuHatValue(prod, err, False, n)
    raise BudgetExceeded(
        "tail bound %g not reached within %d product terms"
        % (policy.tail_bound, policy.max_terms)
    )


def invariance_residual(
    sys: AffineSystem, x, policy: TruncationPolicy = TruncationPolicy()
) -> float:
    """|mu^(x) - m(S^{-1}x) mu^(S^{-1}x)| with S = R^T; zero in exact arithmetic."""
    sinv = sys.r_inverse.transpose()
    y = sinv.mat_vec(fvec(x))
    lhs = eval_mu_hat(sys, x, policy)
    rhs = eval_mu_hat(sys, y, policy)
    m = eval_symbol(sys, y)
    return abs(lhs.value - m.value * rhs.value)


def mu_hat_grid(
    sys: AffineSystem,
    xs: np.ndarray,
    policy: TruncationPolicy = TruncationPolicy(),
) -> tuple:
    """Vectorised float evaluation of mu^ on many points.

    Returns (values, error_bound) where the single error bound covers every
    entry (it is computed from the largest |x| in the batch). Used by the
    Parseval diagnostics, where exact zero certificates are irrelevant.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    sinv_t = sys.r_inverse.transpose().to_float().T
    bmat = np.array([[float(c) for c in d] for d in sys.digits])
    wvec = np.array([float(w) for w in sys.weights])
    big_c, c = _contraction(sys)
    theta = _phase_gradient(sys)
    xnorm = max(float(np.linalg.norm(xs, axis=1).max()), 1.0)
    vals = np.ones(len(xs), dtype=complex)
    y = xs
    err = math.inf
    for n in range(1, policy.max_terms + 1):
        y = y @ sinv_t
        vals *= np.exp(2j * np.pi * (y @ bmat.T)) @ wvec
        t = theta * big_c * xnorm * c ** (n + 1) / (1.0 - c)
        tail = math.expm1(t) if t < 700.0 else math.inf
        err = tail + 5e-14 * (n + 1)  # rounding floor reported, not gated on
        if tail <= policy.tail_bound:
            return vals, err
    raise BudgetExceeded(
        "tail bound %g not reached within %d product terms"
        % (policy.tail_bound, policy.max_terms)
    )


def normalization_residual(sys_b: AffineSystem, sys_l: AffineSystem, x) -> float:
    """|sum_l W_B(sigma_l(x)) - 1| where sigma_l are the contractions of the
    dual system (R^T, L). Identically zero exactly when the digit matrix is
    unitary (the transfer operator fixes the constant 1)."""
    try:
        pts = [sys_l.tau(i, fvec(x)) for i in range(sys_l.n_digits)]
    except (TypeError, ValueError):
        rinv = sys_l.r_inverse.to_float()
        xf = np.asarray([float(c) for c in x])
        pts = [
            tuple(rinv @ (xf + np.array([float(c) for c in l])))
            for l in sys_l.digits
        ]
    total = sum(eval_wb(sys_b, p) for p in pts)
    return abs(total - 1.0)
