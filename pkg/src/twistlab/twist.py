"""Coefficient streams and twist evaluation.

A linear twist of a Dirichlet series with coefficients a(n) is
F(s, alpha) = sum a(n) e(-n alpha) n^-s; the multiplicative twist by a
character chi is F(s, chi) = sum a(n) chi(n) n^-s.  Twists are keyed by
exact reduced fractions throughout (Fraction reduces automatically), and
negative arguments use F(s, -a/q) = F(s, (q-a)/q).

For the divisor-coefficient stream (zeta(s)^2) the additive twist has a
closed Hurwitz-zeta form that continues it to the whole plane minus the
double pole at s = 1:

    sum d(n) e(-n a/q) n^-s
        = q^(-2s) sum_{u,v=1}^{q} e(-u v a/q) zeta(s, u/q) zeta(s, v/q),

which is the oracle every continued-twist computation routes through.
Generic streams only get direct/smoothed evaluation in sigma > 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable

import mpmath as mp
import numpy as np

from .special import (
    DirichletCharacter,
    PoleError,
    characters_mod,
    gauss_sum,
    hurwitz_zeta,
    unit_phase,
)


def reduce_mod_one(alpha) -> Fraction:
    """Reduced fraction representative of alpha in [0, 1)."""
    alpha = Fraction(alpha)
    return alpha - (alpha.numerator // alpha.denominator)


class CoefficientStream:
    """Dirichlet coefficients a(n) with an append-only cache.

    The cache only ever grows (single writer extends, readers see complete
    prefixes), so values up to any previously requested cap never change.
    """

    def __init__(self, fn: Callable[[int], complex], label: str = "custom"):
        self._fn = fn
        self.label = label
        self._cache: list = [0]  # index 0 unused; a(n) at index n

    def ensure(self, n_max: int) -> None:
        for n in range(len(self._cache), n_max + 1):
            self._cache.append(self._fn(n))

    def a(self, n: int):
        if n < 1:
            raise ValueError("coefficients are indexed from n = 1")
        self.ensure(n)
        return self._cache[n]

    def values(self, n_max: int) -> list:
        """[a(1), ..., a(n_max)]."""
        self.ensure(n_max)
        return self._cache[1 : n_max + 1]

    def tail_bound(self, n_max: int, sigma) -> mp.mpf:
        """Crude estimate of sum_{n > N} |a(n)| n^-sigma assuming the cached
        maximum modulus keeps holding."""
        sigma = mp.mpf(sigma)
        if sigma <= 1:
            raise ValueError("tail estimate needs sigma > 1")
        peak = max(abs(mp.mpmathify(v)) for v in self.values(n_max))
        return peak * mp.mpf(n_max) ** (1 - sigma) / (sigma - 1)

    # Hooks the evaluators use when available -------------------------------

    #: analytic continuation of the additive twist, or None
    twist_oracle: Callable | None = None

    def euler_inverse_coefficients(self, p: int) -> dict[int, int] | None:
        """Dirichlet coefficients of 1/F_p(s) supported on powers of p,
        when the stream has a known Euler factor there."""
        return None


class DivisorStream(CoefficientStream):
    """a(n) = d(n), the number of divisors; coefficients of zeta(s)^2."""

    def __init__(self):
        super().__init__(fn=None, label="divisor function")
        self._values = np.zeros(1, dtype=np.int64)

    def ensure(self, n_max: int) -> None:
        if n_max < len(self._values):
            return
        size = max(n_max + 1, 2 * len(self._values))
        counts = np.zeros(size, dtype=np.int64)
        for i in range(1, size):
            counts[i::i] += 1
        counts[0] = 0
        self._values = counts

    def a(self, n: int) -> int:
        if n < 1:
            raise ValueError("coefficients are indexed from n = 1")
        self.ensure(n)
        return int(self._values[n])

    def values(self, n_max: int) -> list:
        self.ensure(n_max)
        return self._values[1 : n_max + 1].tolist()

    def tail_bound(self, n_max: int, sigma) -> mp.mpf:
        """Integral estimate of sum_{n>N} d(n) n^-sigma from the mean value
        d(n) ~ log n + 2*gamma."""
        sigma = mp.mpf(sigma)
        if sigma <= 1:
            raise ValueError("tail estimate needs sigma > 1")
        n = mp.mpf(n_max)
        shape = mp.log(n) / (sigma - 1) + 1 / (sigma - 1) ** 2
        return n ** (1 - sigma) * (shape + 2 * mp.euler / (sigma - 1))

    @property
    def twist_oracle(self):
        return zeta2_twist_oracle

    def euler_inverse_coefficients(self, p: int) -> dict[int, int]:
        # 1/F_p(s) = (1 - p^-s)^2
        return {1: 1, p: -2, p * p: 1}


_divisor_singleton: DivisorStream | None = None


def divisor_stream(shared: bool = True) -> DivisorStream:
    """The divisor-function stream; by default a process-wide shared cache."""
    global _divisor_singleton
    if not shared:
        return DivisorStream()
    if _divisor_singleton is None:
        _divisor_singleton = DivisorStream()
    return _divisor_singleton


# ---------------------------------------------------------------------------
# Twist evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistPartialSum:
    value: mp.mpc
    tail_estimate: mp.mpf


def _phase_table(alpha: Fraction) -> list[mp.mpc]:
    """e(-r alpha) for residues r = 0..q-1."""
    q = alpha.denominator
    return [unit_phase(reduce_mod_one(-r * alpha)) for r in range(q)]


def twist_direct(
    stream: CoefficientStream, s, alpha, n_max: int = 100_000
) -> TwistPartialSum:
    """Partial sum of F(s, alpha) over n <= n_max; requires sigma > 1."""
    s = mp.mpc(s)
    if mp.re(s) <= 1:
        raise ValueError("direct twist evaluation needs sigma > 1")
    alpha = Fraction(alpha)
    q = alpha.denominator
    phases = _phase_table(alpha)
    coeffs = stream.values(n_max)
    minus_s = -s
    total = mp.mpc(0)
    for n in range(1, n_max + 1):
        c = coeffs[n - 1]
        if c == 0:
            continue
        total += c * phases[n % q] * mp.power(n, minus_s)
    return TwistPartialSum(total, stream.tail_bound(n_max, mp.re(s)))


def twist_smoothed(
    stream: CoefficientStream, s, alpha, x_smoothing, tol: mp.mpf | None = None
) -> mp.mpc:
    """Smoothed twist sum sum a(n) exp(-n z) n^-s with z = 1/X + 2 pi i alpha.

    The truncation point is chosen so the discarded exp(-n/X) tail sits below
    ``tol`` (default: a comfortable margin below the working precision).
    As X grows with sigma > 1 this converges to the direct-series limit.
    """
    s = mp.mpc(s)
    x_smoothing = mp.mpf(x_smoothing)
    if x_smoothing <= 0:
        raise ValueError("smoothing parameter X must be positive")
    if tol is None:
        tol = mp.mpf(2) ** (-(mp.mp.prec + 10))
    alpha = Fraction(alpha)
    z_re = 1 / x_smoothing
    # |a(n)| growth is subsumed by a safety factor in the cutoff
    n_max = int(mp.ceil(x_smoothing * (-mp.log(tol) + 2 * mp.log(x_smoothing + 2) + 5)))
    phases = _phase_table(alpha)
    q = alpha.denominator
    coeffs = stream.values(n_max)
    total = mp.mpc(0)
    minus_s = -s
    for n in range(1, n_max + 1):
        c = coeffs[n - 1]
        if c == 0:
            continue
        total += c * phases[n % q] * mp.exp(-n * z_re) * mp.power(n, minus_s)
    return total


def zeta2_twist_oracle(s, alpha, precision: int | None = None) -> mp.mpc:
    """Analytic continuation of the divisor-stream twist to s != 1.

    Evaluates the q^2-term Hurwitz-zeta combination at the ambient (or given)
    precision; raises PoleError at the double pole s = 1.
    """
    s = mp.mpc(s)
    if s == 1:
        raise PoleError("the twisted series has its double pole at s=1")
    alpha = reduce_mod_one(alpha)
    q = alpha.denominator
    ctx = mp.workprec(precision) if precision else mp.extraprec(0)
    with ctx:
        hurwitz = [hurwitz_zeta(s, Fraction(u, q)) for u in range(1, q + 1)]
        total = mp.mpc(0)
        for u in range(1, q + 1):
            for v in range(1, q + 1):
                phase = unit_phase(reduce_mod_one(-Fraction(u * v, 1) * alpha))
                total += phase * hurwitz[u - 1] * hurwitz[v - 1]
        return mp.power(q, -2 * s) * total


def zeta2_twist_batch(s, q: int, precision: int | None = None) -> list[mp.mpc]:
    """All continued divisor twists F(s, b/q) for b = 0..q-1 at once,
    sharing the q Hurwitz-zeta evaluations; raises PoleError at s = 1."""
    s = mp.mpc(s)
    if s == 1:
        raise PoleError("the twisted series has its double pole at s=1")
    ctx = mp.workprec(precision) if precision else mp.extraprec(0)
    with ctx:
        hurwitz = [hurwitz_zeta(s, Fraction(u, q)) for u in range(1, q + 1)]
        roots = [unit_phase(Fraction(r, q)) for r in range(q)]
        prefactor = mp.power(q, -2 * s)
        out = []
        for b in range(q):
            total = mp.mpc(0)
            for u in range(1, q + 1):
                for v in range(1, q + 1):
                    total += roots[(-u * v * b) % q] * hurwitz[u - 1] * hurwitz[v - 1]
            out.append(prefactor * total)
        return out


def mult_twist_from_additive(
    stream: CoefficientStream,
    s,
    chi: DirichletCharacter,
    n_max: int = 100_000,
) -> mp.mpc:
    """F(s, chi) = tau(conj chi)^-1 sum_a conj(chi)(a) F(s, -a/p).

    Additive twist values come from the stream's continuation oracle when it
    has one (any s != 1), else from the direct series (sigma > 1 only).
    """
    if chi.is_principal:
        raise ValueError("conversion needs a non-principal character")
    p = chi.modulus
    chi_bar = chi.conjugate()
    tau = gauss_sum(chi_bar)
    total = mp.mpc(0)
    for a in range(1, p + 1):
        alpha = reduce_mod_one(Fraction(-a, p))
        if stream.twist_oracle is not None:
            value = stream.twist_oracle(s, alpha)
        else:
            value = twist_direct(stream, s, alpha, n_max).value
        total += chi_bar.value(a) * value
    return total / tau


@dataclass(frozen=True)
class IdentityCheck:
    lhs: mp.mpc
    rhs: mp.mpc

    @property
    def difference(self) -> mp.mpf:
        return abs(self.lhs - self.rhs)


def additive_from_mult_identity_check(
    stream: CoefficientStream, s, a: int, p: int, n_max: int = 100_000
) -> IdentityCheck:
    """Both sides of the additive-from-multiplicative identity

    F(s,-a/p) = (p-1)^-1 sum_{chi != chi0} chi(a) tau(conj chi) F(s,chi)
                - (p/(p-1) 1/F_p(s) - 1) F(s)

    evaluated as truncated series over n <= n_max with sigma > 1.
    F(s)/F_p(s) is the p-free part of the series, so every sum shares one
    pass over the coefficients grouped by residue class mod p.
    """
    s = mp.mpc(s)
    if mp.re(s) <= 1:
        raise ValueError("identity check needs sigma > 1")
    if gcd(a, p) != 1:
        raise ValueError("need gcd(a, p) = 1")
    coeffs = stream.values(n_max)
    residue_sums = [mp.mpc(0) for _ in range(p)]
    minus_s = -s
    for n in range(1, n_max + 1):
        c = coeffs[n - 1]
        if c == 0:
            continue
        residue_sums[n % p] += c * mp.power(n, minus_s)

    lhs = mp.mpc(0)  # F(s, -a/p): e(-n(-a/p)) = e(na/p)
    for r in range(p):
        lhs += unit_phase(Fraction(r * a % p, p)) * residue_sums[r]

    f_full = mp.fsum(residue_sums)
    f_p_free = f_full - residue_sums[0]
    char_part = mp.mpc(0)
    for chi in characters_mod(p, include_principal=False):
        f_chi = mp.mpc(0)
        for r in range(1, p):
            f_chi += chi.value(r) * residue_sums[r]
        char_part += chi.value(a) * gauss_sum(chi.conjugate()) * f_chi
    rhs = char_part / (p - 1) - (mp.mpf(p) / (p - 1) * f_p_free - f_full)
    return IdentityCheck(lhs, rhs)


def p_free_coefficient(stream: CoefficientStream, n: int, p: int):
    """Coefficient of n^-s in F(s)/F_p(s), via convolution with the known
    inverse local factor."""
    inverse = stream.euler_inverse_coefficients(p)
    if inverse is None:
        raise ValueError(f"stream {stream.label!r} has no known Euler factor at {p}")
    total = 0
    for pk, w in inverse.items():
        if n % pk == 0:
            total += w * stream.a(n // pk)
    return total


def half_twist_coefficient_identity(
    stream: CoefficientStream, n_max: int = 10_000
) -> list[int]:
    """Exact coefficient check of the identity at p = 2, where the character
    sum is empty and F(s,-1/2) = F(s) - 2 F(s)/F_2(s) termwise:
    a(n) - 2*(p-free part)(n) must equal a(n) (-1)^n.  Returns the list of
    failing n (empty = identity holds)."""
    bad = []
    for n in range(1, n_max + 1):
        rhs = stream.a(n) - 2 * p_free_coefficient(stream, n, 2)
        lhs = stream.a(n) * (1 if n % 2 == 0 else -1)
        if lhs != rhs:
            bad.append(n)
    return bad


def reconstruct_additive_twist(s, a: int, p: int) -> IdentityCheck:
    """Round trip for the divisor stream: build every F(s, chi) from oracle
    additive twists, then reassemble F(s, -a/p) from them together with the
    closed forms F(s) = zeta(s)^2 and F_p(s) = (1 - p^-s)^-2; compares the
    result against the oracle value directly."""
    s = mp.mpc(s)
    stream = divisor_stream()
    char_part = mp.mpc(0)
    for chi in characters_mod(p, include_principal=False):
        f_chi = mult_twist_from_additive(stream, s, chi)
        char_part += chi.value(a) * gauss_sum(chi.conjugate()) * f_chi
    zeta2 = hurwitz_zeta(s, 1) ** 2
    local = (1 - mp.power(p, -s)) ** -2
    rhs = char_part / (p - 1) - (mp.mpf(p) / (p - 1) / local - 1) * zeta2
    lhs = zeta2_twist_oracle(s, Fraction(-a, p))
    return IdentityCheck(lhs, rhs)


def twist_grid_rows(
    stream: CoefficientStream,
    s_values,
    alphas,
    n_max: int = 100_000,
) -> list[tuple]:
    """Rows (sigma, t, alpha, Re, Im, method) over an s-grid and alpha list.

    Points with sigma > 1 use the direct series; other points need the
    stream's continuation oracle.
    """
    rows = []
    for s in s_values:
        s = mp.mpc(s)
        for alpha in alphas:
            alpha = Fraction(alpha)
            if mp.re(s) > 1:
                value = twist_direct(stream, s, alpha, n_max).value
                method = "direct"
            elif stream.twist_oracle is not None:
                value = stream.twist_oracle(s, alpha)
                method = "oracle"
            else:
                raise ValueError(
                    f"sigma <= 1 needs a continuation oracle (stream {stream.label!r})"
                )
            rows.append(
                (
                    mp.nstr(mp.re(s), 17),
                    mp.nstr(mp.im(s), 17),
                    str(reduce_mod_one(alpha)),
                    mp.nstr(mp.re(value), 25),
                    mp.nstr(mp.im(value), 25),
                    method,
                )
            )
    return rows
