"""Exact rational arithmetic helpers: Bernoulli numbers and polynomials,
signed binomial coefficients, and a small dense polynomial over Fraction.

Bernoulli convention: B_1 = B_1(0) = -1/2 (the generating function
t*e^{xt}/(e^t - 1)).  All values are exact ``fractions.Fraction``.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb


def binom(n: int, k: int) -> int:
    """C(n, k) for n, k >= 0, and 0 whenever k < 0 or k > n."""
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def signed_binomial(a: int, k: int) -> Fraction:
    """Generalized binomial a(a-1)...(a-k+1)/k! for integer a (may be < 0).

    For a = -r this equals (-1)^k * C(r+k-1, k).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    num = 1
    for j in range(k):
        num *= a - j
    den = 1
    for j in range(2, k + 1):
        den *= j
    return Fraction(num, den)


# Bernoulli numbers via the convolution recurrence
#   sum_{k=0}^{n} C(n+1, k) B_k = 0  (n >= 1),  B_0 = 1.
# The cache only ever grows and entries are immutable, so concurrent readers
# are safe; the lock serializes extension.
_bernoulli_cache: list[Fraction] = [Fraction(1)]
_cache_lock = threading.Lock()


def bernoulli_number(n: int) -> Fraction:
    """B_n = B_n(0), exact."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n < len(_bernoulli_cache):
        return _bernoulli_cache[n]
    with _cache_lock:
        while len(_bernoulli_cache) <= n:
            m = len(_bernoulli_cache)
            acc = Fraction(0)
            for k in range(m):
                acc += comb(m + 1, k) * _bernoulli_cache[k]
            _bernoulli_cache.append(-acc / (m + 1))
    return _bernoulli_cache[n]


class RatPolynomial:
    """Dense univariate polynomial with Fraction coefficients.

    coeffs[i] is the coefficient of x^i; the top coefficient is nonzero
    unless the polynomial is zero (empty tuple).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs) -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, RatPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "RatPolynomial(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*x")
            else:
                parts.append(f"{c}*x^{i}")
        return "RatPolynomial(" + " + ".join(parts) + ")"

    def __add__(self, other: "RatPolynomial") -> "RatPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(other.coeffs):
            out[i] += c
        return RatPolynomial(out)

    def __sub__(self, other: "RatPolynomial") -> "RatPolynomial":
        return self + other.scale(-1)

    def scale(self, c) -> "RatPolynomial":
        return RatPolynomial([Fraction(c) * a for a in self.coeffs])

    def __mul__(self, other: "RatPolynomial") -> "RatPolynomial":
        if not self.coeffs or not other.coeffs:
            return RatPolynomial(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPolynomial(out)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_affine(self, a, b) -> "RatPolynomial":
        """P(a*x + b) by Horner over polynomial arithmetic."""
        a = Fraction(a)
        b = Fraction(b)
        lin = RatPolynomial([b, a])
        acc = RatPolynomial(())
        for c in reversed(self.coeffs):
            acc = acc * lin + RatPolynomial([c])
        return acc


def bernoulli_polynomial(n: int) -> RatPolynomial:
    """B_n(x) = sum_k C(n,k) B_k x^{n-k}, degree exactly n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] = comb(n, k) * bernoulli_number(k)
    return RatPolynomial(coeffs)
