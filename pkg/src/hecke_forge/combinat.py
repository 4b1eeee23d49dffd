"""Base-p digits, Lucas' theorem and the sign lemma for sums of binomial products."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DigitVector:
    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if any(not 0 <= d < self.base for d in self.digits):
            raise ValueError(f"digits {self.digits} out of range for base {self.base}")

    @classmethod
    def of(cls, n: int, base: int, length: int | None = None) -> "DigitVector":
        if n < 0:
            raise ValueError("n must be non-negative")
        digits = []
        m = n
        while m:
            m, d = divmod(m, base)
            digits.append(d)
        if length is not None:
            if len(digits) > length:
                raise ValueError(f"{n} needs more than {length} base-{base} digits")
            digits += [0] * (length - len(digits))
        return cls(base, tuple(digits))

    @property
    def value(self) -> int:
        return sum(d * self.base**j for j, d in enumerate(self.digits))

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, j: int) -> int:
        return self.digits[j] if j < len(self.digits) else 0


def lucas_binom(n: int, i: int, p: int) -> int:
    """C(n, i) mod p as the product of digitwise binomials."""
    if i < 0 or n < 0:
        raise ValueError("n and i must be non-negative")
    if i > n:
        return 0
    result = 1
    while n or i:
        n, nj = divmod(n, p)
        i, ij = divmod(i, p)
        if ij > nj:
            return 0
        result = result * math.comb(nj, ij) % p
    return result


def divides_binom_by_digits(n: int, i: int, p: int) -> bool:
    """True iff some base-p digit of i exceeds the matching digit of n."""
    width = max(1, len(DigitVector.of(max(n, i), p)))
    nd = DigitVector.of(n, p, width)
    id_ = DigitVector.of(i, p, width)
    return any(nd[j] < id_[j] for j in range(width))


def _check_lemma_input(r_digits, i: int, p: int, f: int) -> int:
    r_digits = list(r_digits)
    if len(r_digits) != f:
        raise ValueError(f"expected {f} digits r_0..r_{f - 1}, got {len(r_digits)}")
    if any(rj < 0 for rj in r_digits):
        raise ValueError("r_j must be non-negative")
    q = p**f
    r = sum(rj * p**j for j, rj in enumerate(r_digits))
    if r <= 0 or r % (q - 1):
        raise ValueError(f"r = {r} must be positive and divisible by q - 1 = {q - 1}")
    if not 0 <= i < max(q - 1, 1):
        raise ValueError(f"i = {i} must lie in [0, q - 1)")
    return r


def binom_sum(r_digits, i: int, p: int, f: int) -> int:
    """Sum of prod_j C(r_j, k_j) over tuples with sum k_j p^j = i mod (q - 1), mod p.

    Literal enumeration of every tuple ``0 <= k_j <= r_j``.
    """
    _check_lemma_input(r_digits, i, p, f)
    q = p**f
    total = 0
    for ks in itertools.product(*(range(rj + 1) for rj in r_digits)):
        k = sum(kj * p**j for j, kj in enumerate(ks))
        if (k - i) % (q - 1):
            continue
        term = 1
        for rj, kj in zip(r_digits, ks):
            term = term * math.comb(rj, kj) % p
        total = (total + term) % p
    return total


def binom_sum_ring_oracle(r_digits, i: int, p: int, f: int) -> int:
    """Coefficient of x^i in prod_j (1 + x^{p^j})^{r_j} inside F_p[x]/(x^{q-1} - 1)."""
    _check_lemma_input(r_digits, i, p, f)
    n = p**f - 1

    def mul(a, b):
        out = [0] * n
        for s, x in enumerate(a):
            if x:
                for t, y in enumerate(b):
                    if y:
                        out[(s + t) % n] = (out[(s + t) % n] + x * y) % p
        return out

    def power(a, e):
        result = [1] + [0] * (n - 1)
        while e:
            if e & 1:
                result = mul(result, a)
            a = mul(a, a)
            e >>= 1
        return result

    acc = [1] + [0] * (n - 1)
    for j, rj in enumerate(r_digits):
        factor = [0] * n
        factor[0] = 1
        shift = p**j % n
        factor[shift] = (factor[shift] + 1) % p
        acc = mul(acc, power(factor, rj))
    return acc[i % n]


def binom_sum_closed_form(i: int, p: int, f: int) -> int:
    """(-1)^i mod p for 0 < i < q - 1, and 2 mod p for i = 0."""
    if i == 0:
        return 2 % p
    return 1 if i % 2 == 0 else p - 1 if p > 2 else 1
