"""Arithmetic in the finite field F_q = F_p[x]/(m(x)), q = p^f.

Elements are encoded as plain integers in ``[0, q)``: the coefficient vector
``(c_0, ..., c_{f-1})`` of ``c_0 + c_1 x + ... + c_{f-1} x^{f-1}`` is stored
as ``sum(c_i * p**i)``.  Scalar operations work on these integers; the
``v*`` methods are the numpy-vectorized counterparts used by the linear
algebra layer.  :class:`FieldElement` is a thin operator-overloading wrapper
for interactive and test use.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

# q^2-sized addition/multiplication tables are only built below this size.
_TABLE_LIMIT = 1024
MAX_ORDER = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


# --- dense polynomials over F_p, coefficient lists, lowest degree first ---

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a by the monic polynomial m over F_p."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k]
        if c:
            for t in range(dm + 1):
                a[k - dm + t] = (a[k - dm + t] - c * m[t]) % p
    return _poly_trim(a[:dm])


def _monic_polys(degree: int, p: int):
    for low in itertools.product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)/2."""
    d = len(m) - 1
    if d < 1:
        return False
    for e in range(1, d // 2 + 1):
        for g in _monic_polys(e, p):
            if not _poly_mod(list(m), g, p):
                return False
    return True


def default_modulus(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree f over F_p.

    Candidates ``x^f + c_{f-1}x^{f-1} + ... + c_0`` are scanned in
    lexicographic order of ``(c_{f-1}, ..., c_0)``.  Returned lowest degree
    first, including the leading 1.
    """
    for m in _monic_polys(f, p):
        if is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """The field F_{p^f} with a fixed polynomial model.

    >>> F = GF(3, 2)
    >>> F.modulus
    (1, 0, 1)
    >>> F.mul(3, 3)   # x * x = -1
    2
    """

    def __init__(self, p: int, f: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if f < 1:
            raise ValueError("f must be positive")
        q = p**f
        if q > MAX_ORDER:
            raise ValueError(f"q={q} exceeds the supported envelope q <= {MAX_ORDER}")
        if modulus is None:
            modulus = default_modulus(p, f)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f (lowest degree first)")
        if not is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.f = f
        self.q = q
        self.modulus = modulus
        self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.f})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.f, self.modulus) == (other.p, other.f, other.modulus)

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __reduce__(self):
        return (GF, (self.p, self.f, self.modulus))

    # -- encoding ---------------------------------------------------------

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.f):
            a, c = divmod(a, p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.f:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + (c % self.p)
        return v

    def _poly_mul_code(self, a: int, b: int) -> int:
        prod = [0] * (2 * self.f - 1)
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(_poly_mod(prod, list(self.modulus), self.p))

    def _build_tables(self):
        p, q = self.p, self.q
        # multiplicative group is cyclic; find a generator by brute force
        order = q - 1
        prime_factors = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
        gen = None
        for cand in range(1, q):
            if all(self._pow_slow(cand, order // r) != 1 for r in prime_factors):
                gen = cand
                break
        assert gen is not None
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for k in range(order):
            exp[k] = x
            log[x] = k
            x = self._poly_mul_code(x, gen) if self.f > 1 else (x * gen) % p
        for k in range(order, 2 * order):
            exp[k] = exp[k - order]
        self.primitive = gen
        self._exp = exp
        self._log = log
        self._np_exp = np.array(exp + [0], dtype=np.int64)
        self._np_log = np.array(log, dtype=np.int64)
        if self.f > 1:
            self._pw = np.array([p**i for i in range(self.f)], dtype=np.int64)
            if q <= _TABLE_LIMIT:
                idx = np.arange(q, dtype=np.int64)
                digits = (idx[:, None] // self._pw) % p
                s = (digits[:, None, :] + digits[None, :, :]) % p
                self._np_add = (s * self._pw).sum(axis=2)
                self._add_table = self._np_add.tolist()
                self._np_neg = np.array([self._neg_slow(a) for a in range(q)], dtype=np.int64)
            else:
                self._np_add = None
                self._add_table = None
                self._np_neg = np.array([self._neg_slow(a) for a in range(q)], dtype=np.int64)
            self._neg_list = self._np_neg.tolist()

    def small_tables(self):
        """(add, mul) lookup tables as nested lists when q <= 256, else None."""
        if self.q > 256:
            return None
        t = getattr(self, "_small_tables", None)
        if t is None:
            r = range(self.q)
            t = self._small_tables = (
                [[self.add(a, b) for b in r] for a in r],
                [[self.mul(a, b) for b in r] for a in r],
            )
        return t

    def _pow_slow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._poly_mul_code(result, base) if self.f > 1 else result * base % self.p
            base = self._poly_mul_code(base, base) if self.f > 1 else base * base % self.p
            e >>= 1
        return result

    def _neg_slow(self, a: int) -> int:
        return self.from_coeffs([-c for c in self.to_coeffs(a)])

    # -- scalar operations ------------------------------------------------

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return tuple(range(self.q))

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(range(1, self.q))

    @cached_property
    def gen(self) -> int:
        """The class of x (equal to p when f > 1, to 0 when f == 1)."""
        return self.p if self.f > 1 else 0

    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        return self.from_coeffs([x + y for x, y in zip(self.to_coeffs(a), self.to_coeffs(b))])

    def neg(self, a: int) -> int:
        if self.f == 1:
            return -a % self.p
        return self._neg_list[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.f == 1:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.f == 1:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.f == 1:
            return pow(a, e, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int, j: int = 1) -> int:
        """a^(p^j), with j read mod f."""
        return self.pow(a, self.p ** (j % self.f))

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p -> F_q."""
        return n % self.p

    def to_int(self, a: int) -> int:
        """Inverse of from_int on the prime field."""
        if a >= self.p:
            raise ValueError(f"{a} is not in the prime field")
        return a

    def power_sum(self, l: int) -> int:
        """Literal sum of mu^l over all mu in F_q (the l = 0 term sums q ones)."""
        if l < 0:
            raise ValueError("l must be non-negative")
        total = 0
        for mu in self.elements:
            total = self.add(total, self.pow(mu, l))
        return total

    def power_sum_closed_form(self, l: int) -> int:
        if l == 0:
            return 0
        return self.neg(1) if l % (self.q - 1) == 0 else 0

    # -- vectorized operations on int64 arrays ----------------------------

    def asarray(self, a) -> np.ndarray:
        return np.asarray(a, dtype=np.int64)

    def vadd(self, a, b) -> np.ndarray:
        if self.f == 1:
            return (a + b) % self.p
        if self._np_add is not None:
            return self._np_add[a, b]
        p, pw = self.p, self._pw
        da = (np.asarray(a)[..., None] // pw) % p
        db = (np.asarray(b)[..., None] // pw) % p
        return (((da + db) % p) * pw).sum(axis=-1)

    def vneg(self, a) -> np.ndarray:
        if self.f == 1:
            return (-a) % self.p
        return self._np_neg[a]

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        if self.f == 1:
            return (a * b) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        zero = (a == 0) | (b == 0)
        out = self._np_exp[self._np_log[a] + self._np_log[b]]
        return np.where(zero, 0, out)

    def _digit_stack(self, A: np.ndarray) -> list[np.ndarray]:
        return [(A // self.p**k) % self.p for k in range(self.f)]

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product over F_q."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        p = self.p
        if self.f == 1:
            return (A @ B) % p
        Ad, Bd = self._digit_stack(A), self._digit_stack(B)
        f = self.f
        conv = [None] * (2 * f - 1)
        for i in range(f):
            for j in range(f):
                term = Ad[i] @ Bd[j]
                conv[i + j] = term if conv[i + j] is None else conv[i + j] + term
        out = [conv[k] % p for k in range(f)]
        # fold x^k for k >= f using the modulus, highest degree first
        for k in range(2 * f - 2, f - 1, -1):
            c = conv[k] % p
            for t in range(f):
                mt = self.modulus[t]
                if mt:
                    idx = k - f + t
                    if idx >= f:
                        conv[idx] = conv[idx] - c * mt
                    else:
                        out[idx] = (out[idx] - c * mt) % p
        result = out[0].copy()
        for k in range(1, f):
            result = result + out[k] * p**k
        return result

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_coeffs(value))
        return FieldElement(self, self.from_int(int(value)))

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for {self}")
        return FieldElement(self, code)


class FieldElement:
    """Immutable element of a :class:`GF`."""

    __slots__ = ("field", "code")

    def __init__(self, field: GF, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.to_coeffs(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise TypeError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(self.code, b))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def frobenius(self, j: int = 1):
        return FieldElement(self.field, self.field.frobenius(self.code, j))

    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return False
        return self.code == b

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        if self.field.f == 1:
            return f"{self.code}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else (f"{c}*x" if i == 1 else f"{c}*x^{i}"))
        return " + ".join(terms) or "0"
