"""Exact scalars and 2x2 matrices over a non-archimedean local field.

Two models are supported:

* :class:`EqualCharField` -- F_q((t)) with t the uniformizer.  Scalars are
  finitely supported Laurent polynomials (:class:`Laurent`); the digit lifts
  of residues are the constants, which are the Teichmuller lifts.
* :class:`QpField` -- Q_p (f = 1).  Scalars are :class:`fractions.Fraction`;
  residues lift to the integers ``0..p-1``.

Everything is exact.  Power-series quotients are only ever needed modulo a
power of the uniformizer, which is what :meth:`LocalField.div_mod` returns.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .gf import GF

INF = math.inf

EQUAL_CHAR = "equal-char"
MIXED_CHAR = "qp"


class SingularMatrixError(ZeroDivisionError):
    pass


class Laurent:
    """Laurent polynomial sum c_i t^(v+i) over F_q; immutable."""

    __slots__ = ("F", "v", "c")

    def __init__(self, F: GF, v: int, coeffs: Sequence[int]):
        # normalize: strip zeros on both ends
        lo, hi = 0, len(coeffs)
        while lo < hi and coeffs[lo] == 0:
            lo += 1
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        self.F = F
        if lo == hi:
            self.v = 0
            self.c = ()
        else:
            self.v = v + lo
            self.c = tuple(coeffs[lo:hi])

    @classmethod
    def _raw(cls, F: GF, v: int, c: tuple) -> "Laurent":
        # c must already be normalized (nonzero ends, or empty with v = 0)
        obj = object.__new__(cls)
        obj.F, obj.v, obj.c = F, v, c
        return obj

    @classmethod
    def const(cls, F: GF, a: int) -> "Laurent":
        return cls(F, 0, (a,))

    @classmethod
    def monomial(cls, F: GF, a: int, k: int) -> "Laurent":
        return cls(F, k, (a,))

    def valuation(self):
        return self.v if self.c else INF

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self.v == other.v and self.c == other.c
        if isinstance(other, int):
            return self == Laurent.const(self.F, self.F.from_int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.c))

    def _wrap(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            return other
        if isinstance(other, int):
            return Laurent.const(self.F, self.F.from_int(other))
        return NotImplemented

    def __add__(self, other):
        if type(other) is not Laurent:
            other = self._wrap(other)
            if other is NotImplemented:
                return other
        if not other.c:
            return self
        if not self.c:
            return other
        F = self.F
        lo = min(self.v, other.v)
        hi = max(self.v + len(self.c), other.v + len(other.c))
        out = [0] * (hi - lo)
        off = self.v - lo
        out[off:off + len(self.c)] = self.c
        off = other.v - lo
        tables = F.small_tables()
        if tables is not None:
            at = tables[0]
            for i, b in enumerate(other.c):
                out[off + i] = at[out[off + i]][b]
        else:
            add = F.add
            for i, b in enumerate(other.c):
                out[off + i] = add(out[off + i], b)
        return Laurent(F, lo, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.F.neg
        return Laurent._raw(self.F, self.v, tuple([neg(a) for a in self.c]))

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is not Laurent:
            other = self._wrap(other)
            if other is NotImplemented:
                return other
        sc, oc = self.c, other.c
        if not sc or not oc:
            return Laurent(self.F, 0, ())
        F = self.F
        tables = F.small_tables()
        if len(sc) == 1 and len(oc) == 1:
            prod = tables[1][sc[0]][oc[0]] if tables is not None else F.mul(sc[0], oc[0])
            return Laurent(F, self.v + other.v, (prod,))
        out = [0] * (len(sc) + len(oc) - 1)
        if tables is not None:
            at, mt = tables
            for i, a in enumerate(sc):
                if a:
                    row = mt[a]
                    for j, b in enumerate(oc):
                        if b:
                            out[i + j] = at[out[i + j]][row[b]]
        else:
            add, mul = F.add, F.mul
            for i, a in enumerate(sc):
                if a:
                    for j, b in enumerate(oc):
                        if b:
                            out[i + j] = add(out[i + j], mul(a, b))
        return Laurent(F, self.v + other.v, out)

    __rmul__ = __mul__

    def scale_const(self, a: int) -> "Laurent":
        """Multiply by the constant a in F_q."""
        if not self.c or a == 1:
            return self if a else Laurent(self.F, 0, ())
        if a == 0:
            return Laurent(self.F, 0, ())
        F = self.F
        tables = F.small_tables()
        if tables is not None:
            row = tables[1][a]
            return Laurent._raw(F, self.v, tuple([row[x] for x in self.c]))
        mul = F.mul
        return Laurent._raw(F, self.v, tuple([mul(a, x) for x in self.c]))

    def shift(self, k: int) -> "Laurent":
        """Multiply by t^k."""
        if not self.c:
            return self
        return Laurent._raw(self.F, self.v + k, self.c)

    def coeff(self, k: int) -> int:
        i = k - self.v
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __repr__(self):
        if not self.c:
            return "0"
        return " + ".join(f"{a}*t^{self.v + i}" for i, a in enumerate(self.c) if a)


class LocalField:
    """Common interface of the two local-field models."""

    mode: str
    residue_field: GF

    @property
    def p(self) -> int:
        return self.residue_field.p

    @property
    def f(self) -> int:
        return self.residue_field.f

    @property
    def q(self) -> int:
        return self.residue_field.q

    # scalar constructors
    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def uniformizer(self):
        raise NotImplementedError

    def lift(self, mu: int):
        """The digit lift [mu] in O of a residue mu in F_q."""
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def val(self, x):
        raise NotImplementedError

    def residue(self, x) -> int:
        raise NotImplementedError

    def pi_power(self, k: int):
        raise NotImplementedError

    def div_pi(self, x, k: int):
        """Exact division by pi^k."""
        raise NotImplementedError

    def div_mod(self, a, b, n: int) -> list[int]:
        """Digits (mu_0..mu_{n-1}) of a/b mod pi^n; requires v(a) >= v(b)."""
        raise NotImplementedError

    def inv_scalar(self, x):
        raise NotImplementedError

    def lift_digits(self, digits: Sequence[int]):
        """sum [mu_i] pi^i."""
        raise NotImplementedError

    # matrices
    def mat(self, a, b, c, d) -> "LocalMat":
        return LocalMat(self, self._coerce(a), self._coerce(b), self._coerce(c), self._coerce(d))

    def _coerce(self, x):
        if isinstance(x, int):
            return self.from_int(x)
        return x

    @property
    def identity(self) -> "LocalMat":
        return self.mat(1, 0, 0, 1)

    @property
    def w(self) -> "LocalMat":
        return self.mat(0, 1, 1, 0)

    @property
    def alpha(self) -> "LocalMat":
        return self.mat(1, 0, 0, self.uniformizer())

    @property
    def beta(self) -> "LocalMat":
        return self.mat(0, 1, self.uniformizer(), 0)

    def upper_unipotent(self, mu: int) -> "LocalMat":
        """(1, [mu]; 0, 1)."""
        return self.mat(self.one(), self.lift(mu), self.zero(), self.one())

    def lower_unipotent(self, mu: int) -> "LocalMat":
        """(1, 0; [mu], 1)."""
        return self.mat(self.one(), self.zero(), self.lift(mu), self.one())

    def g0(self, mu: int) -> "LocalMat":
        """(pi, [mu]; 0, 1)."""
        return self.mat(self.uniformizer(), self.lift(mu), self.zero(), self.one())

    def t12_factor(self, mu: int) -> "LocalMat":
        """(1, 0; pi[mu], pi)."""
        pi = self.uniformizer()
        return self.mat(self.one(), self.zero(), pi * self.lift(mu), pi)

    def scalar_matrix(self, x) -> "LocalMat":
        x = self._coerce(x)
        return LocalMat(self, x, self.zero(), self.zero(), x)

    def in_KZ(self, g: "LocalMat") -> bool:
        """Whether pi^(-s) g lies in GL_2(O) for some s."""
        vd = self.val(g.det())
        if vd == INF or vd % 2:
            return False
        s = vd // 2
        return min(self.val(x) for x in g.entries) >= s

    def in_IZ(self, g: "LocalMat") -> bool:
        """in_KZ plus lower-left entry divisible by pi after the central rescaling."""
        if not self.in_KZ(g):
            return False
        s = self.val(g.det()) // 2
        return self.val(g.c) >= s + 1

    def residue_matrix(self, k: "LocalMat") -> tuple[int, int, int, int]:
        """Reduction mod pi of pi^(-s) k for k in KZ, an element of GL_2(F_q)."""
        vd = self.val(k.det())
        if vd == INF or vd % 2:
            raise ValueError("matrix is not in KZ")
        s = vd // 2
        return tuple(self.residue(self.div_pi(x, s)) for x in k.entries)  # type: ignore[return-value]

    # right multiplication by the fixed factors of the Hecke operators
    def times_beta(self, g: "LocalMat") -> "LocalMat":
        """g * (0, 1; pi, 0)."""
        return g * self.beta

    def times_t12_factor(self, g: "LocalMat", lam: int) -> "LocalMat":
        """g * (1, 0; pi[lam], pi)."""
        return g * self.t12_factor(lam)

    def times_g0(self, g: "LocalMat", lam: int) -> "LocalMat":
        """g * (pi, [lam]; 0, 1)."""
        return g * self.g0(lam)

    def residue_of_dot(self, pairs, s: int) -> int:
        """Residue of pi^(-s) * sum x*y over the given (x, y) pairs."""
        total = self.zero()
        for x, y in pairs:
            total = total + x * y
        return self.residue(self.div_pi(total, s))

    def describe(self) -> dict:
        return {"mode": self.mode, "p": self.p, "f": self.f}


class EqualCharField(LocalField):
    """F_q((t))."""

    mode = EQUAL_CHAR

    def __init__(self, residue_field: GF):
        self.residue_field = residue_field
        F = residue_field
        self._zero = Laurent(F, 0, ())
        self._one = Laurent.const(F, 1)
        self._pi = Laurent.monomial(F, 1, 1)
        self._lifts = [Laurent.const(F, mu) for mu in range(F.q)]

    def __repr__(self):
        return f"EqualCharField(F_{self.q}((t)))"

    def __reduce__(self):
        return (EqualCharField, (self.residue_field,))

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def uniformizer(self):
        return self._pi

    def lift(self, mu: int):
        return self._lifts[mu]

    def from_int(self, n: int):
        return Laurent.const(self.residue_field, self.residue_field.from_int(n))

    def val(self, x: Laurent):
        return x.valuation()

    def residue(self, x: Laurent) -> int:
        if x.c and x.v < 0:
            raise ValueError("residue of an element of negative valuation")
        return x.coeff(0)

    def pi_power(self, k: int):
        return Laurent.monomial(self.residue_field, 1, k)

    def div_pi(self, x: Laurent, k: int):
        return x.shift(-k)

    def inv_scalar(self, x: Laurent):
        if len(x.c) != 1:
            raise ValueError(f"{x} is not a monomial; its inverse is not a Laurent polynomial")
        F = self.residue_field
        return Laurent.monomial(F, F.inv(x.c[0]), -x.v)

    def div_mod(self, a: Laurent, b: Laurent, n: int) -> list[int]:
        if not b.c:
            raise ZeroDivisionError("division by zero")
        if n <= 0:
            return []
        F = self.residue_field
        if not a.c:
            return [0] * n
        shift = a.v - b.v
        if shift < 0:
            raise ValueError("quotient has negative valuation")
        # long division of the unit parts, keeping n - shift terms
        need = n - shift
        out = [0] * n
        if need <= 0:
            return out
        binv = F.inv(b.c[0])
        rem = list(a.c[:need]) + [0] * max(0, need - len(a.c))
        bc = b.c
        tables = F.small_tables()
        if tables is not None:
            at, mt = tables
            negs = [F.neg(x) for x in bc]
            for i in range(need):
                ci = mt[rem[i]][binv]
                out[shift + i] = ci
                if ci:
                    row = mt[ci]
                    for j in range(1, min(len(bc), need - i)):
                        rem[i + j] = at[rem[i + j]][row[negs[j]]]
            return out
        for i in range(need):
            ci = F.mul(rem[i], binv)
            out[shift + i] = ci
            if ci:
                for j in range(1, min(len(bc), need - i)):
                    rem[i + j] = F.sub(rem[i + j], F.mul(ci, bc[j]))
        return out

    def lift_digits(self, digits: Sequence[int]):
        return Laurent(self.residue_field, 0, list(digits))

    def times_beta(self, g: "LocalMat") -> "LocalMat":
        a, b, c, d = g.entries
        return LocalMat(self, b.shift(1), a, d.shift(1), c)

    def times_t12_factor(self, g: "LocalMat", lam: int) -> "LocalMat":
        a, b, c, d = g.entries
        b1, d1 = b.shift(1), d.shift(1)
        return LocalMat(self, a + b1.scale_const(lam), b1, c + d1.scale_const(lam), d1)

    def times_g0(self, g: "LocalMat", lam: int) -> "LocalMat":
        a, b, c, d = g.entries
        return LocalMat(self, a.shift(1), a.scale_const(lam) + b, c.shift(1), c.scale_const(lam) + d)

    def residue_of_dot(self, pairs, s: int) -> int:
        # only the degree-s coefficient of each product is needed
        F = self.residue_field
        add, mul = F.add, F.mul
        total = 0
        for x, y in pairs:
            yc = y.c
            if not x.c or not yc:
                continue
            base = s - x.v - y.v
            n = len(yc)
            for i, a in enumerate(x.c):
                j = base - i
                if a and 0 <= j < n and yc[j]:
                    total = add(total, mul(a, yc[j]))
        return total


class QpField(LocalField):
    """Q_p with exact rational arithmetic."""

    mode = MIXED_CHAR

    def __init__(self, p: int):
        self.residue_field = GF(p, 1)
        self._pi = Fraction(p)

    def __repr__(self):
        return f"QpField({self.p})"

    def __reduce__(self):
        return (QpField, (self.p,))

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def uniformizer(self):
        return self._pi

    def lift(self, mu: int):
        return Fraction(mu)

    def from_int(self, n: int):
        return Fraction(n)

    def val(self, x: Fraction):
        if x == 0:
            return INF
        p = self.p
        v = 0
        n, d = x.numerator, x.denominator
        while n % p == 0:
            n //= p
            v += 1
        while d % p == 0:
            d //= p
            v -= 1
        return v

    def residue(self, x: Fraction) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ValueError("residue of an element of negative valuation")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def pi_power(self, k: int):
        return Fraction(self.p) ** k

    def div_pi(self, x, k: int):
        return x / Fraction(self.p) ** k

    def inv_scalar(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def div_mod(self, a, b, n: int) -> list[int]:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if n <= 0:
            return []
        x = Fraction(a) / Fraction(b)
        if x != 0 and self.val(x) < 0:
            raise ValueError("quotient has negative valuation")
        p = self.p
        m = p**n
        r = x.numerator * pow(x.denominator, -1, m) % m
        out = []
        for _ in range(n):
            r, d = divmod(r, p)
            out.append(d)
        return out

    def lift_digits(self, digits: Sequence[int]):
        return Fraction(sum(d * self.p**i for i, d in enumerate(digits)))


class LocalMat:
    """Invertible 2x2 matrix (a, b; c, d) over a :class:`LocalField`."""

    __slots__ = ("K", "a", "b", "c", "d")

    def __init__(self, K: LocalField, a, b, c, d):
        self.K = K
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "LocalMat") -> "LocalMat":
        if not isinstance(other, LocalMat):
            return NotImplemented
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return LocalMat(self.K, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def det(self):
        return self.a * self.d - self.b * self.c

    def inv(self) -> "LocalMat":
        det = self.det()
        if not det:
            raise SingularMatrixError("singular matrix")
        di = self.K.inv_scalar(det)
        return LocalMat(self.K, self.d * di, -self.b * di, -self.c * di, self.a * di)

    def scale(self, x) -> "LocalMat":
        return LocalMat(self.K, x * self.a, x * self.b, x * self.c, x * self.d)

    def div_pi(self, k: int) -> "LocalMat":
        K = self.K
        return LocalMat(K, *(K.div_pi(x, k) for x in self.entries))

    def __eq__(self, other):
        if not isinstance(other, LocalMat):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def make_field(p: int, f: int = 1, mode: str = EQUAL_CHAR, modulus=None) -> LocalField:
    if mode == MIXED_CHAR:
        if f != 1:
            raise ValueError("the Q_p model needs f = 1")
        if modulus is not None:
            raise ValueError("Q_p has residue field F_p; no modulus applies")
        return QpField(p)
    if mode == EQUAL_CHAR:
        return EqualCharField(GF(p, f, modulus))
    raise ValueError(f"unknown field mode {mode!r}")
