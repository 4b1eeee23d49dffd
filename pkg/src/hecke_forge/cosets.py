"""Canonical representatives of G/KZ (tree vertices) and G/IZ (oriented edges).

Vertices: side 0 is g0_{n,mu} = (pi^n, sum [mu_i] pi^i; 0, 1), side 1 is
g1_{n,mu} = (1, 0; pi * sum [mu_i] pi^i, pi^(n+1)).  Edges are vertex * fiber
with fiber in {(1, 0; [lam], 1)} or w; the fiber is stored as ``lam`` or
:data:`W`.

Enumeration order is (side, n, digits, fiber) with w before the lower
unipotent fibers.  That order is the column order of every operator matrix.
"""

from __future__ import annotations

import itertools
import re
from typing import NamedTuple

from .localfield import EQUAL_CHAR, INF, LocalField, LocalMat, SingularMatrixError

W = -1  # fiber code of the Weyl element


class VertexRep(NamedTuple):
    side: int
    n: int
    digits: tuple

    def __str__(self):
        return f"v{self.side}:{self.n}:[{','.join(map(str, self.digits))}]"

    @property
    def depth(self) -> int:
        return self.n


class EdgeRep(NamedTuple):
    vertex: VertexRep
    fiber: int

    def __str__(self):
        return f"e:{self.vertex}:{'w' if self.fiber == W else self.fiber}"

    @property
    def depth(self) -> int:
        return self.vertex.n


_VERTEX_RE = re.compile(r"^v([01]):(\d+):\[([0-9,]*)\]$")


def parse_vertex(s: str) -> VertexRep:
    m = _VERTEX_RE.match(s)
    if not m:
        raise ValueError(f"not a vertex string: {s!r}")
    digits = tuple(int(x) for x in m.group(3).split(",")) if m.group(3) else ()
    n = int(m.group(2))
    if len(digits) != n:
        raise ValueError(f"level {n} needs {n} digits: {s!r}")
    return VertexRep(int(m.group(1)), n, digits)


def parse_edge(s: str) -> EdgeRep:
    if not s.startswith("e:"):
        raise ValueError(f"not an edge string: {s!r}")
    body, _, fib = s[2:].rpartition(":")
    return EdgeRep(parse_vertex(body), W if fib == "w" else int(fib))


class CosetSpace:
    """Representatives, reduction and enumeration for one local field."""

    def __init__(self, K: LocalField, check: bool = True):
        self.K = K
        self.q = K.q
        self.check = check
        self._vertex_mats: dict[VertexRep, LocalMat] = {}
        self._vertex_inv: dict[VertexRep, LocalMat] = {}
        self._edge_mats: dict[EdgeRep, LocalMat] = {}
        self._laurent = K.mode == EQUAL_CHAR

    # --- materialization ---------------------------------------------------
    def vertex_matrix(self, v: VertexRep) -> LocalMat:
        m = self._vertex_mats.get(v)
        if m is None:
            K = self.K
            mu = K.lift_digits(v.digits)
            pi = K.uniformizer()
            if v.side == 0:
                m = K.mat(K.pi_power(v.n), mu, K.zero(), K.one())
            else:
                m = K.mat(K.one(), K.zero(), pi * mu, K.pi_power(v.n + 1))
            self._vertex_mats[v] = m
        return m

    def vertex_inverse(self, v: VertexRep) -> LocalMat:
        m = self._vertex_inv.get(v)
        if m is None:
            K = self.K
            mu = K.lift_digits(v.digits)
            ninv = K.pi_power(-v.n)
            if v.side == 0:
                m = K.mat(ninv, -(mu * ninv), K.zero(), K.one())
            else:
                m = K.mat(K.one(), K.zero(), -(mu * ninv), K.pi_power(-v.n - 1))
            self._vertex_inv[v] = m
        return m

    def fiber_matrix(self, fiber: int) -> LocalMat:
        K = self.K
        return K.w if fiber == W else K.lower_unipotent(fiber)

    def fiber_inverse(self, fiber: int) -> LocalMat:
        K = self.K
        if fiber == W:
            return K.w
        return K.mat(K.one(), K.zero(), -K.lift(fiber), K.one())

    def edge_matrix(self, e: EdgeRep) -> LocalMat:
        m = self._edge_mats.get(e)
        if m is None:
            vm = self.vertex_matrix(e.vertex)
            if e.fiber == W:
                m = LocalMat(self.K, vm.b, vm.a, vm.d, vm.c)
            elif self._laurent:
                lam = e.fiber
                m = LocalMat(self.K, vm.a + vm.b.scale_const(lam), vm.b, vm.c + vm.d.scale_const(lam), vm.d)
            else:
                m = vm * self.fiber_matrix(e.fiber)
            self._edge_mats[e] = m
        return m

    def edge_det_valuation(self, e: EdgeRep) -> int:
        return e.vertex.n + e.vertex.side

    def materialize(self, rep) -> LocalMat:
        return self.edge_matrix(rep) if isinstance(rep, EdgeRep) else self.vertex_matrix(rep)

    # --- reduction ---------------------------------------------------------
    def reduce_vertex(self, g: LocalMat, witness: bool = True, vdet=None) -> tuple[VertexRep, LocalMat | None]:
        """(rep, k) with g = rep * k and k in KZ.

        ``witness=False`` skips computing k (returned as None); ``vdet`` may
        pass a known valuation of det(g).
        """
        K = self.K
        val = K.val
        a, b, c, d = g.entries
        if vdet is None:
            vdet = val(g.det())
        if vdet == INF:
            raise SingularMatrixError(f"singular matrix {g}")
        vc, vd = val(c), val(d)
        k = min(vc, vd)
        n = vdet - 2 * k
        if vd <= vc:
            num, den = b, d
        else:
            num, den = a, c
        if n >= 0 and val(num) >= val(den):
            rep = VertexRep(0, n, tuple(K.div_mod(num, den, n)))
        else:
            va, vb = val(a), val(b)
            k1 = min(va, vb)
            n1 = vdet - 2 * k1  # level + 1
            if va <= vb:
                num, den = c, a
            else:
                num, den = d, b
            if n1 < 1 or val(num) - val(den) < 1:
                raise AssertionError(f"lattice of {g} fits neither side")  # pragma: no cover
            digits = K.div_mod(num, den, n1)
            rep = VertexRep(1, n1 - 1, tuple(digits[1:]))
        if not witness:
            return rep, None
        kz = self.vertex_inverse(rep) * g
        if self.check and not K.in_KZ(kz):
            raise AssertionError(f"reduction witness of {g} is not in KZ")  # pragma: no cover
        return rep, kz

    def reduce_edge(self, g: LocalMat, witness: bool = True, vdet=None) -> tuple[EdgeRep, LocalMat | None]:
        """(rep, k) with g = rep * k and k in IZ."""
        K = self.K
        F = K.residue_field
        if vdet is None:
            vdet = K.val(g.det())
        v, kz = self.reduce_vertex(g, witness, vdet)
        if kz is None and self._laurent:
            a, c = self._first_column_residue(v, g, vdet)
            return EdgeRep(v, F.div(c, a) if a else W), None
        if kz is None:
            # only the first column residue of the KZ witness is needed
            vi = self.vertex_inverse(v)
            s = (vdet - v.n - v.side) // 2  # half the valuation of det(vi * g)
            a = K.residue_of_dot(((vi.a, g.a), (vi.b, g.c)), s)
            c = K.residue_of_dot(((vi.c, g.a), (vi.d, g.c)), s)
            return EdgeRep(v, F.div(c, a) if a else W), None
        a, _, c, _ = K.residue_matrix(kz)
        fiber = F.div(c, a) if a else W
        k = self.fiber_inverse(fiber) * kz
        if self.check and not self.K.in_IZ(k):
            raise AssertionError(f"reduction witness of {g} is not in IZ")  # pragma: no cover
        return EdgeRep(v, fiber), k

    def _first_column_residue(self, v: VertexRep, g: LocalMat, vdet: int) -> tuple[int, int]:
        """Residue of the first column of pi^(-s) v^(-1) g, read off Laurent coefficients."""
        F = self.K.residue_field
        add, mul, neg = F.add, F.mul, F.neg
        n, mu = v.n, v.digits
        ga, gc = g.a, g.c
        if v.side == 0:
            # v^(-1) = (pi^-n, -mu pi^-n; 0, 1)
            s = (vdet - n) // 2
            top = ga.coeff(n + s)
            for i, m in enumerate(mu):
                if m:
                    top = add(top, neg(mul(m, gc.coeff(n + s - i))))
            return top, gc.coeff(s)
        # v^(-1) = (1, 0; -mu pi^-n, pi^-(n+1))
        s = (vdet - n - 1) // 2
        bottom = gc.coeff(n + 1 + s)
        for i, m in enumerate(mu):
            if m:
                bottom = add(bottom, neg(mul(m, ga.coeff(n + s - i))))
        return ga.coeff(s), bottom

    # --- enumeration -------------------------------------------------------
    def vertices(self, depth: int) -> list[VertexRep]:
        if depth < 0:
            raise ValueError("depth must be non-negative")
        out = []
        for side in (0, 1):
            for n in range(depth + 1):
                for digits in itertools.product(range(self.q), repeat=n):
                    out.append(VertexRep(side, n, digits))
        return out

    def fibers(self) -> list[int]:
        return [W] + list(range(self.q))

    def edges(self, depth: int) -> list[EdgeRep]:
        fibers = self.fibers()
        return [EdgeRep(v, fb) for v in self.vertices(depth) for fb in fibers]

    def enumerate(self, depth: int, kind: str = "edge") -> list:
        if kind == "vertex":
            return self.vertices(depth)
        if kind == "edge":
            return self.edges(depth)
        raise ValueError(f"kind must be 'vertex' or 'edge', not {kind!r}")

    def vertex_count(self, depth: int) -> int:
        return 2 * sum(self.q**n for n in range(depth + 1))

    def edge_count(self, depth: int) -> int:
        return (self.q + 1) * self.vertex_count(depth)

    # --- distinctness helpers ----------------------------------------------
    def same_vertex(self, r1: VertexRep, r2: VertexRep) -> bool:
        return self.K.in_KZ(self.vertex_inverse(r1) * self.vertex_matrix(r2))

    def same_edge(self, e1: EdgeRep, e2: EdgeRep) -> bool:
        m1 = self.fiber_inverse(e1.fiber) * self.vertex_inverse(e1.vertex)
        return self.K.in_IZ(m1 * self.edge_matrix(e2))
