"""Compactly induced vectors, Hecke operators and the comparison map.

Iwahori side: ind_{IZ}^G 1 with basis [[e, 1]] for canonical edges e.  The
operators act by right multiplication on the coset representative:

* T10  [[g, 1]] = [[g beta, 1]]
* T12  [[g, 1]] = sum_lam [[g (1, 0; pi[lam], pi), 1]]
* Tm10 [[g, 1]] = sum_lam [[g (pi, [lam]; 0, 1), 1]]

Spherical side: ind_{KZ}^G V with V a weight module or the theta quotient;
[g k, v] = [g, kbar v] where kbar is the residue of the rescaled witness.
"""

from __future__ import annotations

import multiprocessing
import os
import re
from typing import Sequence

import numpy as np

from .cosets import CosetSpace, EdgeRep
from .gf import GF, FieldElement
from .linalg import SparseEchelon, VectorSpaceBasis, echelonize, kernel_of, sparse_axpy
from .localfield import LocalField, LocalMat
from .weights import (
    WeightProfile,
    action_matrix,
    iota0,
    summand_decomposition,
    theta_ideal,
    x_power,
)

IWAHORI = "iwahori"
SPHERICAL = "spherical"
QUOTIENT = "quotient"

LETTERS = ("T10", "T12", "Tm10")


class SideError(TypeError):
    pass


class DepthGrowthError(AssertionError):
    pass


# --- value spaces ------------------------------------------------------------

class ScalarValues:
    """The trivial character: values are field codes."""

    kind = IWAHORI

    def __init__(self, F: GF):
        self.field = F
        self.dim = 1

    def add(self, x, y):
        return self.field.add(x, y)

    def scale(self, c, x):
        return self.field.mul(c, x)

    def is_zero(self, x):
        return x == 0

    def act(self, kbar, x):
        return x

    def coords(self, x):
        return [x]


class WeightValues:
    """Values in V_r; kbar acts through the weight action."""

    kind = SPHERICAL

    def __init__(self, profile: WeightProfile):
        self.profile = profile
        self.field = profile.field
        self.dim = profile.dim
        self._act: dict = {}

    def add(self, x, y):
        return tuple(int(a) for a in self.field.vadd(np.array(x), np.array(y)))

    def scale(self, c, x):
        return tuple(int(a) for a in self.field.vmul(np.array(x), c))

    def is_zero(self, x):
        return not any(x)

    def coords(self, x):
        return list(x)

    def action(self, kbar) -> np.ndarray:
        A = self._act.get(kbar)
        if A is None:
            A = self._act[kbar] = action_matrix(self.profile, kbar)
        return A

    def act(self, kbar, x):
        if kbar == (1, 0, 0, 1):
            return x
        return tuple(int(a) for a in self.field.matmul(self.action(kbar), np.array(x, dtype=np.int64)))

    def t_parts(self) -> tuple[list[np.ndarray], np.ndarray]:
        """Matrices x_lam and y with T[id, v] = sum [g0_{1,lam}, x_lam v] + [alpha, y v]."""
        F, prof = self.field, self.profile
        ix, iy = 0, prof.dim - 1  # X^r and Y^r coordinates
        xs = []
        for lam in F.elements:
            A = self.action((1, F.neg(lam), 0, 1))
            M = np.zeros((self.dim, self.dim), dtype=np.int64)
            M[ix] = A[ix]
            xs.append(M)
        Y = np.zeros((self.dim, self.dim), dtype=np.int64)
        Y[iy, iy] = 1
        return xs, Y


class QuotientValues(WeightValues):
    """Values in V_r / theta, in quotient coordinates.

    T acts as the direct sum of the V_0 and V_{q-1} operators transported
    through the summand decomposition.
    """

    kind = QUOTIENT

    def __init__(self, profile: WeightProfile):
        super().__init__(profile)
        self.quotient = theta_ideal(profile)
        self.dim = self.quotient.dim
        self._big = WeightValues(profile)

    def action(self, kbar) -> np.ndarray:
        A = self._act.get(kbar)
        if A is None:
            Q = self.quotient
            big = self._big.action(kbar)
            lifted = Q.lift(np.eye(self.dim, dtype=np.int64))          # rows: lifted basis
            images = self.field.matmul(lifted, big.T)                    # rows: big . lift
            A = self._act[kbar] = Q.project(images).T
        return A

    def project(self, P) -> tuple:
        coeffs = P.coeffs if hasattr(P, "coeffs") else np.asarray(P)
        return tuple(int(a) for a in self.quotient.project(coeffs))

    def t_parts(self):
        F = self.field
        dec = summand_decomposition(self.profile)
        top = WeightValues(self.profile.top_profile())
        txs, tY = top.t_parts()
        n = self.dim
        xs = []
        for tx in txs:
            S = np.zeros((n, n), dtype=np.int64)
            S[0, 0] = 1
            S[1:, 1:] = tx
            xs.append(F.matmul(dec.change, F.matmul(S, dec.inverse)))
        S = np.zeros((n, n), dtype=np.int64)
        S[0, 0] = 1
        S[1:, 1:] = tY
        return xs, F.matmul(dec.change, F.matmul(S, dec.inverse))


# --- induced vectors -----------------------------------------------------------

class InducedVector:
    """Finitely supported element of a compact induction, keyed by canonical reps."""

    __slots__ = ("values", "terms")

    def __init__(self, values, terms: dict | None = None):
        self.values = values
        self.terms = {k: v for k, v in (terms or {}).items() if not values.is_zero(v)}

    @property
    def kind(self) -> str:
        return self.values.kind

    @property
    def field(self) -> GF:
        return self.values.field

    def _check(self, other):
        if not isinstance(other, InducedVector) or other.values is not self.values and (
            other.kind != self.kind or getattr(other.values, "profile", None) != getattr(self.values, "profile", None)
        ):
            raise SideError("vectors from different induced modules")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        vs = self.values
        for k, v in other.terms.items():
            s = vs.add(out[k], v) if k in out else v
            if vs.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return InducedVector(vs, out)

    def scale(self, c) -> "InducedVector":
        c = _coerce_scalar(self.field, c)
        return InducedVector(self.values, {k: self.values.scale(c, v) for k, v in self.terms.items()})

    def __neg__(self):
        return self.scale(self.field.neg(1))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, InducedVector):
            return NotImplemented
        return self.kind == other.kind and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def depth(self) -> int:
        return max((k.depth for k in self.terms), default=-1)

    def support(self) -> list:
        return sorted(self.terms)

    def to_sparse(self) -> dict:
        """Iwahori vectors only: the dict edge -> code."""
        if self.kind != IWAHORI:
            raise SideError("only Iwahori vectors are plain sparse vectors")
        return dict(self.terms)

    def to_json(self) -> list:
        return [[str(k), self.values.coords(self.terms[k])] for k in sorted(self.terms)]

    def __repr__(self):
        body = ", ".join(f"{k}: {self.values.coords(v)}" for k, v in sorted(self.terms.items()))
        return f"InducedVector[{self.kind}]({{{body}}})"


def _coerce_scalar(F: GF, c) -> int:
    if isinstance(c, FieldElement):
        return c.code
    return F.from_int(int(c))


# --- operator words ------------------------------------------------------------

class OperatorWord:
    """Formal linear combination of words in T10, T12, Tm10 (empty word = Id).

    A word (A, B) means the composite A o B, so B is applied first.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(x for x in w if x != "Id")
            for x in w:
                if x not in LETTERS:
                    raise ValueError(f"unknown operator letter {x!r}")
            clean[w] = clean.get(w, 0) + c
        self.terms = {w: c for w, c in clean.items() if c != 0}

    @classmethod
    def letter(cls, name: str) -> "OperatorWord":
        return cls({(name,): 1})

    @classmethod
    def identity(cls) -> "OperatorWord":
        return cls({(): 1})

    @classmethod
    def zero(cls) -> "OperatorWord":
        return cls({})

    @classmethod
    def parse(cls, text: str) -> "OperatorWord":
        return _WordParser(text).parse()

    def __add__(self, other):
        other = _as_word(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return OperatorWord(t)

    __radd__ = __add__

    def __neg__(self):
        return OperatorWord({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_word(other))

    def __rsub__(self, other):
        return _as_word(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return OperatorWord({w: c * other for w, c in self.terms.items()})
        other = _as_word(other)
        t: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                t[w1 + w2] = t.get(w1 + w2, 0) + c1 * c2
        return OperatorWord(t)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self * other
        return _as_word(other) * self

    def __pow__(self, e: int):
        out = OperatorWord.identity()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, OperatorWord):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))))

    @property
    def length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            name = "*".join(w) if w else "Id"
            if c == 1:
                parts.append(f"+ {name}")
            elif c == -1:
                parts.append(f"- {name}")
            else:
                sign = "-" if isinstance(c, int) and c < 0 else "+"
                mag = -c if isinstance(c, int) and c < 0 else c
                parts.append(f"{sign} {mag}*{name}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


def _as_word(x) -> OperatorWord:
    if isinstance(x, OperatorWord):
        return x
    if isinstance(x, (int, FieldElement)):
        return OperatorWord({(): x})
    raise TypeError(f"cannot make an operator word from {x!r}")


class _WordParser:
    _token = re.compile(r"\s*(Tm10|T10|T12|Id|\d+|[()+\-*^])")

    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = self._token.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse operator word at {text[pos:]!r}")
            self.tokens.append(m.group(1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'a token'}, got {tok!r}")
        self.i += 1
        return tok

    def parse(self) -> OperatorWord:
        out = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input {self.tokens[self.i:]}")
        return out

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        out = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.factor()
        while self.peek() == "*" or self.peek() in ("(", "T10", "T12", "Tm10", "Id"):
            if self.peek() == "*":
                self.take()
            out = out * self.factor()
        return out

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            base = base ** int(self.take())
        return base

    def atom(self):
        tok = self.take()
        if tok == "(":
            e = self.expr()
            self.take(")")
            return e
        if tok.isdigit():
            return OperatorWord({(): int(tok)})
        if tok == "Id":
            return OperatorWord.identity()
        if tok in LETTERS:
            return OperatorWord.letter(tok)
        raise ValueError(f"unexpected token {tok!r}")


# --- the induced modules ---------------------------------------------------------

_WORKER = None


def _worker_images(args):
    word, edges = args
    return [_WORKER.word_image_sparse(word, e) for e in edges]


class HeckeModule:
    """ind_{IZ}^G 1 and ind_{KZ}^G V over one local field, with caches."""

    def __init__(self, K: LocalField, check_depth: bool = True, check_witness: bool = False, parallel: int = 0):
        self.K = K
        self.parallel = parallel
        self.F = K.residue_field
        self.cosets = CosetSpace(K, check=check_witness)
        self.check_witness = check_witness
        self.check_depth = check_depth
        self.scalars = ScalarValues(self.F)
        F = self.F
        self._right = {
            "T10": [K.times_beta],
            "T12": [(lambda g, lam=lam: K.times_t12_factor(g, lam)) for lam in F.elements],
            "Tm10": [(lambda g, lam=lam: K.times_g0(g, lam)) for lam in F.elements],
        }
        self._edge_cache: dict = {name: {} for name in LETTERS}
        self._sph_cache: dict = {}
        self._spaces: dict = {}

    # --- Iwahori vectors ---------------------------------------------------------
    def basis_vector(self, e: EdgeRep, c=1) -> InducedVector:
        return InducedVector(self.scalars, {e: _coerce_scalar(self.F, c)})

    def zero(self) -> InducedVector:
        return InducedVector(self.scalars)

    def identity_vector(self) -> InducedVector:
        """[[id, 1]]."""
        return self.induced(self.K.identity)

    def induced(self, g: LocalMat, c=1) -> InducedVector:
        """[[g, c]] in canonical form."""
        rep, _ = self.cosets.reduce_edge(g, witness=self.check_witness)
        return self.basis_vector(rep, c)

    def from_sparse(self, terms: dict) -> InducedVector:
        return InducedVector(self.scalars, terms)

    def _require(self, v: InducedVector, kind: str):
        if v.kind != kind:
            raise SideError(f"expected a {kind} vector, got {v.kind}")

    def letter_image(self, name: str, e: EdgeRep) -> dict:
        cache = self._edge_cache[name]
        img = cache.get(e)
        if img is None:
            F = self.F
            cos = self.cosets
            g = cos.edge_matrix(e)
            vdet = cos.edge_det_valuation(e) + 1  # every right factor has det of valuation 1
            img = {}
            for right in self._right[name]:
                rep, _ = cos.reduce_edge(right(g), witness=self.check_witness, vdet=vdet)
                s = F.add(img.get(rep, 0), 1)
                if s:
                    img[rep] = s
                else:
                    img.pop(rep, None)
            if self.check_depth:
                for rep in img:
                    if abs(rep.depth - e.depth) > 1:
                        raise DepthGrowthError(f"{name} moved {e} to {rep}")
            cache[e] = img
        return img

    def apply_letter_sparse(self, name: str, vec: dict) -> dict:
        if name == "Id":
            return dict(vec)
        out: dict = {}
        for e, c in vec.items():
            sparse_axpy(self.F, out, c, self.letter_image(name, e))
        return out

    def word_image_sparse(self, word: OperatorWord, e_or_vec) -> dict:
        vec = {e_or_vec: 1} if isinstance(e_or_vec, EdgeRep) else e_or_vec
        F = self.F
        out: dict = {}
        # share work between words with a common suffix
        memo: dict = {(): vec}
        for w, c in sorted(word.terms.items(), key=lambda t: (len(t[0]), t[0])):
            cur = vec
            for i in range(len(w) - 1, -1, -1):
                key = w[i:]
                nxt = memo.get(key)
                if nxt is None:
                    nxt = memo[key] = self.apply_letter_sparse(w[i], cur)
                cur = nxt
            sparse_axpy(F, out, _coerce_scalar(F, c), cur)
        return out

    def t10(self, v: InducedVector) -> InducedVector:
        self._require(v, IWAHORI)
        return self.from_sparse(self.apply_letter_sparse("T10", v.terms))

    def t12(self, v: InducedVector) -> InducedVector:
        self._require(v, IWAHORI)
        return self.from_sparse(self.apply_letter_sparse("T12", v.terms))

    def tm10(self, v: InducedVector) -> InducedVector:
        self._require(v, IWAHORI)
        return self.from_sparse(self.apply_letter_sparse("Tm10", v.terms))

    def eval_word(self, word, v: InducedVector) -> InducedVector:
        if isinstance(word, str):
            word = OperatorWord.parse(word)
        self._require(v, IWAHORI)
        return self.from_sparse(self.word_image_sparse(word, v.terms))

    # --- group action --------------------------------------------------------------
    def g_act(self, h: LocalMat, v: InducedVector) -> InducedVector:
        cos = self.cosets
        if v.kind == IWAHORI:
            out: dict = {}
            for e, c in v.terms.items():
                rep, _ = cos.reduce_edge(h * cos.edge_matrix(e), witness=self.check_witness)
                s = self.F.add(out.get(rep, 0), c)
                if s:
                    out[rep] = s
                else:
                    out.pop(rep)
            return InducedVector(v.values, out)
        result = InducedVector(v.values)
        for rep, val in v.terms.items():
            result = result + self.spherical(v.values, h * cos.vertex_matrix(rep), val)
        return result

    # --- spherical vectors -----------------------------------------------------------
    def value_space(self, profile: WeightProfile, quotient: bool = False):
        key = (profile, quotient)
        sp = self._spaces.get(key)
        if sp is None:
            sp = self._spaces[key] = QuotientValues(profile) if quotient else WeightValues(profile)
        return sp

    def spherical(self, space, g: LocalMat, value) -> InducedVector:
        """[g, value] in canonical form."""
        rep, k = self.cosets.reduce_vertex(g)
        kbar = self.K.residue_matrix(k)
        return InducedVector(space, {rep: space.act(kbar, tuple(int(x) for x in value))})

    def _t_data(self, space):
        data = self._sph_cache.get(id(space))
        if data is None:
            xs, Y = space.t_parts()
            K = self.K
            data = self._sph_cache[id(space)] = (
                xs,
                Y,
                [K.g0(lam) for lam in self.F.elements],
                K.alpha,
            )
        return data

    def spherical_t(self, v: InducedVector) -> InducedVector:
        if v.kind not in (SPHERICAL, QUOTIENT):
            raise SideError("spherical T needs a spherical vector")
        F = self.F
        xs, Y, g0s, alpha = self._t_data(v.values)
        out = InducedVector(v.values)
        for rep, val in v.terms.items():
            g = self.cosets.vertex_matrix(rep)
            arr = np.array(val, dtype=np.int64)
            for M, gl in zip(xs, g0s):
                out = out + self.spherical(v.values, g * gl, F.matmul(M, arr))
            out = out + self.spherical(v.values, g * alpha, F.matmul(Y, arr))
        if self.check_depth:
            for rep in out.terms:
                if rep.depth > v.depth + 1:
                    raise DepthGrowthError("spherical T grew depth by more than one")
        return out

    # --- comparison map ----------------------------------------------------------------
    def v0_class(self, profile: WeightProfile) -> tuple:
        """Class of Y^r - X^(r-p+1) Y^(p-1) in V_r / theta."""
        space = self.value_space(profile, quotient=True)
        return space.project(iota0(profile) - x_power(profile))

    def phi_compare(self, v: InducedVector, profile: WeightProfile) -> InducedVector:
        """[[g, c]] -> [g, c * class(v0)]."""
        self._require(v, IWAHORI)
        profile.require_comparison_hypotheses()
        space = self.value_space(profile, quotient=True)
        v0 = np.array(self.v0_class(profile), dtype=np.int64)
        out = InducedVector(space)
        for e, c in v.terms.items():
            out = out + self.spherical(space, self.cosets.edge_matrix(e), self.F.vmul(v0, c))
        return out

    def summand_project(self, v: InducedVector, which: str) -> InducedVector:
        if v.kind != QUOTIENT:
            raise SideError("summand projection needs quotient values")
        dec = summand_decomposition(v.values.profile)
        return InducedVector(
            v.values,
            {k: tuple(int(x) for x in dec.project(np.array(val), which)) for k, val in v.terms.items()},
        )

    # --- spans and kernels -------------------------------------------------------------
    def basis(self, depth: int) -> list[EdgeRep]:
        return self.cosets.edges(depth)

    def images(self, word: OperatorWord, edges: Sequence[EdgeRep], parallel: int | None = None) -> list[dict]:
        """Images of the given basis edges; ``parallel`` > 1 forks worker processes."""
        if parallel is None:
            parallel = self.parallel
        if parallel and parallel > 1 and len(edges) > 64 and "fork" in multiprocessing.get_all_start_methods():
            global _WORKER
            _WORKER = self
            chunks = [list(edges[i::parallel]) for i in range(parallel)]
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(parallel) as pool:
                parts = pool.map(_worker_images, [(word, ch) for ch in chunks])
            out: list = [None] * len(edges)
            for i, part in enumerate(parts):
                for j, img in enumerate(part):
                    out[i + j * parallel] = img
            return out
        return [self.word_image_sparse(word, e) for e in edges]

    def operator_span(self, word, depth: int, parallel: int | None = None) -> SparseEchelon:
        """Echelonized images of all edge basis vectors of depth <= ``depth``.

        Labels of the stored inputs are ``(str(word), edge)``.
        """
        if isinstance(word, str):
            word = OperatorWord.parse(word)
        span = SparseEchelon(self.F)
        edges = self.basis(depth)
        name = str(word)
        for e, img in zip(edges, self.images(word, edges, parallel)):
            span.add(img, (name, e))
        return span

    def dense_span(self, word, depth: int) -> tuple[VectorSpaceBasis, list[EdgeRep]]:
        """Span as a dense basis on the depth <= depth + len(word) enumeration."""
        if isinstance(word, str):
            word = OperatorWord.parse(word)
        coords = self.basis(depth + word.length)
        index = {e: i for i, e in enumerate(coords)}
        rows = []
        for e in self.basis(depth):
            row = np.zeros(len(coords), dtype=np.int64)
            for k, c in self.word_image_sparse(word, e).items():
                row[index[k]] = c
            rows.append(row)
        return echelonize(self.F, rows, len(coords)), coords

    def operator_kernel(self, word, depth: int) -> tuple[VectorSpaceBasis, list[InducedVector]]:
        """Exact kernel of the word restricted to inputs of depth <= ``depth``."""
        if isinstance(word, str):
            word = OperatorWord.parse(word)
        edges = self.basis(depth)
        imgs = [self.word_image_sparse(word, e) for e in edges]
        keys = sorted({k for img in imgs for k in img})
        index = {k: i for i, k in enumerate(keys)}
        M = np.zeros((len(keys), len(edges)), dtype=np.int64)
        for j, img in enumerate(imgs):
            for k, c in img.items():
                M[index[k], j] = c
        ker = kernel_of(self.F, M)
        vecs = [
            self.from_sparse({edges[i]: int(c) for i, c in enumerate(row) if c})
            for row in ker.rows
        ]
        return ker, vecs


def default_parallelism() -> int:
    return max(1, min(8, os.cpu_count() or 1))
