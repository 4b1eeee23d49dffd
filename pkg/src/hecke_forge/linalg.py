"""Exact linear algebra over F_q.

Dense routines (``echelonize``, ``kernel_of``, :class:`QuotientStructure`)
work on int64 numpy arrays of field codes.  :class:`SparseEchelon` handles
the large, very sparse operator images of the Hecke layer and keeps, for
every stored row, the combination of inputs that produced it so membership
answers come with a re-checkable certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Hashable, Iterable, Mapping

import numpy as np

from .gf import GF


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class VectorSpaceBasis:
    """A subspace of F_q^n given by its reduced row-echelon basis."""

    field: GF
    ambient_dim: int
    rows: np.ndarray
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def __eq__(self, other):
        if not isinstance(other, VectorSpaceBasis):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.rows, other.rows)
        )

    __hash__ = None

    def contains(self, v) -> bool:
        return membership(v, self)[0]

    def reduce(self, v) -> np.ndarray:
        """Residue of v after clearing the pivot columns."""
        v = np.asarray(v, dtype=np.int64)
        if not self.pivots:
            return v.copy()
        coeffs = v[..., list(self.pivots)]
        return self.field.vsub(v, self.field.matmul(coeffs, self.rows))


def _as_matrix(vectors, ambient_dim: int | None) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        M = vectors.astype(np.int64, copy=True)
    else:
        vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
        if not vectors:
            if ambient_dim is None:
                raise DimensionError("ambient_dim is required for an empty vector list")
            return np.zeros((0, ambient_dim), dtype=np.int64)
        dims = {v.shape for v in vectors}
        if len(dims) != 1 or len(next(iter(dims))) != 1:
            raise DimensionError(f"vectors of mismatched shapes {sorted(dims)}")
        M = np.stack(vectors)
    if ambient_dim is not None and M.shape[1] != ambient_dim:
        raise DimensionError(f"expected ambient dimension {ambient_dim}, got {M.shape[1]}")
    return M


def rref(F: GF, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of M (rows), returning (R, pivot columns)."""
    R = np.array(M, dtype=np.int64, copy=True)
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        inv = F.inv(int(R[row, col]))
        if inv != 1:
            R[row] = F.vmul(R[row], inv)
        others = np.nonzero(R[:, col])[0]
        others = others[others != row]
        if others.size:
            factors = R[others, col]
            R[others] = F.vsub(R[others], F.vmul(factors[:, None], R[row][None, :]))
        pivots.append(col)
        row += 1
    return R[:row], pivots


def echelonize(F: GF, vectors, ambient_dim: int | None = None) -> VectorSpaceBasis:
    M = _as_matrix(vectors, ambient_dim)
    R, pivots = rref(F, M)
    return VectorSpaceBasis(F, M.shape[1], R, tuple(pivots))


def rank(F: GF, vectors, ambient_dim: int | None = None) -> int:
    return echelonize(F, vectors, ambient_dim).rank


def membership(v, basis: VectorSpaceBasis) -> tuple[bool, np.ndarray | None]:
    """Whether v lies in the span; if so also the coefficients on ``basis.rows``."""
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (basis.ambient_dim,):
        raise DimensionError(f"vector of shape {v.shape} vs ambient dimension {basis.ambient_dim}")
    if basis.rank == 0:
        return (not v.any(), np.zeros(0, dtype=np.int64) if not v.any() else None)
    coeffs = v[list(basis.pivots)]
    residue = basis.field.vsub(v, basis.field.matmul(coeffs, basis.rows))
    if residue.any():
        return False, None
    return True, coeffs


def kernel_of(F: GF, matrix) -> VectorSpaceBasis:
    """Right null space {k : matrix @ k = 0} in reduced row-echelon form."""
    A = np.asarray(matrix, dtype=np.int64)
    if A.ndim != 2:
        raise DimensionError("matrix must be two-dimensional")
    m, n = A.shape
    R, pivots = rref(F, A) if m else (np.zeros((0, n), dtype=np.int64), [])
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free:
        k = np.zeros(n, dtype=np.int64)
        k[fc] = 1
        for i, pc in enumerate(pivots):
            k[pc] = F.neg(int(R[i, fc]))
        basis.append(k)
    return echelonize(F, basis, n)


class QuotientStructure:
    """F_q^n modulo a subspace, with the non-pivot columns as coordinates."""

    def __init__(self, subspace: VectorSpaceBasis):
        self.subspace = subspace
        self.field = subspace.field
        self.ambient_dim = subspace.ambient_dim
        piv = set(subspace.pivots)
        self.complement_columns = tuple(c for c in range(self.ambient_dim) if c not in piv)

    @property
    def dim(self) -> int:
        return len(self.complement_columns)

    def project(self, v) -> np.ndarray:
        """Quotient coordinates of v (works row-wise on 2-d input)."""
        r = self.subspace.reduce(v)
        return r[..., list(self.complement_columns)]

    def lift(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        out = np.zeros(coords.shape[:-1] + (self.ambient_dim,), dtype=np.int64)
        out[..., list(self.complement_columns)] = coords
        return out

    def is_zero(self, v) -> bool:
        return not self.project(v).any()


# --- sparse vectors: dict column -> nonzero field code ----------------------

SparseVec = dict


def sparse_axpy(F: GF, y: dict, a: int, x: Mapping) -> None:
    """y += a*x in place, pruning zeros."""
    if a == 0:
        return
    add, mul = F.add, F.mul
    for k, v in x.items():
        s = add(y.get(k, 0), mul(a, v))
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def sparse_scale(F: GF, a: int, x: Mapping) -> dict:
    if a == 0:
        return {}
    return {k: F.mul(a, v) for k, v in x.items()}


@dataclass
class MembershipResult:
    member: bool
    combination: dict = dc_field(default_factory=dict)
    residue: dict = dc_field(default_factory=dict)


class SparseEchelon:
    """Incrementally built echelon basis of a span of sparse vectors.

    Each stored row has a distinct leading (smallest) column with entry 1 and
    carries the linear combination of the added inputs (keyed by their
    labels) that equals it.  Rows are not fully reduced, which keeps fill-in
    low on the tree-local operator images this is used for.
    """

    def __init__(self, F: GF, track: bool = True):
        self.field = F
        self.track = track
        self.rows: dict[int, dict] = {}
        self.combos: dict[int, dict] = {}
        self.inputs: dict[Hashable, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: Mapping, combo: dict | None) -> tuple[dict, dict | None]:
        F = self.field
        v = dict(vec)
        rows = self.rows
        while v:
            lead = min(v)
            row = rows.get(lead)
            if row is None:
                # look for any pivot further along the support
                hit = None
                for c in sorted(v):
                    if c in rows:
                        hit = c
                        break
                if hit is None:
                    break
                lead = hit
                row = rows[lead]
            c = F.neg(v[lead])
            sparse_axpy(F, v, c, row)
            if combo is not None:
                sparse_axpy(F, combo, c, self.combos[lead])
        return v, combo

    def add(self, vec: Mapping, label: Hashable) -> bool:
        """Insert a labelled input vector; returns True if the rank grew."""
        F = self.field
        if label in self.inputs:
            raise KeyError(f"duplicate label {label!r}")
        self.inputs[label] = dict(vec)
        combo = {label: 1} if self.track else None
        v, combo = self._reduce(vec, combo)
        if not v:
            return False
        lead = min(v)
        assert lead not in self.rows
        inv = F.inv(v[lead])
        self.rows[lead] = sparse_scale(F, inv, v)
        if combo is not None:
            self.combos[lead] = sparse_scale(F, inv, combo)
        return True

    def extend(self, items: Iterable[tuple[Hashable, Mapping]]) -> None:
        for label, vec in items:
            self.add(vec, label)

    def test(self, vec: Mapping) -> MembershipResult:
        """Membership of vec in the span, with the certifying combination.

        The combination is over input labels with ``vec == sum c_l * input_l``.
        """
        F = self.field
        combo = {} if self.track else None
        residue, combo = self._reduce(vec, combo)
        if residue:
            return MembershipResult(False, {}, residue)
        # _reduce subtracts rows; the target equals minus the accumulated combo
        return MembershipResult(True, {k: F.neg(c) for k, c in (combo or {}).items()}, {})

    def reduce(self, vec: Mapping) -> dict:
        return self._reduce(vec, None)[0]

    def verify(self, vec: Mapping, combination: Mapping) -> bool:
        """Re-expand a certificate from the stored inputs and compare."""
        acc: dict = {}
        for label, c in combination.items():
            sparse_axpy(self.field, acc, c, self.inputs[label])
        return acc == {k: v for k, v in vec.items() if v}
