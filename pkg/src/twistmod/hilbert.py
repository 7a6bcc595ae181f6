"""One-parameter subgroups and numerical stability weights.

A one-parameter subgroup of SL(H) is stored by its eigenspace pieces
(H_i, a_i): lambda(t) acts on H_i as t^(a_i), with strictly decreasing
integer weights and sum(a_i dim H_i) = 0.  Conjugating a module into the
adapted basis splits its coordinate matrices into blocks; block (i, j)
rescales by t^(e_ij) with exponent e_ij = -(a_i + a_j).

The weight of the pairing (lambda, q) is mu = -min e_ij over nonzero
blocks = max(a_i + a_j), and the limit of lambda(t).q at t -> 0 exists
exactly when mu <= 0 (all exponents of nonzero blocks nonnegative); the
limit keeps the exponent-zero blocks and kills the rest.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import InternalCheckError, IsotropyError, ShapeError
from .linalg import Matrix, Subspace, complement_in
from .sigmamod import TOTALLY_ISOTROPIC, SigmaModule, isotropy_class, orthogonal, validate


class MinusInfinityType:
    """Sentinel below every integer; the weight of the zero module."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __neg__(self):
        raise ArithmeticError("cannot negate -infinity")

    def __repr__(self):
        return "-infinity"


MINUS_INFINITY = MinusInfinityType()


class OneParamSubgroup:
    """Eigenspace pieces with strictly decreasing weights, det-one.

    The constructor canonicalizes: pieces are sorted by weight
    (descending) and pieces of equal weight are merged, so two subgroups
    are equal iff they define the same weighted decomposition.
    """

    __slots__ = ("field", "ambient", "pieces")

    def __init__(self, pieces):
        pieces = list(pieces)
        if not pieces:
            raise ShapeError("a one-parameter subgroup needs at least one piece")
        field = pieces[0][0].field
        ambient = pieces[0][0].ambient
        merged: dict[int, Subspace] = {}
        for sub, weight in pieces:
            if sub.field != field or sub.ambient != ambient:
                raise ShapeError("pieces live in different spaces")
            if sub.is_zero():
                raise ShapeError("pieces must be nonzero")
            if not isinstance(weight, int):
                raise ShapeError("weights must be integers")
            merged[weight] = merged[weight].sum(sub) if weight in merged else sub
        ordered = tuple(
            (merged[wt], wt) for wt in sorted(merged, reverse=True)
        )
        total = sum(s.dim for s, _ in ordered)
        stacked = Matrix(field, [r for s, _ in ordered for r in s.basis.rows])
        if total != ambient or stacked.rank() != ambient:
            raise ShapeError("pieces are not a direct sum decomposition")
        if sum(wt * s.dim for s, wt in ordered) != 0:
            raise ShapeError("weighted dimensions must sum to zero")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "pieces", ordered)

    def __setattr__(self, name, value):
        raise AttributeError("OneParamSubgroup is immutable")

    @classmethod
    def trivial(cls, field, ambient: int):
        return cls([(Subspace.full(field, ambient), 0)])

    @classmethod
    def from_diagonal_weights(cls, field, weights):
        """Pieces spanned by standard basis vectors grouped by weight."""
        n = len(weights)
        groups: dict[int, list] = {}
        for i, wt in enumerate(weights):
            row = [field.one if j == i else field.zero for j in range(n)]
            groups.setdefault(wt, []).append(row)
        return cls([(Subspace(field, n, rows), wt) for wt, rows in groups.items()])

    @property
    def weights(self):
        return tuple(wt for _, wt in self.pieces)

    def __eq__(self, other):
        return isinstance(other, OneParamSubgroup) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        body = ", ".join(f"(dim {s.dim}, wt {w})" for s, w in self.pieces)
        return f"OneParamSubgroup[{body}]"

    def adapted_rows(self) -> Matrix:
        """The adapted basis, one piece after another, as matrix rows."""
        return Matrix(self.field, [r for s, _ in self.pieces for r in s.basis.rows])

    def transform(self) -> Matrix:
        """Change-of-basis matrix T whose columns are the adapted basis."""
        return self.adapted_rows().transpose()

    def matrix_at(self, t) -> Matrix:
        """The group element lambda(t) for an invertible field element t."""
        f = self.field
        if t == f.zero:
            raise ShapeError("lambda(t) needs invertible t")
        diag_entries = []
        for sub, wt in self.pieces:
            base = t if wt >= 0 else f.inv(t)
            value = f.one
            for _ in range(abs(wt)):
                value = f.mul(value, base)
            diag_entries.extend([value] * sub.dim)
        n = self.ambient
        diag = Matrix(
            f,
            [
                [diag_entries[i] if i == j else f.zero for j in range(n)]
                for i in range(n)
            ],
        )
        t_mat = self.transform()
        return t_mat.mul(diag).mul(t_mat.inverse())


class BlockInfo(NamedTuple):
    exponent: int
    is_zero: bool


def adapted_forms(lam: OneParamSubgroup, q: SigmaModule):
    """The coordinate matrices of q written in the adapted basis of lam."""
    _check_pairing(lam, q)
    t = lam.transform()
    tt = t.transpose()
    return tuple(tt.mul(b).mul(t) for b in q.forms)


def block_exponents(lam: OneParamSubgroup, q: SigmaModule) -> dict:
    """Map (i, j) -> BlockInfo for every ordered pair of pieces.

    Indices are 0-based positions in ``lam.pieces``; a block counts as
    zero only when it vanishes in every W-coordinate.
    """
    forms = adapted_forms(lam, q)
    field = q.field
    offsets = []
    pos = 0
    for sub, _ in lam.pieces:
        offsets.append((pos, pos + sub.dim))
        pos += sub.dim
    out = {}
    weights = lam.weights
    for i, (r0, r1) in enumerate(offsets):
        for j, (c0, c1) in enumerate(offsets):
            is_zero = all(
                b[r][c] == field.zero
                for b in forms
                for r in range(r0, r1)
                for c in range(c0, c1)
            )
            out[(i, j)] = BlockInfo(-(weights[i] + weights[j]), is_zero)
    return out


def mu(lam: OneParamSubgroup, q: SigmaModule):
    """The pairing weight: max(a_i + a_j) over nonzero blocks.

    Equals -min of the nonzero-block exponents; MINUS_INFINITY for the
    zero module, which every subgroup destabilizes.
    """
    blocks = block_exponents(lam, q)
    finite = [-info.exponent for info in blocks.values() if not info.is_zero]
    if not finite:
        return MINUS_INFINITY
    return max(finite)


def limit_at_zero(lam: OneParamSubgroup, q: SigmaModule):
    """The limit of lambda(t).q at t -> 0, or None when it diverges.

    Exists iff every nonzero block has nonnegative exponent (mu <= 0);
    the limit keeps exactly the exponent-zero blocks.
    """
    _check_pairing(lam, q)
    value = mu(lam, q)
    if value is not MINUS_INFINITY and value > 0:
        return None
    forms = adapted_forms(lam, q)
    field = q.field
    offsets = []
    pos = 0
    for sub, _ in lam.pieces:
        offsets.append((pos, pos + sub.dim))
        pos += sub.dim
    weights = lam.weights
    kept = []
    for b in forms:
        rows = [list(r) for r in b.rows]
        for i, (r0, r1) in enumerate(offsets):
            for j, (c0, c1) in enumerate(offsets):
                if weights[i] + weights[j] != 0:
                    for r in range(r0, r1):
                        for c in range(c0, c1):
                            rows[r][c] = field.zero
        kept.append(Matrix(field, rows))
    t = lam.transform()
    ti = t.inverse()
    tit = ti.transpose()
    back = [tit.mul(b).mul(ti) for b in kept]
    limit = SigmaModule(q.field, q.dim_h, q.w, q.sign, back)
    if not validate(limit):
        raise InternalCheckError("limit broke the symmetry relation")
    return limit


def destabilizing_1ps(q: SigmaModule, v: Subspace) -> OneParamSubgroup:
    """The standard subgroup attached to a totally isotropic subspace.

    With d = dim v, h1 = dim(perp/v) and n = dim H, the weights are
    m1 = 2n - 2d - h1 on v, m2 = n - 2d - h1 on a complement of v inside
    its orthogonal and m3 = -2d - h1 on a complement of the orthogonal;
    empty pieces are dropped.  m2 = n - d - dim(perp), so mu = 2 m2 turns
    negative exactly on witnesses of instability.
    """
    if isotropy_class(q, v) != TOTALLY_ISOTROPIC:
        raise IsotropyError("destabilizing subgroup needs a totally isotropic subspace")
    n = q.dim_h
    d = v.dim
    perp = orthogonal(q, v)
    middle = complement_in(v, perp)
    outer = complement_in(perp, Subspace.full(q.field, n))
    h1 = middle.dim
    m1 = 2 * n - 2 * d - h1
    m2 = n - 2 * d - h1
    m3 = -2 * d - h1
    pieces = [(v, m1)]
    if middle.dim:
        pieces.append((middle, m2))
    if outer.dim:
        pieces.append((outer, m3))
    return OneParamSubgroup(pieces)


def _check_pairing(lam: OneParamSubgroup, q: SigmaModule):
    if lam.field != q.field or lam.ambient != q.dim_h:
        raise ShapeError("subgroup and module live in different spaces")
