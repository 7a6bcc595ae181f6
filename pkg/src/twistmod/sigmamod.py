"""Twisted bilinear modules: validation, orthogonals, isotropy, reduction.

A module here is a linear map q: H -> H* (x) W where the value space W
carries an involution sigma.  In coordinates q is a list of dim_w square
matrices: the k-th coordinate of q(x)(y) is x^T B_k y.  The defining
symmetry q(x)(y) = sign * sigma(q(y)(x)) becomes, with S the matrix of
sigma (so sigma(w_k) = sum_l S[l][k] w_l),

    B_l = sign * sum_k S[l][k] * B_k^T        for every l.

Sign +1 gives the quadratic flavour, -1 the alternating one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .errors import (
    FieldError,
    InternalCheckError,
    IsotropyError,
    ShapeError,
    SingularMatrixError,
)
from .linalg import Matrix, Subspace, complement_in, vectors_of

NOT_ISOTROPIC = "not_isotropic"
SIGMA_ISOTROPIC = "sigma_isotropic"
TOTALLY_ISOTROPIC = "totally_sigma_isotropic"


class InvolutionSpace:
    """A finite-dimensional value space W with an involution sigma."""

    __slots__ = ("field", "matrix")

    def __init__(self, field, matrix: Matrix):
        if not matrix.is_square() or matrix.nrows == 0:
            raise ShapeError("involution matrix must be square and nonempty")
        if matrix.field != field:
            raise FieldError("involution matrix over the wrong field")
        if matrix.mul(matrix) != Matrix.identity(field, matrix.nrows):
            raise ShapeError("involution not idempotent")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("InvolutionSpace is immutable")

    @classmethod
    def trivial(cls, field):
        return cls(field, Matrix.identity(field, 1))

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    def __eq__(self, other):
        return (
            isinstance(other, InvolutionSpace)
            and self.field == other.field
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash(("W", self.matrix))

    def __repr__(self):
        return f"InvolutionSpace(dim {self.dim})"


def twisted_transpose(w: InvolutionSpace, sign: int, mats):
    """Apply the sigma-twisted transpose to a tuple of coordinate matrices."""
    s = w.matrix
    out = []
    for l in range(w.dim):
        acc = None
        for k in range(w.dim):
            if s[l][k] == w.field.zero:
                continue
            term = mats[k].transpose().scale(s[l][k])
            acc = term if acc is None else acc + term
        if acc is None:
            acc = Matrix.zeros(w.field, mats[0].ncols, mats[0].nrows)
        out.append(acc if sign == 1 else -acc)
    return tuple(out)


class SigmaModule:
    """A twisted module (H, q) in coordinates.

    ``forms[k]`` is the dim_h x dim_h matrix of the k-th W-coordinate of
    q.  The constructor checks shapes only; whether the symmetry relation
    holds is a separate question answered by :func:`validate`.
    """

    __slots__ = ("field", "dim_h", "w", "sign", "forms")

    def __init__(self, field, dim_h: int, w: InvolutionSpace, sign: int, forms):
        forms = tuple(forms)
        if sign not in (1, -1):
            raise ShapeError("sign must be +1 or -1")
        if w.field != field:
            raise FieldError("value space over the wrong field")
        if len(forms) != w.dim:
            raise ShapeError("need one coordinate matrix per W basis vector")
        for b in forms:
            if b.field != field:
                raise FieldError("coordinate matrix over the wrong field")
            if b.shape != (dim_h, dim_h):
                raise ShapeError("coordinate matrix shape != dim_h")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dim_h", dim_h)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "forms", forms)

    def __setattr__(self, name, value):
        raise AttributeError("SigmaModule is immutable")

    @property
    def dim_w(self) -> int:
        return self.w.dim

    def __eq__(self, other):
        return (
            isinstance(other, SigmaModule)
            and self.field == other.field
            and self.dim_h == other.dim_h
            and self.w == other.w
            and self.sign == other.sign
            and self.forms == other.forms
        )

    def __hash__(self):
        return hash((self.field, self.dim_h, self.w, self.sign, self.forms))

    def __repr__(self):
        return f"SigmaModule(dim_h={self.dim_h}, dim_w={self.dim_w}, sign={self.sign:+d})"

    def gram(self, x, y):
        """The tuple of W-coordinates of q(x)(y)."""
        return tuple(dotform(self.field, x, b, y) for b in self.forms)

    def pairs_to_zero(self, x, y) -> bool:
        z = self.field.zero
        return all(c == z for c in self.gram(x, y))

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.forms)


def dotform(field, x, b: Matrix, y):
    """x^T b y for row tuples x, y."""
    acc = field.zero
    for i, xi in enumerate(x):
        if xi == field.zero:
            continue
        row = b.rows[i]
        for j, yj in enumerate(y):
            if yj == field.zero or row[j] == field.zero:
                continue
            acc = field.add(acc, field.mul(xi, field.mul(row[j], yj)))
    return acc


def validate(q: SigmaModule) -> bool:
    """Check the defining symmetry relation of the module."""
    expected = twisted_transpose(q.w, q.sign, q.forms)
    return all(b == e for b, e in zip(q.forms, expected))


def symmetrize(field, dim_h: int, w: InvolutionSpace, sign: int, raw_forms) -> SigmaModule:
    """Build a valid module from arbitrary matrices.

    C_l + sign * sum_k S[l][k] C_k^T always satisfies the symmetry
    relation because S is an involution; this is the standard way to
    sample valid modules.
    """
    raw = tuple(raw_forms)
    twisted = twisted_transpose(w, sign, raw)
    forms = [c + t for c, t in zip(raw, twisted)]
    q = SigmaModule(field, dim_h, w, sign, forms)
    if not validate(q):
        raise InternalCheckError("symmetrization produced an invalid module")
    return q


def orthogonal(q: SigmaModule, v: Subspace) -> Subspace:
    """The twisted orthogonal {x : q(x) vanishes on v}.

    Each basis vector u of v and each coordinate matrix B_k contribute
    one linear condition x . (B_k u) = 0.
    """
    _check_subspace(q, v)
    rows = []
    for u in v.basis.rows:
        for b in q.forms:
            rows.append(b.mat_vec(u))
    if not rows:
        return Subspace.full(q.field, q.dim_h)
    constraints = Matrix(q.field, rows)
    return Subspace(q.field, q.dim_h, constraints.kernel_basis().rows)


def isotropy_class(q: SigmaModule, v: Subspace) -> str:
    """Classify a nonzero subspace: not isotropic / isotropic / totally."""
    _check_subspace(q, v)
    if v.is_zero():
        raise IsotropyError("the zero subspace has no isotropy class")
    perp = orthogonal(q, v)
    if perp.contains(v):
        return TOTALLY_ISOTROPIC
    if not v.intersect(perp).is_zero():
        return SIGMA_ISOTROPIC
    return NOT_ISOTROPIC


class IsotropicReduction(NamedTuple):
    """Reduction of q by a totally isotropic subspace, with its model.

    ``model`` rows are vectors of H spanning a deterministic complement
    of v inside its orthogonal; the reduced module is the restriction of
    q to that model (the coordinate form of q on perp/v).
    """

    module: SigmaModule
    model: Matrix
    perp: Subspace


def isotropic_reduction(q: SigmaModule, v: Subspace) -> IsotropicReduction:
    _check_subspace(q, v)
    if v.is_zero():
        raise IsotropyError("cannot reduce by the zero subspace")
    perp = orthogonal(q, v)
    if not perp.contains(v):
        raise IsotropyError("subspace is not totally isotropic")
    comp = complement_in(v, perp)
    model = comp.basis
    forms = []
    for b in q.forms:
        rows = [
            [dotform(q.field, x, b, y) for y in model.rows]
            for x in model.rows
        ]
        forms.append(Matrix(q.field, rows))
    reduced = SigmaModule(q.field, model.nrows, q.w, q.sign, forms)
    if not validate(reduced):
        raise InternalCheckError("reduction broke the symmetry relation")
    return IsotropicReduction(reduced, model, perp)


def reduced_form(q: SigmaModule, v: Subspace) -> SigmaModule:
    """The induced module on (orthogonal of v) / v."""
    return isotropic_reduction(q, v).module


@dataclass(frozen=True)
class LinearPiece:
    """The pairing data of one hyperbolic summand.

    ``alpha[k][i][j]`` pairs the i-th dual-model basis vector against the
    j-th isotropic basis vector in the k-th W-coordinate, so each matrix
    has shape (vee_dim, v_dim); nondegenerate pieces are square.
    """

    alpha: tuple

    def __post_init__(self):
        if not self.alpha:
            raise ShapeError("piece needs at least one coordinate matrix")
        shape = self.alpha[0].shape
        if any(a.shape != shape for a in self.alpha):
            raise ShapeError("piece coordinate matrices disagree in shape")

    @property
    def field(self):
        return self.alpha[0].field

    @property
    def vee_dim(self) -> int:
        return self.alpha[0].nrows

    @property
    def v_dim(self) -> int:
        return self.alpha[0].ncols


def hyperbolic_module(piece: LinearPiece, w: InvolutionSpace, sign: int) -> SigmaModule:
    """The module on V + V-dual induced by an arbitrary pairing alpha.

    The alpha matrices sit in the lower-left (dual x isotropic) block and
    the sigma-twisted transposes in the upper-right, which restores the
    symmetry relation for any alpha because S is an involution.
    """
    if piece.field != w.field:
        raise FieldError("piece and value space over different fields")
    if len(piece.alpha) != w.dim:
        raise ShapeError("piece has the wrong number of coordinate matrices")
    field = w.field
    m, mm = piece.v_dim, piece.vee_dim
    upper = twisted_transpose(w, sign, piece.alpha)
    forms = []
    for a, d in zip(piece.alpha, upper):
        forms.append(
            Matrix.from_blocks(
                [
                    [Matrix.zeros(field, m, m), d],
                    [a, Matrix.zeros(field, mm, mm)],
                ]
            )
        )
    q = SigmaModule(field, m + mm, w, sign, forms)
    if not validate(q):
        raise InternalCheckError("hyperbolic construction broke the symmetry relation")
    return q


def direct_sum(q1: SigmaModule, q2: SigmaModule) -> SigmaModule:
    """Block-diagonal sum of two modules over the same (field, W, sign)."""
    _check_compatible(q1, q2)
    field = q1.field
    forms = []
    for a, b in zip(q1.forms, q2.forms):
        forms.append(
            Matrix.from_blocks(
                [
                    [a, Matrix.zeros(field, a.nrows, b.ncols)],
                    [Matrix.zeros(field, b.nrows, a.ncols), b],
                ]
            )
        )
    return SigmaModule(field, q1.dim_h + q2.dim_h, q1.w, q1.sign, forms)


def act(g: Matrix, q: SigmaModule) -> SigmaModule:
    """The change-of-coordinates action: B_k -> g^-T B_k g^-1.

    This is the left action on modules matching composition with g^-1 on
    H, so isotropic subspaces move by v -> g v.
    """
    if g.shape != (q.dim_h, q.dim_h):
        raise ShapeError("group element has the wrong shape")
    try:
        gi = g.inverse()
    except SingularMatrixError:
        raise SingularMatrixError("cannot act by a singular matrix") from None
    git = gi.transpose()
    forms = [git.mul(b).mul(gi) for b in q.forms]
    return SigmaModule(q.field, q.dim_h, q.w, q.sign, forms)


@dataclass(frozen=True)
class IsoResult:
    """Outcome of an isomorphism test: yes (with witness), no, or unknown."""

    status: str
    witness: Matrix | None = None


def is_isomorphic(
    q1: SigmaModule,
    q2: SigmaModule,
    strategy: str = "auto",
    node_budget: int = 500_000,
) -> IsoResult:
    """Decide whether two modules are isomorphic.

    A witness f satisfies  B1_k = f^T B2_k f  for all k.  Over a prime
    field the column-by-column Gram backtracking below is an exhaustive
    search, hence a full decision for the small dimensions this package
    targets; over the rationals the search runs over bounded integer
    vectors and can only answer yes or unknown.  ``strategy`` is one of
    ``auto`` (invariants, then search), ``invariants`` or ``search``.

    Cheap invariants (ranks of the coordinate matrices, of their stacked
    matrix, and of small linear combinations) are congruence invariants
    and refute quickly.
    """
    if strategy not in ("auto", "invariants", "search"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if q1.field != q2.field or q1.sign != q2.sign or q1.w != q2.w:
        raise FieldError("incompatible ambient data")
    if q1.dim_h != q2.dim_h:
        return IsoResult("no")
    if q1 == q2:
        return IsoResult("yes", Matrix.identity(q1.field, q1.dim_h))

    if strategy in ("auto", "invariants"):
        if not _congruence_invariants_match(q1, q2):
            return IsoResult("no")
        if strategy == "invariants":
            return IsoResult("unknown")

    witness, exhausted = _isometry_search(q1, q2, node_budget)
    if witness is not None:
        _check_witness(q1, q2, witness)
        return IsoResult("yes", witness)
    if exhausted and q1.field.kind == "fp":
        return IsoResult("no")
    return IsoResult("unknown")


def _congruence_invariants_match(q1: SigmaModule, q2: SigmaModule) -> bool:
    for a, b in zip(q1.forms, q2.forms):
        if a.rank() != b.rank():
            return False
    stacked1 = Matrix(q1.field, [r for b in q1.forms for r in b.rows])
    stacked2 = Matrix(q2.field, [r for b in q2.forms for r in b.rows])
    if stacked1.rank() != stacked2.rank():
        return False
    field = q1.field
    coeff_range = field.elements() if field.kind == "fp" else [field.from_int(c) for c in range(-2, 3)]
    for coeffs in itertools.product(coeff_range, repeat=q1.dim_w):
        if all(c == field.zero for c in coeffs):
            continue
        combo1 = combo2 = None
        for c, a, b in zip(coeffs, q1.forms, q2.forms):
            ta, tb = a.scale(c), b.scale(c)
            combo1 = ta if combo1 is None else combo1 + ta
            combo2 = tb if combo2 is None else combo2 + tb
        if combo1.rank() != combo2.rank():
            return False
    return True


def _candidate_vectors(field, n: int):
    if field.kind == "fp":
        return [v for v in vectors_of(field, n) if any(e != field.zero for e in v)]
    # a bounded box of small rationals; enough to witness small isomorphisms
    from fractions import Fraction

    box = [Fraction(c) for c in (0, 1, -1, 2, -2)] + [Fraction(1, 2), Fraction(-1, 2)]
    out = []
    for v in itertools.product(box, repeat=n):
        if any(e != field.zero for e in v):
            out.append(v)
    return out


def _isometry_search(q1: SigmaModule, q2: SigmaModule, node_budget: int):
    """Backtracking search for columns c_i with c_i^T B2_k c_j = B1_k[i][j].

    Returns (witness or None, whether the search space was exhausted).
    """
    field = q1.field
    n = q1.dim_h
    if n == 0:
        return Matrix(field, []), True
    candidates = _candidate_vectors(field, n)
    targets = q1.forms
    b2 = q2.forms
    chosen: list[tuple] = []
    budget = [node_budget]

    def gram_ok(c) -> bool:
        i = len(chosen)
        for k, b in enumerate(b2):
            bc = b.mat_vec(c)
            cb = b.vec_mat(c)
            if dotform(field, c, b, c) != targets[k][i][i]:
                return False
            for j in range(i):
                # pair (j, i) uses B2 c, pair (i, j) uses c^T B2
                if dot_cached(chosen[j], bc) != targets[k][j][i]:
                    return False
                if dot_cached(cb, chosen[j]) != targets[k][i][j]:
                    return False
        return True

    def dot_cached(u, v):
        acc = field.zero
        for a, b in zip(u, v):
            if a != field.zero and b != field.zero:
                acc = field.add(acc, field.mul(a, b))
        return acc

    def independent(c) -> bool:
        m = Matrix(field, chosen + [list(c)])
        return m.rank() == len(chosen) + 1

    def extend() -> tuple:
        if len(chosen) == n:
            return Matrix(field, chosen).transpose(), True
        complete = True
        for c in candidates:
            if budget[0] <= 0:
                return None, False
            budget[0] -= 1
            if not gram_ok(c):
                continue
            if not independent(c):
                continue
            chosen.append(tuple(c))
            found, sub_complete = extend()
            chosen.pop()
            if found is not None:
                return found, True
            complete = complete and sub_complete
        return None, complete

    return extend()


def _check_witness(q1: SigmaModule, q2: SigmaModule, f: Matrix):
    ft = f.transpose()
    for b1, b2 in zip(q1.forms, q2.forms):
        if ft.mul(b2).mul(f) != b1:
            raise InternalCheckError("isomorphism witness fails the defining relation")
    f.inverse()  # raises if singular


def _check_subspace(q: SigmaModule, v: Subspace):
    if v.field != q.field or v.ambient != q.dim_h:
        raise FieldError("subspace does not live in the module's space")


def _check_compatible(q1: SigmaModule, q2: SigmaModule):
    if q1.field != q2.field or q1.sign != q2.sign or q1.w != q2.w:
        raise FieldError("incompatible ambient data")
