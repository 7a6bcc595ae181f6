"""Matrix groups over dual numbers, their fixed subgroups, and Pfaffian types.

A dual-number matrix is a pair (g, h) standing for g + eps*h with
eps^2 = 0.  The products, inverses and determinants used here all have
closed forms, so no polynomial quotient ring is needed.

The fixed-subgroup predicates describe the fibers of the relevant group
schemes at a point of the base.  At a branch point the covering
involution acts on the double point itself, sending eps to -eps, and the
fixed elements of transpose-inversion (possibly twisted by an
alternating matrix M) satisfy:

  plus case:         g^T g = I,  g^T h symmetric,  det g = 1,  tr(g^T h) = 0
  alternating case:  g^T M g = M,  h = g M^-1 h^T M g,  det g = 1,
                     tr(g^-1 h) = 0

At g = I these cut out the traceless symmetric matrices, respectively
the traceless h with M h = h^T M, matching the additive kernels of the
projections onto SO_r and Sp_r.  Away from the branch locus the fiber
has two reduced points swapped by the involution, and being fixed means
the second component is the transpose-inverse of the first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    BoundExceededError,
    FieldError,
    ShapeError,
    SingularMatrixError,
    UsageError,
)
from .linalg import Matrix


@dataclass(frozen=True)
class DualNumberMatrix:
    """g + eps*h with eps^2 = 0; invertible exactly when g is."""

    g: Matrix
    h: Matrix

    def __post_init__(self):
        if self.g.field != self.h.field:
            raise ShapeError("components live over different fields")
        if self.g.nrows != self.g.ncols or self.g.shape != self.h.shape:
            raise ShapeError("components must be square of equal size")

    @classmethod
    def identity(cls, field, r: int) -> "DualNumberMatrix":
        return cls(Matrix.identity(field, r), Matrix.zeros(field, r, r))

    @property
    def field(self):
        return self.g.field

    @property
    def size(self) -> int:
        return self.g.nrows


def dn_mul(a: DualNumberMatrix, b: DualNumberMatrix) -> DualNumberMatrix:
    """(g, h)(k, l) = (gk, gl + hk)."""
    if a.size != b.size or a.field != b.field:
        raise ShapeError("size mismatch in dual-number product")
    return DualNumberMatrix(a.g @ b.g, a.g @ b.h + a.h @ b.g)


def dn_inverse(a: DualNumberMatrix) -> DualNumberMatrix:
    """(g, h)^-1 = (g^-1, -g^-1 h g^-1)."""
    ginv = a.g.inverse()
    return DualNumberMatrix(ginv, -(ginv @ a.h @ ginv))


def dn_det(a: DualNumberMatrix):
    """det(g + eps*h) as a pair (d0, d1) with value d0 + eps*d1.

    d0 = det g and d1 = det(g) tr(g^-1 h) when g is invertible; in
    general d1 expands by multilinearity into a sum of determinants with
    one row of g replaced by the matching row of h.
    """
    field = a.field
    d0 = a.g.det()
    if d0 != field.zero:
        d1 = field.mul(d0, (a.g.inverse() @ a.h).trace())
        return (d0, d1)
    d1 = field.zero
    for i in range(a.size):
        rows = [a.h.rows[i] if j == i else a.g.rows[j] for j in range(a.size)]
        d1 = field.add(d1, Matrix(field, rows).det())
    return (d0, d1)


def is_fixed_plus(a: DualNumberMatrix) -> bool:
    """Fixed under plain transpose-inversion at a branch point."""
    field = a.field
    r = a.size
    if a.g.transpose() @ a.g != Matrix.identity(field, r):
        return False
    gth = a.g.transpose() @ a.h
    if gth != gth.transpose():
        return False
    return a.g.det() == field.one and gth.trace() == field.zero


def is_fixed_unramified(g1: Matrix, g2: Matrix) -> bool:
    """Away from the branch locus: the two points swap, so (g1, g2) is
    fixed exactly when g2 is the transpose-inverse of g1 (inside SL_r)."""
    field = g1.field
    if g1.det() == field.zero or g2.det() == field.zero:
        raise SingularMatrixError("unramified fibers live in the invertible locus")
    if g1.det() != field.one or g2.det() != field.one:
        return False
    return g2 == g1.inverse().transpose()


def _check_alternating(m: Matrix):
    if m.nrows != m.ncols:
        raise ShapeError("alternating matrices are square")
    if m.transpose() != -m or any(
        m[i][i] != m.field.zero for i in range(m.nrows)
    ):
        raise ShapeError("matrix is not alternating")


def is_fixed_alternating(m: Matrix, a: DualNumberMatrix) -> bool:
    """Fixed under transpose-inversion twisted by the alternating m."""
    _check_alternating(m)
    if m.nrows % 2 != 0:
        raise ShapeError("alternating fixed sets need even size")
    field = a.field
    if m.shape != a.g.shape:
        raise ShapeError("twist matrix size mismatch")
    minv = m.inverse()
    if a.g.transpose() @ m @ a.g != m:
        return False
    if a.g.det() != field.one:
        return False
    if a.h != a.g @ minv @ a.h.transpose() @ m @ a.g:
        return False
    return (a.g.inverse() @ a.h).trace() == field.zero


@dataclass(frozen=True)
class FiberReport:
    """Exhaustive structure report for one fiber over a finite field."""

    case: str
    r: int
    field_order: int
    fixed_count: int
    image_count: int
    kernel_count: int
    kernel_dim: int
    closure_ok: bool
    inverses_ok: bool
    projection_ok: bool
    kernel_ok: bool
    count_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.closure_ok
            and self.inverses_ok
            and self.projection_ok
            and self.kernel_ok
            and self.count_ok
        )


def _all_matrices(field, r: int):
    for entries in itertools.product(field.elements(), repeat=r * r):
        yield Matrix(field, [entries[i * r : (i + 1) * r] for i in range(r)])


def fiber_structure_check(
    field,
    r: int,
    case: str,
    m: Matrix | None = None,
    max_pairs: int = 1_000_000,
) -> FiberReport:
    """Enumerate a branch-point fiber over F_q and verify its structure.

    Checks that the fixed set is a group under dn_mul, that projection
    to the eps^0 part maps onto SO_r (plus case) or the symplectic group
    of m (alternating case), that the kernel over the identity is the
    expected additive space of matrices, and that the counts match
    |image| * q^(dim kernel).  Cost is dominated by q^(r^2) times the
    image size, guarded by ``max_pairs``.
    """
    if case not in ("plus", "alternating"):
        raise ValueError(f"unknown fiber case {case!r}")
    if field.kind != "fp":
        raise FieldError("fiber enumeration needs a finite field")
    q = field.p
    if q ** (2 * r * r) > max_pairs:
        raise BoundExceededError(
            f"fiber enumeration over F_{q} at size {r} exceeds {max_pairs} pairs"
        )
    identity = Matrix.identity(field, r)

    if case == "plus":
        def in_image(g):
            return g.transpose() @ g == identity and g.det() == field.one

        def in_kernel(h):
            return h == h.transpose() and h.trace() == field.zero

        def fixed(g, h):
            return is_fixed_plus(DualNumberMatrix(g, h))

        expected_kernel_dim = r * (r + 1) // 2 - 1
    else:
        if m is None:
            raise UsageError("the alternating case needs its twist matrix")
        _check_alternating(m)
        if m.det() == field.zero:
            raise SingularMatrixError("twist matrix must be invertible")
        if r % 2 != 0:
            raise ShapeError("alternating fixed sets need even size")

        def in_image(g):
            return g.transpose() @ m @ g == m and g.det() == field.one

        def in_kernel(h):
            return m @ h == h.transpose() @ m and h.trace() == field.zero

        def fixed(g, h):
            return is_fixed_alternating(m, DualNumberMatrix(g, h))

        expected_kernel_dim = None

    image = [g for g in _all_matrices(field, r) if in_image(g)]
    kernel_space = [h for h in _all_matrices(field, r) if in_kernel(h)]
    fixed_set = [
        DualNumberMatrix(g, h)
        for g in image
        for h in _all_matrices(field, r)
        if fixed(g, h)
    ]
    keys = {(a.g.rows, a.h.rows) for a in fixed_set}

    closure_ok = all(
        (p.g.rows, p.h.rows) in keys
        for a in fixed_set
        for p in (dn_mul(a, b) for b in fixed_set)
    )
    inverses_ok = all(
        (inv.g.rows, inv.h.rows) in keys
        for inv in (dn_inverse(a) for a in fixed_set)
    )
    projection_ok = {a.g.rows for a in fixed_set} == {g.rows for g in image}
    kernel_found = [a.h for a in fixed_set if a.g == identity]
    kernel_ok = {h.rows for h in kernel_found} == {h.rows for h in kernel_space}
    if kernel_ok:
        # additive closure: (I, h1)(I, h2) = (I, h1 + h2) stays fixed
        kernel_ok = all(
            (identity.rows, (h1 + h2).rows) in keys
            for h1 in kernel_found
            for h2 in kernel_found
        )

    kernel_dim = 0
    while q**kernel_dim < len(kernel_found):
        kernel_dim += 1
    count_ok = (
        q**kernel_dim == len(kernel_found)
        and len(fixed_set) == len(image) * q**kernel_dim
    )
    if expected_kernel_dim is not None:
        count_ok = count_ok and kernel_dim == expected_kernel_dim

    return FiberReport(
        case=case,
        r=r,
        field_order=q,
        fixed_count=len(fixed_set),
        image_count=len(image),
        kernel_count=len(kernel_found),
        kernel_dim=kernel_dim,
        closure_ok=closure_ok,
        inverses_ok=inverses_ok,
        projection_ok=projection_ok,
        kernel_ok=kernel_ok,
        count_ok=count_ok,
    )


def unramified_fixed_count(field, r: int, max_pairs: int = 1_000_000) -> int:
    """Count fixed pairs away from the branch locus by enumeration.

    The answer is |SL_r(F_q)| (each g has the unique partner t(g)^-1),
    but the count here walks all invertible pairs and applies the
    predicate, so it can serve as an oracle for that fact.
    """
    if field.kind != "fp":
        raise FieldError("fiber enumeration needs a finite field")
    q = field.p
    if q ** (2 * r * r) > max_pairs:
        raise BoundExceededError(
            f"fiber enumeration over F_{q} at size {r} exceeds {max_pairs} pairs"
        )
    invertible = [g for g in _all_matrices(field, r) if g.det() != field.zero]
    return sum(
        1
        for g1 in invertible
        for g2 in invertible
        if is_fixed_unramified(g1, g2)
    )


def pfaffian(a: Matrix):
    """Pfaffian of an alternating matrix by first-row expansion.

    Alternating means a^T = -a with zero diagonal (the diagonal clause
    matters in characteristic 2).  pf(a)^2 = det(a).
    """
    _check_alternating(a)
    if a.nrows % 2 != 0:
        raise ShapeError("the pfaffian needs an even size")
    return _pf(a.field, [list(row) for row in a.rows])


def _pf(field, rows):
    n = len(rows)
    if n == 0:
        return field.one
    total = field.zero
    for j in range(1, n):
        if rows[0][j] == field.zero:
            continue
        keep = [i for i in range(n) if i not in (0, j)]
        minor = [[rows[x][y] for y in keep] for x in keep]
        term = field.mul(rows[0][j], _pf(field, minor))
        if j % 2 == 0:
            term = field.neg(term)
        total = field.add(total, term)
    return total


class TypeVector:
    """A +-1 vector of Pfaffian types, one per branch point, modulo a
    global sign; normalized so the first entry is +1."""

    __slots__ = ("taus",)

    def __init__(self, taus):
        taus = tuple(taus)
        if not taus or len(taus) % 2 != 0:
            raise ShapeError("type vectors have positive even length")
        if any(t not in (1, -1) for t in taus):
            raise ShapeError("type entries are +1 or -1")
        if taus[0] == -1:
            taus = tuple(-t for t in taus)
        object.__setattr__(self, "taus", taus)

    def __setattr__(self, name, value):
        raise AttributeError("TypeVector is immutable")

    def __eq__(self, other):
        return isinstance(other, TypeVector) and self.taus == other.taus

    def __hash__(self):
        return hash(self.taus)

    def __repr__(self):
        return f"TypeVector{self.taus}"


def type_vector(psis) -> TypeVector:
    """Pfaffian type of a family of alternating isomorphisms.

    Each matrix must have determinant one, so its Pfaffian is +-1; the
    resulting vector is read modulo a global sign flip.
    """
    taus = []
    for psi in psis:
        field = psi.field
        if psi.det() != field.one:
            raise UsageError("type entries need determinant one")
        value = pfaffian(psi)
        if value == field.one:
            taus.append(1)
        elif value == field.neg(field.one):
            taus.append(-1)
        else:
            raise UsageError("pfaffian is not a unit sign")
    return TypeVector(taus)
