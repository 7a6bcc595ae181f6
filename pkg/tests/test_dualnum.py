"""Dual-number matrices, branch-fiber predicates, Pfaffian types.

The fixed-point predicates are gated behind an independent oracle that
conjugates by the actual involution in dual-number arithmetic (with
eps -> -eps, since the covering involution acts on the double point) and
compares against the closed-form conditions, over every matrix pair of
M_2(F_3)^2.
"""

import itertools
import random
from fractions import Fraction

import pytest

from twistmod.errors import (
    BoundExceededError,
    FieldError,
    ShapeError,
    SingularMatrixError,
    UsageError,
)
from twistmod.linalg import GF, QQ, Matrix
from twistmod.dualnum import (
    DualNumberMatrix,
    FiberReport,
    TypeVector,
    dn_det,
    dn_inverse,
    dn_mul,
    fiber_structure_check,
    is_fixed_alternating,
    is_fixed_plus,
    is_fixed_unramified,
    pfaffian,
    type_vector,
)


def mat(field, rows):
    return Matrix.from_ints(field, rows)


def dn(field, g_rows, h_rows):
    return DualNumberMatrix(mat(field, g_rows), mat(field, h_rows))


def all_matrices(field, r):
    for entries in itertools.product(field.elements(), repeat=r * r):
        yield Matrix(field, [entries[i * r : (i + 1) * r] for i in range(r)])


def standard_j(field):
    return mat(field, [[0, 1], [-1, 0]])


# -- arithmetic --------------------------------------------------------------


def test_dn_mul_worked_examples():
    h1 = mat(QQ, [[1, 2], [3, 4]])
    h2 = mat(QQ, [[0, 1], [1, 0]])
    i2 = Matrix.identity(QQ, 2)
    a = dn_mul(DualNumberMatrix(i2, h1), DualNumberMatrix(i2, h2))
    assert a == DualNumberMatrix(i2, h1 + h2)

    g = mat(QQ, [[1, 1], [0, 1]])
    b = DualNumberMatrix(g, h1)
    assert dn_mul(b, DualNumberMatrix.identity(QQ, 2)) == b
    assert dn_mul(
        DualNumberMatrix(g, Matrix.zeros(QQ, 2, 2)),
        DualNumberMatrix(g.inverse(), Matrix.zeros(QQ, 2, 2)),
    ) == DualNumberMatrix.identity(QQ, 2)

    with pytest.raises(ShapeError):
        dn_mul(b, DualNumberMatrix.identity(QQ, 3))


def test_dn_mul_is_associative_on_samples():
    rng = random.Random(3)
    f3 = GF(3)
    triples = []
    for _ in range(6):
        mats = [
            Matrix(f3, [[rng.randrange(3) for _ in range(2)] for _ in range(2)])
            for _ in range(6)
        ]
        triples.append(
            (
                DualNumberMatrix(mats[0], mats[1]),
                DualNumberMatrix(mats[2], mats[3]),
                DualNumberMatrix(mats[4], mats[5]),
            )
        )
    for a, b, c in triples:
        assert dn_mul(dn_mul(a, b), c) == dn_mul(a, dn_mul(b, c))


def test_dn_inverse():
    g = mat(QQ, [[2, 1], [1, 1]])
    h = mat(QQ, [[0, 5], [7, 0]])
    a = DualNumberMatrix(g, h)
    assert dn_mul(a, dn_inverse(a)) == DualNumberMatrix.identity(QQ, 2)
    assert dn_mul(dn_inverse(a), a) == DualNumberMatrix.identity(QQ, 2)
    with pytest.raises(SingularMatrixError):
        dn_inverse(dn(QQ, [[1, 1], [1, 1]], [[0, 0], [0, 0]]))


def test_dn_det_worked_examples():
    h = mat(QQ, [[4, 1], [2, 9]])
    assert dn_det(DualNumberMatrix(Matrix.identity(QQ, 2), h)) == (1, 13)
    g = mat(QQ, [[1, 2], [3, 4]])
    assert dn_det(DualNumberMatrix(g, Matrix.zeros(QQ, 2, 2))) == (-2, 0)
    # trace formula: 6 * (1/2 + 1/3) = 5
    assert dn_det(dn(QQ, [[2, 0], [0, 3]], [[1, 0], [0, 1]])) == (6, 5)


def test_dn_det_fallback_on_singular_part():
    # det(diag(1, eps)) = eps
    assert dn_det(dn(QQ, [[1, 0], [0, 0]], [[0, 0], [0, 1]])) == (0, 1)
    # the row-replacement expansion must agree with the trace formula
    rng = random.Random(5)
    field = QQ
    for _ in range(10):
        g = Matrix(field, [[Fraction(rng.randint(-4, 4)) for _ in range(3)] for _ in range(3)])
        h = Matrix(field, [[Fraction(rng.randint(-4, 4)) for _ in range(3)] for _ in range(3)])
        if g.det() == 0:
            continue
        d0, d1 = dn_det(DualNumberMatrix(g, h))
        alt = sum(
            Matrix(field, [h.rows[i] if j == i else g.rows[j] for j in range(3)]).det()
            for i in range(3)
        )
        assert (d0, d1) == (g.det(), alt)


def test_dn_det_is_multiplicative():
    rng = random.Random(8)
    f5 = GF(5)
    for _ in range(25):
        mats = [
            Matrix(f5, [[rng.randrange(5) for _ in range(2)] for _ in range(2)])
            for _ in range(4)
        ]
        a = DualNumberMatrix(mats[0], mats[1])
        b = DualNumberMatrix(mats[2], mats[3])
        a0, a1 = dn_det(a)
        b0, b1 = dn_det(b)
        expected = (f5.mul(a0, b0), f5.add(f5.mul(a0, b1), f5.mul(a1, b0)))
        assert dn_det(dn_mul(a, b)) == expected


# -- branch-point fixed sets --------------------------------------------------


def test_is_fixed_plus_worked_examples():
    assert is_fixed_plus(dn(QQ, [[1, 0], [0, 1]], [[1, 0], [0, -1]]))
    assert is_fixed_plus(dn(QQ, [[0, -1], [1, 0]], [[0, 0], [0, 0]]))
    # in SL_2 but not orthogonal
    assert not is_fixed_plus(
        DualNumberMatrix(
            Matrix(QQ, [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(1, 2)]]),
            Matrix.zeros(QQ, 2, 2),
        )
    )
    # orthogonal reflection: determinant -1 is excluded
    assert not is_fixed_plus(dn(QQ, [[1, 0], [0, -1]], [[0, 0], [0, 0]]))
    # non-symmetric or traceful eps-parts fail
    assert not is_fixed_plus(dn(QQ, [[1, 0], [0, 1]], [[0, 1], [0, 0]]))
    assert not is_fixed_plus(dn(QQ, [[1, 0], [0, 1]], [[1, 0], [0, 1]]))


def conjugate_eps(a):
    return DualNumberMatrix(a.g, -a.h)


def dn_transpose(a):
    return DualNumberMatrix(a.g.transpose(), a.h.transpose())


def constant(m):
    return DualNumberMatrix(m, Matrix.zeros(m.field, m.nrows, m.nrows))


def branch_oracle(a, twist=None):
    """Literal fixed-point test: A = M^-1 t(A^sigma)^-1 M and det A = 1."""
    field = a.field
    theta = dn_inverse(dn_transpose(conjugate_eps(a)))
    if twist is not None:
        theta = dn_mul(dn_mul(constant(twist.inverse()), theta), constant(twist))
    return theta == a and dn_det(a) == (field.one, field.zero)


def test_fixed_plus_matches_involution_oracle_exhaustively():
    f3 = GF(3)
    mats = list(all_matrices(f3, 2))
    for g in mats:
        invertible = g.det() != 0
        for h in mats:
            a = DualNumberMatrix(g, h)
            if invertible:
                assert is_fixed_plus(a) == branch_oracle(a)
            else:
                assert not is_fixed_plus(a)


def test_fixed_alternating_matches_involution_oracle_exhaustively():
    f3 = GF(3)
    j = standard_j(f3)
    mats = list(all_matrices(f3, 2))
    for g in mats:
        invertible = g.det() != 0
        for h in mats:
            a = DualNumberMatrix(g, h)
            if invertible:
                assert is_fixed_alternating(j, a) == branch_oracle(a, twist=j)
            else:
                assert not is_fixed_alternating(j, a)


def test_is_fixed_alternating_worked_examples():
    f3 = GF(3)
    j = standard_j(f3)
    assert is_fixed_alternating(j, DualNumberMatrix.identity(f3, 2))
    # over F_3 the identity fiber of the kernel is trivial: M h = h^T M and
    # tr h = 0 force h = 0 at r = 2
    i2 = Matrix.identity(f3, 2)
    kernel = [h for h in all_matrices(f3, 2) if is_fixed_alternating(j, DualNumberMatrix(i2, h))]
    assert kernel == [Matrix.zeros(f3, 2, 2)]
    # a unipotent symplectic element
    assert is_fixed_alternating(j, dn(f3, [[1, 1], [0, 1]], [[0, 0], [0, 0]]))
    with pytest.raises(ShapeError):
        is_fixed_alternating(mat(f3, [[0, 1], [1, 0]]), DualNumberMatrix.identity(f3, 2))


def test_is_fixed_unramified():
    f2 = GF(2)
    g = mat(QQ, [[1, 1], [0, 1]])
    assert is_fixed_unramified(g, g.inverse().transpose())
    assert is_fixed_unramified(Matrix.identity(QQ, 2), Matrix.identity(QQ, 2))
    assert not is_fixed_unramified(g, g)
    # determinant 2 with its transpose-inverse: outside SL_2
    d = mat(QQ, [[2, 0], [0, 1]])
    assert not is_fixed_unramified(d, d.inverse().transpose())
    with pytest.raises(SingularMatrixError):
        is_fixed_unramified(mat(QQ, [[1, 1], [1, 1]]), Matrix.identity(QQ, 2))
    # the predicate picks out one pair per element of SL_2(F_2)
    invertible = [g for g in all_matrices(f2, 2) if g.det() != 0]
    count = sum(
        1
        for g1 in invertible
        for g2 in invertible
        if is_fixed_unramified(g1, g2)
    )
    assert count == 6


# -- fiber structure reports ---------------------------------------------------


def test_fiber_structure_plus_f3():
    report = fiber_structure_check(GF(3), 2, "plus")
    assert report.fixed_count == 36
    assert report.image_count == 4
    assert report.kernel_count == 9
    assert report.kernel_dim == 2 == 2 * 3 // 2 - 1
    assert report.ok


def test_fiber_structure_plus_f2():
    report = fiber_structure_check(GF(2), 2, "plus")
    assert report.fixed_count == 8
    assert report.image_count == 2
    assert report.kernel_count == 4
    assert report.ok


def test_fiber_structure_alternating_f3():
    f3 = GF(3)
    report = fiber_structure_check(f3, 2, "alternating", m=standard_j(f3))
    assert report.image_count == 24  # Sp_2 = SL_2
    assert report.kernel_count == 1
    assert report.kernel_dim == 0
    assert report.fixed_count == 24
    assert report.ok


def test_fiber_structure_alternating_f2():
    # char 2 enlarges the kernel: M h = h^T M loses its off-diagonal
    # constraints, leaving {h : h_00 = h_11}, and the trace condition is vacuous
    f2 = GF(2)
    report = fiber_structure_check(f2, 2, "alternating", m=standard_j(f2))
    assert report.image_count == 6
    assert report.kernel_count == 8
    assert report.fixed_count == 48
    assert report.ok


def test_fiber_structure_errors():
    f3 = GF(3)
    with pytest.raises(FieldError):
        fiber_structure_check(QQ, 2, "plus")
    with pytest.raises(ValueError):
        fiber_structure_check(f3, 2, "minus")
    with pytest.raises(UsageError):
        fiber_structure_check(f3, 2, "alternating")
    with pytest.raises(ShapeError):
        fiber_structure_check(f3, 2, "alternating", m=mat(f3, [[0, 1], [1, 0]]))
    with pytest.raises(BoundExceededError):
        fiber_structure_check(f3, 3, "plus")


# -- pfaffians and types --------------------------------------------------------


def test_pfaffian_worked_examples():
    assert pfaffian(standard_j(QQ)) == 1
    assert pfaffian(mat(QQ, [[0, 5], [-5, 0]])) == 5
    block = mat(
        QQ,
        [
            [0, 1, 0, 0],
            [-1, 0, 0, 0],
            [0, 0, 0, -1],
            [0, 0, 1, 0],
        ],
    )
    assert pfaffian(block) == -1
    assert block.det() == 1


def test_pfaffian_preconditions():
    with pytest.raises(ShapeError):
        pfaffian(mat(QQ, [[0, 1], [1, 0]]))
    with pytest.raises(ShapeError):
        pfaffian(Matrix.zeros(QQ, 3, 3))
    # char 2: skew-symmetry alone is not enough, the diagonal must vanish
    with pytest.raises(ShapeError):
        pfaffian(mat(GF(2), [[1, 1], [1, 1]]))
    assert pfaffian(mat(GF(2), [[0, 1], [1, 0]])) == 1


def random_alternating(rng, n):
    raw = Matrix(QQ, [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)])
    return raw - raw.transpose()


def test_pfaffian_squares_to_determinant():
    rng = random.Random(17)
    for n in (2, 4, 6):
        for _ in range(6):
            a = random_alternating(rng, n)
            value = pfaffian(a)
            assert value * value == a.det()


def test_pfaffian_transforms_by_determinant():
    rng = random.Random(23)
    for _ in range(8):
        a = random_alternating(rng, 4)
        p = Matrix(QQ, [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)])
        assert pfaffian(p.transpose() @ a @ p) == p.det() * pfaffian(a)


def test_type_vectors():
    j = standard_j(QQ)
    assert type_vector([j, j]) == TypeVector((1, 1))
    assert type_vector([j, -j]) == TypeVector((1, -1))
    assert TypeVector((-1, 1)) == TypeVector((1, -1))
    assert TypeVector((-1, -1)) == TypeVector((1, 1))

    patterns = {
        type_vector([j if s1 == 1 else -j, j if s2 == 1 else -j])
        for s1 in (1, -1)
        for s2 in (1, -1)
    }
    assert len(patterns) == 2  # 2^(2n-1) components at 2n = 2

    four = {
        TypeVector(signs)
        for signs in itertools.product((1, -1), repeat=4)
    }
    assert len(four) == 2 ** 3

    with pytest.raises(UsageError):
        type_vector([mat(QQ, [[0, 2], [-2, 0]])])
    with pytest.raises(ShapeError):
        TypeVector((1, -1, 1))
    with pytest.raises(ShapeError):
        TypeVector(())
    with pytest.raises(ShapeError):
        TypeVector((1, 0))
