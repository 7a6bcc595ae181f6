"""Semistability verdicts, isotropic filtrations, and graded modules.

The subspace criterion drives everything here: a module is semistable
when every nonzero totally isotropic subspace V satisfies
dim V + dim V^perp <= dim H, stable when the inequality is strict.  Over
a prime field the quantifier is decided by enumeration; over the
rationals we certify instability when a witness is found and otherwise
report an explicit no_destabilizer_found, never a silent upgrade to
semistable.

A strictly semistable module carries a filtration by successive minimal
equality witnesses.  Peeling them off leaves a stable core, and the
witnesses together with their dual pairings reassemble into the graded
module: the nested hyperbolic wrapping of the core.  Two semistable
modules are S-equivalent when their graded modules are isomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import (
    BoundExceededError,
    FieldError,
    InternalCheckError,
    StabilityError,
)
from .hilbert import (
    MINUS_INFINITY,
    OneParamSubgroup,
    destabilizing_1ps,
    limit_at_zero,
    mu,
)
from .linalg import (
    GF,
    Matrix,
    Subspace,
    all_subspaces,
    complement_in,
    enumerate_subspaces,
)
from .sigmamod import (
    TOTALLY_ISOTROPIC,
    InvolutionSpace,
    LinearPiece,
    SigmaModule,
    act,
    dotform,
    is_isomorphic,
    isotropic_reduction,
    isotropy_class,
    orthogonal,
    twisted_transpose,
    validate,
)

STABLE = "stable"
STRICTLY_SEMISTABLE = "strictly_semistable"
UNSTABLE = "unstable"
NO_DESTABILIZER_FOUND = "no_destabilizer_found"

DEFAULT_ENUM_BOUND = 4
DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True)
class Provenance:
    """How a verdict was reached.

    ``exhaustive`` means every subspace was enumerated (finite fields
    only).  ``heuristic`` records the primes whose reductions were
    scanned for liftable witnesses; an empty tuple means a witness was
    found before any reduction was needed.
    """

    kind: str
    primes: tuple = ()

    def __post_init__(self):
        if self.kind not in ("exhaustive", "heuristic"):
            raise ValueError(f"unknown provenance kind {self.kind!r}")
        if self.kind == "exhaustive" and self.primes:
            raise ValueError("exhaustive provenance carries no prime list")


@dataclass(frozen=True)
class Verdict:
    """Outcome of the subspace criterion, with a checkable certificate.

    For unstable and strictly semistable verdicts the certificate is a
    pair (V, lambda): the witness subspace and its destabilizing
    one-parameter subgroup, whose weight is stored in ``mu_value``
    (negative, respectively zero).
    """

    status: str
    provenance: Provenance
    certificate: tuple | None = None
    mu_value: object = None


@dataclass(frozen=True)
class Filtration:
    """Increasing chain of subspaces of H from successive minimal equality
    witnesses; empty for a stable module."""

    chain: tuple

    @property
    def length(self) -> int:
        return len(self.chain)


@dataclass(frozen=True)
class GradedModule:
    """The graded module of a semistable (H, q).

    ``pieces`` holds one pairing per filtration step, outermost first;
    ``core`` is the stable module left after all reductions.
    ``assembled`` is their nested hyperbolic wrapping, expressed in the
    adapted basis whose columns form ``transform``: witnesses outside in,
    then the core, then the dual models inside out.  ``canonical_1ps``
    is the filtration subgroup; its limit, read in the adapted basis, is
    exactly ``assembled``.
    """

    pieces: tuple
    core: SigmaModule
    assembled: SigmaModule
    filtration: Filtration
    canonical_1ps: OneParamSubgroup
    transform: Matrix

    @property
    def length(self) -> int:
        return len(self.pieces)


def enumerate_totally_isotropic(q: SigmaModule, bound: int = DEFAULT_ENUM_BOUND):
    """All nonzero totally isotropic subspaces, dimension ascending.

    Only meaningful over a prime field; the cost grows like
    p^(d(n-d)) per dimension, so ``bound`` caps dim H.
    """
    if q.field.kind != "fp":
        raise FieldError("exhaustive enumeration needs a finite field")
    if q.dim_h > bound:
        raise BoundExceededError(
            f"dim {q.dim_h} exceeds the enumeration bound {bound}"
        )
    return tuple(
        v
        for v in all_subspaces(q.field, q.dim_h)
        if isotropy_class(q, v) == TOTALLY_ISOTROPIC
    )


def semistability_verdict(
    q: SigmaModule,
    strategy: str = "auto",
    enum_bound: int = DEFAULT_ENUM_BOUND,
    primes: tuple = DEFAULT_PRIMES,
) -> Verdict:
    """Decide the subspace criterion for q.

    ``strategy`` is ``auto``, ``exhaustive`` (finite fields), or
    ``heuristic`` (rationals).  Exhaustive verdicts are complete within
    the enumeration bound.  The heuristic certifies instability via the
    joint kernel and via witnesses lifted from reductions mod ``primes``;
    when nothing lifts it returns no_destabilizer_found.
    """
    if strategy not in ("auto", "exhaustive", "heuristic"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if not validate(q):
        raise StabilityError("module violates its symmetry relation")
    if strategy == "exhaustive" and q.field.kind != "fp":
        raise FieldError("exhaustive strategy needs a finite field")
    if strategy == "heuristic" and q.field.kind != "rational":
        raise FieldError("heuristic strategy is for the rational field")
    if q.field.kind == "fp":
        return _exhaustive_verdict(q, enum_bound)
    return _heuristic_verdict(q, tuple(primes), enum_bound)


def _certified(status: str, provenance: Provenance, q: SigmaModule, v: Subspace) -> Verdict:
    lam = destabilizing_1ps(q, v)
    value = mu(lam, q)
    if status == UNSTABLE and not value < 0:
        raise InternalCheckError("destabilizing weight is not negative")
    if status == STRICTLY_SEMISTABLE and value != 0:
        raise InternalCheckError("equality witness weight is not zero")
    return Verdict(status, provenance, (v, lam), value)


def _exhaustive_verdict(q: SigmaModule, enum_bound: int) -> Verdict:
    n = q.dim_h
    provenance = Provenance("exhaustive")
    equality = None
    for v in enumerate_totally_isotropic(q, enum_bound):
        total = v.dim + orthogonal(q, v).dim
        if total > n:
            return _certified(UNSTABLE, provenance, q, v)
        if total == n and equality is None:
            equality = v
    if equality is not None:
        return _certified(STRICTLY_SEMISTABLE, provenance, q, equality)
    return Verdict(STABLE, provenance)


def joint_kernel(q: SigmaModule) -> Subspace:
    """Vectors x with q(x) = 0; by the symmetry relation this also kills
    every q(y)(x), so the kernel is totally isotropic with full orthogonal."""
    stacked = Matrix(
        q.field, [row for b in q.forms for row in b.transpose().rows]
    )
    return Subspace(q.field, q.dim_h, stacked.kernel_basis().rows)


def _reduce_mod_p(q: SigmaModule, p: int):
    # Fails (returns None) when p divides a denominator somewhere.
    fp = GF(p)

    def reduce_matrix(m: Matrix):
        rows = []
        for row in m.rows:
            out = []
            for x in row:
                frac = Fraction(x)
                if frac.denominator % p == 0:
                    return None
                out.append(fp.div(fp.from_int(frac.numerator), fp.from_int(frac.denominator)))
            rows.append(out)
        return Matrix(fp, rows)

    w_matrix = reduce_matrix(q.w.matrix)
    if w_matrix is None:
        return None
    forms = []
    for b in q.forms:
        rb = reduce_matrix(b)
        if rb is None:
            return None
        forms.append(rb)
    return SigmaModule(fp, q.dim_h, InvolutionSpace(fp, w_matrix), q.sign, forms)


def _lift_subspace(vp: Subspace, field, balanced: bool) -> Subspace:
    p = vp.field.p
    rows = []
    for row in vp.basis.rows:
        lifted = []
        for x in row:
            r = int(x)
            if balanced and r > p // 2:
                r -= p
            lifted.append(field.from_int(r))
        rows.append(lifted)
    return Subspace(field, vp.ambient, rows)


def _lifted_candidates(q: SigmaModule, p: int, dims, seen: set):
    """Totally isotropic subspaces of q over QQ obtained by lifting the
    mod-p witnesses of the given dimensions, in canonical order."""
    qp = _reduce_mod_p(q, p)
    if qp is None:
        return
    for dim in dims:
        for vp in enumerate_subspaces(qp.field, qp.dim_h, dim):
            if isotropy_class(qp, vp) != TOTALLY_ISOTROPIC:
                continue
            for balanced in (False, True):
                v = _lift_subspace(vp, q.field, balanced)
                key = v.basis.rows
                if key in seen:
                    continue
                seen.add(key)
                if isotropy_class(q, v) == TOTALLY_ISOTROPIC:
                    yield v


def _heuristic_verdict(q: SigmaModule, primes: tuple, enum_bound: int) -> Verdict:
    n = q.dim_h
    kernel = joint_kernel(q)
    if not kernel.is_zero():
        return _certified(UNSTABLE, Provenance("heuristic"), q, kernel)
    if n > enum_bound:
        raise BoundExceededError(
            f"dim {n} exceeds the enumeration bound {enum_bound}"
        )
    tried = []
    equality = None
    seen: set = set()
    for p in primes:
        if _reduce_mod_p(q, p) is None:
            continue
        tried.append(p)
        for v in _lifted_candidates(q, p, range(1, n + 1), seen):
            total = v.dim + orthogonal(q, v).dim
            if total > n:
                return _certified(UNSTABLE, Provenance("heuristic", tuple(tried)), q, v)
            if total == n and equality is None:
                equality = v
    provenance = Provenance("heuristic", tuple(tried))
    if equality is not None:
        return _certified(STRICTLY_SEMISTABLE, provenance, q, equality)
    return Verdict(NO_DESTABILIZER_FOUND, provenance)


class _Level(NamedTuple):
    """One filtration step, with all bases written in H coordinates."""

    witness_rows: Matrix
    dual_rows: Matrix
    piece: LinearPiece


def _minimal_equality_witness(q, enum_bound, primes):
    """Smallest totally isotropic subspace meeting equality, or None.

    Raises StabilityError when a destabilizing subspace turns up instead:
    the caller believed the module semistable and was wrong.
    """
    n = q.dim_h
    if q.field.kind == "fp":
        for v in enumerate_totally_isotropic(q, enum_bound):
            total = v.dim + orthogonal(q, v).dim
            if total > n:
                raise StabilityError(
                    "reduction exposed a destabilizing subspace; the module is unstable"
                )
            if total == n:
                return v
        return None
    seen: set = set()
    for dim in range(1, n + 1):
        for p in primes:
            for v in _lifted_candidates(q, p, (dim,), seen):
                total = v.dim + orthogonal(q, v).dim
                if total > n:
                    raise StabilityError(
                        "reduction exposed a destabilizing subspace; the module is unstable"
                    )
                if total == n:
                    return v
    return None


def _build_levels(q, enum_bound, primes):
    verdict = semistability_verdict(q, "auto", enum_bound, primes)
    if verdict.status == UNSTABLE:
        raise StabilityError("module is unstable")
    field = q.field
    n = q.dim_h
    levels = []
    chain = []
    reached = Subspace.zero(field, n)
    model_rows = Matrix.identity(field, n)
    current = q
    while True:
        v = _minimal_equality_witness(current, enum_bound, primes)
        if v is None:
            break
        reduction = isotropic_reduction(current, v)
        dual = complement_in(reduction.perp, Subspace.full(field, current.dim_h))
        alpha = tuple(
            Matrix(
                field,
                [[dotform(field, c, b, x) for x in v.basis.rows] for c in dual.basis.rows],
            )
            for b in current.forms
        )
        witness_rows = v.basis @ model_rows
        dual_rows = dual.basis @ model_rows
        levels.append(_Level(witness_rows, dual_rows, LinearPiece(alpha)))
        reached = reached.sum(Subspace(field, n, witness_rows.rows))
        chain.append(reached)
        # a 0-row model forgets its width, so skip the product
        if reduction.model.nrows == 0:
            model_rows = Matrix(field, [])
        else:
            model_rows = reduction.model @ model_rows
        current = reduction.module
    return levels, tuple(chain), current, model_rows


def iso_filtration(
    q: SigmaModule,
    enum_bound: int = DEFAULT_ENUM_BOUND,
    primes: tuple = DEFAULT_PRIMES,
) -> Filtration:
    """Chain of successive minimal equality witnesses, lifted back to H.

    Each step meets the equality of the subspace criterion inside the
    reduced module of the previous one; the module is stable iff the
    chain is empty.  Deterministic: witnesses are searched dimension
    ascending, then in canonical basis order.
    """
    _, chain, _, _ = _build_levels(q, enum_bound, tuple(primes))
    return Filtration(chain)


def graded(
    q: SigmaModule,
    enum_bound: int = DEFAULT_ENUM_BOUND,
    primes: tuple = DEFAULT_PRIMES,
) -> GradedModule:
    """Graded module of a semistable q: hyperbolic pieces round a stable core.

    The assembled module is written in the adapted basis (witnesses
    outside in, core, dual models inside out) and coincides there with
    the limit of the canonical one-parameter subgroup; this is checked
    on every call.
    """
    primes = tuple(primes)
    levels, chain, core, core_rows = _build_levels(q, enum_bound, primes)
    field = q.field
    n = q.dim_h

    adapted = [row for level in levels for row in level.witness_rows.rows]
    adapted.extend(core_rows.rows)
    for level in reversed(levels):
        adapted.extend(level.dual_rows.rows)
    transform = Matrix(field, adapted).transpose()

    forms = list(core.forms)
    size = core.dim_h
    for level in reversed(levels):
        d = level.piece.v_dim
        dmats = twisted_transpose(q.w, q.sign, level.piece.alpha)
        inner = size
        size = d + inner + d
        wrapped = []
        for k, inner_form in enumerate(forms):
            grid = [[field.zero] * size for _ in range(size)]
            for a in range(d):
                for b in range(d):
                    grid[a][d + inner + b] = dmats[k][a][b]
                    grid[d + inner + b][a] = level.piece.alpha[k][b][a]
            for i in range(inner):
                for j in range(inner):
                    grid[d + i][d + j] = inner_form[i][j]
            wrapped.append(Matrix(field, grid))
        forms = wrapped
    assembled = SigmaModule(field, size, q.w, q.sign, forms)
    if not validate(assembled):
        raise InternalCheckError("assembled graded module fails validation")

    k = len(levels)
    pieces = []
    for i, level in enumerate(levels):
        weight = k - i
        pieces.append((Subspace(field, n, level.witness_rows.rows), weight))
        pieces.append((Subspace(field, n, level.dual_rows.rows), -weight))
    if core.dim_h > 0:
        pieces.append((Subspace(field, n, core_rows.rows), 0))
    canonical = OneParamSubgroup(pieces)

    limit = limit_at_zero(canonical, q)
    if limit is None:
        raise InternalCheckError("canonical subgroup has no limit")
    if act(transform.inverse(), limit) != assembled:
        raise InternalCheckError("graded limit disagrees with the assembled module")

    return GradedModule(
        pieces=tuple(level.piece for level in levels),
        core=core,
        assembled=assembled,
        filtration=Filtration(chain),
        canonical_1ps=canonical,
        transform=transform,
    )


def s_equivalent(
    q1: SigmaModule,
    q2: SigmaModule,
    enum_bound: int = DEFAULT_ENUM_BOUND,
    primes: tuple = DEFAULT_PRIMES,
) -> str:
    """yes / no / unknown: are the graded modules isomorphic?"""
    g1 = graded(q1, enum_bound, primes)
    g2 = graded(q2, enum_bound, primes)
    return is_isomorphic(g1.assembled, g2.assembled).status


def hilbert_mumford_sweep(
    q: SigmaModule,
    weight_bound: int = 3,
    max_decompositions: int = 200_000,
):
    """Minimum weight over every subgroup with enumerated eigenspaces.

    Sweeps all ordered direct-sum decompositions of H into enumerated
    subspaces, paired with strictly decreasing integer weights in
    [-weight_bound, weight_bound] summing (weighted by dimension) to
    zero.  Returns the minimum of mu over the swept subgroups, which is
    negative iff the module is unstable for small dims; q = 0 gives
    minus infinity.
    """
    if q.field.kind != "fp":
        raise FieldError("the bounded sweep enumerates subspaces over a finite field")
    field = q.field
    n = q.dim_h
    subs = list(all_subspaces(field, n))
    nonzero_pair = [
        [
            any(
                dotform(field, x, b, y) != field.zero
                for b in q.forms
                for x in u.basis.rows
                for y in v.basis.rows
            )
            for v in subs
        ]
        for u in subs
    ]

    best = None
    counter = [0]

    def weight_vectors(dims):
        bound = weight_bound
        out = []

        def extend(i, prev, acc, total):
            if i == len(dims):
                if total == 0:
                    out.append(tuple(acc))
                return
            for wt in range(min(prev - 1, bound), -bound - 1, -1):
                extend(i + 1, wt, acc + [wt], total + wt * dims[i])

        extend(0, bound + 1, [], 0)
        return out

    def score(chosen):
        nonlocal best
        counter[0] += 1
        if counter[0] > max_decompositions:
            raise BoundExceededError(
                f"sweep exceeded {max_decompositions} decompositions"
            )
        dims = [subs[i].dim for i in chosen]
        for weights in weight_vectors(dims):
            value = MINUS_INFINITY
            for a, ia in enumerate(chosen):
                for b, ib in enumerate(chosen):
                    if nonzero_pair[ia][ib]:
                        pair_weight = weights[a] + weights[b]
                        if value is MINUS_INFINITY or pair_weight > value:
                            value = pair_weight
            if best is None or value < best:
                best = value

    def extend_decomposition(chosen, span):
        remaining = n - span.dim
        if remaining == 0:
            score(chosen)
            return
        for idx, s in enumerate(subs):
            if s.dim > remaining:
                break
            joined = span.sum(s)
            if joined.dim == span.dim + s.dim:
                extend_decomposition(chosen + [idx], joined)

    extend_decomposition([], Subspace.zero(field, n))
    if best is None:
        raise InternalCheckError("sweep produced no subgroup")
    return best
