"""Exterior shifting of uniform hypergraphs with respect to explicit matrices.

An invertible n x n matrix acts on the k-th exterior power of the ambient
space; its action is encoded by the k-th compound matrix, whose (rho, tau)
entry is the minor with rows rho and columns tau.  Shifting a k-uniform
hypergraph S by a matrix g keeps, among the columns of the compound
submatrix with row set S, exactly those that increase the rank when
columns are consumed in lexicographic order.  The result again has |S|
edges and, for suitably generic g, is a shifted hypergraph.

Partial shifts arise from the Bruhat decomposition: every permutation w
yields a canonical cell representative built from a unipotent matrix whose
free entries sit precisely at the inversions of w, and shifting by that
representative interpolates between doing nothing (identity) and the full
shift (longest permutation).  Combinatorial shifts by transpositions are
the classic set-replacement operators and coincide with exterior shifts by
small structured matrices.

Matrix entries are sparse integer polynomials; a FieldContext chooses
between exact symbolic elimination and seeded randomized evaluation.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from .combstruct import KSubset, UniformHypergraph, k_subsets
from .errors import (
    InternalError,
    MathPreconditionError,
    MatrixNotInvertibleError,
)
from .field import (
    Backend,
    EvalPoint,
    FieldContext,
    MultiPoly,
    PolynomialRing,
    ProfileState,
    ZZ,
    char0_prime_pair,
    matrix_rank,
    reduce_point_mod,
    sample_eval_point,
)
from .symgroup import Permutation

__all__ = [
    "GenericMatrix",
    "matrix_from_entries",
    "identity_matrix",
    "generic_matrix",
    "generic_unipotent",
    "cell_unipotent",
    "cell_representative",
    "permutation_matrix",
    "combinatorial_shift_matrix",
    "vandermonde_matrix",
    "matrix_product",
    "matrix_difference",
    "twist",
    "evaluate_matrix",
    "compound_rows",
    "exterior_shift",
    "exterior_shift_profile",
    "partial_shift",
    "partial_shift_profile",
    "full_shift",
    "combinatorial_shift",
    "bruhat_cell",
    "coset_normalize",
    "product_defect",
    "INVERTIBILITY_RETRIES",
]

# Singular randomized evaluations are retried with fresh points this many
# times before the matrix is declared non-invertible.
INVERTIBILITY_RETRIES = 4


@dataclass(frozen=True)
class GenericMatrix:
    """A square matrix of sparse integer polynomials.

    ``unit_determinant`` marks matrices whose determinant is the constant
    +-1 (every evaluation is invertible); ``known_invertible`` marks a
    nonzero determinant polynomial (invertible over the rational function
    field, though particular evaluations may be singular).  Builders set
    these so shifting can skip redundant rank checks.
    """

    n: int
    entries: tuple[tuple[MultiPoly, ...], ...]
    unit_determinant: bool = False
    known_invertible: bool = False

    def __post_init__(self):
        if len(self.entries) != self.n or any(
            len(row) != self.n for row in self.entries
        ):
            raise MathPreconditionError("matrix entries must form an n x n array")
        for row in self.entries:
            for entry in row:
                if not isinstance(entry, MultiPoly):
                    raise MathPreconditionError("matrix entries must be MultiPoly")

    @cached_property
    def degree_bound(self) -> int:
        """Maximum total degree of any entry (recomputed, never trusted)."""
        return max(entry.degree() for row in self.entries for entry in row)

    @cached_property
    def variables(self) -> frozenset:
        return frozenset().union(*(e.variables() for row in self.entries for e in row))

    @cached_property
    def fingerprint(self) -> str:
        key = (
            self.n,
            tuple(
                tuple(tuple(sorted(e.terms.items())) for e in row)
                for row in self.entries
            ),
        )
        return hashlib.sha256(repr(key).encode()).hexdigest()

    @property
    def symbolically_invertible(self) -> bool:
        return self.unit_determinant or self.known_invertible

    def __repr__(self) -> str:
        rows = "; ".join(
            "[" + ", ".join(repr(e) for e in row) + "]" for row in self.entries
        )
        return f"GenericMatrix({self.n}, {rows})"


def matrix_from_entries(
    entries: Sequence[Sequence],
    unit_determinant: bool = False,
    known_invertible: bool = False,
) -> GenericMatrix:
    """Build a matrix from ints and/or MultiPoly entries."""
    coerced = tuple(
        tuple(e if isinstance(e, MultiPoly) else MultiPoly.const(int(e)) for e in row)
        for row in entries
    )
    return GenericMatrix(
        n=len(coerced),
        entries=coerced,
        unit_determinant=unit_determinant,
        known_invertible=known_invertible,
    )


def identity_matrix(n: int) -> GenericMatrix:
    return matrix_from_entries(
        [[1 if i == j else 0 for j in range(n)] for i in range(n)],
        unit_determinant=True,
    )


def generic_matrix(n: int) -> GenericMatrix:
    """The fully generic matrix: an independent variable in every entry."""
    return matrix_from_entries(
        [[MultiPoly.variable(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)],
        known_invertible=True,
    )


def generic_unipotent(n: int) -> GenericMatrix:
    """Upper unitriangular with an independent variable above the diagonal."""
    rows = [
        [
            MultiPoly.variable(i, j)
            if i < j
            else MultiPoly.const(1 if i == j else 0)
            for j in range(1, n + 1)
        ]
        for i in range(1, n + 1)
    ]
    return matrix_from_entries(rows, unit_determinant=True)


def cell_unipotent(w: Permutation) -> GenericMatrix:
    """Identity plus a variable at each inversion position of w."""
    inv = w.inversions()
    n = w.n
    rows = [
        [
            MultiPoly.variable(i, j)
            if (i, j) in inv
            else MultiPoly.const(1 if i == j else 0)
            for j in range(1, n + 1)
        ]
        for i in range(1, n + 1)
    ]
    return matrix_from_entries(rows, unit_determinant=True)


def permutation_matrix(w: Permutation) -> GenericMatrix:
    """0/1 matrix with a 1 in row i at column i.w."""
    n = w.n
    rows = [
        [1 if w.apply(i) == j else 0 for j in range(1, n + 1)] for i in range(1, n + 1)
    ]
    return matrix_from_entries(rows, unit_determinant=True)


def cell_representative(w: Permutation) -> GenericMatrix:
    """Canonical Bruhat-cell representative: cell unipotent times w.

    Row i carries a 1 at column i.w and a variable x_{ij} at column j.w for
    every inversion (i, j) of w.  Shifting by this matrix realizes the
    partial shift associated with w.
    """
    n = w.n
    inv = w.inversions()
    rows = [[MultiPoly.const(0)] * n for _ in range(n)]
    for i in range(1, n + 1):
        rows[i - 1][w.apply(i) - 1] = MultiPoly.const(1)
    for i, j in inv:
        rows[i - 1][w.apply(j) - 1] = MultiPoly.variable(i, j)
    return matrix_from_entries(rows, unit_determinant=True)


def combinatorial_shift_matrix(t: Permutation) -> GenericMatrix:
    """Structured matrix whose exterior shift equals the combinatorial shift.

    For a transposition (i j) with i < j: variable x_{ij} at (i, i), ones at
    (i, j) and (j, i), zero at (j, j), identity elsewhere.  For non-simple
    transpositions this matrix is not generic inside its Bruhat cell; the
    exterior shift by it still reproduces the combinatorial shift operator.
    """
    pair = t.as_transposition()
    if pair is None:
        raise MathPreconditionError(
            f"combinatorial shift matrix needs a transposition, got {t.one_line()}"
        )
    i, j = pair
    n = t.n
    rows = [[1 if a == b else 0 for b in range(1, n + 1)] for a in range(1, n + 1)]
    rows = [[MultiPoly.const(v) for v in row] for row in rows]
    rows[i - 1][i - 1] = MultiPoly.variable(i, j)
    rows[i - 1][j - 1] = MultiPoly.const(1)
    rows[j - 1][i - 1] = MultiPoly.const(1)
    rows[j - 1][j - 1] = MultiPoly.const(0)
    return matrix_from_entries(rows, unit_determinant=True)


def vandermonde_matrix(n: int) -> GenericMatrix:
    """Entry (i, j) is the i-th power of the j-th column variable.

    Uses the single-indexed variables x_{1j}.  The determinant is a nonzero
    polynomial, but the matrix is far from generic in its Bruhat cell: its
    function field has transcendence degree n rather than n^2.
    """
    rows = [
        [MultiPoly.variable(1, j) ** i for j in range(1, n + 1)]
        for i in range(1, n + 1)
    ]
    return matrix_from_entries(rows, known_invertible=True)


def matrix_product(a: GenericMatrix, b: GenericMatrix) -> GenericMatrix:
    if a.n != b.n:
        raise MathPreconditionError("matrix size mismatch in product")
    n = a.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = MultiPoly.zero()
            for t in range(n):
                acc = acc + a.entries[i][t] * b.entries[t][j]
            row.append(acc)
        rows.append(tuple(row))
    return GenericMatrix(
        n=n,
        entries=tuple(rows),
        unit_determinant=a.unit_determinant and b.unit_determinant,
        known_invertible=a.symbolically_invertible and b.symbolically_invertible,
    )


def matrix_difference(a: GenericMatrix, b: GenericMatrix) -> GenericMatrix:
    if a.n != b.n:
        raise MathPreconditionError("matrix size mismatch in difference")
    rows = tuple(
        tuple(x - y for x, y in zip(ra, rb))
        for ra, rb in zip(a.entries, b.entries)
    )
    return GenericMatrix(n=a.n, entries=rows)


def twist(m: GenericMatrix, v: Permutation) -> GenericMatrix:
    """Relabel every variable x_{ij} to x_{i.v^-1, j.v^-1} in every entry.

    On the fully generic matrix this variable relabeling coincides with
    conjugation by the permutation matrix of v.
    """
    if v.n != m.n:
        raise MathPreconditionError("permutation size must match the matrix")
    vinv = v.inverse()

    def relabel(var):
        i, j = var
        return (vinv.apply(i), vinv.apply(j))

    rows = tuple(
        tuple(entry.map_variables(relabel) for entry in row) for row in m.entries
    )
    return GenericMatrix(
        n=m.n,
        entries=rows,
        unit_determinant=m.unit_determinant,
        known_invertible=m.known_invertible,
    )


def evaluate_matrix(g: GenericMatrix, point: EvalPoint) -> list[list]:
    return [
        [entry.evaluate(point.assignment, point.domain) for entry in row]
        for row in g.entries
    ]


# ------------------------------------------------------------- compounds


def _wedge_rows(matrix_rows: Sequence[Sequence], edge: KSubset, n: int, domain):
    """Coefficients of the wedge of the rows indexed by ``edge``.

    Dynamic programming over subsets: wedge in one row at a time, tracking
    a map from t-subset bitmask to coefficient.  The coefficient at mask
    tau ends up being the minor with rows ``edge`` (ascending) and columns
    tau (ascending), so one pass yields a whole compound row.
    """
    state = {0: domain.one}
    for v in edge.elements():
        row = matrix_rows[v - 1]
        nxt: dict[int, object] = {}
        for mask, coeff in state.items():
            if domain.is_zero(coeff):
                continue
            for j in range(1, n + 1):
                bit = 1 << (j - 1)
                if mask & bit:
                    continue
                entry = row[j - 1]
                if domain.is_zero(entry):
                    continue
                term = domain.mul(coeff, entry)
                if (mask >> j).bit_count() & 1:
                    term = domain.neg(term)
                new_mask = mask | bit
                if new_mask in nxt:
                    nxt[new_mask] = domain.add(nxt[new_mask], term)
                else:
                    nxt[new_mask] = term
        state = nxt
    return state


@dataclass(frozen=True)
class CompoundSubmatrix:
    """Rows of the k-th compound of g indexed by the edges of S.

    Columns run over all k-subsets of [n] in lexicographic order; the
    (rho, tau) entry is the k x k minor of g with rows rho, columns tau.
    """

    source: UniformHypergraph
    columns: tuple[KSubset, ...]
    rows: tuple[tuple[MultiPoly, ...], ...]


def compound_rows(g: GenericMatrix, S: UniformHypergraph) -> CompoundSubmatrix:
    """Compound submatrix of g with rows S, via iterated wedge expansion."""
    if g.n != S.n:
        raise MathPreconditionError("matrix and hypergraph sizes differ")
    dom = PolynomialRing(0)
    columns = k_subsets(S.n, S.k)
    rows = []
    for edge in S.edges:
        state = _wedge_rows(g.entries, edge, S.n, dom)
        rows.append(
            tuple(state.get(col.bits, MultiPoly.zero()) for col in columns)
        )
    return CompoundSubmatrix(source=S, columns=columns, rows=tuple(rows))


# ------------------------------------------------------------ the shift


def _complete_profile(n: int, k: int, m: int) -> tuple[tuple[int, ...], tuple]:
    ncols = len(k_subsets(n, k))
    if m == 0:
        return (0,) * (ncols + 1), ()
    # complete layer: every column is a pivot
    ranks = tuple(min(i, m) for i in range(ncols + 1))
    return ranks, k_subsets(n, k)


def _degree_budget(g: GenericMatrix, S: UniformHypergraph) -> int:
    ncols = len(k_subsets(S.n, S.k))
    return max(1, g.degree_bound) * S.k * max(1, S.m) * ncols


def _offer_columns(state: ProfileState, columns, get_column, m: int):
    """Feed columns until rank m; returns (ranks, pivot columns)."""
    ranks = [0]
    pivots = []
    rank = 0
    for idx, col in enumerate(columns):
        if rank >= m:
            ranks.extend([rank] * (len(columns) - idx))
            break
        if state.offer(get_column(col)):
            pivots.append(col)
            rank += 1
        ranks.append(rank)
    return tuple(ranks), tuple(pivots)


def _shift_symbolic(g: GenericMatrix, S: UniformHypergraph, char: int):
    dom = PolynomialRing(char)
    if not g.symbolically_invertible:
        poly_rows = [[e.reduce_mod(char) if char else e for e in row] for row in g.entries]
        if matrix_rank(poly_rows, dom) < g.n:
            raise MatrixNotInvertibleError(
                "matrix is singular over the symbolic coefficient ring"
            )
    columns = k_subsets(S.n, S.k)
    wedge_rows = []
    for edge in S.edges:
        entries = g.entries
        if char:
            entries = tuple(tuple(e.reduce_mod(char) for e in row) for row in entries)
        wedge_rows.append(_wedge_rows(entries, edge, S.n, dom))
    state = ProfileState(dom, S.m)
    return _offer_columns(
        state,
        columns,
        lambda col: [row.get(col.bits, MultiPoly.zero()) for row in wedge_rows],
        S.m,
    )


def _shift_at_point(g: GenericMatrix, S: UniformHypergraph, point: EvalPoint):
    """Randomized-path elimination at a fixed evaluation point."""
    dom = point.domain
    concrete = evaluate_matrix(g, point)
    columns = k_subsets(S.n, S.k)
    wedge_rows = [_wedge_rows(concrete, edge, S.n, dom) for edge in S.edges]
    state = ProfileState(dom, S.m)
    return _offer_columns(
        state,
        columns,
        lambda col: [row.get(col.bits, dom.zero) for row in wedge_rows],
        S.m,
    )


def _profile_at_point(
    g: GenericMatrix, S: UniformHypergraph, ctx: FieldContext, point: EvalPoint
):
    """Profile at one integer point, honoring the double-prime mode.

    In that mode the elimination runs modulo two independent random 62-bit
    primes; agreement is accepted, disagreement falls back to the exact
    integer elimination at the same point.
    """
    if ctx.characteristic.is_zero and ctx.char0_double_prime:
        first, second = char0_prime_pair(ctx, point.call_tag, point.attempt)
        a = _shift_at_point(g, S, reduce_point_mod(point, first))
        if a == _shift_at_point(g, S, reduce_point_mod(point, second)):
            return a
    return _shift_at_point(g, S, point)


def _shift_randomized(g: GenericMatrix, S: UniformHypergraph, ctx: FieldContext):
    budget = _degree_budget(g, S)
    tag = f"shift:{g.fingerprint}:{S.n}:{S.k}:{tuple(e.bits for e in S.edges)!r}"
    last_error = None
    for attempt in range(1 + INVERTIBILITY_RETRIES):
        point = sample_eval_point(ctx, g.variables, budget, tag, attempt)
        if not g.unit_determinant:
            concrete = evaluate_matrix(g, point)
            if matrix_rank(concrete, point.domain) < g.n:
                last_error = MatrixNotInvertibleError(
                    "matrix evaluated to a singular matrix at "
                    f"{1 + attempt} independent random point(s)"
                )
                continue
        return _profile_at_point(g, S, ctx, point)
    raise last_error


def exterior_shift_profile(
    g: GenericMatrix, S: UniformHypergraph, ctx: FieldContext
) -> tuple[tuple[int, ...], UniformHypergraph]:
    """Rank sequence over lex columns plus the shifted hypergraph.

    The rank sequence starts at 0 and increases by at most 1 per k-subset
    column; the shifted hypergraph collects the columns where it steps.
    """
    if g.n != S.n:
        raise MathPreconditionError("matrix and hypergraph sizes differ")
    ncols = len(k_subsets(S.n, S.k))
    if S.m == 0 or (S.m == ncols and g.symbolically_invertible):
        ranks, pivots = _complete_profile(S.n, S.k, S.m)
        return ranks, UniformHypergraph(S.n, S.k, tuple(pivots))
    if ctx.backend is Backend.SYMBOLIC:
        ranks, pivots = _shift_symbolic(g, S, ctx.characteristic.value)
    else:
        ranks, pivots = _shift_randomized(g, S, ctx)
    if len(pivots) != S.m:
        raise MatrixNotInvertibleError(
            f"shift produced {len(pivots)} pivots for {S.m} edges; "
            "the matrix cannot be invertible"
        )
    return ranks, UniformHypergraph(S.n, S.k, tuple(pivots))


def exterior_shift(
    g: GenericMatrix, S: UniformHypergraph, ctx: FieldContext
) -> UniformHypergraph:
    """Shift S by the matrix g: lex-first spanning columns of the compound."""
    return exterior_shift_profile(g, S, ctx)[1]


@lru_cache(maxsize=None)
def _partial_shift_cached(S: UniformHypergraph, w: Permutation, ctx: FieldContext):
    return exterior_shift_profile(cell_representative(w), S, ctx)


def partial_shift(
    S: UniformHypergraph, w: Permutation, ctx: FieldContext
) -> UniformHypergraph:
    """Shift by the canonical Bruhat-cell representative of w.

    The identity permutation leaves S unchanged; the longest permutation
    gives the full shift; in between, longer permutations push S further
    toward its fully shifted image.
    """
    if w.n != S.n:
        raise MathPreconditionError("permutation size must match the hypergraph")
    return _partial_shift_cached(S, w, ctx)[1]


def partial_shift_profile(
    S: UniformHypergraph, w: Permutation, ctx: FieldContext
) -> tuple[tuple[int, ...], UniformHypergraph]:
    if w.n != S.n:
        raise MathPreconditionError("permutation size must match the hypergraph")
    return _partial_shift_cached(S, w, ctx)


def full_shift(S: UniformHypergraph, ctx: FieldContext) -> UniformHypergraph:
    """Shift by the longest permutation; the result is shifted."""
    return partial_shift(S, Permutation.longest(S.n), ctx)


def combinatorial_shift(S: UniformHypergraph, t: Permutation) -> UniformHypergraph:
    """Set-replacement shift: move j to i in each edge when the image is new."""
    pair = t.as_transposition()
    if pair is None:
        raise MathPreconditionError(
            f"combinatorial shift needs a transposition, got {t.one_line()}"
        )
    i, j = pair
    present = S.edge_bits()
    out = []
    for edge in S.edges:
        if edge.contains(j) and not edge.contains(i):
            moved = edge.replace(j, i)
            out.append(moved if moved.bits not in present else edge)
        else:
            out.append(edge)
    result = UniformHypergraph.from_edges(S.n, S.k, out)
    if result.m != S.m:
        raise InternalError("combinatorial shift changed the edge count")
    return result


# ------------------------------------------------- Bruhat cell detection


def _southwest_ranks(rows: list[list], domain) -> list[list[int]]:
    """R[i][j] = rank of the block with rows i..n and columns 1..j (1-based)."""
    n = len(rows)
    table = [[0] * (n + 1) for _ in range(n + 2)]
    for i in range(n, 0, -1):
        block = rows[i - 1 :]
        state = ProfileState(domain, len(block))
        for j in range(1, n + 1):
            state.offer([row[j - 1] for row in block])
            table[i][j] = state.rank
    return table


def bruhat_cell(rows: Sequence[Sequence], domain=None) -> Permutation:
    """The unique permutation whose double coset contains the given matrix.

    Works on a concrete invertible matrix over a field (or exact integers).
    Position (i, i.w) is detected where the southwest rank table steps in
    both directions at once; this profile is invariant under multiplying
    by upper triangular invertible matrices on either side.
    """
    dom = domain if domain is not None else ZZ
    mat = [list(row) for row in rows]
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise MathPreconditionError("bruhat_cell needs a square matrix")
    table = _southwest_ranks(mat, dom)
    if table[1][n] < n:
        raise MatrixNotInvertibleError("matrix is singular")
    images = [0] * n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            step = (
                table[i][j]
                - table[i + 1][j]
                - table[i][j - 1]
                + table[i + 1][j - 1]
            )
            if step == 1:
                if images[i - 1]:
                    raise InternalError("ambiguous Bruhat cell profile")
                images[i - 1] = j
    if sorted(images) != list(range(1, n + 1)):
        raise InternalError("Bruhat cell profile is not a permutation")
    return Permutation(tuple(images))


def coset_normalize(u_rows: Sequence[Sequence], w: Permutation, domain=None):
    """Split u.w into u'.w.u'' with u' supported on the inversions of w.

    ``u_rows`` is a concrete unipotent upper-triangular matrix.  Entries at
    non-inversion positions are cleared with elementary column operations;
    each one is compensated on the right of w, so u.w = u'.w.u'' holds
    exactly, with u'' again unipotent upper-triangular.
    """
    dom = domain if domain is not None else ZZ
    n = w.n
    u = [list(row) for row in u_rows]
    if len(u) != n or any(len(row) != n for row in u):
        raise MathPreconditionError("matrix size must match the permutation")
    for i in range(n):
        if not dom.is_zero(dom.sub(u[i][i], dom.one)):
            raise MathPreconditionError("matrix is not unipotent")
        for j in range(i):
            if not dom.is_zero(u[i][j]):
                raise MathPreconditionError("matrix is not upper triangular")
    inv = w.inversions()
    upp = [[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)]
    for l in range(2, n + 1):
        for k in range(l - 1, 0, -1):
            if (k, l) in inv:
                continue
            gamma = u[k - 1][l - 1]
            if dom.is_zero(gamma):
                continue
            # u <- u * e_{kl}(-gamma): column l picks up -gamma * column k
            for i in range(n):
                u[i][l - 1] = dom.sub(u[i][l - 1], dom.mul(gamma, u[i][k - 1]))
            # compensate on the right: u'' <- e_{k.w, l.w}(gamma) * u''
            kw, lw = w.apply(k) - 1, w.apply(l) - 1
            for j in range(n):
                upp[kw][j] = dom.add(upp[kw][j], dom.mul(gamma, upp[lw][j]))
    return u, upp


# ----------------------------------------------------- product structure


def product_defect(v: Permutation, w: Permutation) -> GenericMatrix:
    """Difference between the product of cell representatives and the joint one.

    Requires additive lengths (the product vw must extend v in the right
    weak order).  Returns cell_representative(v) * twist of
    cell_representative(w) minus cell_representative(v*w), after verifying
    the difference against its closed-form double-sum expression: entry
    (i, k) sums x_{i, j.v^-1} * x_{j.v^-1, k.(vw)^-1} over all j for which
    (i, j.v^-1) inverts v and (j, k.w^-1) inverts w.
    """
    if v.n != w.n:
        raise MathPreconditionError("permutation sizes differ")
    vw = v * w
    if vw.length() != v.length() + w.length():
        raise MathPreconditionError(
            "product defect requires additive lengths "
            f"({v.length()} + {w.length()} != {vw.length()})"
        )
    n = v.n
    product = matrix_product(cell_representative(v), twist(cell_representative(w), v))
    defect = matrix_difference(product, cell_representative(vw))
    v_inv, w_inv = v.inverse(), w.inverse()
    vw_inv = vw.inverse()
    inv_v, inv_w = v.inversions(), w.inversions()
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            expected = MultiPoly.zero()
            for j in range(1, n + 1):
                jv = v_inv.apply(j)
                if i >= jv or (i, jv) not in inv_v:
                    continue
                kw = w_inv.apply(k)
                if j >= kw or (j, kw) not in inv_w:
                    continue
                expected = expected + MultiPoly.variable(i, jv) * MultiPoly.variable(
                    jv, vw_inv.apply(k)
                )
            if defect.entries[i - 1][k - 1] != expected:
                raise InternalError(
                    "product defect disagrees with its closed form at "
                    f"({i}, {k})"
                )
    return defect
