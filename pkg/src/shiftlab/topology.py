"""Shifting simplicial complexes and measuring their topology.

Shifting every layer of a simplicial complex with the same matrix yields a
simplicial complex again, with the same f-vector.  Betti numbers are
computed three ways: by boundary-matrix ranks over the coefficient field
(the general route), by the face-counting formula valid for near cones
(which are wedges of spheres, so the answer is field independent), and by
a formula that reads them off the full shifts of the layers.

A permutation that extends the long cycle (1 2 .. n) in the right weak
order is certified to produce near cones and to preserve Betti numbers
when shifting any complex.  The conjecture scanner probes two open
statements on explicit instances: componentwise monotonicity of Betti
numbers under partial shifts, and acyclicity of contracted shift graphs.
It reports findings and never asserts either statement.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .combstruct import (
    SimplicialComplex,
    UniformHypergraph,
    complex_from_layers,
    is_near_cone,
)
from .errors import (
    InternalError,
    MathPreconditionError,
    MatrixNotInvertibleError,
    NotClosedError,
)
from .field import (
    Backend,
    Characteristic,
    DeterministicStream,
    FieldContext,
    PrimeField,
    ZZ,
    matrix_rank,
    sample_eval_point,
)
from .shiftcore import (
    GenericMatrix,
    INVERTIBILITY_RETRIES,
    cell_representative,
    exterior_shift,
    full_shift,
    _degree_budget,
    _profile_at_point,
    evaluate_matrix,
)
from .shiftgraph import (
    ContractedShiftGraph,
    ShiftGraph,
    build_shift_graph,
    contract,
    is_acyclic,
)
from .symgroup import Permutation, all_permutations, weak_order_geq

__all__ = [
    "BettiVector",
    "betti_numbers",
    "near_cone_betti",
    "betti_via_full_shift",
    "shift_complex",
    "shift_complex_by_matrix",
    "preserves_betti_certificate",
    "conjecture_scan",
    "random_complexes",
    "ScanReport",
]


@dataclass(frozen=True)
class BettiVector:
    """Betti numbers beta_0..beta_dim, non-reduced: beta_0 counts components."""

    characteristic: int
    values: tuple[int, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise InternalError(f"negative Betti number in {self.values}")

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)

    def to_json(self) -> str:
        payload = {"char": self.characteristic, "betti": list(self.values)}
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def __repr__(self) -> str:
        return f"BettiVector(char={self.characteristic}, {self.values})"


def _boundary_matrix(K: SimplicialComplex, s: int, domain):
    """Rows: (s-1)-faces; columns: s-faces; alternating-sign incidence."""
    rows_faces = sorted(f for f in K.faces if f.bit_count() == s)
    cols_faces = sorted(f for f in K.faces if f.bit_count() == s + 1)
    index = {f: i for i, f in enumerate(rows_faces)}
    matrix = [[domain.zero] * len(cols_faces) for _ in rows_faces]
    one = domain.one
    for j, face in enumerate(cols_faces):
        sign = one
        bits = face
        while bits:
            low = bits & -bits
            matrix[index[face ^ low]][j] = sign
            sign = domain.neg(sign)
            bits ^= low
    return matrix


@lru_cache(maxsize=None)
def betti_numbers(K: SimplicialComplex, characteristic: int = 0) -> BettiVector:
    """Betti numbers over the field of the given characteristic.

    beta_k = (number of k-faces) - rank d_k - rank d_{k+1}, where d_s is
    the boundary map from s-chains to (s-1)-chains and d_0 = 0.  Ranks are
    exact: integer fraction-free elimination in characteristic zero, prime
    field arithmetic otherwise.  The alternating sum is checked against
    the Euler characteristic of the f-vector.
    """
    char = Characteristic(characteristic)
    dom = ZZ if char.is_zero else PrimeField(char.value)
    dim = K.dim
    if dim < 0:
        return BettiVector(characteristic, ())
    face_counts = [0] * (dim + 1)
    for f in K.faces:
        if f:
            face_counts[f.bit_count() - 1] += 1
    ranks = [0] * (dim + 2)
    for s in range(1, dim + 1):
        ranks[s] = matrix_rank(_boundary_matrix(K, s, dom), dom)
    values = tuple(
        face_counts[k] - ranks[k] - ranks[k + 1] for k in range(dim + 1)
    )
    euler = sum((-1) ** k * c for k, c in enumerate(face_counts))
    if sum((-1) ** k * b for k, b in enumerate(values)) != euler:
        raise InternalError("Betti numbers violate the Euler characteristic")
    return BettiVector(characteristic, values)


def near_cone_betti(K: SimplicialComplex) -> BettiVector:
    """Face-counting Betti numbers, valid exactly for near cones.

    Counts, per dimension k, the k-faces that do not extend by vertex 1 to
    a face.  Near cones are wedges of spheres, so this is field
    independent; the count is reduced and is converted to the non-reduced
    convention by adding one component in degree 0.  The returned vector
    carries characteristic 0 purely as a label.
    """
    if not is_near_cone(K):
        raise MathPreconditionError("complex is not a near cone")
    dim = K.dim
    if dim < 0:
        return BettiVector(0, ())
    counts = [0] * (dim + 1)
    for f in K.faces:
        if f and not f & 1 and (f | 1) not in K.faces:
            counts[f.bit_count() - 1] += 1
    if any(f & 1 for f in K.faces):
        counts[0] += 1
    return BettiVector(0, tuple(counts))


def betti_via_full_shift(K: SimplicialComplex, ctx: FieldContext) -> BettiVector:
    """Betti numbers read off the full shifts of consecutive layers.

    beta_k = |K^k| - |{faces of the shifted (k+1)-layer containing 1}|
    - |{faces of the shifted k-layer containing 1}| in the reduced
    convention, converted to non-reduced at degree 0.
    """
    char = ctx.characteristic.value
    dim = K.dim
    if dim < 0:
        return BettiVector(char, ())

    def ones(layer: UniformHypergraph) -> int:
        shifted = full_shift(layer, ctx)
        return sum(1 for e in shifted.edges if e.contains(1))

    values = []
    layers = K.layers()
    for k in range(dim + 1):
        count = layers[k].m
        upper = ones(layers[k + 1]) if k + 1 <= dim else 0
        values.append(count - upper - ones(layers[k]))
    values[0] += 1
    return BettiVector(char, tuple(values))


# ----------------------------------------------------- complex shifting


def _reassemble(K: SimplicialComplex, layers: Sequence[UniformHypergraph]):
    try:
        shifted = complex_from_layers(layers)
    except NotClosedError as exc:
        raise InternalError(
            "layer-wise shift failed to produce a simplicial complex: "
            f"{exc}"
        ) from exc
    if shifted.f_vector() != K.f_vector():
        raise InternalError("layer-wise shift changed the f-vector")
    return shifted


def shift_complex_by_matrix(
    K: SimplicialComplex, g: GenericMatrix, ctx: FieldContext
) -> SimplicialComplex:
    """Shift every layer of K with the same matrix g and reassemble.

    Randomized runs evaluate g once and reuse the point for every layer
    (the budget sums over all layers), mirroring the fact that a single
    matrix shifts the whole complex.
    """
    if g.n != K.n:
        raise MathPreconditionError("matrix size must match the complex")
    dim = K.dim
    if dim < 0:
        return K
    layers = K.layers()
    if ctx.backend is Backend.SYMBOLIC:
        shifted = [exterior_shift(g, layer, ctx) for layer in layers]
        return _reassemble(K, shifted)
    budget = sum(_degree_budget(g, layer) for layer in layers)
    tag = (
        f"shift_complex:{g.fingerprint}:{K.n}:"
        f"{tuple(sorted(K.faces))!r}"
    )
    last_error = None
    for attempt in range(1 + INVERTIBILITY_RETRIES):
        point = sample_eval_point(ctx, g.variables, budget, tag, attempt)
        if not g.unit_determinant:
            if matrix_rank(evaluate_matrix(g, point), point.domain) < g.n:
                last_error = MatrixNotInvertibleError(
                    "matrix evaluated to a singular matrix at "
                    f"{1 + attempt} independent random point(s)"
                )
                continue
        shifted = []
        for layer in layers:
            if layer.m == math.comb(K.n, layer.k) and g.symbolically_invertible:
                shifted.append(layer)
                continue
            _, pivots = _profile_at_point(g, layer, ctx, point)
            if len(pivots) != layer.m:
                raise MatrixNotInvertibleError(
                    "layer shift produced too few pivots; matrix cannot be "
                    "invertible"
                )
            shifted.append(UniformHypergraph(K.n, layer.k, tuple(pivots)))
        return _reassemble(K, shifted)
    raise last_error


@lru_cache(maxsize=None)
def _shift_complex_cached(K: SimplicialComplex, w: Permutation, ctx: FieldContext):
    return shift_complex_by_matrix(K, cell_representative(w), ctx)


def shift_complex(
    K: SimplicialComplex, w: Permutation, ctx: FieldContext
) -> SimplicialComplex:
    """Layer-wise partial shift of a complex by the permutation w."""
    if w.n != K.n:
        raise MathPreconditionError("permutation size must match the complex")
    if w.is_identity or K.dim < 0:
        return K
    return _shift_complex_cached(K, w, ctx)


def preserves_betti_certificate(w: Permutation) -> bool:
    """True when w extends the long cycle (1 2 .. n) in the right weak order.

    Certified permutations are guaranteed to turn any complex into a near
    cone with unchanged Betti numbers under layer-wise shifting.  The
    certificate is sufficient, not necessary.
    """
    return weak_order_geq(w, Permutation.cycle(w.n))


# ------------------------------------------------------ conjecture scans


@dataclass(frozen=True)
class ComplexScanResult:
    """Monotonicity scan of one complex against every permutation."""

    facets: tuple[tuple[int, ...], ...]
    betti: tuple[int, ...]
    permutations_checked: int
    violations: tuple[dict, ...]
    preserving: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class GraphScanResult:
    """Acyclicity check of one contracted shift graph."""

    n: int
    k: int
    m: int
    nodes: int
    edges: int
    acyclic: bool
    cycle: tuple[int, ...]


@dataclass(frozen=True)
class ScanReport:
    """Findings only; the scanned conjectures are never asserted."""

    characteristic: int
    complexes: tuple[ComplexScanResult, ...]
    graphs: tuple[GraphScanResult, ...]

    @property
    def has_violations(self) -> bool:
        return any(c.violations for c in self.complexes) or any(
            not g.acyclic for g in self.graphs
        )

    def to_json(self) -> str:
        payload = {
            "char": self.characteristic,
            "complexes": [
                {
                    "facets": [list(f) for f in c.facets],
                    "betti": list(c.betti),
                    "permutations_checked": c.permutations_checked,
                    "violations": list(c.violations),
                    "preserving": [list(p) for p in c.preserving],
                }
                for c in self.complexes
            ],
            "graphs": [
                {
                    "n": g.n,
                    "k": g.k,
                    "m": g.m,
                    "nodes": g.nodes,
                    "edges": g.edges,
                    "acyclic": g.acyclic,
                    "cycle": list(g.cycle),
                }
                for g in self.graphs
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _scan_complex(K: SimplicialComplex, ctx: FieldContext) -> ComplexScanResult:
    char = ctx.characteristic.value
    base = betti_numbers(K, char)
    violations = []
    preserving = []
    checked = 0
    for w in all_permutations(K.n):
        if w.is_identity:
            shifted = K
        else:
            shifted = shift_complex(K, w, ctx)
        checked += 1
        image = betti_numbers(shifted, char)
        if image.values == base.values:
            preserving.append(w.images)
        if any(b < a for a, b in zip(base.values, image.values)):
            violations.append(
                {
                    "permutation": list(w.images),
                    "betti_before": list(base.values),
                    "betti_after": list(image.values),
                }
            )
    return ComplexScanResult(
        facets=K.facets_as_tuples(),
        betti=base.values,
        permutations_checked=checked,
        violations=tuple(violations),
        preserving=tuple(preserving),
    )


def _scan_graph(params: tuple[int, int, int], ctx: FieldContext) -> GraphScanResult:
    n, k, m = params
    graph = build_shift_graph(n, k, m, ctx)
    contracted = contract(graph, ctx)
    ok, order_or_cycle = is_acyclic(contracted)
    return GraphScanResult(
        n=n,
        k=k,
        m=m,
        nodes=len(contracted.nodes),
        edges=len(contracted.edges),
        acyclic=ok,
        cycle=() if ok else tuple(order_or_cycle),
    )


def conjecture_scan(
    complexes: Iterable[SimplicialComplex],
    ctx: FieldContext,
    graph_params: Iterable[tuple[int, int, int]] = (),
    prebuilt_graphs: Iterable = (),
) -> ScanReport:
    """Probe the open monotonicity and acyclicity statements on instances.

    For each complex, shifts by all permutations of its vertex set and
    compares Betti vectors componentwise; for each (n, k, m) triple (or
    prebuilt shift graph), contracts and checks acyclicity.  Results are
    reported with provenance; nothing is asserted.
    """
    complex_results = tuple(_scan_complex(K, ctx) for K in complexes)
    graph_results = [
        _scan_graph(tuple(params), ctx) for params in graph_params
    ]
    for g in prebuilt_graphs:
        if isinstance(g, ShiftGraph):
            g = contract(g, ctx)
        if not isinstance(g, ContractedShiftGraph):
            raise MathPreconditionError("prebuilt graphs must be shift graphs")
        ok, order_or_cycle = is_acyclic(g)
        graph_results.append(
            GraphScanResult(
                n=g.n,
                k=g.k,
                m=g.m,
                nodes=len(g.nodes),
                edges=len(g.edges),
                acyclic=ok,
                cycle=() if ok else tuple(order_or_cycle),
            )
        )
    return ScanReport(
        characteristic=ctx.characteristic.value,
        complexes=complex_results,
        graphs=tuple(graph_results),
    )


def random_complexes(
    count: int, n: int = 5, dim: int = 2, seed: int = 0
) -> tuple[SimplicialComplex, ...]:
    """Seeded pseudorandom pure complexes for scan instances.

    Complex i is generated by a stream keyed on (seed, i): pick a facet
    count m uniformly in [1, C(n, dim+1)], then pick m distinct
    (dim+1)-subsets of [n] as facets.  Identical arguments always produce
    identical complexes.
    """
    if count < 0 or n < 1 or not 0 <= dim < n:
        raise MathPreconditionError("need count >= 0 and 0 <= dim < n")
    pool = list(itertools.combinations(range(1, n + 1), dim + 1))
    out = []
    for i in range(count):
        stream = DeterministicStream("random-complex", seed, n, dim, i)
        m = 1 + stream.randbelow(len(pool))
        chosen = []
        remaining = list(pool)
        for _ in range(m):
            chosen.append(remaining.pop(stream.randbelow(len(remaining))))
        out.append(SimplicialComplex.from_facets(n, chosen))
    return tuple(out)
