"""k-subsets of {1, .., n}, uniform hypergraphs, and simplicial complexes.

Subsets are stored as bitmasks (bit i-1 set means vertex i is present),
which keeps the two orders used everywhere cheap:

* lexicographic order: S < T iff the smallest element of the symmetric
  difference lies in S; on 2-subsets of {1,..,4} this sorts
  12 < 13 < 14 < 23 < 24 < 34;
* domination order: with both sets written increasingly, a_t <= b_t for
  every coordinate t.

A family of k-subsets is "shifted" when it is closed downward under
domination, checked here through single-element exchanges.  Vertices are
1-based in every serialized form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import InputFormatError, MathPreconditionError, NotClosedError

__all__ = [
    "KSubset",
    "k_subsets",
    "lex_compare",
    "subset_rank",
    "subset_unrank",
    "dominates",
    "UniformHypergraph",
    "hypergraph_lex_compare",
    "is_shifted",
    "FVector",
    "SimplicialComplex",
    "complex_from_layers",
    "is_near_cone",
    "hypergraph_to_json",
    "hypergraph_from_json",
    "complex_to_json",
    "complex_from_json",
    "faces_to_text",
    "hypergraph_from_text",
    "complex_from_text",
]


# ------------------------------------------------------------------ subsets


@dataclass(frozen=True, order=False)
class KSubset:
    """A k-element subset of {1, .., n} as a bitmask."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0 or self.bits < 0 or self.bits >> self.n:
            raise MathPreconditionError(
                f"bitmask {self.bits:#x} does not fit inside 1..{self.n}"
            )

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> "KSubset":
        bits = 0
        for v in elements:
            if not 1 <= v <= n:
                raise MathPreconditionError(f"vertex {v} outside 1..{n}")
            bit = 1 << (v - 1)
            if bits & bit:
                raise MathPreconditionError(f"repeated vertex {v}")
            bits |= bit
        return cls(n, bits)

    @property
    def k(self) -> int:
        return self.bits.bit_count()

    def elements(self) -> tuple[int, ...]:
        bits, out = self.bits, []
        while bits:
            low = bits & -bits
            out.append(low.bit_length())
            bits ^= low
        return tuple(out)

    def contains(self, v: int) -> bool:
        return bool(self.bits >> (v - 1) & 1)

    def replace(self, old: int, new: int) -> "KSubset":
        """The set with ``old`` swapped out for ``new``."""
        if not self.contains(old) or self.contains(new):
            raise MathPreconditionError(f"cannot replace {old} by {new} in {self}")
        return KSubset(self.n, self.bits ^ (1 << (old - 1)) ^ (1 << (new - 1)))

    def __lt__(self, other: "KSubset") -> bool:
        return lex_compare(self, other) < 0

    def __le__(self, other: "KSubset") -> bool:
        return lex_compare(self, other) <= 0

    def __repr__(self) -> str:
        return "{" + ",".join(str(v) for v in self.elements()) + "}"


def lex_compare(a: KSubset, b: KSubset) -> int:
    """-1, 0 or 1; the smaller set owns the smallest differing element."""
    diff = a.bits ^ b.bits
    if not diff:
        return 0
    return -1 if diff & -diff & a.bits else 1


def dominates(sigma: KSubset, tau: KSubset) -> bool:
    """True iff sigma is at most tau coordinate by coordinate.

    Both sets must have the same cardinality; equivalent formulation:
    for every v, sigma has at least as many elements <= v as tau does.
    """
    if sigma.k != tau.k:
        raise MathPreconditionError("domination compares equal-size subsets only")
    return all(a <= b for a, b in zip(sigma.elements(), tau.elements()))


@lru_cache(maxsize=None)
def k_subsets(n: int, k: int) -> tuple[KSubset, ...]:
    """All k-subsets of {1, .., n} in lexicographic order."""
    if k < 0 or n < 0:
        raise MathPreconditionError(f"bad subset parameters n={n}, k={k}")
    return tuple(
        KSubset.from_elements(n, combo) for combo in combinations(range(1, n + 1), k)
    )


def subset_rank(s: KSubset) -> int:
    """Position of ``s`` in the lexicographic enumeration of its (n, k)."""
    rank, prev = 0, 0
    remaining = s.k
    for v in s.elements():
        for u in range(prev + 1, v):
            rank += comb(s.n - u, remaining - 1)
        prev = v
        remaining -= 1
    return rank


def subset_unrank(n: int, k: int, rank: int) -> KSubset:
    if not 0 <= rank < comb(n, k):
        raise MathPreconditionError(f"rank {rank} out of range for C({n},{k})")
    elements = []
    v = 1
    while len(elements) < k:
        block = comb(n - v, k - len(elements) - 1)
        if rank < block:
            elements.append(v)
        else:
            rank -= block
        v += 1
    return KSubset.from_elements(n, elements)


# ------------------------------------------------------------- hypergraphs


@dataclass(frozen=True)
class UniformHypergraph:
    """A set of distinct k-subsets of {1, .., n}, kept in lexicographic order."""

    n: int
    k: int
    edges: tuple[KSubset, ...]

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            if e.n != self.n or e.k != self.k:
                raise MathPreconditionError(
                    f"edge {e} does not live in C([{self.n}], {self.k})"
                )
            if e.bits in seen:
                raise MathPreconditionError(f"repeated edge {e}")
            seen.add(e.bits)
        ordered = tuple(sorted(self.edges, key=lambda e: e.elements()))
        object.__setattr__(self, "edges", ordered)

    @classmethod
    def from_edges(
        cls, n: int, k: int, edges: Iterable[Iterable[int] | KSubset]
    ) -> "UniformHypergraph":
        packed = [
            e if isinstance(e, KSubset) else KSubset.from_elements(n, e) for e in edges
        ]
        for e in packed:
            if e.k != k:
                raise MathPreconditionError(f"edge {e} is not a {k}-subset")
        return cls(n, k, tuple(packed))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_bits(self) -> frozenset[int]:
        return frozenset(e.bits for e in self.edges)

    def contains(self, s: KSubset) -> bool:
        return any(e.bits == s.bits for e in self.edges)

    def edge_lists(self) -> list[list[int]]:
        return [list(e.elements()) for e in self.edges]

    def __repr__(self) -> str:
        return f"UniformHypergraph(n={self.n}, k={self.k}, {list(self.edges)})"


def hypergraph_lex_compare(a: UniformHypergraph, b: UniformHypergraph) -> int:
    """-1, 0 or 1; the smaller family owns the lex-least edge they disagree on."""
    if (a.n, a.k) != (b.n, b.k):
        raise MathPreconditionError("hypergraphs live on different vertex sets")
    sym = a.edge_bits() ^ b.edge_bits()
    if not sym:
        return 0
    least = min((KSubset(a.n, bits) for bits in sym), key=lambda s: s.elements())
    return -1 if least.bits in a.edge_bits() else 1


def is_shifted(h: UniformHypergraph) -> bool:
    """Closed downward under domination, via single-element exchanges."""
    present = h.edge_bits()
    for e in h.edges:
        for j in e.elements():
            for i in range(1, j):
                if not e.contains(i):
                    if (e.bits ^ (1 << (j - 1)) ^ (1 << (i - 1))) not in present:
                        return False
    return True


# --------------------------------------------------------------- complexes


@dataclass(frozen=True)
class FVector:
    """Face counts (f_{-1}, f_0, ..., f_dim); f_{-1} counts the empty face."""

    counts: tuple[int, ...]

    def __getitem__(self, dim: int) -> int:
        # indexed by dimension, so [-1] is the empty face count
        return self.counts[dim + 1]

    def __len__(self) -> int:
        return len(self.counts)

    def euler_characteristic(self) -> int:
        """Non-reduced Euler characteristic, ignoring the empty face."""
        return sum(
            (-1) ** d * c for d, c in enumerate(self.counts[1:])
        )

    def __repr__(self) -> str:
        return f"FVector{self.counts}"


@dataclass(frozen=True)
class SimplicialComplex:
    """A downward-closed family of subsets of {1, .., n}.

    Faces are bitmasks; a nonempty complex always contains the empty face 0.
    """

    n: int
    faces: frozenset[int]

    def __post_init__(self):
        for f in self.faces:
            if f < 0 or f >> self.n:
                raise MathPreconditionError(f"face {f:#x} outside 1..{self.n}")
            # downward closure via single-element removals
            bits = f
            while bits:
                low = bits & -bits
                if (f ^ low) not in self.faces:
                    raise NotClosedError(
                        f"face {_mask_to_elems(f)} present but its subset "
                        f"{_mask_to_elems(f ^ low)} is missing",
                        witness=_mask_to_elems(f),
                    )
                bits ^= low
        if self.faces and 0 not in self.faces:
            raise NotClosedError("nonempty complex must contain the empty face")

    @classmethod
    def from_facets(
        cls, n: int, facets: Iterable[Iterable[int]]
    ) -> "SimplicialComplex":
        """Downward closure of the given generating faces."""
        faces: set[int] = set()
        stack = []
        for facet in facets:
            stack.append(KSubset.from_elements(n, facet).bits)
        if stack:
            faces.add(0)
        while stack:
            f = stack.pop()
            if f in faces:
                continue
            faces.add(f)
            bits = f
            while bits:
                low = bits & -bits
                sub = f ^ low
                if sub not in faces:
                    stack.append(sub)
                bits ^= low
        return cls(n, frozenset(faces))

    @property
    def dim(self) -> int:
        if not self.faces:
            return -2  # the void complex, one less than {empty face}
        return max(f.bit_count() for f in self.faces) - 1

    def contains(self, elements: Iterable[int]) -> bool:
        return KSubset.from_elements(self.n, elements).bits in self.faces

    def layer(self, s: int) -> UniformHypergraph:
        """The (s+1)-subsets that are faces, as a uniform hypergraph."""
        if s < 0:
            raise MathPreconditionError("layer index must be at least 0")
        k = s + 1
        edges = tuple(
            KSubset(self.n, f) for f in self.faces if f.bit_count() == k
        )
        return UniformHypergraph(self.n, k, edges)

    def layers(self) -> list[UniformHypergraph]:
        return [self.layer(s) for s in range(self.dim + 1)]

    def facets(self) -> tuple[KSubset, ...]:
        facets = [
            f
            for f in self.faces
            if f and not any(g != f and g & f == f for g in self.faces)
        ]
        if self.faces == frozenset({0}):
            facets = [0]
        return tuple(
            sorted((KSubset(self.n, f) for f in facets), key=lambda s: s.elements())
        )

    def facets_as_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(f.elements() for f in self.facets())

    def f_vector(self) -> FVector:
        if not self.faces:
            return FVector(())
        counts = [0] * (self.dim + 2)
        for f in self.faces:
            counts[f.bit_count()] += 1
        return FVector(tuple(counts))

    def __repr__(self) -> str:
        shown = ",".join(
            "".join(map(str, f.elements())) if f.bits else "()"
            for f in self.facets()
        )
        return f"SimplicialComplex(n={self.n}, facets=[{shown}])"


def _mask_to_elems(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def complex_from_layers(layers: Sequence[UniformHypergraph]) -> SimplicialComplex:
    """Assemble a complex from uniform layers, checking downward closure.

    Raises ``NotClosedError`` naming a witness face whose boundary is not
    covered by the next layer down.
    """
    if not layers:
        return SimplicialComplex(0, frozenset())
    n = layers[0].n
    by_k: dict[int, UniformHypergraph] = {}
    for layer in layers:
        if layer.n != n:
            raise MathPreconditionError("layers live on different vertex sets")
        if layer.k in by_k:
            raise MathPreconditionError(f"two layers with k={layer.k}")
        by_k[layer.k] = layer
    faces: set[int] = {0}
    for layer in by_k.values():
        faces.update(e.bits for e in layer.edges)
    for layer in by_k.values():
        if layer.k == 1:
            continue
        below = by_k.get(layer.k - 1)
        below_bits = below.edge_bits() if below else frozenset()
        for e in layer.edges:
            bits = e.bits
            while bits:
                low = bits & -bits
                if (e.bits ^ low) not in below_bits:
                    raise NotClosedError(
                        f"face {e.elements()} present but its subset "
                        f"{_mask_to_elems(e.bits ^ low)} is missing from the "
                        f"layer below",
                        witness=e.elements(),
                    )
                bits ^= low
    return SimplicialComplex(n, frozenset(faces))


def is_near_cone(K: SimplicialComplex) -> bool:
    """True iff every face avoiding vertex 1 can trade any element for 1.

    Concretely: whenever sigma is a face with 1 not in sigma, then for every
    i in sigma the set sigma - {i} + {1} is also a face.
    """
    for f in K.faces:
        if f & 1:
            continue
        bits = f
        while bits:
            low = bits & -bits
            if (f ^ low | 1) not in K.faces:
                return False
            bits ^= low
    return True


# ------------------------------------------------------------ serialization


def hypergraph_to_json(h: UniformHypergraph) -> str:
    payload = {"n": h.n, "k": h.k, "edges": h.edge_lists()}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def hypergraph_from_json(text: str) -> UniformHypergraph:
    try:
        payload = json.loads(text)
        n, k, edges = payload["n"], payload["k"], payload["edges"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputFormatError(f"bad hypergraph JSON: {exc}") from exc
    try:
        return UniformHypergraph.from_edges(n, k, edges)
    except (MathPreconditionError, TypeError) as exc:
        raise InputFormatError(f"bad hypergraph JSON: {exc}") from exc


def complex_to_json(K: SimplicialComplex) -> str:
    payload = {
        "n": K.n,
        "facets": [list(f.elements()) for f in K.facets()],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def complex_from_json(text: str) -> SimplicialComplex:
    try:
        payload = json.loads(text)
        n, facets = payload["n"], payload["facets"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputFormatError(f"bad complex JSON: {exc}") from exc
    try:
        return SimplicialComplex.from_facets(n, facets)
    except (MathPreconditionError, TypeError) as exc:
        raise InputFormatError(f"bad complex JSON: {exc}") from exc


def faces_to_text(faces: Iterable[Iterable[int]]) -> str:
    """One face per line, vertices space-separated."""
    return "\n".join(" ".join(str(v) for v in face) for face in faces) + "\n"


def _parse_face_lines(text: str) -> list[list[int]]:
    faces = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            faces.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise InputFormatError(f"line {lineno}: {line!r} is not a face") from exc
    return faces


def hypergraph_from_text(text: str, n: int | None = None) -> UniformHypergraph:
    """Parse one edge per line; n defaults to the largest vertex seen."""
    faces = _parse_face_lines(text)
    if not faces:
        raise InputFormatError("no edges found and no way to infer (n, k)")
    ks = {len(f) for f in faces}
    if len(ks) != 1:
        raise InputFormatError(f"edges of mixed sizes {sorted(ks)}")
    inferred = max(max(f) for f in faces)
    if n is None:
        n = inferred
    try:
        return UniformHypergraph.from_edges(n, ks.pop(), faces)
    except MathPreconditionError as exc:
        raise InputFormatError(str(exc)) from exc


def complex_from_text(text: str, n: int | None = None) -> SimplicialComplex:
    """Parse one facet per line; n defaults to the largest vertex seen."""
    faces = _parse_face_lines(text)
    if not faces:
        return SimplicialComplex(0, frozenset())
    inferred = max(max(f) for f in faces if f)
    if n is None:
        n = inferred
    try:
        return SimplicialComplex.from_facets(n, faces)
    except MathPreconditionError as exc:
        raise InputFormatError(str(exc)) from exc
