"""Closed-form invariants of Fano schemes of bounded-rank matrix spaces.

Everything here is an exact integer function of the problem instance: the
dimension ``kappa(s)`` of the standard s-compression space, the labeled
connectedness graph, irreducibility, component dimensions and generic
tangent-space dimensions on the symmetric side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

SYMMETRIC = "symmetric"
ALTERNATING = "alternating"
RECTANGULAR = "rectangular"

_ALIASES = {
    "sym": SYMMETRIC, "symmetric": SYMMETRIC, "sd": SYMMETRIC,
    "alt": ALTERNATING, "alternating": ALTERNATING, "pf": ALTERNATING, "skew": ALTERNATING,
    "rect": RECTANGULAR, "rectangular": RECTANGULAR, "d": RECTANGULAR,
}


class DomainError(ValueError):
    """Arguments outside the domain where a formula or theorem applies."""


def normalize_tag(tag: str) -> str:
    try:
        return _ALIASES[tag.lower()]
    except KeyError:
        raise DomainError(f"unknown variant {tag!r}") from None


@dataclass(frozen=True)
class Variant:
    tag: str
    m: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "tag", normalize_tag(self.tag))
        if self.tag == RECTANGULAR:
            if self.m is None or self.m < 1:
                raise DomainError("rectangular variant needs a positive m")
        elif self.m is not None:
            raise DomainError(f"m is only meaningful for rectangular matrices, got m={self.m}")


@dataclass(frozen=True)
class Params:
    """One problem instance: matrices of a variant, rank < r, projective k-planes."""

    variant: Variant
    n: int
    r: int
    k: int = 0

    def __post_init__(self):
        if isinstance(self.variant, str):
            object.__setattr__(self, "variant", Variant(self.variant))
        tag, n, r, k = self.variant.tag, self.n, self.r, self.k
        if tag == SYMMETRIC and not 3 <= r <= n:
            raise DomainError(f"symmetric needs 3 <= r <= n, got r={r}, n={n}")
        if tag == ALTERNATING and not (2 < r <= n and r % 2 == 0):
            raise DomainError(f"alternating needs even r with 2 < r <= n, got r={r}, n={n}")
        if tag == RECTANGULAR and not 2 <= r <= self.variant.m <= n:
            raise DomainError(f"rectangular needs 2 <= r <= m <= n, got r={r}, m={self.variant.m}, n={n}")
        if k < 0:
            raise DomainError("k must be nonnegative")
        if k > ambient_dim(self):
            raise DomainError(f"k={k} exceeds the ambient projective dimension {ambient_dim(self)}")

    @classmethod
    def make(cls, variant: str, n: int, r: int, k: int = 0, m: int | None = None) -> "Params":
        tag = normalize_tag(variant)
        return cls(Variant(tag, m if tag == RECTANGULAR else None), n, r, k)

    @property
    def tag(self) -> str:
        return self.variant.tag

    @property
    def m(self) -> int | None:
        return self.variant.m

    def with_k(self, k: int) -> "Params":
        return Params(self.variant, self.n, self.r, k)

    def as_dict(self) -> dict:
        d = {"variant": self.tag, "n": self.n}
        if self.tag == RECTANGULAR:
            d["m"] = self.m
        d.update(r=self.r, k=self.k)
        return d


def _require_symmetric(params: Params, what: str) -> None:
    if params.tag != SYMMETRIC:
        raise DomainError(f"{what} is only available for symmetric matrices")


def ambient_dim(params: Params) -> int:
    """Projective dimension of the space of matrices."""
    n = params.n
    if params.tag == SYMMETRIC:
        return comb(n + 1, 2) - 1
    if params.tag == ALTERNATING:
        return comb(n, 2) - 1
    return params.m * n - 1


def s_max(params: Params) -> int:
    if params.tag == RECTANGULAR:
        return params.r - 1
    return (params.r - 1) // 2


def kappa(params: Params, s: int) -> int:
    """Projective dimension of the standard s-compression space."""
    if not 0 <= s <= s_max(params):
        raise DomainError(f"s={s} outside 0..{s_max(params)}")
    n, r = params.n, params.r
    if params.tag == SYMMETRIC:
        return s * (s + 1 + n - r) + comb(r - s, 2) - 1
    if params.tag == ALTERNATING:
        return s * (s + 1 + n - r) + comb(r - s - 1, 2) - 1
    m = params.m
    return m * n - (s + 1 + n - r) * (m - s) - 1


def kappa_table(params: Params) -> list[int]:
    return [kappa(params, s) for s in range(s_max(params) + 1)]


def variety_dim(params: Params) -> int:
    """Projective dimension of the symmetric determinantal variety."""
    _require_symmetric(params, "variety_dim")
    n, r = params.n, params.r
    return n * (r - 1) - comb(r - 1, 2) - 1


def max_k(params: Params) -> int:
    return max(kappa(params, 0), kappa(params, s_max(params)))


def is_nonempty(params: Params) -> bool:
    return params.k <= max_k(params)


def edge_label(params: Params, s: int, t: int) -> int:
    """Label of the edge {s, t}, s < t: the largest k at which both compression loci meet."""
    if s >= t:
        raise DomainError(f"edge label needs s < t, got s={s}, t={t}")
    if s < 0 or t > s_max(params):
        raise DomainError(f"edge {{{s},{t}}} outside 0..{s_max(params)}")
    return kappa(params, t) - (s + 1 + params.n - params.r) * (t - s)


@dataclass
class FanoGraph:
    """Labeled graph whose components match the components of the Fano scheme."""

    vertices: list[tuple[int, int]]
    edges: list[tuple[tuple[int, int], int]]
    k: int
    params: Params | None = field(default=None, repr=False)

    @property
    def vertex_set(self) -> list[int]:
        return [s for s, _ in self.vertices]

    def to_dot(self) -> str:
        lines = ["graph fano {"]
        if self.params is not None:
            lines.append(f"  // {_describe(self.params)}")
        if not self.vertices:
            lines.append("  // scheme empty")
        for s, lab in self.vertices:
            lines.append(f'  s{s} [label="{s}", xlabel="{lab}"];')
        for (a, b), lab in self.edges:
            lines.append(f'  s{a} -- s{b} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _describe(params: Params) -> str:
    parts = [f"{key}={val}" for key, val in params.as_dict().items()]
    return ", ".join(parts)


def build_graph(params: Params) -> FanoGraph:
    k = params.k
    top = s_max(params)
    verts = [(s, kappa(params, s)) for s in range(top + 1)]
    verts = [(s, lab) for s, lab in verts if lab >= k]
    alive = {s for s, _ in verts}
    edges = []
    for s in range(top + 1):
        for t in range(s + 1, top + 1):
            if s in alive and t in alive:
                lab = edge_label(params, s, t)
                if lab >= k:
                    edges.append(((s, t), lab))
    return FanoGraph(verts, edges, k, params)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller s stays the representative
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo


def connected_components(graph: FanoGraph) -> list[list[int]]:
    """Vertex partition, each part ascending, parts ordered by representative."""
    uf = _UnionFind(graph.vertex_set)
    for (a, b), _ in graph.edges:
        uf.union(a, b)
    parts: dict[int, list[int]] = {}
    for s in graph.vertex_set:
        parts.setdefault(uf.find(s), []).append(s)
    return [parts[rep] for rep in sorted(parts)]


def cycle_disconnected(params: Params) -> bool:
    """Disconnectedness via the cycle s_1 - s_2 - ... - s_l - s_1 on surviving vertices."""
    k = params.k
    V = [s for s in range(s_max(params) + 1) if kappa(params, s) >= k]
    if len(V) < 2:
        return False
    labels = [edge_label(params, V[i], V[i + 1]) for i in range(len(V) - 1)]
    labels.append(edge_label(params, V[0], V[-1]))
    return sum(1 for g in labels if g < k) >= 2


def is_irreducible(params: Params) -> bool:
    _require_symmetric(params, "is_irreducible")
    if not is_nonempty(params):
        raise DomainError("the Fano scheme is empty")
    k, top = params.k, s_max(params)
    kap = lambda s: kappa(params, s)  # noqa: E731
    first = max(kap(1), kap(top)) < k <= kap(0)
    second = max(kap(0), kap(top - 1)) < k <= kap(top)
    return first or second


def _check_component(params: Params, s: int) -> None:
    _require_symmetric(params, "component formulas")
    if params.k > kappa(params, s):
        raise DomainError(f"k={params.k} exceeds kappa({s})={kappa(params, s)}; the locus is empty")


def flag_dim(params: Params, s: int) -> int:
    """Dimension of the flag variety of (s+1+n-r)-planes inside (n-s)-planes."""
    n, r = params.n, params.r
    a = s + 1 + n - r
    return a * (r - 2 * s - 1) + s * (n - s)


def dim_component(params: Params, s: int) -> int:
    """Dimension of the locus of nested s-compression spaces of k-planes."""
    _check_component(params, s)
    k = params.k
    return flag_dim(params, s) + (kappa(params, s) - k) * (k + 1)


def expected_dim_hypersurface(params: Params) -> int:
    _require_symmetric(params, "expected_dim_hypersurface")
    if params.r != params.n:
        raise DomainError("expected dimension applies to the hypersurface case r = n")
    N = ambient_dim(params)
    k, d = params.k, params.n
    return (k + 1) * (N - k) - comb(k + d, k)


def nonreduced_gap(params: Params, s: int) -> int:
    """Generic tangent dimension minus the dimension of the nested s-compression locus."""
    _check_component(params, s)
    n, r, k = params.n, params.r, params.k
    return (r - 2 * s - 1) * ((s + 1 + n - r) * k - s)


def tangent_formula_general(params: Params, s: int) -> int:
    """Tangent dimension at a general point of the nested s-compression locus."""
    _check_component(params, s)
    n, r, k = params.n, params.r, params.k
    a = s + 1 + n - r
    return s * a + a * (r - 2 * s - 1) * (k + 1) + (kappa(params, s) - k) * (k + 1)


def tangent_formula_middle(params: Params) -> int:
    """Tangent dimension at the special middle point, r = n odd, s = (r-1)/2."""
    _require_symmetric(params, "tangent_formula_middle")
    n, r, k = params.n, params.r, params.k
    if r != n or r % 2 == 0:
        raise DomainError("needs r = n odd")
    s = (r - 1) // 2
    if not 1 <= k <= kappa(params, s):
        raise DomainError(f"needs 1 <= k <= kappa({s})")
    return s * (s + 1) + (kappa(params, s) - k) * (k + 1)


def smoothness_conjecture(params: Params) -> bool:
    """Conjectured smoothness criterion (not a theorem)."""
    _require_symmetric(params, "smoothness_conjecture")
    r, k = params.r, params.k
    if r % 2 == 0:
        return False
    lo = max(kappa(params, 0), kappa(params, (r - 3) // 2))
    return lo < k <= kappa(params, (r - 1) // 2)


def component_proven(params: Params, s: int) -> bool:
    """Whether the nested s-compression locus is known to be an irreducible component."""
    _require_symmetric(params, "component_proven")
    k = params.k
    if k > kappa(params, s):
        return False
    return k == 1 or k == kappa(params, s) or params.r == 2 * s + 1
