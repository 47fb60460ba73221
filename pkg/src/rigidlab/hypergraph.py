"""k-uniform hypergraphs and the graph-theoretic operations used downstream."""
from __future__ import annotations

import itertools
import json
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import networkx as nx

NAC_EDGE_LIMIT = 20


@dataclass(frozen=True)
class Hypergraph:
    """Hyperedges are sorted k-tuples (multisets); repeated hyperedges are rejected.

    ``simple`` forbids repeated vertices inside a hyperedge (for k=2 that is
    an ordinary graph; with ``simple=False`` a k=2 hypergraph is semisimple).
    """

    k: int
    vertex_count: int
    edges: tuple[tuple[int, ...], ...]
    simple: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"arity k must be positive, got {self.k}")
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        canon = []
        for e in self.edges:
            e = tuple(sorted(int(v) for v in e))
            if len(e) != self.k:
                raise ValueError(f"hyperedge {e} does not have {self.k} vertices")
            if e and (e[0] < 0 or e[-1] >= self.vertex_count):
                raise ValueError(f"hyperedge {e} uses a vertex outside 0..{self.vertex_count - 1}")
            if self.simple and len(set(e)) != len(e):
                raise ValueError(f"hyperedge {e} repeats a vertex in a simple hypergraph")
            canon.append(e)
        if len(set(canon)) != len(canon):
            dup = next(e for e, c in Counter(canon).items() if c > 1)
            raise ValueError(f"repeated hyperedge {dup}")
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @property
    def is_graph(self) -> bool:
        return self.k == 2 and self.simple

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbours(self, v: int) -> set[int]:
        return {u for e in self.edges if v in e for u in e if u != v}

    def to_networkx(self) -> nx.Graph:
        if self.k != 2:
            raise ValueError("only 2-uniform hypergraphs convert to networkx graphs")
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return False
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for u in self.neighbours(v):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return len(seen) == self.vertex_count

    def is_tree(self) -> bool:
        return self.is_graph and len(self.edges) == self.vertex_count - 1 and self.is_connected()

    def to_json(self) -> dict:
        return {"k": self.k, "vertices": self.vertex_count,
                "edges": [list(e) for e in self.edges], "simple": self.simple}

    @classmethod
    def from_json(cls, data: dict | str) -> "Hypergraph":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise ValueError("graph JSON must be an object")
        for key in ("vertices", "edges"):
            if key not in data:
                raise ValueError(f"graph JSON is missing key '{key}'")
        k = data.get("k", 2)
        if not isinstance(k, int) or isinstance(k, bool):
            raise ValueError("graph JSON key 'k' must be an integer")
        if not isinstance(data["vertices"], int) or isinstance(data["vertices"], bool):
            raise ValueError("graph JSON key 'vertices' must be an integer")
        edges = data["edges"]
        if not isinstance(edges, list) or not all(isinstance(e, list) for e in edges):
            raise ValueError("graph JSON key 'edges' must be a list of lists")
        simple = data.get("simple", True)
        if not isinstance(simple, bool):
            raise ValueError("graph JSON key 'simple' must be a boolean")
        return cls(k, data["vertices"], tuple(tuple(e) for e in edges), simple)


def graph(n: int, edges: Iterable[Sequence[int]], simple: bool = True) -> Hypergraph:
    return Hypergraph(2, n, tuple(tuple(e) for e in edges), simple)


def complete_graph(n: int) -> Hypergraph:
    return graph(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Hypergraph:
    return graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Hypergraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Hypergraph:
    """Centre is vertex 0."""
    return graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_bipartite(a: int, b: int) -> Hypergraph:
    return graph(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def complete_with_loops(n: int) -> Hypergraph:
    """All pairs plus every loop: the semisimple graph behind Gram matrices."""
    return Hypergraph(2, n, tuple(itertools.combinations_with_replacement(range(n), 2)), simple=False)


def complete_multiset_hypergraph(n: int, k: int) -> Hypergraph:
    """Every multiset of k vertices; indexes the entries of an order-k symmetric tensor."""
    return Hypergraph(k, n, tuple(itertools.combinations_with_replacement(range(n), k)), simple=False)


def all_labelled_trees(n: int) -> Iterator[Hypergraph]:
    if n == 1:
        yield graph(1, [])
        return
    if n == 2:
        yield graph(2, [(0, 1)])
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield Hypergraph(2, n, tuple(nx.from_prufer_sequence(list(seq)).edges()))


def max_degree(G: Hypergraph) -> int:
    """Largest number of hyperedges meeting a vertex (a loop counts once)."""
    if G.vertex_count == 0:
        raise ValueError("max_degree of a hypergraph with no vertices")
    return max(G.degree(v) for v in G.vertices)


def zero_extension(G: Hypergraph, u: int, w: int) -> Hypergraph:
    """Add a new vertex joined to exactly u and w."""
    if not G.is_graph:
        raise ValueError("0-extension is defined for simple graphs")
    if u == w:
        raise ValueError("0-extension needs two distinct attachment vertices")
    for x in (u, w):
        if not 0 <= x < G.vertex_count:
            raise ValueError(f"vertex {x} is not in the graph")
    n = G.vertex_count
    return graph(n + 1, list(G.edges) + [(u, n), (w, n)])


# --- tree packing -------------------------------------------------------------

class _Forest:
    def __init__(self, n: int):
        self.n = n
        self.edges: set[tuple[int, int]] = set()
        self.adj: dict[int, set[int]] = {v: set() for v in range(n)}

    def add(self, e):
        self.edges.add(e)
        self.adj[e[0]].add(e[1])
        self.adj[e[1]].add(e[0])

    def remove(self, e):
        self.edges.discard(e)
        self.adj[e[0]].discard(e[1])
        self.adj[e[1]].discard(e[0])

    def path(self, s: int, t: int) -> list[tuple[int, int]] | None:
        """Edges on the forest path s..t, or None if disconnected."""
        prev = {s: None}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if v == t:
                break
            for u in self.adj[v]:
                if u not in prev:
                    prev[u] = v
                    queue.append(u)
        if t not in prev:
            return None
        out = []
        while prev[t] is not None:
            out.append(tuple(sorted((t, prev[t]))))
            t = prev[t]
        return out


def tree_packing(G: Hypergraph, count: int = 2) -> list[set[tuple[int, int]]]:
    """Maximum-size union of ``count`` edge-disjoint forests (matroid partition).

    Each edge not yet placed is inserted along a shortest exchange path; a
    shortest path keeps every forest acyclic after the swaps.
    """
    if not G.is_graph:
        raise ValueError("tree packing needs a simple graph")
    forests = [_Forest(G.vertex_count) for _ in range(count)]
    owner: dict[tuple[int, int], int] = {}
    for s in G.edges:
        parent: dict[tuple[int, int], tuple[tuple[int, int], int] | None] = {s: None}
        queue = deque([s])
        sink = None
        while queue and sink is None:
            x = queue.popleft()
            for i, F in enumerate(forests):
                if owner.get(x) == i:
                    continue
                cycle = F.path(*x)
                if cycle is None:
                    sink = (x, i)
                    break
                for y in cycle:
                    if y not in parent:
                        parent[y] = (x, i)
                        queue.append(y)
        if sink is None:
            continue
        x, i = sink
        while True:
            j = owner.get(x)
            if j is not None:
                forests[j].remove(x)
            forests[i].add(x)
            owner[x] = i
            if parent[x] is None:
                break
            # x displaced y from forest i... walk back: parent[x] = (x_prev, i_prev)
            x_prev, i_prev = parent[x]
            # x_prev enters forest i_prev, which held x (now moved)
            x, i = x_prev, i_prev
    return [F.edges for F in forests]


def has_two_edge_disjoint_spanning_trees(G: Hypergraph) -> bool:
    if not G.is_graph:
        raise ValueError("expects a simple graph")
    n = G.vertex_count
    if n == 0:
        return False
    if not G.is_connected():
        return False
    if len(G.edges) < 2 * (n - 1):
        return False
    return all(len(F) == n - 1 for F in tree_packing(G, 2))


# --- NAC-colourings -----------------------------------------------------------

def simple_cycles(G: Hypergraph) -> list[list[tuple[int, int]]]:
    """All simple cycles of a graph, as lists of sorted edges."""
    out = []
    for cyc in nx.simple_cycles(G.to_networkx()):
        if len(cyc) < 3:
            continue
        out.append([tuple(sorted((cyc[i], cyc[(i + 1) % len(cyc)]))) for i in range(len(cyc))])
    return out


def satisfies_cycle_condition(colouring: dict[tuple[int, int], int],
                              cycles: Iterable[list[tuple[int, int]]]) -> bool:
    """No cycle has exactly one edge of either colour."""
    for cyc in cycles:
        red = sum(colouring[e] for e in cyc)
        blue = len(cyc) - red
        if red == 1 or blue == 1:
            return False
    return True


def _components(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return [find(v) for v in range(n)]


def _is_nac(n: int, edges, colours) -> bool:
    # an almost-cycle exists iff some edge's endpoints are joined by a path of the other colour
    for c in (0, 1):
        comp = _components(n, (e for e, col in zip(edges, colours) if col == c))
        for e, col in zip(edges, colours):
            if col != c and comp[e[0]] == comp[e[1]]:
                return False
    return True


def find_nac_colouring(G: Hypergraph) -> dict[tuple[int, int], int] | None:
    """A surjective red(1)/blue(0) colouring with no almost-cycle, or None.

    Exhaustive over colourings; the winner is re-checked on every simple cycle.
    """
    if not G.is_graph:
        raise ValueError("NAC-colourings are defined for simple graphs")
    edges = list(G.edges)
    m = len(edges)
    if m < 2:
        return None
    if m > NAC_EDGE_LIMIT:
        raise ValueError(f"exhaustive NAC search is limited to {NAC_EDGE_LIMIT} edges, graph has {m}")
    cycles = None
    # first edge fixed red: colour swapping is a symmetry
    for bits in range(1 << (m - 1)):
        colours = [1] + [(bits >> i) & 1 for i in range(m - 1)]
        if all(colours):
            continue
        if _is_nac(G.vertex_count, edges, colours):
            colouring = dict(zip(edges, colours))
            if cycles is None:
                cycles = simple_cycles(G)
            if not satisfies_cycle_condition(colouring, cycles):
                raise AssertionError("component test and cycle enumeration disagree")
            return colouring
    return None


def depth_partition(G: Hypergraph, root: int) -> list[set[int]]:
    """Vertex sets at each shortest-path distance from ``root`` in a tree."""
    if not G.is_tree():
        raise ValueError("depth_partition expects a tree")
    if not 0 <= root < G.vertex_count:
        raise ValueError(f"root {root} is not a vertex")
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for u in sorted(G.neighbours(v)):
            if u not in depth:
                depth[u] = depth[v] + 1
                queue.append(u)
    levels: list[set[int]] = [set() for _ in range(max(depth.values()) + 1)]
    for v, i in depth.items():
        levels[i].add(v)
    return levels


@dataclass(frozen=True)
class EdgeColouring:
    """Colouring of the complete graph on ``n`` vertices; colour ids are 0..c-1."""

    n: int
    colour_of: dict = field(hash=False)

    def __post_init__(self):
        expected = set(itertools.combinations(range(self.n), 2))
        if set(self.colour_of) != expected:
            raise ValueError("colouring must be total on the edges of K_n")
        ids = set(self.colour_of.values())
        if ids != set(range(len(ids))):
            raise ValueError("colour ids must be dense integers 0..c-1")

    @property
    def colour_count(self) -> int:
        return len(set(self.colour_of.values()))

    def classes(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {}
        for e, c in sorted(self.colour_of.items()):
            out.setdefault(c, []).append(e)
        return out

    def colour_degree(self, v: int) -> int:
        return len({c for e, c in self.colour_of.items() if v in e})

    @classmethod
    def from_labels(cls, n: int, labels: dict) -> "EdgeColouring":
        """Relabel arbitrary hashable, sortable labels to dense ids (in sorted label order)."""
        ids = {lab: i for i, lab in enumerate(sorted(set(labels.values())))}
        return cls(n, {e: ids[lab] for e, lab in labels.items()})
