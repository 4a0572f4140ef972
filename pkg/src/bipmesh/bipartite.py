"""Element-adjacency graphs, two-coloring and the even-incidence test.

Two independent routes decide whether a mesh is bipartite:

* :func:`two_color` runs a breadth-first layering of the element graph and
  either returns a proper coloring or an explicit odd cycle;
* :func:`characterization_check` only counts elements around interior
  vertices (2-D) or interior edges (3-D) and requires every count to be even.

The second route is exact for conforming meshes of simply connected domains.
For other inputs its verdict is flagged as advisory and the coloring wins.
"""

import warnings
from collections import deque
from dataclasses import dataclass

from .errors import SimplyConnectedWarning
from .mesh import euler_characteristic, incidence_counts


@dataclass(frozen=True)
class MeshGraph:
    """Simple undirected graph on element indices, neighbors sorted ascending."""

    adjacency: tuple

    @property
    def n_vertices(self):
        return len(self.adjacency)

    def neighbors(self, k):
        return self.adjacency[k]

    def arcs(self):
        """Each undirected arc once, as ``(low, high)``."""
        return [(a, b) for a, nbrs in enumerate(self.adjacency) for b in nbrs if a < b]

    def degree(self, k):
        return len(self.adjacency[k])

    @classmethod
    def from_arcs(cls, n, arcs):
        nbrs = [set() for _ in range(n)]
        for a, b in arcs:
            if a == b:
                raise ValueError(f"self-loop at {a}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        return cls(tuple(tuple(sorted(s)) for s in nbrs))


@dataclass(frozen=True)
class ElementColoring:
    """Proper two-coloring; ``color[k]`` is 0 or 1, ``components[k]`` a component id."""

    color: tuple
    components: tuple

    @property
    def n_components(self):
        return max(self.components) + 1 if self.components else 0

    def classes(self):
        """The bipartition ``(U, W)`` as sorted element-index lists."""
        u = [k for k, c in enumerate(self.color) if c == 0]
        w = [k for k, c in enumerate(self.color) if c == 1]
        return u, w


@dataclass(frozen=True)
class OddCycleWitness:
    """Closed walk ``cycle[0], ..., cycle[-1] == cycle[0]`` with an odd number of arcs."""

    cycle: tuple

    @property
    def length(self):
        return len(self.cycle) - 1


@dataclass(frozen=True)
class CharacterizationResult:
    """Outcome of the even-incidence test.

    ``offenders`` maps each interior hinge with an odd count to that count.
    ``advisory`` is True when the Euler characteristic is not 1, in which case
    the verdict is not backed by the simply-connected theory.
    """

    verdict: bool
    offenders: dict
    advisory: bool

    @property
    def status(self):
        if self.advisory:
            return "advisory: domain is not simply connected"
        return "conditional on simple connectivity"


def adjacency_graph(mesh):
    """Graph with an arc between elements sharing a full edge (2-D) or face (3-D)."""
    nbrs = [set() for _ in range(mesh.n_cells)]
    for owners in mesh.sides.values():
        for i in range(len(owners)):
            for j in range(i + 1, len(owners)):
                a, b = owners[i], owners[j]
                if a != b:
                    nbrs[a].add(b)
                    nbrs[b].add(a)
    return MeshGraph(tuple(tuple(sorted(s)) for s in nbrs))


def connected_components(graph):
    """Component id per vertex, numbered in order of lowest member index."""
    comp = [-1] * graph.n_vertices
    n_comp = 0
    for root in range(graph.n_vertices):
        if comp[root] >= 0:
            continue
        comp[root] = n_comp
        queue = deque([root])
        while queue:
            k = queue.popleft()
            for n in graph.adjacency[k]:
                if comp[n] < 0:
                    comp[n] = n_comp
                    queue.append(n)
        n_comp += 1
    return tuple(comp)


def is_connected(graph):
    return graph.n_vertices == 0 or max(connected_components(graph)) == 0


def _tree_path(parent, k):
    path = [k]
    while parent[k] >= 0:
        k = parent[k]
        path.append(k)
    return path


def two_color(graph):
    """Breadth-first two-coloring.

    Each component is layered from its lowest-index element, which receives
    color 0. On the first arc joining two elements of equal color, the BFS
    tree paths of both endpoints are joined at their nearest common ancestor
    to produce an odd cycle.

    Returns
    -------
    ElementColoring or OddCycleWitness
    """
    n = graph.n_vertices
    color = [-1] * n
    parent = [-1] * n
    depth = [0] * n
    comp = [-1] * n
    n_comp = 0
    for root in range(n):
        if color[root] >= 0:
            continue
        color[root] = 0
        comp[root] = n_comp
        queue = deque([root])
        while queue:
            k = queue.popleft()
            for m in graph.adjacency[k]:
                if color[m] < 0:
                    color[m] = 1 - color[k]
                    parent[m] = k
                    depth[m] = depth[k] + 1
                    comp[m] = n_comp
                    queue.append(m)
                elif color[m] == color[k]:
                    return _odd_cycle(parent, k, m)
        n_comp += 1
    return ElementColoring(tuple(color), tuple(comp))


def _odd_cycle(parent, a, b):
    path_a = _tree_path(parent, a)
    path_b = _tree_path(parent, b)
    on_a = {v: i for i, v in enumerate(path_a)}
    for j, v in enumerate(path_b):
        if v in on_a:
            i = on_a[v]
            break
    # a -> ... -> lca -> ... -> b -> a
    cycle = path_a[: i + 1] + path_b[:j][::-1] + [a]
    return OddCycleWitness(tuple(cycle))


def verify_coloring(graph, coloring):
    """True iff every arc joins different colors and colors are 0/1."""
    if len(coloring.color) != graph.n_vertices:
        return False
    if any(c not in (0, 1) for c in coloring.color):
        return False
    return all(coloring.color[a] != coloring.color[b] for a, b in graph.arcs())


def verify_witness(graph, witness):
    """Check a witness without trusting how it was built."""
    cyc = witness.cycle
    if len(cyc) < 4 or cyc[0] != cyc[-1] or (len(cyc) - 1) % 2 == 0:
        return False
    return all(b in graph.adjacency[a] for a, b in zip(cyc, cyc[1:]))


def characterization_check(mesh, warn=True):
    """Even-incidence bipartiteness test, dispatching on mesh dimension.

    A triangle mesh passes iff every interior vertex has an even number of
    incident triangles; a tetrahedral mesh passes iff every interior edge has
    an even number of incident tetrahedra.

    Parameters
    ----------
    mesh : TriMesh or TetMesh
    warn : bool
        Emit :class:`SimplyConnectedWarning` when the Euler characteristic is not 1.

    Returns
    -------
    CharacterizationResult
    """
    offenders = {h: c for h, c in incidence_counts(mesh).items() if c % 2}
    advisory = mesh.n_cells > 0 and euler_characteristic(mesh) != 1
    if advisory and warn:
        warnings.warn(
            "Euler characteristic is not 1; even-incidence verdict is advisory only",
            SimplyConnectedWarning,
            stacklevel=2,
        )
    return CharacterizationResult(verdict=not offenders, offenders=offenders, advisory=advisory)


def characterization_check_2d(mesh, warn=True):
    if mesh.dim != 2:
        raise TypeError("characterization_check_2d needs a TriMesh")
    return characterization_check(mesh, warn)


def characterization_check_3d(mesh, warn=True):
    if mesh.dim != 3:
        raise TypeError("characterization_check_3d needs a TetMesh")
    return characterization_check(mesh, warn)


def is_bipartite(mesh):
    """BFS verdict; the authoritative answer for any input."""
    return isinstance(two_color(adjacency_graph(mesh)), ElementColoring)
