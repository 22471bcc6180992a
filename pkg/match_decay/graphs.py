# Copyright 2026 The match_decay Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Graphs with stable ids, deletion views, balls, boundaries and edge lists.

A `Graph` is immutable. Every subgraph used by the solvers (balls, vertex or
edge deletions, restrictions of an exhaustion) is a `SubgraphView` over the
same base graph, so edge ids, and therefore weight vectors, are shared.
"""

import collections
import collections.abc
import dataclasses
import functools
import io
from typing import Iterable, Optional, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


class GraphError(ValueError):
  """Raised for malformed graphs, ids or edge-list files."""


@dataclasses.dataclass(frozen=True)
class Graph:
  """A simple undirected graph.

  Attributes:
    n_vertices: vertices are 0..n_vertices-1.
    edges: edge id i joins edges[i] = (u, v), stored once with u < v.
    adjacency: per vertex, the (neighbor, edge id) pairs in edge id order.
  """

  n_vertices: int
  edges: tuple[tuple[int, int], ...]
  adjacency: tuple[tuple[tuple[int, int], ...], ...]

  @property
  def n_edges(self) -> int:
    return len(self.edges)

  def degree(self, v: int) -> int:
    return len(self.adjacency[v])

  def max_degree(self) -> int:
    return max((len(a) for a in self.adjacency), default=0)

  def endpoints(self, e: int) -> tuple[int, int]:
    if not 0 <= e < len(self.edges):
      raise GraphError(f'Unknown edge id {e}.')
    return self.edges[e]

  def edge_between(self, u: int, v: int) -> Optional[int]:
    for x, e in self.adjacency[u]:
      if x == v:
        return e
    return None

  def view(self) -> 'SubgraphView':
    return SubgraphView(self)


@dataclasses.dataclass(frozen=True)
class SubgraphView:
  """Read-only overlay deleting vertices and edges from a base graph.

  The effective vertex set is V(base) minus `deleted_vertices`; an edge is
  present when both endpoints are present and it is not in `deleted_edges`.
  """

  base: Graph
  deleted_vertices: frozenset[int] = frozenset()
  deleted_edges: frozenset[int] = frozenset()

  @functools.cached_property
  def vertex_set(self) -> frozenset[int]:
    return frozenset(range(self.base.n_vertices)) - self.deleted_vertices

  @functools.cached_property
  def vertices(self) -> tuple[int, ...]:
    return tuple(sorted(self.vertex_set))

  @functools.cached_property
  def edge_ids(self) -> tuple[int, ...]:
    return tuple(
        e for e, (u, v) in enumerate(self.base.edges) if self.has_edge(e)
    )

  def has_vertex(self, v: int) -> bool:
    return 0 <= v < self.base.n_vertices and v not in self.deleted_vertices

  def has_edge(self, e: int) -> bool:
    if not 0 <= e < self.base.n_edges or e in self.deleted_edges:
      return False
    u, v = self.base.edges[e]
    return u not in self.deleted_vertices and v not in self.deleted_vertices

  def neighbors(self, v: int) -> list[tuple[int, int]]:
    """Present (neighbor, edge id) pairs of a present vertex."""
    if not self.has_vertex(v):
      return []
    return [
        (x, e)
        for x, e in self.base.adjacency[v]
        if x not in self.deleted_vertices and e not in self.deleted_edges
    ]

  def degree(self, v: int) -> int:
    return len(self.neighbors(v))

  def max_degree(self) -> int:
    return max((self.degree(v) for v in self.vertices), default=0)

  def delete(
      self,
      vertices: Iterable[int] = (),
      edges: Iterable[int] = (),
  ) -> 'SubgraphView':
    return delete(self, vertices, edges)


GraphLike = Union[Graph, SubgraphView]


def as_view(g: GraphLike) -> SubgraphView:
  if isinstance(g, SubgraphView):
    return g
  if isinstance(g, Graph):
    return g.view()
  raise TypeError(f'Expected a Graph or SubgraphView, got {type(g)}.')


def build_graph(
    edge_list: Iterable[tuple[int, int]], n_vertices: Optional[int] = None
) -> Graph:
  """Builds a graph; edge ids follow the input order.

  Args:
    edge_list: pairs (u, v) of vertex ids.
    n_vertices: number of vertices. Defaults to one more than the largest id.

  Returns:
    The validated graph.

  Raises:
    GraphError: on loops, duplicate edges or out-of-range ids.
  """
  pairs = [(int(u), int(v)) for u, v in edge_list]
  if n_vertices is None:
    n_vertices = 1 + max((max(p) for p in pairs), default=-1)
  if n_vertices < 0:
    raise GraphError(f'n_vertices must be nonnegative, got {n_vertices}.')

  seen = set()
  edges = []
  adjacency = [[] for _ in range(n_vertices)]
  for e, (u, v) in enumerate(pairs):
    if not (0 <= u < n_vertices and 0 <= v < n_vertices):
      raise GraphError(f'Edge {e} = ({u}, {v}) references a vertex >= {n_vertices}.')
    if u == v:
      raise GraphError(f'Edge {e} is a self-loop at vertex {u}.')
    key = (min(u, v), max(u, v))
    if key in seen:
      raise GraphError(f'Duplicate edge {key}.')
    seen.add(key)
    edges.append(key)
    adjacency[u].append((v, e))
    adjacency[v].append((u, e))

  return Graph(
      n_vertices=n_vertices,
      edges=tuple(edges),
      adjacency=tuple(tuple(a) for a in adjacency),
  )


def delete(
    g: GraphLike, vertices: Iterable[int] = (), edges: Iterable[int] = ()
) -> SubgraphView:
  """Deletes vertices (with their edges) and edges; composes with `g`."""
  view = as_view(g)
  vertices = frozenset(int(v) for v in vertices)
  edges = frozenset(int(e) for e in edges)
  for v in vertices:
    if not 0 <= v < view.base.n_vertices:
      raise GraphError(f'Unknown vertex id {v}.')
  for e in edges:
    if not 0 <= e < view.base.n_edges:
      raise GraphError(f'Unknown edge id {e}.')
  if vertices <= view.deleted_vertices and edges <= view.deleted_edges:
    return view
  return SubgraphView(
      view.base,
      view.deleted_vertices | vertices,
      view.deleted_edges | edges,
  )


def distances(g: GraphLike, sources: Iterable[int]) -> dict[int, int]:
  """Multi-source BFS distances inside the view."""
  view = as_view(g)
  dist = {}
  queue = collections.deque()
  for s in sources:
    if not view.has_vertex(s):
      raise GraphError(f'Source vertex {s} is not in the view.')
    if s not in dist:
      dist[s] = 0
      queue.append(s)
  while queue:
    x = queue.popleft()
    for y, _ in view.neighbors(x):
      if y not in dist:
        dist[y] = dist[x] + 1
        queue.append(y)
  return dist


def _restrict(view: SubgraphView, keep: collections.abc.Set[int]) -> SubgraphView:
  return delete(view, view.vertex_set - keep)


def ball(g: GraphLike, e: int, r: int) -> SubgraphView:
  """B_e^r: induced subgraph on vertices within distance r of either endpoint."""
  view = as_view(g)
  if r < 0:
    raise GraphError(f'Radius must be nonnegative, got {r}.')
  if not view.has_edge(e):
    raise GraphError(f'Edge {e} is not in the graph.')
  dist = distances(view, view.base.edges[e])
  return _restrict(view, {x for x, d in dist.items() if d <= r})


def vertex_ball(g: GraphLike, v: int, r: int) -> SubgraphView:
  """B_v^r: induced subgraph on vertices within distance r of v."""
  view = as_view(g)
  if r < 0:
    raise GraphError(f'Radius must be nonnegative, got {r}.')
  dist = distances(view, [v])
  return _restrict(view, {x for x, d in dist.items() if d <= r})


def boundary(g: GraphLike, h: SubgraphView) -> frozenset[int]:
  """Vertices of h with a neighbor in g that is not a vertex of h."""
  outer = as_view(g)
  inner = h.vertex_set
  return frozenset(
      v
      for v in inner
      if any(x not in inner for x, _ in outer.neighbors(v))
  )


def components(g: GraphLike) -> list[list[int]]:
  """Connected components of the view, each sorted, ordered by least vertex."""
  view = as_view(g)
  verts = view.vertices
  if not verts:
    return []
  index = {v: i for i, v in enumerate(verts)}
  rows, cols = [], []
  for e in view.edge_ids:
    u, v = view.base.edges[e]
    rows.append(index[u])
    cols.append(index[v])
  adjacency = sparse.coo_matrix(
      (np.ones(len(rows)), (rows, cols)), shape=(len(verts), len(verts))
  )
  _, labels = csgraph.connected_components(adjacency, directed=False)
  groups = collections.defaultdict(list)
  for v, label in zip(verts, labels):
    groups[label].append(v)
  return sorted(groups.values(), key=lambda c: c[0])


def is_forest(g: GraphLike) -> bool:
  view = as_view(g)
  return len(view.edge_ids) == len(view.vertices) - len(components(view))


def is_tree(g: GraphLike) -> bool:
  view = as_view(g)
  return len(components(view)) == 1 and is_forest(view)


def is_connected(g: GraphLike) -> bool:
  return len(components(g)) <= 1


def to_graph(view: SubgraphView) -> tuple[Graph, list[int], list[int]]:
  """Materializes a view as a fresh graph with relabeled ids.

  Returns:
    The graph, the old vertex id of each new vertex, and the old edge id of
    each new edge.
  """
  old_vertices = list(view.vertices)
  index = {v: i for i, v in enumerate(old_vertices)}
  old_edges = list(view.edge_ids)
  g = build_graph(
      [(index[view.base.edges[e][0]], index[view.base.edges[e][1]])
       for e in old_edges],
      n_vertices=len(old_vertices),
  )
  return g, old_vertices, old_edges


def format_edge_list(g: Graph, weights: Optional[np.ndarray] = None) -> str:
  """Text format: "n m" then one "u v" (or "u v w") line per edge."""
  out = io.StringIO()
  out.write(f'{g.n_vertices} {g.n_edges}\n')
  for e, (u, v) in enumerate(g.edges):
    if weights is None:
      out.write(f'{u} {v}\n')
    else:
      out.write(f'{u} {v} {float(weights[e])!r}\n')
  return out.getvalue()


def parse_edge_list(text: str) -> tuple[Graph, Optional[np.ndarray]]:
  """Parses `format_edge_list` output; weights are None when absent."""
  lines = [ln.split() for ln in text.splitlines() if ln.strip()]
  if not lines or len(lines[0]) != 2:
    raise GraphError('Edge list must start with a "n m" header line.')
  n, m = int(lines[0][0]), int(lines[0][1])
  body = lines[1:]
  if len(body) != m:
    raise GraphError(f'Header announces {m} edges, found {len(body)}.')
  widths = {len(row) for row in body}
  if widths - {2, 3} or len(widths) > 1:
    raise GraphError('Edge lines must all be "u v" or all be "u v w".')
  g = build_graph([(row[0], row[1]) for row in body], n_vertices=n)
  if widths == {3}:
    return g, np.array([float(row[2]) for row in body])
  return g, None


def read_edge_list(path: str) -> tuple[Graph, Optional[np.ndarray]]:
  with open(path, 'r') as f:
    return parse_edge_list(f.read())


def write_edge_list(
    path: str, g: Graph, weights: Optional[np.ndarray] = None
) -> None:
  with open(path, 'w') as f:
    f.write(format_edge_list(g, weights))
