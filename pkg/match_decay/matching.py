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

"""Exact maximum-weight matching and optimality certificates.

Weights are assumed generic (pairwise distinct), so the optimum is unique. Two
exact solvers are provided: a linear-time cavity DP for forests and an
include/exclude branch and bound for everything else, plus an augmenting-path
certifier that checks optimality independently of both.
"""

import abc
import collections
import dataclasses
import enum
import math
from typing import Iterable, Iterator, Optional, Union

from absl import logging
from match_decay import graphs
from match_decay import weights as weights_lib
import numpy as np

DEFAULT_EDGE_CAP = 30
_PATH_CAP = 10**6
# Relative slack on the pruning bound, so that rounding never prunes a tie.
_BOUND_SLACK = 1e-12


class SolverCapExceeded(RuntimeError):
  """Raised when a graph is too large for an exhaustive solver."""


class NotATreeError(ValueError):
  """Raised when the tree solver receives a graph with a cycle or two parts."""


class _PathCapReached(Exception):
  pass


class SolverKind(enum.Enum):
  TREE_DP = 'tree_dp'
  BRANCH_BOUND = 'branch_bound'
  ENUMERATION = 'enumeration'


class Certificate(enum.Enum):
  OPTIMAL = 'optimal'
  AUGMENTING_PATH_FOUND = 'augmenting_path_found'
  INCONCLUSIVE = 'inconclusive'


@dataclasses.dataclass(frozen=True)
class Matching:
  """A set of edge ids, no two of which share a vertex."""

  edge_ids: frozenset[int] = frozenset()

  def __post_init__(self):
    object.__setattr__(
        self, 'edge_ids', frozenset(int(e) for e in self.edge_ids)
    )

  def __contains__(self, e: int) -> bool:
    return e in self.edge_ids

  def __len__(self) -> int:
    return len(self.edge_ids)

  def __iter__(self) -> Iterator[int]:
    return iter(sorted(self.edge_ids))

  def sorted(self) -> list[int]:
    return sorted(self.edge_ids)

  def mates(self, g: graphs.GraphLike) -> dict[int, tuple[int, int]]:
    """Matched vertex -> (partner, edge id)."""
    base = graphs.as_view(g).base
    out = {}
    for e in self.edge_ids:
      u, v = base.endpoints(e)
      out[u] = (v, e)
      out[v] = (u, e)
    return out

  def is_valid(self, g: graphs.GraphLike) -> bool:
    view = graphs.as_view(g)
    covered = set()
    for e in self.edge_ids:
      if not view.has_edge(e):
        return False
      u, v = view.base.edges[e]
      if u in covered or v in covered:
        return False
      covered.update((u, v))
    return True


@dataclasses.dataclass(frozen=True)
class MwmResult:
  matching: Matching
  total_weight: float
  certified: bool
  solver: SolverKind

  def to_json(self) -> dict[str, object]:
    return {
        'edges': self.matching.sorted(),
        'weight': self.total_weight,
        'certified': self.certified,
    }


MatchingLike = Union[Matching, Iterable[int]]


def _edge_set(m: MatchingLike) -> frozenset[int]:
  if isinstance(m, Matching):
    return m.edge_ids
  return frozenset(int(e) for e in m)


def _vector(w: weights_lib.WeightsLike) -> np.ndarray:
  w = weights_lib.as_array(w)
  if w.ndim != 1:
    raise ValueError(f'Solvers take one weight vector, got shape {w.shape}.')
  return w


def matching_weight(m: MatchingLike, w: weights_lib.WeightsLike) -> float:
  """Sum of the weights of m, accumulated exactly in edge id order."""
  w = _vector(w)
  return math.fsum(float(w[e]) for e in sorted(_edge_set(m)))


def exchange_gain(
    m_opt: MatchingLike, m_other: MatchingLike, w: weights_lib.WeightsLike
) -> float:
  """w(m_opt minus m_other) - w(m_other minus m_opt)."""
  a, b = _edge_set(m_opt), _edge_set(m_other)
  return matching_weight(a - b, w) - matching_weight(b - a, w)


def iter_matchings(
    g: graphs.GraphLike, edge_cap: int = DEFAULT_EDGE_CAP
) -> Iterator[frozenset[int]]:
  """Yields every matching of the view, the empty one first."""
  view = graphs.as_view(g)
  edge_ids = view.edge_ids
  if len(edge_ids) > edge_cap:
    raise SolverCapExceeded(
        f'{len(edge_ids)} edges exceed the enumeration cap {edge_cap}.'
    )
  ends = [view.base.edges[e] for e in edge_ids]
  covered = set()
  chosen = []

  def walk(i: int) -> Iterator[frozenset[int]]:
    if i == len(edge_ids):
      yield frozenset(chosen)
      return
    yield from walk(i + 1)
    u, v = ends[i]
    if u not in covered and v not in covered:
      covered.update((u, v))
      chosen.append(edge_ids[i])
      yield from walk(i + 1)
      chosen.pop()
      covered.difference_update((u, v))

  yield from walk(0)


def mwm_enumerate(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    prune: bool = True,
    edge_cap: int = DEFAULT_EDGE_CAP,
    certify: bool = False,
) -> MwmResult:
  """Globally optimal matching by include/exclude search over edges.

  Edges are visited in decreasing weight. A branch is cut when the current
  weight plus half the heaviest remaining admissible edge at every free vertex
  falls strictly below the best weight found; equal-weight optima are all
  visited and the lexicographically smallest edge id set is kept.

  Args:
    g: graph or view.
    w: weight vector indexed by base edge id.
    prune: use the bound. Without it every matching is visited.
    edge_cap: refuse views with more edges than this.
    certify: run the augmenting-path certifier on the result.

  Returns:
    The optimum, tagged BRANCH_BOUND when pruning and ENUMERATION otherwise.

  Raises:
    SolverCapExceeded: if the view has more than `edge_cap` edges.
  """
  view = graphs.as_view(g)
  w = _vector(w)
  if len(view.edge_ids) > edge_cap:
    raise SolverCapExceeded(
        f'{len(view.edge_ids)} edges exceed the branch-and-bound cap'
        f' {edge_cap}.'
    )
  order = sorted(view.edge_ids, key=lambda e: (-float(w[e]), e))
  ends = [view.base.edges[e] for e in order]
  weight = [float(w[e]) for e in order]
  incident = collections.defaultdict(list)
  for i, (u, v) in enumerate(ends):
    incident[u].append(i)
    incident[v].append(i)

  covered = set()
  chosen = []
  best_weight, best_key = -1.0, ()
  nodes = 0

  def bound(i: int) -> float:
    total = 0.0
    for v, positions in incident.items():
      if v in covered:
        continue
      for j in positions:
        if j < i:
          continue
        x, y = ends[j]
        if (y if x == v else x) not in covered:
          total += weight[j]
          break
    return total / 2

  def search(i: int, current: float) -> None:
    nonlocal best_weight, best_key, nodes
    nodes += 1
    if prune and best_weight >= 0:
      if current + bound(i) < best_weight - _BOUND_SLACK * best_weight:
        return
    if i == len(order):
      exact = math.fsum(float(w[e]) for e in sorted(chosen))
      key = tuple(sorted(chosen))
      if exact > best_weight or (exact == best_weight and key < best_key):
        best_weight, best_key = exact, key
      return
    u, v = ends[i]
    if u not in covered and v not in covered:
      covered.update((u, v))
      chosen.append(order[i])
      search(i + 1, current + weight[i])
      chosen.pop()
      covered.difference_update((u, v))
    search(i + 1, current)

  search(0, 0.0)
  logging.debug('Branch and bound visited %d nodes on %d edges.', nodes,
                len(order))
  return _result(
      view, w, Matching(best_key),
      SolverKind.BRANCH_BOUND if prune else SolverKind.ENUMERATION, certify,
  )


def _forest_matching(view: graphs.SubgraphView, w: np.ndarray) -> set[int]:
  """Cavity DP on every tree of a forest view.

  A downward pass computes each vertex's bonus in its own subtree; an outward
  pass computes, for each child c of x, the bonus of x in the tree with the
  subtree of c removed. Edge (x, c) is matched iff its weight beats the sum of
  the two directed bonuses.
  """
  chosen = set()
  seen = set()
  for root in view.vertices:
    if root in seen:
      continue
    seen.add(root)
    order = [root]
    children = collections.defaultdict(list)
    parent_edge = {root: None}
    for x in order:
      for y, e in view.neighbors(x):
        if y not in seen:
          seen.add(y)
          parent_edge[y] = e
          children[x].append((y, e))
          order.append(y)

    down = {}
    for x in reversed(order):
      down[x] = max(
          (max(float(w[e]) - down[c], 0.0) for c, e in children[x]),
          default=0.0,
      )

    up = {}
    for x in order:
      terms = [(max(float(w[e]) - down[c], 0.0), c) for c, e in children[x]]
      from_parent = 0.0
      if parent_edge[x] is not None:
        from_parent = max(float(w[parent_edge[x]]) - up[x], 0.0)
      top = sorted(terms, key=lambda t: -t[0])[:2]
      for c, e in children[x]:
        others = [t for t, cc in top if cc != c]
        up[c] = max([from_parent] + others[:1])
        if float(w[e]) > up[c] + down[c]:
          chosen.add(e)
  return chosen


def mwm_tree(
    t: graphs.GraphLike, w: weights_lib.WeightsLike, certify: bool = False
) -> MwmResult:
  """Linear-time MWM of a tree by the two-pass cavity DP.

  Raises:
    NotATreeError: if `t` has a cycle or is disconnected.
  """
  view = graphs.as_view(t)
  if not graphs.is_tree(view):
    raise NotATreeError('mwm_tree needs a connected acyclic graph.')
  w = _vector(w)
  return _result(
      view, w, Matching(_forest_matching(view, w)), SolverKind.TREE_DP,
      certify,
  )


def _result(
    view: graphs.SubgraphView,
    w: np.ndarray,
    m: Matching,
    solver: SolverKind,
    certify: bool,
) -> MwmResult:
  certified = False
  if certify:
    certified = certify_no_augmenting_path(view, w, m) == Certificate.OPTIMAL
  return MwmResult(m, matching_weight(m, w), certified, solver)


class MatchingSolver(abc.ABC):
  """An exact MWM solver."""

  @abc.abstractmethod
  def name(self) -> SolverKind:
    ...

  @abc.abstractmethod
  def solve(
      self, g: graphs.GraphLike, w: weights_lib.WeightsLike
  ) -> MwmResult:
    ...

  def indicator(
      self, g: graphs.GraphLike, w: weights_lib.WeightsLike, e: int
  ) -> int:
    """1 if edge e is in the optimum of g, else 0."""
    return int(e in self.solve(g, w).matching)


class TreeDpSolver(MatchingSolver):

  def name(self) -> SolverKind:
    return SolverKind.TREE_DP

  def solve(self, g, w):
    return mwm_tree(g, w)


class BranchBoundSolver(MatchingSolver):

  def __init__(self, edge_cap: int = DEFAULT_EDGE_CAP):
    self.edge_cap = edge_cap

  def name(self) -> SolverKind:
    return SolverKind.BRANCH_BOUND

  def solve(self, g, w):
    return mwm_enumerate(g, w, prune=True, edge_cap=self.edge_cap)


class EnumerationSolver(MatchingSolver):

  def __init__(self, edge_cap: int = DEFAULT_EDGE_CAP):
    self.edge_cap = edge_cap

  def name(self) -> SolverKind:
    return SolverKind.ENUMERATION

  def solve(self, g, w):
    return mwm_enumerate(g, w, prune=False, edge_cap=self.edge_cap)


def solve(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    edge_cap: int = DEFAULT_EDGE_CAP,
    certify: bool = False,
) -> MwmResult:
  """Exact MWM of any view.

  Forest components go through the tree DP whatever their size. Components
  with a cycle go through branch and bound, each under its own edge cap.
  """
  view = graphs.as_view(g)
  w = _vector(w)
  if graphs.is_forest(view):
    m = Matching(_forest_matching(view, w))
    return _result(view, w, m, SolverKind.TREE_DP, certify)

  chosen = set()
  cyclic = BranchBoundSolver(edge_cap)
  for component in graphs.components(view):
    part = graphs.delete(view, view.vertex_set - set(component))
    if graphs.is_forest(part):
      chosen |= _forest_matching(part, w)
    else:
      logging.debug('Branch and bound on a %d-vertex component.',
                    len(component))
      chosen |= cyclic.solve(part, w).matching.edge_ids
  return _result(view, w, Matching(chosen), SolverKind.BRANCH_BOUND, certify)


def find_augmenting_path(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    m: MatchingLike,
    path_cap: int = _PATH_CAP,
) -> tuple[Certificate, Optional[list[int]]]:
  """Searches every alternating self-avoiding path and even cycle.

  A candidate P = e_1 ~ ... ~ e_n is augmenting when its edges alternate
  between m and its complement, an end edge outside m ends at a vertex left
  unmatched by m (paths only), and the weight outside m strictly exceeds the
  weight inside m.

  Returns:
    (OPTIMAL, None) if no candidate is augmenting, (AUGMENTING_PATH_FOUND,
    edge ids along the path) on the first hit, and (INCONCLUSIVE, None) once
    more than `path_cap` alternating walks have been extended.
  """
  view = graphs.as_view(g)
  w = _vector(w)
  edges = _edge_set(m)
  matching = Matching(edges)
  if not matching.is_valid(view):
    raise ValueError(f'{sorted(edges)} is not a matching of the graph.')
  mates = matching.mates(view)
  visited = 0

  def gain(path: list[int]) -> float:
    return (math.fsum(float(w[e]) for e in path if e not in edges)
            - math.fsum(float(w[e]) for e in path if e in edges))

  def extend(start, x, on_path, path, first_in):
    # The augmenting edge list, or None.
    nonlocal visited
    visited += 1
    if visited > path_cap:
      raise _PathCapReached
    last_in = path[-1] in edges
    closes = (last_in or x not in mates)
    if closes and gain(path) > 0:
      return list(path)
    for y, e in view.neighbors(x):
      if (e in edges) == last_in or e == path[-1]:
        continue
      if y == start:
        if len(path) >= 3 and (e in edges) != first_in:
          cycle = path + [e]
          if gain(cycle) > 0:
            return cycle
        continue
      if y in on_path:
        continue
      on_path.add(y)
      path.append(e)
      found = extend(start, y, on_path, path, first_in)
      path.pop()
      on_path.discard(y)
      if found is not None:
        return found
    return None

  try:
    for x0 in view.vertices:
      for x1, e in view.neighbors(x0):
        first_in = e in edges
        if not first_in and x0 in mates:
          continue
        found = extend(x0, x1, {x0, x1}, [e], first_in)
        if found is not None:
          return Certificate.AUGMENTING_PATH_FOUND, found
  except _PathCapReached:
    logging.warning('Certifier stopped after %d alternating walks.', path_cap)
    return Certificate.INCONCLUSIVE, None
  return Certificate.OPTIMAL, None


def certify_no_augmenting_path(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    m: MatchingLike,
    path_cap: int = _PATH_CAP,
) -> Certificate:
  """OPTIMAL iff m admits no augmenting path, INCONCLUSIVE past the cap."""
  certificate, _ = find_augmenting_path(g, w, m, path_cap)
  return certificate
