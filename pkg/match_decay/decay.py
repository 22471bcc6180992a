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

"""Estimators of the correlation decay of an edge's matching indicator.

For an edge e and radius r, the decay rho_r(G, e) is the expectation over the
weights of

  sup over A in the boundary of B_e^r(G) of |1{e in M_B} - 1{e in M_B minus A}|,

where B is the radius-r ball around e. The exact estimator enumerates every
A. The two bracket estimators bound the sup from above by sandwiching the
bonuses in the membership criterion between the depth-r local bounds, and
cost one local-bound evaluation per endpoint and kind.
"""

import dataclasses
import enum
import itertools
from typing import Callable, Iterable, Optional, Union

from absl import logging
from match_decay import bonus
from match_decay import checkpoint
from match_decay import extended_reals
from match_decay import graphs
from match_decay import matching
from match_decay import replicas
from match_decay import weights as weights_lib
import numpy as np

_BOUNDARY_CAP = 12

Indicator = Union[int, np.ndarray]


class BoundaryCapExceeded(RuntimeError):
  """Raised when the exact sup would enumerate too many boundary subsets."""


class NotATreeBallError(ValueError):
  """Raised when the tree bracket is asked for a ball with a cycle."""


class Method(enum.Enum):
  EXACT_SUP = 'exact'
  BRACKET_TREE = 'bracket-tree'
  BRACKET_GENERAL = 'bracket-general'
  # |1{e in M_G} - 1{e in M_B}|, the truncation error at A = outside of B.
  ROUGH = 'rough'


@dataclasses.dataclass(frozen=True)
class DecayEstimate:
  """Monte Carlo estimate of one decay value."""

  r: int
  method: Method
  n_replicas: int
  mean: float
  std_error: float
  seed: int

  def __post_init__(self):
    if not 0.0 <= self.mean <= 1.0:
      raise ValueError(f'Mean must lie in [0, 1], got {self.mean}.')
    if not self.std_error >= 0.0:
      raise ValueError(f'Standard error must be >= 0, got {self.std_error}.')

  def to_row(self) -> dict[str, object]:
    return {
        'r': self.r,
        'method': self.method.value,
        'replicas': self.n_replicas,
        'mean': self.mean,
        'stderr': self.std_error,
        'seed': self.seed,
    }


def _rows(
    w: weights_lib.WeightsLike, fn: Callable[[np.ndarray], int]
) -> Indicator:
  w = weights_lib.as_array(w)
  if w.ndim == 1:
    return fn(w)
  return np.array([fn(row) for row in w], dtype=np.int64)


def _edge_and_ball(
    g: graphs.GraphLike, e: int, r: int
) -> tuple[graphs.SubgraphView, graphs.SubgraphView]:
  view = graphs.as_view(g)
  if not view.has_edge(e):
    raise graphs.GraphError(f'Edge {e} is not in the graph.')
  return view, graphs.ball(view, e, r)


def deletable_boundary(
    g: graphs.GraphLike,
    e: int,
    r: int,
    candidates: Optional[Iterable[int]] = None,
) -> list[int]:
  """Boundary vertices of B_e^r other than the endpoints of e, sorted."""
  view, b = _edge_and_ball(g, e, r)
  out = graphs.boundary(view, b) - set(view.base.edges[e])
  if candidates is not None:
    out &= set(candidates)
  return sorted(out)


def rho_replica_exact(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    e: int,
    r: int,
    boundary_cap: int = _BOUNDARY_CAP,
    candidates: Optional[Iterable[int]] = None,
    edge_cap: int = matching.DEFAULT_EDGE_CAP,
) -> Indicator:
  """The sup over boundary deletions, by enumerating every subset.

  The endpoints of e are never deleted, so at r = 0, where they are the whole
  boundary, the value is 0 rather than the 1 that deleting u would give.

  Args:
    g: the graph.
    w: a weight vector, or a (replicas, edges) matrix evaluated row by row.
    e: the edge.
    r: the radius, r >= 0.
    boundary_cap: largest boundary enumerated.
    candidates: if given, only subsets of these boundary vertices are tried.
    edge_cap: solver cap for balls with a cycle.

  Returns:
    0 or 1 per weight row.

  Raises:
    BoundaryCapExceeded: if the boundary has more than `boundary_cap`
      vertices.
  """
  view, b = _edge_and_ball(g, e, r)
  deletable = deletable_boundary(view, e, r, candidates)
  if len(deletable) > boundary_cap:
    raise BoundaryCapExceeded(
        f'Boundary of B_{e}^{r} has {len(deletable)} vertices, cap is'
        f' {boundary_cap}.'
    )
  subsets = [
      a
      for k in range(1, len(deletable) + 1)
      for a in itertools.combinations(deletable, k)
  ]

  def replica(row: np.ndarray) -> int:
    inside = int(e in matching.solve(b, row, edge_cap).matching)
    for a in subsets:
      if int(e in matching.solve(b.delete(a), row, edge_cap).matching) != inside:
        return 1
    return 0

  return _rows(w, replica)


def _bracket(
    w: np.ndarray,
    e: int,
    r: int,
    u_graph: graphs.SubgraphView,
    v_graph: graphs.SubgraphView,
    walk_budget: int,
) -> Indicator:
  """1{w_e > lo} - 1{w_e > hi} for the parity-ordered bound sums."""
  u, v = u_graph.base.edges[e]
  sums = {
      kind: extended_reals.add(
          bonus.local_bound(u_graph, w, u, r, kind, walk_budget),
          bonus.local_bound(v_graph, w, v, r, kind, walk_budget),
      )
      for kind in bonus.Kind
  }
  result = bonus.LocalBoundResult(r, sums[bonus.Kind.ZERO],
                                  sums[bonus.Kind.INFTY])
  w_e = w[..., e]
  value = (extended_reals.greater(w_e, result.lo) -
           extended_reals.greater(w_e, result.hi))
  assert np.all(np.asarray(value) >= 0), 'Local bound sums out of order.'
  return value


def rho_replica_bracket_tree(
    t: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    e: int,
    r: int,
    walk_budget: int = bonus.DEFAULT_WALK_BUDGET,
) -> Indicator:
  """Upper bracket of the exact sup when B_e^r is a tree.

  Both endpoints are bounded on the two sides of e. The graph outside the ball
  is kept so boundary vertices see their outer neighbors in the infinite base
  case; walks of depth r never reach it.

  Raises:
    NotATreeBallError: if B_e^r has a cycle.
  """
  view, b = _edge_and_ball(t, e, r)
  if not graphs.is_tree(b):
    raise NotATreeBallError(f'B_{e}^{r} is not a tree.')
  split = view.delete(edges=[e])
  return _bracket(weights_lib.as_array(w), e, r, split, split, walk_budget)


def rho_replica_bracket_general(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    e: int,
    r: int,
    walk_budget: int = bonus.DEFAULT_WALK_BUDGET,
) -> Indicator:
  """Upper bracket of the exact sup on any graph.

  u is bounded in G minus e and v in G minus u, the two graphs of the
  membership criterion.
  """
  view, _ = _edge_and_ball(g, e, r)
  u, _ = view.base.edges[e]
  return _bracket(
      weights_lib.as_array(w),
      e,
      r,
      view.delete(edges=[e]),
      view.delete([u]),
      walk_budget,
  )


def rough_replica(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    e: int,
    r: int,
    edge_cap: int = matching.DEFAULT_EDGE_CAP,
) -> Indicator:
  """|1{e in M_G} - 1{e in M_B}| for the ball B = B_e^r(G)."""
  view, b = _edge_and_ball(g, e, r)

  def replica(row: np.ndarray) -> int:
    whole = e in matching.solve(view, row, edge_cap).matching
    local = e in matching.solve(b, row, edge_cap).matching
    return int(whole != local)

  return _rows(w, replica)


def restriction_consistency(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    e: int,
    r: int,
    edge_cap: int = matching.DEFAULT_EDGE_CAP,
) -> bool:
  """Whether 1{e in M_G} equals 1{e in M_{B minus A}}.

  A is the set of ball vertices matched in M_G to a partner outside the ball.
  Deleting them makes the restriction of M_G to the ball optimal there.
  """
  view, b = _edge_and_ball(g, e, r)
  w = weights_lib.as_array(w)
  whole = matching.solve(view, w, edge_cap).matching
  inside = b.vertex_set
  cut = [
      x for x, (y, _) in whole.mates(view).items()
      if x in inside and y not in inside
  ]
  local = matching.solve(b.delete(cut), w, edge_cap).matching
  return (e in whole) == (e in local)


_REPLICA_FUNCTIONS = {
    Method.EXACT_SUP: rho_replica_exact,
    Method.BRACKET_TREE: rho_replica_bracket_tree,
    Method.BRACKET_GENERAL: rho_replica_bracket_general,
    Method.ROUGH: rough_replica,
}


def rho_estimate(
    g: graphs.GraphLike,
    e: int,
    r: int,
    method: Union[Method, str],
    n_replicas: int,
    seed_plan: weights_lib.SeedPlan,
    threads: int = 1,
    distribution: Union[
        weights_lib.Distribution, str] = weights_lib.Distribution.EXP1,
    store: Optional[checkpoint.CheckpointStore] = None,
    key: Optional[str] = None,
) -> DecayEstimate:
  """Mean and standard error of one replica estimator over fresh weights.

  Replica i uses the weights of stream i of `seed_plan`, so the estimate
  depends only on the inputs and the master seed.

  Args:
    g: the graph.
    e: the edge.
    r: the radius.
    method: which per-replica value to average.
    n_replicas: number of weight samples.
    seed_plan: the replica seeds.
    threads: worker threads.
    distribution: weight law.
    store: optional checkpoint store for resuming.
    key: store key; defaults to one derived from method, e and r.

  Returns:
    The estimate.
  """
  method = Method(method)
  view = graphs.as_view(g)
  replica_fn = _REPLICA_FUNCTIONS[method]
  # Fail before sampling on an infeasible ball.
  _edge_and_ball(view, e, r)

  def compute_chunk(start: int, stop: int) -> np.ndarray:
    w = weights_lib.sample_weight_matrix(view, seed_plan, start, stop,
                                         distribution)
    return np.asarray(replica_fn(view, w, e, r))

  values = replicas.run_replicas(
      compute_chunk,
      n_replicas,
      threads=threads,
      store=store,
      key=key or f'{method.value}/e={e}/r={r}',
  )
  mean, std_error = replicas.mean_and_stderr(values)
  logging.info('rho_%d(e=%d) by %s: %.4f +- %.4f', r, e, method.value, mean,
               std_error)
  return DecayEstimate(
      r=r,
      method=method,
      n_replicas=n_replicas,
      mean=mean,
      std_error=std_error,
      seed=seed_plan.master_seed,
  )


def rough_estimate(
    g: graphs.GraphLike,
    e: int,
    r: int,
    n_replicas: int,
    seed_plan: weights_lib.SeedPlan,
    threads: int = 1,
) -> DecayEstimate:
  """Monte Carlo estimate of E|1{e in M_G} - 1{e in M_B}|."""
  return rho_estimate(g, e, r, Method.ROUGH, n_replicas, seed_plan, threads)
