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

"""Vertex bonuses, their cavity recursion and the depth-r local bounds.

The bonus of v in H is W_H - W_{H minus v}, the weight lost from the optimal
matching when v is deleted. It satisfies

  B(v, H) = max over neighbors u of (w_uv - B(u, H minus v))_+,

and truncating that recursion at depth r with a 0 or an inf base case gives
two local values that sandwich the bonus, in an order fixed by the parity of r.
"""

import dataclasses
import enum
from typing import Union

from absl import logging
from match_decay import extended_reals
from match_decay import graphs
from match_decay import matching
from match_decay import weights as weights_lib
import numpy as np

DEFAULT_WALK_BUDGET = 5_000_000

Value = Union[float, np.ndarray]


class WalkBudgetExceeded(RuntimeError):
  """Raised when a local bound needs more self-avoiding walks than allowed."""


class Kind(enum.Enum):
  ZERO = 'zero'
  INFTY = 'infty'


class Parity(enum.Enum):
  EVEN = 'even'
  ODD = 'odd'


def _check_vertex(view: graphs.SubgraphView, v: int) -> None:
  if not view.has_vertex(v):
    raise graphs.GraphError(f'Vertex {v} is not in the graph.')


def bonus(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    v: int,
) -> float:
  """W_H - W_{H minus v}, both by the exact solver; clipped at 0."""
  view = graphs.as_view(g)
  _check_vertex(view, v)
  if not view.neighbors(v):
    return 0.0
  full = matching.solve(view, w).total_weight
  rest = matching.solve(view.delete([v]), w).total_weight
  return max(full - rest, 0.0)


def check_bonus_recursion(
    g: graphs.GraphLike, w: weights_lib.WeightsLike, v: int
) -> float:
  """|B(v, H) - max_u (w_uv - B(u, H minus v))_+|, every bonus solved exactly."""
  view = graphs.as_view(g)
  _check_vertex(view, v)
  w = weights_lib.as_array(w)
  rest = view.delete([v])
  rhs = max(
      (max(float(w[e]) - bonus(rest, w, u), 0.0)
       for u, e in view.neighbors(v)),
      default=0.0,
  )
  return abs(bonus(view, w, v) - rhs)


def recursion_bonus(
    g: graphs.GraphLike, w: weights_lib.WeightsLike, v: int
) -> float:
  """The bonus by unrolling the recursion to the bottom; exponential time."""
  view = graphs.as_view(g)
  _check_vertex(view, v)
  w = weights_lib.as_array(w)
  memo = {}

  def rec(x: int, deleted: frozenset[int]) -> float:
    key = (x, deleted)
    if key not in memo:
      inner = deleted | {x}
      memo[key] = max(
          (max(float(w[e]) - rec(y, inner), 0.0)
           for y, e in view.neighbors(x) if y not in deleted),
          default=0.0,
      )
    return memo[key]

  return rec(v, frozenset())


def local_bound(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    u: int,
    r: int,
    kind: Union[Kind, str],
    walk_budget: int = DEFAULT_WALK_BUDGET,
) -> Value:
  """B^0_r(u, H) or B^inf_r(u, H).

  The recursion state is the set of vertices deleted so far along a
  self-avoiding walk from u; states reached by several walks are evaluated
  once per call. Both bounds are 0 at a vertex with no remaining neighbor.

  Args:
    g: the graph H.
    w: weights, last axis indexed by edge id. Leading axes are evaluated
      together, e.g. a (replicas, edges) matrix gives one value per replica.
    u: the vertex.
    r: depth, r >= 0.
    kind: base case at depth 0, `zero` or `infty`.
    walk_budget: maximum number of recursion states expanded.

  Returns:
    A float for a weight vector, else an array over the leading axes. Values
    may be inf.

  Raises:
    WalkBudgetExceeded: if more than `walk_budget` states are expanded.
  """
  view = graphs.as_view(g)
  _check_vertex(view, u)
  if r < 0:
    raise ValueError(f'Depth must be nonnegative, got {r}.')
  kind = Kind(kind)
  w = weights_lib.as_array(w)
  batch = w.shape[:-1]
  zero = np.zeros(batch)
  base = zero if kind == Kind.ZERO else np.full(batch, extended_reals.INF)
  memo = {}
  expanded = 0

  def rec(x: int, deleted: frozenset[int], depth: int) -> np.ndarray:
    nonlocal expanded
    key = (x, deleted)
    if key in memo:
      return memo[key]
    nbrs = [(y, e) for y, e in view.neighbors(x) if y not in deleted]
    if not nbrs:
      value = zero
    elif depth == 0:
      value = base
    else:
      expanded += 1
      if expanded > walk_budget:
        raise WalkBudgetExceeded(
            f'local_bound(u={u}, r={r}) exceeded {walk_budget} walks.'
        )
      inner = deleted | {x}
      value = np.maximum.reduce([
          np.asarray(extended_reals.excess(w[..., e], rec(y, inner, depth - 1)))
          for y, e in nbrs
      ])
    memo[key] = value
    return value

  out = rec(u, frozenset(), r)
  logging.debug('local_bound(u=%d, r=%d, %s) expanded %d states.', u, r,
                kind.value, expanded)
  return float(out) if out.ndim == 0 else out


@dataclasses.dataclass(frozen=True)
class LocalBoundResult:
  """Both local bounds at one depth, and their parity order."""

  r: int
  lower_kind_value: Value
  upper_kind_value: Value

  @property
  def parity(self) -> Parity:
    return Parity.EVEN if self.r % 2 == 0 else Parity.ODD

  @property
  def lo(self) -> Value:
    if self.parity == Parity.EVEN:
      return self.lower_kind_value
    return self.upper_kind_value

  @property
  def hi(self) -> Value:
    if self.parity == Parity.EVEN:
      return self.upper_kind_value
    return self.lower_kind_value


def local_bounds(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    u: int,
    r: int,
    walk_budget: int = DEFAULT_WALK_BUDGET,
) -> LocalBoundResult:
  return LocalBoundResult(
      r=r,
      lower_kind_value=local_bound(g, w, u, r, Kind.ZERO, walk_budget),
      upper_kind_value=local_bound(g, w, u, r, Kind.INFTY, walk_budget),
  )


def sandwich(
    g: graphs.GraphLike,
    w: weights_lib.WeightsLike,
    u: int,
    r: int,
    walk_budget: int = DEFAULT_WALK_BUDGET,
) -> tuple[Value, Value]:
  """(lo, hi) with lo <= B(u, H minus A) <= hi for every A in the r-boundary.

  For even r this is (B^0_r, B^inf_r); for odd r the two are swapped.
  """
  result = local_bounds(g, w, u, r, walk_budget)
  return result.lo, result.hi


def membership_indicator(
    g: graphs.GraphLike, w: weights_lib.WeightsLike, e: int
) -> int:
  """1{w_e > B(u, H minus e) + B(v, H minus u)} for e = (u, v)."""
  view = graphs.as_view(g)
  if not view.has_edge(e):
    raise graphs.GraphError(f'Edge {e} is not in the graph.')
  w = weights_lib.as_array(w)
  u, v = view.base.edges[e]
  b_u = bonus(view.delete(edges=[e]), w, u)
  b_v = bonus(view.delete([u]), w, v)
  return int(float(w[e]) > b_u + b_v)


def tree_membership_indicator(
    t: graphs.GraphLike, w: weights_lib.WeightsLike, e: int
) -> int:
  """1{w_e > B(u, T_{v->u}) + B(v, T_{u->v})}, the two sides of e in a tree."""
  view = graphs.as_view(t)
  if not graphs.is_tree(view):
    raise matching.NotATreeError('The symmetric criterion needs a tree.')
  if not view.has_edge(e):
    raise graphs.GraphError(f'Edge {e} is not in the graph.')
  w = weights_lib.as_array(w)
  u, v = view.base.edges[e]
  split = view.delete(edges=[e])
  return int(float(w[e]) > bonus(split, w, u) + bonus(split, w, v))
