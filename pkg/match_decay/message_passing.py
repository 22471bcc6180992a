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

"""p/q message passing for exponential weights on planted trees.

On a tree whose root o† has degree one, every non-root vertex v owns the edge
e_v to its parent. With i.i.d. exp(1) weights, xi(e_v) = 1{w_{e_v} > B^a(v)}
are independent across the children of a vertex and

  p(e_v) = P(xi(e_v) = 1) = Phi(p(e_{v_1}), ..., p(e_{v_d})),
  Phi(p) = E[1 / (1 + sum_i Ber(p_i))].

Leaves at the full depth r carry p = e^{-a_v}; shallower leaves carry p = 1.
In q = -log p coordinates the map is Psi(q) = -log Phi(e^{-q}), which
contracts; `root_sensitivity` measures how much the root value still depends
on the boundary.
"""

import collections.abc
import dataclasses
import itertools
import math
from typing import Iterable, Mapping, Optional, Sequence

from match_decay import extended_reals
from match_decay import graphs
from match_decay import weights as weights_lib
import numpy as np


class MalformedTreeError(ValueError):
  """Raised for inputs that are not trees with a degree-one root."""


def _probabilities(p: Iterable[float]) -> np.ndarray:
  p = np.asarray(list(p) if not isinstance(p, np.ndarray) else p,
                 dtype=np.float64).reshape(-1)
  if np.any(~((p >= 0.0) & (p <= 1.0))):
    raise ValueError(f'Bernoulli means must lie in [0, 1], got {p}.')
  return p


def _q_values(q: Iterable[float]) -> np.ndarray:
  q = np.asarray(list(q) if not isinstance(q, np.ndarray) else q,
                 dtype=np.float64).reshape(-1)
  if np.any(~(q >= 0.0)):
    raise ValueError(f'q-values must lie in [0, inf], got {q}.')
  return q


def poisson_binomial(p: Iterable[float]) -> np.ndarray:
  """P(sum_i Ber(p_i) = k) for k = 0..len(p), by successive convolution."""
  dist = np.ones(1)
  for pi in _probabilities(p):
    dist = np.convolve(dist, [1.0 - pi, pi])
  return dist


def _mean_inverse(dist: np.ndarray, shift: int = 0) -> float:
  k = np.arange(len(dist))
  return float(np.sum(dist / (1.0 + shift + k)))


def phi(p: Iterable[float]) -> float:
  """E[1 / (1 + X)] with X a sum of independent Ber(p_i); in [1/(d+1), 1]."""
  return _mean_inverse(poisson_binomial(p))


def phi_by_subsets(p: Iterable[float]) -> float:
  """Phi by the explicit sum over the 2^d outcome patterns."""
  p = _probabilities(p)
  total = 0.0
  for pattern in itertools.product((0, 1), repeat=len(p)):
    mass = math.prod(pi if bit else 1.0 - pi for pi, bit in zip(p, pattern))
    total += mass / (1 + sum(pattern))
  return total


def phi_gradient(p: Iterable[float]) -> np.ndarray:
  """dPhi/dp_i = -E[1 / ((1 + Y_i)(2 + Y_i))], Y_i the sum without i."""
  p = _probabilities(p)
  grad = np.zeros(len(p))
  for i in range(len(p)):
    dist = poisson_binomial(np.delete(p, i))
    k = np.arange(len(dist))
    grad[i] = -float(np.sum(dist / ((1.0 + k) * (2.0 + k))))
  return grad


def psi(q: Iterable[float]) -> float:
  """-log Phi(e^{-q_1}, ..., e^{-q_d}); 0 for no children."""
  q = _q_values(q)
  return float(-math.log(phi(extended_reals.exp_neg(q))))


def psi_gradient(q: Iterable[float]) -> np.ndarray:
  """dPsi/dq_i = p_i (dPhi/dp_i) / Phi, all components <= 0."""
  q = _q_values(q)
  p = np.atleast_1d(extended_reals.exp_neg(q))
  return p * phi_gradient(p) / phi(p)


def psi_gradient_l1(q: Iterable[float]) -> float:
  """||grad Psi||_1; at most 1 - prod_i (1 - p_i)."""
  q = _q_values(q)
  finite = q[np.isfinite(q)]
  if not len(finite):
    return 0.0
  # p = 0 components have zero gradient and leave Phi unchanged.
  return float(np.sum(np.abs(psi_gradient(finite))))


def exp_identity(c: Iterable[float]) -> float:
  """E[exp(-max_i (X_i - c_i)_+)] for i.i.d. exp(1) X_i, in closed form.

  Equals sum over S of (1 + |S|)^{-1} prod_{i in S} e^{-c_i}
  prod_{i not in S} (1 - e^{-c_i}), i.e. Phi(e^{-c}).
  """
  return phi(np.atleast_1d(extended_reals.exp_neg(_q_values(c))))


def exp_identity_monte_carlo(
    c: Iterable[float], n: int, rng: np.random.Generator
) -> tuple[float, float]:
  """Sample mean and standard error of exp(-max_i (X_i - c_i)_+)."""
  c = _q_values(c)
  x = rng.exponential(1.0, size=(n, len(c)))
  samples = np.exp(-np.max(extended_reals.excess(x, c[None, :]), axis=1))
  return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n))


def check_key_inequality(
    p: Sequence[float], w_means: Sequence[float] = ()
) -> tuple[float, float]:
  """Both sides of sum_i p_i E[1/((1+W+Z_i)(2+W+Z_i))] <= E[1{X>0}/(1+W+X)].

  X is the sum of Ber(p_i), Z_i = X - xi_i, and W is an independent sum of
  Ber(w_means). Both sides are exact.
  """
  p = _probabilities(p)
  w_dist = poisson_binomial(w_means)
  lhs = 0.0
  for i in range(len(p)):
    dist = np.convolve(w_dist, poisson_binomial(np.delete(p, i)))
    k = np.arange(len(dist))
    lhs += p[i] * float(np.sum(dist / ((1.0 + k) * (2.0 + k))))
  x_dist = poisson_binomial(p)
  rhs = 0.0
  for x in range(1, len(x_dist)):
    rhs += x_dist[x] * _mean_inverse(w_dist, shift=x)
  return lhs, rhs


@dataclasses.dataclass(frozen=True)
class RootedTree:
  """A tree hanging from a degree-one root.

  Attributes:
    graph: the underlying tree.
    root: o†.
    parent: parent of each vertex, -1 at the root.
    parent_edge: edge id of e_v, -1 at the root.
    children: children of each vertex.
    depth: distance to the root.
    order: BFS order from the root.
    r: the boundary depth. Leaves at depth exactly r form the boundary.
  """

  graph: graphs.Graph
  root: int
  parent: tuple[int, ...]
  parent_edge: tuple[int, ...]
  children: tuple[tuple[int, ...], ...]
  depth: tuple[int, ...]
  order: tuple[int, ...]
  r: int

  @classmethod
  def from_graph(
      cls, g: graphs.Graph, root: int = 0, r: Optional[int] = None
  ) -> 'RootedTree':
    """Orients a tree away from `root`.

    Args:
      g: a tree with at least one edge.
      root: o†, which must have degree one.
      r: boundary depth; defaults to the height. A larger r leaves the
        boundary empty.

    Raises:
      MalformedTreeError: if g is not a tree, the root degree is not one, or
        r is below the height.
    """
    if g.n_vertices < 2 or not graphs.is_tree(g):
      raise MalformedTreeError('Message passing needs a tree with an edge.')
    if not 0 <= root < g.n_vertices or g.degree(root) != 1:
      raise MalformedTreeError(f'Root {root} must have degree one.')
    parent = [-1] * g.n_vertices
    parent_edge = [-1] * g.n_vertices
    depth = [0] * g.n_vertices
    children = [[] for _ in range(g.n_vertices)]
    order = [root]
    for x in order:
      for y, e in g.adjacency[x]:
        if y != root and parent[y] == -1:
          parent[y], parent_edge[y], depth[y] = x, e, depth[x] + 1
          children[x].append(y)
          order.append(y)
    height = max(depth)
    if r is None:
      r = height
    if r < height:
      raise MalformedTreeError(f'r = {r} is below the tree height {height}.')
    return cls(
        graph=g,
        root=root,
        parent=tuple(parent),
        parent_edge=tuple(parent_edge),
        children=tuple(tuple(c) for c in children),
        depth=tuple(depth),
        order=tuple(order),
        r=r,
    )

  @property
  def top(self) -> int:
    """o, the unique child of the root."""
    return self.children[self.root][0]

  @property
  def height(self) -> int:
    return max(self.depth)

  @property
  def max_degree(self) -> int:
    return self.graph.max_degree()

  @property
  def leaves(self) -> frozenset[int]:
    return frozenset(
        v for v in self.order if v != self.root and not self.children[v]
    )

  @property
  def deep_leaves(self) -> frozenset[int]:
    return frozenset(v for v in self.leaves if self.depth[v] == self.r)


def interior_vertices(t: RootedTree, k: int) -> frozenset[int]:
  """U_k: vertices at depth 1..k on the root path of some depth-r leaf."""
  out = set()
  for leaf in t.deep_leaves:
    v = leaf
    while v != t.root:
      if 1 <= t.depth[v] <= k:
        out.add(v)
      v = t.parent[v]
  return frozenset(out)


@dataclasses.dataclass(frozen=True)
class BoundaryCondition(collections.abc.Mapping):
  """a_v in [0, inf] for every depth-r leaf v."""

  values: Mapping[int, float]

  def __getitem__(self, v: int) -> float:
    return self.values[v]

  def __iter__(self):
    return iter(self.values)

  def __len__(self) -> int:
    return len(self.values)

  @classmethod
  def constant(cls, t: RootedTree, a: float) -> 'BoundaryCondition':
    return cls.build(t, {v: a for v in t.deep_leaves})

  @classmethod
  def zeros(cls, t: RootedTree) -> 'BoundaryCondition':
    return cls.constant(t, 0.0)

  @classmethod
  def infinite(cls, t: RootedTree) -> 'BoundaryCondition':
    return cls.constant(t, extended_reals.INF)

  @classmethod
  def build(
      cls, t: RootedTree, values: Mapping[int, float]
  ) -> 'BoundaryCondition':
    values = {int(v): float(a) for v, a in values.items()}
    if set(values) != set(t.deep_leaves):
      raise ValueError(
          'A boundary condition must cover exactly the depth-r leaves'
          f' {sorted(t.deep_leaves)}, got {sorted(values)}.'
      )
    if any(not a >= 0.0 for a in values.values()):
      raise ValueError('Boundary values must lie in [0, inf].')
    return cls(values)

  @classmethod
  def parse(cls, t: RootedTree, text: str) -> 'BoundaryCondition':
    """Lines "v a_v"; a_v may be "inf"."""
    values = {}
    for line in text.splitlines():
      if line.strip():
        v, a = line.split()
        values[int(v)] = float(a)
    return cls.build(t, values)


@dataclasses.dataclass(frozen=True)
class MessageState:
  """p(e_v) and q(e_v) = -log p(e_v), keyed by the child vertex v."""

  tree: RootedTree
  p: Mapping[int, float]
  q: Mapping[int, float]

  @property
  def root_p(self) -> float:
    return self.p[self.tree.top]

  @property
  def root_q(self) -> float:
    return self.q[self.tree.top]

  def by_edge(self) -> dict[int, float]:
    return {self.tree.parent_edge[v]: pv for v, pv in self.p.items()}


def run_tree_recursion(
    t: RootedTree, a: Mapping[int, float]
) -> MessageState:
  """Applies Phi from the leaves up to e_o."""
  if set(a) != set(t.deep_leaves):
    raise MalformedTreeError('Boundary condition does not match the tree.')
  p = {}
  for v in reversed(t.order):
    if v == t.root:
      continue
    if not t.children[v]:
      p[v] = extended_reals.exp_neg(a[v]) if v in t.deep_leaves else 1.0
    else:
      p[v] = phi([p[c] for c in t.children[v]])
  q = {v: extended_reals.neg_log(pv) for v, pv in p.items()}
  return MessageState(t, p, q)


def contraction_bound(max_degree: int, r: int) -> float:
  """D (1 - (2D)^{-D})^{r-3}."""
  d = max_degree
  return d * (1.0 - (2.0 * d) ** (-d)) ** (r - 3)


@dataclasses.dataclass(frozen=True)
class Sensitivity:
  value: float
  q_value: float
  bound: Optional[float]
  r: int
  max_degree: int

  @property
  def within_bound(self) -> Optional[bool]:
    if self.bound is None:
      return None
    return self.value <= self.bound + 1e-12


def root_sensitivity(t: RootedTree) -> Sensitivity:
  """|p^0(e_o) - p^inf(e_o)|, with the contraction bound when r >= 4."""
  zero = run_tree_recursion(t, BoundaryCondition.zeros(t))
  infinite = run_tree_recursion(t, BoundaryCondition.infinite(t))
  q_zero, q_inf = zero.root_q, infinite.root_q
  q_value = 0.0 if q_zero == q_inf else abs(q_zero - q_inf)
  d = t.max_degree
  return Sensitivity(
      value=abs(zero.root_p - infinite.root_p),
      q_value=q_value,
      bound=contraction_bound(d, t.r) if t.r >= 4 else None,
      r=t.r,
      max_degree=d,
  )


def sample_tree_bonuses(
    t: RootedTree, a: Mapping[int, float], w: weights_lib.WeightsLike
) -> dict[int, np.ndarray]:
  """B^a(v) for every vertex, from the leaves up, on fixed weights.

  Leading axes of `w` are replicas, evaluated together.
  """
  w = weights_lib.as_array(w)
  batch = w.shape[:-1]
  values = {}
  for v in reversed(t.order):
    if v != t.root and not t.children[v]:
      a_v = a[v] if v in t.deep_leaves else 0.0
      values[v] = np.full(batch, a_v)
      continue
    values[v] = np.maximum.reduce([
        np.asarray(extended_reals.excess(w[..., t.parent_edge[c]], values[c]))
        for c in t.children[v]
    ])
  return values
