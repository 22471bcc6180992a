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

"""Graph families.

Rooted families (trees, regular-tree balls, hexagonal patches) put their root
at vertex 0. Planted trees put the degree-one root o† at vertex 0 and its
unique neighbor o at vertex 1.
"""

import collections
import collections.abc
import enum
import heapq
import itertools
from typing import Any, Optional, Sequence, Union

from absl import logging
from match_decay import graphs
import numpy as np

_MAX_ATTEMPTS = 10_000

SeedLike = Union[int, np.random.Generator, None]


class InfeasibleParametersError(ValueError):
  """Raised when a family cannot produce a graph with the given parameters."""


class Family(enum.Enum):
  PATH = 'path'
  CYCLE = 'cycle'
  COMPLETE = 'complete'
  TREE = 'tree'
  REGULAR_TREE = 'regular_tree'
  DEGREE_SEQUENCE_TREE = 'degree_sequence_tree'
  RANDOM_REGULAR = 'random_regular'
  DEG3_RANDOM = 'deg3_random'
  ERDOS_RENYI = 'erdos_renyi'
  HEX_PATCH = 'hex_patch'


def _rng(seed: SeedLike) -> np.random.Generator:
  if isinstance(seed, np.random.Generator):
    return seed
  return np.random.default_rng(seed)


def path(n: int) -> graphs.Graph:
  if n < 1:
    raise InfeasibleParametersError(f'path needs n >= 1, got {n}.')
  return graphs.build_graph([(i, i + 1) for i in range(n - 1)], n_vertices=n)


def cycle(n: int) -> graphs.Graph:
  if n < 3:
    raise InfeasibleParametersError(f'cycle needs n >= 3, got {n}.')
  return graphs.build_graph([(i, (i + 1) % n) for i in range(n)], n_vertices=n)


def complete(n: int) -> graphs.Graph:
  if n < 1:
    raise InfeasibleParametersError(f'complete needs n >= 1, got {n}.')
  return graphs.build_graph(itertools.combinations(range(n), 2), n_vertices=n)


def tree(
    depth: int,
    profile: Optional[Sequence[int]] = None,
    offspring: Optional[Sequence[float]] = None,
    seed: SeedLike = None,
    planted: bool = True,
    ensure_depth: bool = True,
) -> graphs.Graph:
  """Rooted tree grown level by level.

  Args:
    depth: height of the tree, counted from vertex 0 (o† when planted).
    profile: fixed number of children per level; profile[k] applies to the
      vertices at distance k from the branching root (o when planted).
    offspring: i.i.d. child-count law, offspring[k] = P(k children).
    seed: randomness for `offspring`.
    planted: prepend a degree-one root o† above the branching root.
    ensure_depth: keep at least one vertex per level down to `depth`, so the
      set of depth-r leaves is nonempty.

  Returns:
    The tree, vertices numbered in BFS order.

  Raises:
    InfeasibleParametersError: if the profile or law is not a valid tree
      description.
  """
  if (profile is None) == (offspring is None):
    raise InfeasibleParametersError('Give exactly one of profile, offspring.')
  min_depth = 1 if planted else 0
  if depth < min_depth:
    raise InfeasibleParametersError(f'depth must be >= {min_depth}, got {depth}.')
  levels = depth - min_depth
  if profile is not None:
    profile = [int(k) for k in profile]
    if len(profile) < levels or any(k < 0 for k in profile):
      raise InfeasibleParametersError(
          f'Profile {profile} does not describe {levels} levels.'
      )
    if ensure_depth and any(k == 0 for k in profile[:levels]):
      raise InfeasibleParametersError(
          f'Profile {profile} cannot reach depth {depth}.'
      )
  else:
    law = np.asarray(offspring, dtype=float)
    if law.ndim != 1 or np.any(law < 0) or not np.isclose(law.sum(), 1.0):
      raise InfeasibleParametersError(f'Invalid offspring law {offspring}.')
    if ensure_depth and len(law) < 2:
      raise InfeasibleParametersError('Offspring law cannot reach the depth.')
    law = law / law.sum()
  rng = _rng(seed)

  edges = []
  if planted:
    edges.append((0, 1))
    frontier, next_id = [1], 2
  else:
    frontier, next_id = [0], 1
  for level in range(levels):
    if profile is not None:
      counts = [profile[level]] * len(frontier)
    else:
      counts = list(rng.choice(len(law), size=len(frontier), p=law))
      if ensure_depth and frontier and max(counts) == 0:
        counts[0] = 1
    new_frontier = []
    for parent, k in zip(frontier, counts):
      for _ in range(int(k)):
        edges.append((parent, next_id))
        new_frontier.append(next_id)
        next_id += 1
    frontier = new_frontier
  return graphs.build_graph(edges, n_vertices=next_id)


def regular_tree(d: int, radius: int) -> graphs.Graph:
  """Ball of radius `radius` around a vertex of the infinite d-regular tree."""
  if d < 2 or radius < 0:
    raise InfeasibleParametersError('regular_tree needs d >= 2, radius >= 0.')
  if radius == 0:
    return graphs.build_graph([], n_vertices=1)
  return tree(
      depth=radius,
      profile=[d] + [d - 1] * (radius - 1),
      planted=False,
  )


def degree_sequence_tree(
    n: int,
    degree_law: Sequence[float] = (0.3, 0.4, 0.3),
    seed: SeedLike = None,
) -> graphs.Graph:
  """Uniform random tree with i.i.d. degrees drawn from a bounded law.

  Degrees are drawn i.i.d. from `degree_law` (degree_law[i] = P(d = i + 1)),
  nudged to satisfy sum(d - 1) = n - 2, and a Prüfer code with vertex v
  repeated d_v - 1 times is decoded into the tree.
  """
  if n < 2:
    raise InfeasibleParametersError(f'degree_sequence_tree needs n >= 2, got {n}.')
  law = np.asarray(degree_law, dtype=float)
  if law.ndim != 1 or np.any(law < 0) or not np.isclose(law.sum(), 1.0):
    raise InfeasibleParametersError(f'Invalid degree law {degree_law}.')
  max_degree = len(law)
  if n > 2 and max_degree < 2:
    raise InfeasibleParametersError('A tree on n > 2 vertices needs degree 2.')
  rng = _rng(seed)

  degrees = rng.choice(max_degree, size=n, p=law / law.sum()) + 1
  target = n - 2
  while (excess := int(np.sum(degrees - 1)) - target) != 0:
    if excess > 0:
      eligible = np.flatnonzero(degrees > 1)
    else:
      eligible = np.flatnonzero(degrees < max_degree)
    picks = rng.choice(eligible, size=min(abs(excess), len(eligible)),
                       replace=False)
    degrees[picks] += -1 if excess > 0 else 1

  code = np.repeat(np.arange(n), degrees - 1)
  rng.shuffle(code)
  remaining = degrees.copy()
  leaves = [v for v in range(n) if remaining[v] == 1]
  heapq.heapify(leaves)
  edges = []
  for v in code:
    leaf = heapq.heappop(leaves)
    edges.append((leaf, int(v)))
    remaining[v] -= 1
    if remaining[v] == 1:
      heapq.heappush(leaves, int(v))
  edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
  return graphs.build_graph(edges, n_vertices=n)


def random_regular(n: int, d: int, seed: SeedLike = None) -> graphs.Graph:
  """Connected random d-regular graph from the pairing model.

  A pairing with a loop or a repeated pair is rejected as a whole, which keeps
  the output uniform over simple d-regular graphs; disconnected outcomes are
  rejected as well.
  """
  if (n * d) % 2 != 0:
    raise InfeasibleParametersError('n * d must be even')
  if not 0 <= d < n:
    raise InfeasibleParametersError('the 0 <= d < n inequality must be satisfied')
  rng = _rng(seed)
  stubs = np.repeat(np.arange(n), d)
  for _ in range(_MAX_ATTEMPTS):
    pairs = rng.permutation(stubs).reshape(-1, 2)
    edges = set()
    for s1, s2 in pairs:
      s1, s2 = int(min(s1, s2)), int(max(s1, s2))
      if s1 == s2 or (s1, s2) in edges:
        break
      edges.add((s1, s2))
    else:
      g = graphs.build_graph(sorted(edges), n_vertices=n)
      if graphs.is_connected(g):
        return g
  raise InfeasibleParametersError(
      f'No connected simple {d}-regular graph on {n} vertices after'
      f' {_MAX_ATTEMPTS} pairings.'
  )


def erdos_renyi(n: int, lam: float, seed: SeedLike = None) -> graphs.Graph:
  """Largest connected component of G(n, lam / n), relabeled 0..k-1."""
  if n < 1 or lam < 0 or lam > n:
    raise InfeasibleParametersError('erdos_renyi needs n >= 1, 0 <= lam <= n.')
  rng = _rng(seed)
  iu, ju = np.triu_indices(n, k=1)
  keep = rng.random(len(iu)) < lam / n
  g = graphs.build_graph(zip(iu[keep], ju[keep]), n_vertices=n)
  largest = max(graphs.components(g), key=len)
  component, _, _ = graphs.to_graph(
      graphs.delete(g, set(range(n)) - set(largest))
  )
  logging.debug('erdos_renyi kept %d of %d vertices.', component.n_vertices, n)
  return component


def _hex_neighbors(site: tuple[int, int, int]) -> list[tuple[int, int, int]]:
  # Axial coordinates (q, r) of a unit cell plus a sublattice bit.
  q, r, s = site
  if s == 0:
    return [(q, r, 1), (q - 1, r, 1), (q, r - 1, 1)]
  return [(q, r, 0), (q + 1, r, 0), (q, r + 1, 0)]


def hex_patch(radius: int) -> graphs.Graph:
  """Ball of graph radius `radius` around the origin of the hexagonal lattice."""
  if radius < 0:
    raise InfeasibleParametersError(f'hex_patch needs radius >= 0, got {radius}.')
  origin = (0, 0, 0)
  index = {origin: 0}
  queue = collections.deque([(origin, 0)])
  while queue:
    site, dist = queue.popleft()
    if dist == radius:
      continue
    for nbr in _hex_neighbors(site):
      if nbr not in index:
        index[nbr] = len(index)
        queue.append((nbr, dist + 1))
  edges = []
  for site, i in index.items():
    if site[2] != 0:
      continue
    for nbr in _hex_neighbors(site):
      if nbr in index:
        edges.append((i, index[nbr]))
  edges.sort(key=lambda uv: (min(uv), max(uv)))
  return graphs.build_graph(edges, n_vertices=len(index))


def generate(
    family: Union[Family, str],
    params: Optional[collections.abc.Mapping[str, Any]] = None,
    seed: SeedLike = None,
) -> graphs.Graph:
  """Dispatches to a family generator with keyword parameters."""
  family = Family(family)
  params = dict(params or {})
  try:
    if family == Family.PATH:
      return path(**params)
    if family == Family.CYCLE:
      return cycle(**params)
    if family == Family.COMPLETE:
      return complete(**params)
    if family == Family.TREE:
      return tree(seed=seed, **params)
    if family == Family.REGULAR_TREE:
      return regular_tree(**params)
    if family == Family.DEGREE_SEQUENCE_TREE:
      return degree_sequence_tree(seed=seed, **params)
    if family == Family.RANDOM_REGULAR:
      return random_regular(seed=seed, **params)
    if family == Family.DEG3_RANDOM:
      return random_regular(d=3, seed=seed, **params)
    if family == Family.ERDOS_RENYI:
      return erdos_renyi(seed=seed, **params)
    if family == Family.HEX_PATCH:
      return hex_patch(**params)
  except TypeError as e:
    raise InfeasibleParametersError(
        f'Bad parameters {params} for family {family.value}: {e}'
    ) from e
  raise InfeasibleParametersError(f'Unknown family {family}.')
