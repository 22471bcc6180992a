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

"""Seeded edge weights and replica seed plans."""

import dataclasses
import enum
from typing import Union

from absl import logging
from match_decay import graphs
import numpy as np

_MAX_RESAMPLES = 100


class Distribution(enum.Enum):
  EXP1 = 'exp1'
  UNIFORM01 = 'uniform01'


@dataclasses.dataclass(frozen=True)
class SeedPlan:
  """Replica i draws from a Philox stream keyed by (master_seed, *stream, i)."""

  master_seed: int
  replica_count: int = 1
  stream: tuple[int, ...] = ()

  def child(self, *key: int) -> 'SeedPlan':
    """A plan whose streams are disjoint from this one's replica streams."""
    return dataclasses.replace(self, stream=self.stream + tuple(key))

  def seed_sequence(self, replica: int) -> np.random.SeedSequence:
    if replica < 0:
      raise ValueError(f'Replica index must be nonnegative, got {replica}.')
    return np.random.SeedSequence(
        self.master_seed, spawn_key=(*self.stream, replica)
    )

  def rng(self, replica: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(self.seed_sequence(replica)))


@dataclasses.dataclass(frozen=True, eq=False)
class WeightAssignment:
  """Strictly positive, pairwise distinct weights indexed by base edge id."""

  values: np.ndarray

  def __post_init__(self):
    values = np.array(self.values, dtype=np.float64)
    if values.ndim != 1:
      raise ValueError(f'Weights must be a vector, got shape {values.shape}.')
    if np.any(~(values > 0)) or np.any(~np.isfinite(values)):
      raise ValueError('Weights must be finite and strictly positive.')
    values.setflags(write=False)
    object.__setattr__(self, 'values', values)

  def __getitem__(self, e: int) -> float:
    return float(self.values[e])

  def __len__(self) -> int:
    return len(self.values)

  def is_generic(self) -> bool:
    return len(np.unique(self.values)) == len(self.values)


WeightsLike = Union[WeightAssignment, np.ndarray]


def as_array(w: WeightsLike) -> np.ndarray:
  """Weights as an array whose last axis is the edge id."""
  if isinstance(w, WeightAssignment):
    return w.values
  return np.asarray(w, dtype=np.float64)


def _draw(
    rng: np.random.Generator, distribution: Distribution, size: int
) -> np.ndarray:
  if distribution == Distribution.EXP1:
    return rng.exponential(1.0, size=size)
  # Open interval keeps the weights strictly positive.
  return 1.0 - rng.random(size=size)


def sample_weights(
    g: graphs.GraphLike,
    distribution: Union[Distribution, str] = Distribution.EXP1,
    seed: Union[int, np.random.Generator, None] = None,
) -> WeightAssignment:
  """One i.i.d. weight per base edge; colliding values are redrawn."""
  base = graphs.as_view(g).base
  distribution = Distribution(distribution)
  rng = seed if isinstance(seed, np.random.Generator) else (
      np.random.default_rng(seed))
  values = _draw(rng, distribution, base.n_edges)
  for _ in range(_MAX_RESAMPLES):
    _, first = np.unique(values, return_index=True)
    repeated = np.setdiff1d(np.arange(len(values)), first)
    if not len(repeated) and np.all(values > 0):
      return WeightAssignment(values)
    logging.warning('Redrawing %d colliding or zero weights.', len(repeated))
    values[repeated] = _draw(rng, distribution, len(repeated))
    values[values <= 0] = _draw(rng, distribution, int(np.sum(values <= 0)))
  raise RuntimeError('Could not draw generic weights.')


def sample_weight_matrix(
    g: graphs.GraphLike,
    plan: SeedPlan,
    start: int,
    stop: int,
    distribution: Union[Distribution, str] = Distribution.EXP1,
) -> np.ndarray:
  """Rows start..stop-1, row i drawn from replica stream i."""
  return np.stack([
      sample_weights(g, distribution, plan.rng(i)).values
      for i in range(start, stop)
  ]) if stop > start else np.zeros((0, graphs.as_view(g).base.n_edges))
