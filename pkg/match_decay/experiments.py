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

"""Experiments checking the decay bounds and their consequences.

Each experiment turns an `ExperimentConfig` into a `RunRecord`: one row per
radius (or size), with the Monte Carlo estimate, its standard error, the
theoretical bound when there is one and whether the row passed its check. A
bound of 1 or more says nothing about a probability; such rows are marked
non-binding and only checked against 1.
"""

import dataclasses
import enum
import hashlib
import json
import math
import time
from typing import Callable, Optional

from absl import logging
import match_decay
from match_decay import bonus
from match_decay import checkpoint
from match_decay import decay
from match_decay import extended_reals
from match_decay import generators
from match_decay import graphs
from match_decay import matching
from match_decay import message_passing
from match_decay import replicas
from match_decay import weights as weights_lib
import numpy as np
import pandas as pd
from scipy import stats
import simple_parsing
from simple_parsing import helpers

CSV_COLUMNS = (
    'experiment',
    'family',
    'param',
    'r',
    'epsilon',
    'replicas',
    'estimate',
    'stderr',
    'bound',
    'binding',
    'seed',
)

_SE_SLACK = 3.0
_CONTRACTION_SLACK = 1e-12
_DELETION_PROB = 0.2
_MAX_ATTEMPTS = 100
# Hexagonal balls of radius 4 and up exceed the exact solver's edge cap.
_MAX_HEX_EXHAUSTION = 3
_NORMAL_QUANTILE = 1.96
# thm_tree compares radii of equal parity.
_TREE_TREND_LAG = 4

# Seed streams for randomness other than the replica weights.
_SUBGRAPH_STREAM = 1
_TREE_STREAM = 2
_SIZE_STREAM = 3
_STRUCTURE_STREAM = 4


class HypothesisViolation(ValueError):
  """Raised when a config falls outside the hypotheses of its bound."""


class Experiment(enum.Enum):
  THM_TREE = 'thm_tree'
  THM_DEG3 = 'thm_deg3'
  M_R = 'm_r'
  CONTRACTION = 'contraction'
  EXHAUSTION = 'exhaustion'
  LLN = 'lln'
  CLT = 'clt'


_FAMILIES = {
    Experiment.THM_TREE: ('path', 'regular_tree', 'tree'),
    Experiment.THM_DEG3: ('hex_patch', 'deg3_random'),
    Experiment.M_R: ('hex_patch', 'deg3_random'),
    Experiment.CONTRACTION: ('tree',),
    Experiment.EXHAUSTION: ('path', 'regular_tree', 'hex_patch'),
    Experiment.LLN: ('degree_sequence_tree', 'path'),
    Experiment.CLT: ('degree_sequence_tree', 'path'),
}


@dataclasses.dataclass
class ExperimentConfig:
  """Everything a run depends on, apart from threads and output paths."""

  # Which experiment to run.
  experiment: str = 'thm_tree'
  # Graph family; see generators.Family.
  family: str = 'path'
  # D, the degree bound of the tree families.
  max_degree: int = 2
  # Vertex count of deg3_random; 0 sizes it from r_max.
  size: int = 0
  r_min: int = 3
  r_max: int = 10
  epsilons: list[float] = helpers.list_field(0.1, 0.2, 0.3)
  # Sizes for exhaustion (ball radii), lln and clt (vertex counts).
  n_values: list[int] = helpers.list_field(10, 100, 1000)
  # exhaustion: the reference indicator is solved on a ball this much larger
  # than the largest n.
  reference_margin: int = 6
  replicas: int = 1000
  # Sampled (subgraph, vertex) pairs per radius in m_r.
  subgraphs: int = 20
  master_seed: int = 0
  # Where the pipeline writes its files; not part of the config hash.
  output: str = ''

  @classmethod
  def from_file(cls, path: str) -> 'ExperimentConfig':
    with open(path) as f:
      return cls.from_text(f.read())

  @classmethod
  def from_text(cls, text: str) -> 'ExperimentConfig':
    """Parses `key = value` lines; list values are comma or space separated."""
    known = {f.name for f in dataclasses.fields(cls)}
    args = []
    for line in text.splitlines():
      line = line.split('#', 1)[0].strip()
      if not line:
        continue
      if '=' not in line:
        raise ValueError(f'Expected key = value, got {line!r}.')
      key, value = (s.strip() for s in line.split('=', 1))
      if key not in known:
        raise ValueError(f'Unknown config key {key!r}.')
      args.append(f'--{key}')
      args.extend(value.replace(',', ' ').split())
    return simple_parsing.parse(cls, args=args)

  @property
  def kind(self) -> Experiment:
    return Experiment(self.experiment)

  def r_range(self) -> range:
    return range(self.r_min, self.r_max + 1)

  def seed_plan(self) -> weights_lib.SeedPlan:
    return weights_lib.SeedPlan(self.master_seed, self.replicas)

  def config_hash(self) -> str:
    fields = dataclasses.asdict(self)
    del fields['output']
    text = json.dumps(fields, sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()

  def validate(self) -> None:
    """Raises ValueError (or HypothesisViolation) on an unusable config."""
    kind = Experiment(self.experiment)
    if self.family not in _FAMILIES[kind]:
      raise ValueError(
          f'{kind.value} runs on {_FAMILIES[kind]}, got {self.family!r}.'
      )
    if self.replicas < 1:
      raise ValueError(f'Need at least one replica, got {self.replicas}.')
    if kind == Experiment.CLT and self.replicas < 2:
      raise ValueError('The CLT diagnostic needs at least two replicas.')
    if self.max_degree < 2:
      raise ValueError(f'max_degree must be >= 2, got {self.max_degree}.')
    if kind in (Experiment.EXHAUSTION, Experiment.LLN, Experiment.CLT):
      if not self.n_values or min(self.n_values) < 1:
        raise ValueError(f'n_values must be positive, got {self.n_values}.')
      if len(set(self.n_values)) != len(self.n_values):
        raise ValueError(f'n_values must be distinct, got {self.n_values}.')
      if kind == Experiment.EXHAUSTION:
        if self.reference_margin < 1:
          raise ValueError(
              f'reference_margin must be >= 1, got {self.reference_margin}.'
          )
        if (self.family == 'hex_patch' and
            max(self.n_values) + self.reference_margin > _MAX_HEX_EXHAUSTION):
          raise ValueError(
              'Hexagonal exhaustions, reference included, stop at radius'
              f' {_MAX_HEX_EXHAUSTION}.'
          )
      if kind != Experiment.EXHAUSTION and self.family == 'degree_sequence_tree':
        if min(self.n_values) < 2:
          raise ValueError('Random trees need at least two vertices.')
      return
    if not 0 <= self.r_min <= self.r_max:
      raise ValueError(f'Need 0 <= r_min <= r_max, got {self.r_min},'
                       f' {self.r_max}.')
    if kind == Experiment.THM_TREE and self.r_min < 3:
      raise HypothesisViolation(f'The tree bound needs r >= 3, got {self.r_min}.')
    if kind == Experiment.CONTRACTION and self.r_min < 4:
      raise HypothesisViolation(
          f'The contraction bound needs r >= 4, got {self.r_min}.'
      )
    if kind in (Experiment.THM_DEG3, Experiment.M_R):
      if not self.epsilons:
        raise ValueError('Need at least one epsilon.')
      for eps in self.epsilons:
        if not 0.0 < eps < 1.0:
          raise HypothesisViolation(f'epsilon must lie in (0, 1), got {eps}.')
      if kind == Experiment.M_R and self.subgraphs < 1:
        raise ValueError(f'Need at least one subgraph, got {self.subgraphs}.')


@dataclasses.dataclass(frozen=True)
class RunRow:
  """One CSV row; `passed` is None for diagnostics without a check."""

  experiment: str
  family: str
  param: str
  r: int
  epsilon: float
  replicas: int
  estimate: float
  stderr: float
  bound: float
  binding: bool
  seed: int
  passed: Optional[bool] = None


@dataclasses.dataclass
class RunRecord:
  """The rows of one run, with the config that reproduces them."""

  config: ExperimentConfig
  rows: list[RunRow]
  wall_time: float = 0.0
  version: str = ''

  @property
  def config_hash(self) -> str:
    return self.config.config_hash()

  @property
  def all_passed(self) -> bool:
    return all(row.passed is not False for row in self.rows)

  def to_frame(self) -> pd.DataFrame:
    records = [dataclasses.asdict(row) for row in self.rows]
    return pd.DataFrame.from_records(records, columns=list(CSV_COLUMNS))

  def to_csv(self, path: str) -> None:
    with open(path, 'w') as f:
      self.to_frame().to_csv(f, index=False)

  def to_json(self) -> dict[str, object]:
    def clean(x):
      return None if isinstance(x, float) and not math.isfinite(x) else x

    return {
        'config': dataclasses.asdict(self.config),
        'config_hash': self.config_hash,
        'rows': [
            {k: clean(v) for k, v in dataclasses.asdict(row).items()}
            for row in self.rows
        ],
        'all_passed': self.all_passed,
        'wall_time_seconds': self.wall_time,
        'version': self.version,
    }

  def save_json(self, path: str) -> None:
    with open(path, 'w') as f:
      f.write(json.dumps(self.to_json(), indent=2, allow_nan=False))


def thm_tree_bound(max_degree: int, r: int) -> float:
  """2D (1 - (2D)^{-D})^{r-2}."""
  d = max_degree
  return 2.0 * d * (1.0 - (2.0 * d) ** (-d)) ** (r - 2)


def thm_deg3_bound(r: int, epsilon: float) -> float:
  """6 ((1 - eps)^r + eps)."""
  return 6.0 * ((1.0 - epsilon) ** r + epsilon)


def thm_deg3_log_bound(r: int) -> float:
  """18 log(r) / r, stated for r >= 2; inf below."""
  if r < 2:
    return math.inf
  return 18.0 * math.log(r) / r


def m_r_bound(r: int, epsilon: float) -> float:
  """(1 - eps)^r + 3 eps."""
  return (1.0 - epsilon) ** r + 3.0 * epsilon


def _within(estimate: float, stderr: float, bound: float) -> bool:
  cap = 1.0 if math.isnan(bound) else min(1.0, bound)
  return estimate <= cap + _SE_SLACK * stderr


def _trend_row(
    config: ExperimentConfig,
    r: int,
    lag: int,
    estimates: dict[int, decay.DecayEstimate],
) -> Optional[RunRow]:
  """Whether the estimate at r stays below the one at r - lag, up to noise.

  The row's estimate is the difference of the two means and its standard
  error the combined one.
  """
  previous = estimates.get(r - lag)
  if previous is None:
    return None
  current = estimates[r]
  diff = current.mean - previous.mean
  combined = math.hypot(current.std_error, previous.std_error)
  return _row(config, f'trend_lag={lag}', r, diff, combined,
              passed=diff <= _SE_SLACK * combined)


def _row(
    config: ExperimentConfig,
    param: str,
    r: int,
    estimate: float,
    stderr: float,
    bound: float = math.nan,
    epsilon: float = math.nan,
    passed: Optional[bool] = None,
    replicas_count: Optional[int] = None,
) -> RunRow:
  row = RunRow(
      experiment=config.experiment,
      family=config.family,
      param=param,
      r=r,
      epsilon=epsilon,
      replicas=config.replicas if replicas_count is None else replicas_count,
      estimate=estimate,
      stderr=stderr,
      bound=bound,
      binding=bool(bound < 1.0),
      seed=config.master_seed,
      passed=passed,
  )
  logging.info('🐍 %s %s r=%d eps=%s: %.6f +- %.6f, bound %.6f (%s), %s',
               row.experiment, row.param, row.r, row.epsilon, row.estimate,
               row.stderr, row.bound,
               'binding' if row.binding else 'vacuous', row.passed)
  return row


def _record(
    config: ExperimentConfig, rows: list[RunRow], started: float
) -> RunRecord:
  return RunRecord(
      config=config,
      rows=rows,
      wall_time=time.monotonic() - started,
      version=match_decay.__version__,
  )


def _uniform_offspring(max_degree: int) -> np.ndarray:
  return np.full(max_degree, 1.0 / max_degree)


def _thm_tree_instance(
    config: ExperimentConfig,
) -> tuple[graphs.Graph, int, str]:
  """A tree graph deep enough for r_max, the edge e, and a param label."""
  depth = config.r_max + 2
  d = config.max_degree
  family = generators.Family(config.family)
  if family == generators.Family.PATH:
    n = 2 * depth + 2
    return generators.path(n), depth, f'n={n}'
  if family == generators.Family.REGULAR_TREE:
    return generators.regular_tree(d, depth), 0, f'D={d},radius={depth}'
  rng = config.seed_plan().child(_STRUCTURE_STREAM).rng(0)
  g = generators.tree(depth, offspring=_uniform_offspring(d), seed=rng,
                      planted=False)
  return g, 0, f'D={d},depth={depth}'


def run_thm_tree(
    config: ExperimentConfig,
    threads: int = 1,
    store: Optional[checkpoint.CheckpointStore] = None,
) -> RunRecord:
  """Bracket estimates of rho_r on a tree against 2D(1-(2D)^{-D})^{r-2}."""
  started = time.monotonic()
  config.validate()
  g, e, param = _thm_tree_instance(config)
  if g.max_degree() > config.max_degree:
    raise HypothesisViolation(
        f'Max degree {g.max_degree()} exceeds D = {config.max_degree}.'
    )
  if not graphs.is_tree(graphs.ball(g, e, config.r_max)):
    raise HypothesisViolation(f'B_e^{config.r_max} is not a tree.')
  rows = []
  estimates = {}
  for r in config.r_range():
    est = decay.rho_estimate(
        g, e, r, decay.Method.BRACKET_TREE, config.replicas,
        config.seed_plan(), threads=threads, store=store,
        key=f'thm_tree/r={r}',
    )
    estimates[r] = est
    bound = thm_tree_bound(config.max_degree, r)
    rows.append(_row(config, param, r, est.mean, est.std_error, bound,
                     passed=_within(est.mean, est.std_error, bound)))
    trend = _trend_row(config, r, _TREE_TREND_LAG, estimates)
    if trend is not None:
      rows.append(trend)
  return _record(config, rows, started)


def _deg3_instance(
    config: ExperimentConfig,
) -> tuple[graphs.Graph, str]:
  family = generators.Family(config.family)
  if family == generators.Family.HEX_PATCH:
    radius = config.r_max + 2
    g, param = generators.hex_patch(radius), f'radius={radius}'
  else:
    n = config.size or 8 * (config.r_max + 2)
    n += n % 2
    rng = config.seed_plan().child(_STRUCTURE_STREAM).rng(0)
    g, param = generators.random_regular(n, 3, seed=rng), f'n={n}'
  if g.max_degree() > 3:
    raise HypothesisViolation(f'Max degree {g.max_degree()} exceeds 3.')
  return g, param


def run_thm_deg3(
    config: ExperimentConfig,
    threads: int = 1,
    store: Optional[checkpoint.CheckpointStore] = None,
) -> RunRecord:
  """General bracket estimates of rho_r on a degree-3 graph.

  One row per (r, epsilon) for 6((1-eps)^r + eps), one row without an
  epsilon for 18 log(r) / r, and from the second radius on a trend row
  against the previous radius.
  """
  started = time.monotonic()
  config.validate()
  g, param = _deg3_instance(config)
  rows = []
  estimates = {}
  for r in config.r_range():
    est = decay.rho_estimate(
        g, 0, r, decay.Method.BRACKET_GENERAL, config.replicas,
        config.seed_plan(), threads=threads, store=store,
        key=f'thm_deg3/r={r}',
    )
    estimates[r] = est
    for eps in config.epsilons:
      bound = thm_deg3_bound(r, eps)
      rows.append(_row(config, param, r, est.mean, est.std_error, bound,
                       epsilon=eps,
                       passed=_within(est.mean, est.std_error, bound)))
    bound = thm_deg3_log_bound(r)
    rows.append(_row(config, param, r, est.mean, est.std_error, bound,
                     passed=_within(est.mean, est.std_error, bound)))
    trend = _trend_row(config, r, 1, estimates)
    if trend is not None:
      rows.append(trend)
  return _record(config, rows, started)


def sample_cavities(
    g: graphs.GraphLike, count: int, plan: weights_lib.SeedPlan
) -> list[tuple[graphs.SubgraphView, int]]:
  """Random (H, u): H deletes each vertex w.p. 0.2, u has 1 or 2 neighbors."""
  view = graphs.as_view(g)
  out = []
  for j in range(count):
    rng = plan.rng(j)
    for _ in range(_MAX_ATTEMPTS):
      drop = rng.random(view.base.n_vertices) < _DELETION_PROB
      h = view.delete(np.flatnonzero(drop))
      candidates = [v for v in h.vertices if 1 <= h.degree(v) <= 2]
      if candidates:
        out.append((h, candidates[int(rng.integers(len(candidates)))]))
        break
    else:
      raise HypothesisViolation('No vertex of degree 1 or 2 to sample.')
  return out


def run_m_r(
    config: ExperimentConfig,
    threads: int = 1,
    store: Optional[checkpoint.CheckpointStore] = None,
) -> RunRecord:
  """Lower estimates of M_r = max |E e^{-B^0_r} - E e^{-B^inf_r}|.

  The max over all subgraphs is replaced by a max over sampled ones, so the
  estimate can only undershoot M_r and must stay below (1-eps)^r + 3 eps.
  """
  started = time.monotonic()
  config.validate()
  g, param = _deg3_instance(config)
  plan = config.seed_plan()
  rows = []
  for r in config.r_range():
    cavities = sample_cavities(g, config.subgraphs,
                               plan.child(_SUBGRAPH_STREAM, r))
    best, best_se = 0.0, 0.0
    for j, (h, u) in enumerate(cavities):

      def compute_chunk(a, b, h=h, u=u, r=r):
        w = weights_lib.sample_weight_matrix(g, plan, a, b)
        zero = bonus.local_bound(h, w, u, r, bonus.Kind.ZERO)
        infinite = bonus.local_bound(h, w, u, r, bonus.Kind.INFTY)
        return extended_reals.exp_neg(zero) - extended_reals.exp_neg(infinite)

      diffs = replicas.run_replicas(
          compute_chunk, config.replicas, threads, store=store,
          key=f'm_r/r={r}/h={j}',
      )
      mean, se = replicas.mean_and_stderr(diffs)
      if abs(mean) > best:
        best, best_se = abs(mean), se
    for eps in config.epsilons:
      bound = m_r_bound(r, eps)
      rows.append(_row(config, param, r, best, best_se, bound, epsilon=eps,
                       passed=_within(best, best_se, bound)))
  return _record(config, rows, started)


def planted_tree(
    max_degree: int, r: int, rng: np.random.Generator
) -> message_passing.RootedTree:
  """Random tree under o-dagger with depth-r leaves and degrees <= D."""
  g = generators.tree(r, offspring=_uniform_offspring(max_degree), seed=rng)
  return message_passing.RootedTree.from_graph(g, root=0)


def run_contraction(
    config: ExperimentConfig,
    threads: int = 1,
    store: Optional[checkpoint.CheckpointStore] = None,
) -> RunRecord:
  """Worst |p^0(e_o) - p^inf(e_o)| over random trees vs the contraction bound."""
  started = time.monotonic()
  config.validate()
  d = config.max_degree
  plan = config.seed_plan()
  rows = []
  for r in config.r_range():
    trees = plan.child(_TREE_STREAM, r)

    def compute_chunk(a, b, trees=trees, r=r):
      return [
          message_passing.root_sensitivity(
              planted_tree(d, r, trees.rng(i))).value
          for i in range(a, b)
      ]

    values = replicas.run_replicas(
        compute_chunk, config.replicas, threads, store=store,
        key=f'contraction/r={r}',
    )
    bound = message_passing.contraction_bound(d, r)
    worst = float(np.max(values))
    rows.append(_row(config, f'D={d}', r, worst, 0.0, bound,
                     passed=worst <= bound + _CONTRACTION_SLACK))
  return _record(config, rows, started)


def _exhaustion_instance(
    config: ExperimentConfig, radius: int
) -> tuple[graphs.Graph, int, int, str]:
  """The ball of the given radius, its root, the edge e at the root, a label."""
  family = generators.Family(config.family)
  if family == generators.Family.PATH:
    return generators.path(2 * radius + 2), radius, radius, 'path'
  if family == generators.Family.REGULAR_TREE:
    d = config.max_degree
    return generators.regular_tree(d, radius), 0, 0, f'D={d}'
  return generators.hex_patch(radius), 0, 0, 'hex'


def stabilization_index(
    indicators: np.ndarray, reference: Optional[np.ndarray] = None
) -> np.ndarray:
  """Per row, the first position after which the row is constant.

  With a reference, the first position from which the row equals its
  reference value; rows that never reach it get the number of columns.
  """
  if reference is not None:
    reference = np.asarray(reference).reshape(-1, 1)
    return stabilization_index(np.hstack([indicators, reference]))
  indicators = np.asarray(indicators)
  k = indicators.shape[1]
  if k < 2:
    return np.zeros(len(indicators), dtype=np.int64)
  changes = indicators[:, 1:] != indicators[:, :-1]
  return np.where(
      changes.any(axis=1),
      k - 1 - np.argmax(changes[:, ::-1], axis=1),
      0,
  )


def run_exhaustion(
    config: ExperimentConfig,
    threads: int = 1,
    store: Optional[checkpoint.CheckpointStore] = None,
) -> RunRecord:
  """Stabilization of 1{e in M_{G_n}} along balls G_n of growing radius.

  The reference G is the ball of radius max(n) + reference_margin. Weights are
  drawn once per replica on G and restricted to the balls G_n. Row n reports
  the fraction of replicas whose indicator equals 1{e in M_G} at n and every
  larger recorded size. It passes when 1{e in M_G} agrees with the restricted
  matching in the radius-n ball around e, replica by replica.
  """
  started = time.monotonic()
  config.validate()
  ns = sorted(config.n_values)
  g, root, e, param = _exhaustion_instance(
      config, ns[-1] + config.reference_margin)
  balls = [graphs.vertex_ball(g, root, n) for n in ns]
  plan = config.seed_plan()

  def compute_chunk(a, b):
    out = []
    for w in weights_lib.sample_weight_matrix(g, plan, a, b):
      indicators = [int(e in matching.solve(ball, w).matching)
                    for ball in balls]
      reference = int(e in matching.solve(g, w).matching)
      consistent = [int(decay.restriction_consistency(g, w, e, n))
                    for n in ns]
      out.append(indicators + [reference] + consistent)
    return np.array(out)

  values = replicas.run_replicas(compute_chunk, config.replicas, threads,
                                 store=store, key='exhaustion')
  k = len(ns)
  stable_from = stabilization_index(values[:, :k], values[:, k])
  consistent = values[:, k + 1:]
  logging.info('🐍 e is in M_G in %.4f of replicas.',
               float(np.mean(values[:, k])))
  rows = []
  for i, n in enumerate(ns):
    fraction = float(np.mean(stable_from <= i))
    stderr = math.sqrt(fraction * (1.0 - fraction) / config.replicas)
    rows.append(_row(config, param, n, fraction, stderr,
                     passed=bool(np.all(consistent[:, i] == 1))))
  return _record(config, rows, started)


def _density_sample(
    config: ExperimentConfig, n: int, plan: weights_lib.SeedPlan
) -> replicas.ChunkFn:
  """Chunks of (W_G, W_G / |V|, |M_G| / |V|) for fresh G_n and weights."""
  family = generators.Family(config.family)

  def compute_chunk(a, b):
    out = []
    for i in range(a, b):
      rng = plan.rng(i)
      if family == generators.Family.PATH:
        g = generators.path(n)
      else:
        g = generators.degree_sequence_tree(n, seed=rng)
      w = weights_lib.sample_weights(g, seed=rng)
      result = matching.solve(g, w)
      out.append((result.total_weight,
                  result.total_weight / g.n_vertices,
                  len(result.matching) / g.n_vertices))
    return np.array(out)

  return compute_chunk


def run_lln(
    config: ExperimentConfig,
    threads: int = 1,
    store: Optional[checkpoint.CheckpointStore] = None,
) -> RunRecord:
  """W/|V| and |M|/|V| along growing sizes.

  A weight row passes when it is within 3 combined standard errors of the
  previous size; a density row passes when every sample lies in [0, 1/2].
  """
  started = time.monotonic()
  config.validate()
  rows = []
  previous = None
  for n in sorted(config.n_values):
    plan = config.seed_plan().child(_SIZE_STREAM, n)
    values = replicas.run_replicas(
        _density_sample(config, n, plan), config.replicas, threads,
        store=store, key=f'lln/n={n}',
    )
    mean, se = replicas.mean_and_stderr(values[:, 1])
    cauchy = None
    if previous is not None:
      combined = math.hypot(se, previous[1])
      cauchy = abs(mean - previous[0]) <= _SE_SLACK * combined
    previous = (mean, se)
    rows.append(_row(config, 'weight_per_vertex', n, mean, se, passed=cauchy))
    densities = values[:, 2]
    mean, se = replicas.mean_and_stderr(densities)
    rows.append(_row(
        config, 'matching_density', n, mean, se,
        passed=bool(np.all((densities >= 0.0) & (densities <= 0.5))),
    ))
  return _record(config, rows, started)


def run_clt(
    config: ExperimentConfig,
    threads: int = 1,
    store: Optional[checkpoint.CheckpointStore] = None,
) -> RunRecord:
  """KS distance of standardized W_{G_n} to N(0, 1), at the largest n.

  The KS row and the share of |z| <= 1.96 (0.95 under normality) are
  diagnostics. The standardized mean row checks that z is centered.
  """
  started = time.monotonic()
  config.validate()
  n = max(config.n_values)
  plan = config.seed_plan().child(_SIZE_STREAM, n)
  values = replicas.run_replicas(
      _density_sample(config, n, plan), config.replicas, threads,
      store=store, key=f'clt/n={n}',
  )
  total = values[:, 0]
  z = (total - np.mean(total)) / np.std(total, ddof=1)
  ks = stats.kstest(z, 'norm')
  logging.info('🐍 KS distance %.4f (p = %.4f) at n = %d.', ks.statistic,
               ks.pvalue, n)
  z_mean = float(np.mean(z))
  coverage = float(np.mean(np.abs(z) <= _NORMAL_QUANTILE))
  rows = [
      _row(config, 'ks_distance', n, float(ks.statistic), 0.0),
      _row(config, 'standardized_mean', n, z_mean, 0.0,
           passed=abs(z_mean) <= 4.0 / math.sqrt(config.replicas)),
      _row(config, 'coverage_1.96', n, coverage,
           math.sqrt(coverage * (1.0 - coverage) / config.replicas)),
  ]
  return _record(config, rows, started)


Runner = Callable[..., RunRecord]

_RUNNERS: dict[Experiment, Runner] = {
    Experiment.THM_TREE: run_thm_tree,
    Experiment.THM_DEG3: run_thm_deg3,
    Experiment.M_R: run_m_r,
    Experiment.CONTRACTION: run_contraction,
    Experiment.EXHAUSTION: run_exhaustion,
    Experiment.LLN: run_lln,
    Experiment.CLT: run_clt,
}


def run(
    config: ExperimentConfig,
    threads: int = 1,
    store: Optional[checkpoint.CheckpointStore] = None,
) -> RunRecord:
  config.validate()
  logging.info('🐍 Running %s (config %s).', config.experiment,
               config.config_hash()[:12])
  record = _RUNNERS[config.kind](config, threads=threads, store=store)
  if not record.all_passed:
    logging.warning('%s has rows that failed their check.', config.experiment)
  return record
