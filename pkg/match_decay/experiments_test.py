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

import json
import math
import os

from absl import flags
from absl.testing import absltest
from absl.testing import parameterized
from match_decay import experiments
import numpy as np
import pandas as pd

_RUN_SLOW = flags.DEFINE_boolean(
    'run_slow', False, 'Also run the experiments at their full scale.'
)


def _config(**kwargs) -> experiments.ExperimentConfig:
  return experiments.ExperimentConfig(**kwargs)


class BoundsTest(parameterized.TestCase):

  def test_tree_bound(self):
    self.assertAlmostEqual(experiments.thm_tree_bound(2, 10),
                           4.0 * (15.0 / 16.0) ** 8)
    self.assertAlmostEqual(experiments.thm_tree_bound(2, 10), 2.3869, places=3)
    self.assertLess(experiments.thm_tree_bound(2, 60), 1.0)

  def test_deg3_bounds(self):
    self.assertAlmostEqual(experiments.thm_deg3_bound(40, 0.1), 0.6887,
                           places=3)
    self.assertEqual(experiments.thm_deg3_log_bound(1), math.inf)
    self.assertAlmostEqual(experiments.thm_deg3_log_bound(10),
                           1.8 * math.log(10))

  def test_m_r_bound(self):
    self.assertAlmostEqual(experiments.m_r_bound(2, 0.5), 1.75)

  def test_stabilization_index(self):
    indicators = np.array([[0, 1, 1], [1, 1, 1], [1, 0, 1]])
    np.testing.assert_array_equal(
        experiments.stabilization_index(indicators), [1, 0, 2])
    np.testing.assert_array_equal(
        experiments.stabilization_index(np.ones((4, 1))), [0, 0, 0, 0])

  def test_stabilization_index_against_reference(self):
    indicators = np.array([[0, 1, 1], [1, 1, 1], [1, 0, 1]])
    np.testing.assert_array_equal(
        experiments.stabilization_index(indicators, np.array([1, 0, 1])),
        [1, 3, 2])


class ConfigTest(parameterized.TestCase):

  def test_from_text(self):
    config = experiments.ExperimentConfig.from_text(
        """
        # A small degree-3 run.
        experiment = thm_deg3
        family = hex_patch
        r_min = 2
        r_max = 4  # inclusive
        epsilons = 0.05, 0.25
        replicas = 64
        """
    )
    self.assertEqual(config.kind, experiments.Experiment.THM_DEG3)
    self.assertEqual(config.family, 'hex_patch')
    self.assertEqual(list(config.r_range()), [2, 3, 4])
    self.assertEqual(config.epsilons, [0.05, 0.25])
    self.assertEqual(config.replicas, 64)
    self.assertEqual(config.master_seed, 0)
    config.validate()

  def test_from_file(self):
    path = self.create_tempfile(content='experiment = lln\nfamily = path\n')
    config = experiments.ExperimentConfig.from_file(path.full_path)
    self.assertEqual(config.kind, experiments.Experiment.LLN)

  @parameterized.named_parameters(
      ('unknown_key', 'colour = blue'),
      ('no_equals', 'experiment thm_tree'),
  )
  def test_from_text_rejects(self, text):
    with self.assertRaises(ValueError):
      experiments.ExperimentConfig.from_text(text)

  def test_hash_ignores_output(self):
    a = _config(output='/tmp/a')
    b = _config(output='/tmp/b')
    self.assertEqual(a.config_hash(), b.config_hash())
    self.assertNotEqual(a.config_hash(), _config(master_seed=1).config_hash())

  @parameterized.named_parameters(
      ('tree_radius', dict(r_min=2)),
      ('contraction_radius',
       dict(experiment='contraction', family='tree', r_min=3)),
      ('epsilon', dict(experiment='thm_deg3', family='hex_patch',
                       epsilons=[1.0])),
  )
  def test_hypothesis_violations(self, kwargs):
    with self.assertRaises(experiments.HypothesisViolation):
      _config(**kwargs).validate()

  @parameterized.named_parameters(
      ('unknown_experiment', dict(experiment='nope')),
      ('wrong_family', dict(family='hex_patch')),
      ('no_replicas', dict(replicas=0)),
      ('small_degree', dict(max_degree=1)),
      ('reversed_radii', dict(r_min=5, r_max=4)),
      ('big_hex_exhaustion', dict(experiment='exhaustion', family='hex_patch',
                                  n_values=[1, 4], reference_margin=1)),
      ('big_hex_reference', dict(experiment='exhaustion', family='hex_patch',
                                 n_values=[1, 2])),
      ('no_reference_margin', dict(experiment='exhaustion', n_values=[1, 2],
                                   reference_margin=0)),
      ('repeated_sizes', dict(experiment='lln', n_values=[10, 10])),
      ('one_clt_replica', dict(experiment='clt', replicas=1)),
      ('no_subgraphs', dict(experiment='m_r', family='hex_patch',
                            subgraphs=0)),
  )
  def test_invalid(self, kwargs):
    with self.assertRaises(ValueError):
      _config(**kwargs).validate()


class ThmTreeTest(parameterized.TestCase):

  def test_path_rows(self):
    config = _config(r_min=3, r_max=5, replicas=60)
    record = experiments.run(config)
    self.assertLen(record.rows, 3)
    self.assertEqual([row.r for row in record.rows], [3, 4, 5])
    for row in record.rows:
      self.assertEqual(row.param, 'n=16')
      self.assertBetween(row.estimate, 0.0, 1.0)
      self.assertFalse(row.binding)
      self.assertTrue(row.passed)
    self.assertTrue(record.all_passed)

  def test_binding_scale_on_paths(self):
    config = _config(r_min=28, r_max=30, replicas=2000)
    record = experiments.run(config, threads=4)
    for row in record.rows:
      self.assertTrue(row.binding)
      self.assertAlmostEqual(row.bound, 4.0 * (15.0 / 16.0) ** (row.r - 2))
      self.assertTrue(row.passed)

  def test_trend_rows_compare_equal_parity(self):
    config = _config(r_min=3, r_max=8, replicas=100)
    record = experiments.run(config)
    trend = [row for row in record.rows if row.param.startswith('trend')]
    self.assertEqual([row.r for row in trend], [7, 8])
    self.assertLen(record.rows, 8)
    for row in trend:
      self.assertEqual(row.param, 'trend_lag=4')
      # Same-parity brackets are nested replica by replica.
      self.assertLessEqual(row.estimate, 0.0)
      self.assertFalse(row.binding)
      self.assertTrue(row.passed)

  @parameterized.parameters('regular_tree', 'tree')
  def test_tree_families(self, family):
    config = _config(family=family, max_degree=3, r_min=3, r_max=3,
                     replicas=20)
    record = experiments.run(config)
    self.assertLen(record.rows, 1)
    self.assertAlmostEqual(record.rows[0].bound,
                           experiments.thm_tree_bound(3, 3))

  def test_csv_is_independent_of_threads(self):
    config = _config(r_min=3, r_max=6, replicas=300)
    directory = self.create_tempdir().full_path
    texts = []
    for threads in (1, 8):
      path = os.path.join(directory, f'{threads}.csv')
      experiments.run(config, threads=threads).to_csv(path)
      with open(path) as f:
        texts.append(f.read())
    self.assertEqual(texts[0], texts[1])
    self.assertEqual(texts[0].splitlines()[0],
                     ','.join(experiments.CSV_COLUMNS))

  def test_json_has_no_nan(self):
    record = experiments.run(_config(r_min=3, r_max=3, replicas=10))
    payload = record.to_json()
    self.assertIsNone(payload['rows'][0]['epsilon'])
    self.assertEqual(payload['config_hash'], record.config.config_hash())
    json.dumps(payload, allow_nan=False)


class Deg3Test(absltest.TestCase):

  def test_hex_rows(self):
    config = _config(experiment='thm_deg3', family='hex_patch', r_min=1,
                     r_max=2, epsilons=[0.5], replicas=20)
    record = experiments.run(config)
    self.assertLen(record.rows, 5)
    self.assertEqual(record.rows[0].param, 'radius=4')
    self.assertEqual(record.rows[0].epsilon, 0.5)
    self.assertTrue(math.isnan(record.rows[1].epsilon))
    self.assertEqual(record.rows[1].bound, math.inf)
    # Both rows of one radius share the estimate.
    self.assertEqual(record.rows[0].estimate, record.rows[1].estimate)
    trend = record.rows[4]
    self.assertEqual((trend.param, trend.r), ('trend_lag=1', 2))
    self.assertAlmostEqual(trend.estimate,
                           record.rows[2].estimate - record.rows[0].estimate)
    self.assertTrue(record.all_passed)

  def test_non_increasing_in_r(self):
    config = _config(experiment='thm_deg3', family='hex_patch', r_min=1,
                     r_max=4, epsilons=[0.2], replicas=40)
    record = experiments.run(config)
    trend = [row for row in record.rows if row.param == 'trend_lag=1']
    self.assertEqual([row.r for row in trend], [2, 3, 4])
    for row in trend:
      # Consecutive brackets are nested replica by replica.
      self.assertLessEqual(row.estimate, 0.0)
      self.assertTrue(row.passed)
    self.assertTrue(record.all_passed)

  def test_m_r(self):
    config = _config(experiment='m_r', family='hex_patch', r_min=1, r_max=1,
                     epsilons=[0.3], replicas=20, subgraphs=3)
    record = experiments.run(config)
    self.assertLen(record.rows, 1)
    self.assertBetween(record.rows[0].estimate, 0.0, 1.0)
    self.assertAlmostEqual(record.rows[0].bound, 0.7 + 0.9)
    self.assertTrue(record.rows[0].passed)


class ContractionTest(absltest.TestCase):

  def test_worst_case_within_bound(self):
    config = _config(experiment='contraction', family='tree', max_degree=3,
                     r_min=4, r_max=6, replicas=15)
    record = experiments.run(config)
    self.assertLen(record.rows, 3)
    for row in record.rows:
      self.assertTrue(row.passed)
      self.assertLessEqual(row.estimate, 1.0)


class ExhaustionTest(parameterized.TestCase):

  @parameterized.parameters(
      ('path', [1, 2, 3, 4], 4),
      ('regular_tree', [1, 2, 3], 2),
      ('hex_patch', [1, 2], 1),
  )
  def test_stabilizes_and_restricts(self, family, n_values, margin):
    config = _config(experiment='exhaustion', family=family, max_degree=3,
                     n_values=n_values, reference_margin=margin, replicas=25)
    record = experiments.run(config)
    estimates = [row.estimate for row in record.rows]
    self.assertEqual([row.r for row in record.rows], n_values)
    self.assertEqual(estimates, sorted(estimates))
    for estimate in estimates:
      self.assertBetween(estimate, 0.0, 1.0)
    self.assertTrue(record.all_passed)

  def test_path_agrees_with_a_larger_ball(self):
    config = _config(experiment='exhaustion', family='path',
                     n_values=[5, 10, 15, 20], reference_margin=10,
                     replicas=400)
    record = experiments.run(config, threads=4)
    estimates = [row.estimate for row in record.rows]
    self.assertEqual(estimates, sorted(estimates))
    self.assertGreaterEqual(estimates[-1], 0.99)
    self.assertTrue(record.all_passed)


class AcceptanceScaleTest(absltest.TestCase):
  """Runs at the full replica counts; pass --run_slow to enable."""

  def setUp(self):
    super().setUp()
    if not (flags.FLAGS.is_parsed() and _RUN_SLOW.value):
      self.skipTest('Slow; pass --run_slow.')

  def test_tree_bound_at_binding_scale(self):
    config = _config(r_min=24, r_max=34, replicas=10_000)
    record = experiments.run(config, threads=8)
    for row in record.rows:
      if row.param.startswith('trend'):
        continue
      self.assertTrue(row.binding)
    self.assertTrue(record.all_passed)

  def test_path_exhaustion_stabilizes_by_twelve(self):
    config = _config(experiment='exhaustion', family='path',
                     n_values=[2, 4, 6, 8, 10, 12], reference_margin=12,
                     replicas=1000)
    record = experiments.run(config, threads=8)
    self.assertGreaterEqual(record.rows[-1].estimate, 0.99)
    self.assertTrue(record.all_passed)

  def test_lln_on_random_trees(self):
    config = _config(experiment='lln', family='degree_sequence_tree',
                     n_values=[100, 1000, 10_000], replicas=200)
    record = experiments.run(config, threads=8)
    self.assertLen(record.rows, 6)
    self.assertTrue(record.all_passed)


class SizeTest(parameterized.TestCase):

  @parameterized.parameters('path', 'degree_sequence_tree')
  def test_lln(self, family):
    config = _config(experiment='lln', family=family, n_values=[20, 10],
                     replicas=30)
    record = experiments.run(config)
    self.assertEqual([row.param for row in record.rows],
                     ['weight_per_vertex', 'matching_density'] * 2)
    self.assertEqual([row.r for row in record.rows], [10, 10, 20, 20])
    self.assertIsNone(record.rows[0].passed)
    self.assertTrue(record.rows[1].passed)
    self.assertTrue(record.rows[3].passed)
    self.assertBetween(record.rows[1].estimate, 0.0, 0.5)

  def test_clt(self):
    config = _config(experiment='clt', family='degree_sequence_tree',
                     n_values=[30], replicas=40)
    record = experiments.run(config)
    self.assertEqual([row.param for row in record.rows],
                     ['ks_distance', 'standardized_mean', 'coverage_1.96'])
    ks, mean, coverage = record.rows
    self.assertBetween(ks.estimate, 0.0, 1.0)
    self.assertBetween(coverage.estimate, 0.0, 1.0)
    self.assertAlmostEqual(mean.estimate, 0.0)
    self.assertTrue(mean.passed)
    self.assertIsNone(ks.passed)
    self.assertTrue(record.all_passed)
    frame = record.to_frame()
    self.assertIsInstance(frame, pd.DataFrame)
    self.assertEqual(list(frame.columns), list(experiments.CSV_COLUMNS))


if __name__ == '__main__':
  absltest.main()
