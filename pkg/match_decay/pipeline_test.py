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
import os

from absl.testing import absltest
from match_decay import experiments
from match_decay import pipeline
import pandas as pd


def _config() -> experiments.ExperimentConfig:
  return experiments.ExperimentConfig(r_min=3, r_max=4, replicas=40)


class ExperimentPipelineTest(absltest.TestCase):

  def test_writes_csv_and_json(self):
    output = os.path.join(self.create_tempdir().full_path, 'runs')
    p = pipeline.ExperimentPipeline(_config(), output)
    record = p.run_pipeline()

    self.assertEqual(p.csv_path, os.path.join(output, 'thm_tree.csv'))
    frame = pd.read_csv(p.csv_path)
    self.assertEqual(list(frame.columns), list(experiments.CSV_COLUMNS))
    self.assertEqual(list(frame['r']), [3, 4])
    with open(p.json_path) as f:
      summary = json.load(f)
    self.assertEqual(summary['config_hash'], record.config_hash)
    self.assertTrue(summary['all_passed'])
    self.assertLen(summary['rows'], 2)

  def test_resumes_from_checkpoint(self):
    root = self.create_tempdir().full_path
    checkpoints = os.path.join(root, 'checkpoints')
    first = pipeline.ExperimentPipeline(
        _config(), os.path.join(root, 'a'), checkpoint_directory=checkpoints
    ).run_pipeline()
    stores = os.listdir(checkpoints)
    self.assertEqual(stores, [_config().config_hash()[:16]])

    second = pipeline.ExperimentPipeline(
        _config(), os.path.join(root, 'b'), threads=4,
        checkpoint_directory=checkpoints,
    ).run_pipeline()
    pd.testing.assert_frame_equal(first.to_frame(), second.to_frame())

  def test_invalid_config_writes_nothing(self):
    output = os.path.join(self.create_tempdir().full_path, 'runs')
    config = experiments.ExperimentConfig(r_min=1)
    with self.assertRaises(experiments.HypothesisViolation):
      pipeline.ExperimentPipeline(config, output).run_pipeline()
    self.assertFalse(os.path.exists(output))


if __name__ == '__main__':
  absltest.main()
