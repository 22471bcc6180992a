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

from absl.testing import absltest
from match_decay import checkpoint
import numpy as np


class CheckpointStoreTest(absltest.TestCase):

  def test_values_survive_reload(self):
    directory = self.create_tempdir().full_path
    store = checkpoint.CheckpointStore(directory, 'abc')
    store.update('thm_tree/r=3', np.array([0.0, 1.0, 1.0]))
    store.update('thm_tree/r=4', np.array([1.0]))

    reloaded = checkpoint.CheckpointStore(directory, 'abc')
    self.assertEqual(reloaded.keys(), ['thm_tree/r=3', 'thm_tree/r=4'])
    np.testing.assert_array_equal(reloaded.completed('thm_tree/r=3'),
                                  [0.0, 1.0, 1.0])

  def test_missing_key_is_empty(self):
    store = checkpoint.CheckpointStore(self.create_tempdir().full_path, 'abc')
    self.assertEmpty(store.completed('nothing'))

  def test_other_config_is_rejected(self):
    directory = self.create_tempdir().full_path
    checkpoint.CheckpointStore(directory, 'abc').update('k', np.ones(2))
    with self.assertRaisesRegex(AssertionError, 'differs from config'):
      checkpoint.CheckpointStore(directory, 'xyz')

  def test_prefix_never_shrinks(self):
    store = checkpoint.CheckpointStore(self.create_tempdir().full_path, 'abc')
    store.update('k', np.ones(4))
    with self.assertRaises(AssertionError):
      store.update('k', np.ones(2))


if __name__ == '__main__':
  absltest.main()
