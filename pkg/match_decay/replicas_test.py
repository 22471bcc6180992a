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
from absl.testing import parameterized
from match_decay import checkpoint
from match_decay import replicas
import numpy as np


def _squares(a, b):
  return np.arange(a, b, dtype=np.float64) ** 2


class ChunkSpansTest(parameterized.TestCase):

  def test_spans_cover_range(self):
    self.assertEqual(
        replicas.chunk_spans(0, 10, 4), [(0, 4), (4, 8), (8, 10)]
    )

  def test_empty_range(self):
    self.assertEqual(replicas.chunk_spans(5, 5, 4), [])

  def test_rejects_zero_chunk(self):
    with self.assertRaises(ValueError):
      replicas.chunk_spans(0, 10, 0)


class RunReplicasTest(parameterized.TestCase):

  @parameterized.product(threads=(1, 3, 8), chunk_size=(1, 7, 256))
  def test_order_is_independent_of_scheduling(self, threads, chunk_size):
    values = replicas.run_replicas(_squares, 50, threads=threads,
                                   chunk_size=chunk_size)
    np.testing.assert_array_equal(values, np.arange(50.0) ** 2)

  def test_rows_of_vectors(self):
    def chunk(a, b):
      return np.stack([np.arange(a, b), -np.arange(a, b)], axis=1)

    values = replicas.run_replicas(chunk, 9, threads=2, chunk_size=4)
    self.assertEqual(values.shape, (9, 2))
    np.testing.assert_array_equal(values[:, 1], -np.arange(9))

  def test_bad_chunk_shape_fails(self):
    with self.assertRaises(AssertionError):
      replicas.run_replicas(lambda a, b: np.zeros(1), 5, chunk_size=5)

  @parameterized.parameters((0, 1), (5, 0))
  def test_rejects_bad_counts(self, n, threads):
    with self.assertRaises(ValueError):
      replicas.run_replicas(_squares, n, threads=threads)

  def test_resumes_from_store(self):
    directory = self.create_tempdir().full_path
    store = checkpoint.CheckpointStore(directory, 'hash')
    replicas.run_replicas(_squares, 10, chunk_size=4, store=store, key='k')
    np.testing.assert_array_equal(store.completed('k'), np.arange(10.0) ** 2)

    calls = []

    def recording(a, b):
      calls.append((a, b))
      return _squares(a, b)

    reloaded = checkpoint.CheckpointStore(directory, 'hash')
    values = replicas.run_replicas(recording, 16, chunk_size=4,
                                   store=reloaded, key='k')
    self.assertEqual(calls, [(10, 14), (14, 16)])
    np.testing.assert_array_equal(values, np.arange(16.0) ** 2)

  def test_completed_store_is_not_recomputed(self):
    store = checkpoint.CheckpointStore(self.create_tempdir().full_path, 'h')
    store.update('k', np.arange(8.0))

    def fail(a, b):
      raise AssertionError('Should not be called.')

    values = replicas.run_replicas(fail, 5, store=store, key='k')
    np.testing.assert_array_equal(values, np.arange(5.0))


class MeanAndStderrTest(absltest.TestCase):

  def test_known_values(self):
    mean, se = replicas.mean_and_stderr(np.array([0.0, 1.0, 0.0, 1.0]))
    self.assertAlmostEqual(mean, 0.5)
    self.assertAlmostEqual(se, np.sqrt(1.0 / 3.0) / 2.0)

  def test_single_value(self):
    self.assertEqual(replicas.mean_and_stderr(np.array([0.3])), (0.3, 0.0))

  def test_empty_fails(self):
    with self.assertRaises(ValueError):
      replicas.mean_and_stderr(np.zeros(0))


if __name__ == '__main__':
  absltest.main()
