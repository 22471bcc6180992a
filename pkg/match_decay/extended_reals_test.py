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
from match_decay import extended_reals
import numpy as np

_INF = extended_reals.INF


class ExtendedRealsTest(absltest.TestCase):

  def test_excess(self):
    self.assertEqual(extended_reals.excess(2.0, 0.5), 1.5)
    self.assertEqual(extended_reals.excess(2.0, 3.0), 0.0)
    self.assertEqual(extended_reals.excess(2.0, _INF), 0.0)
    np.testing.assert_array_equal(
        extended_reals.excess(np.array([1.0, 1.0]), np.array([_INF, 0.25])),
        [0.0, 0.75])

  def test_exp_neg_and_neg_log_are_inverse(self):
    q = np.array([0.0, 0.5, 3.0, _INF])
    p = extended_reals.exp_neg(q)
    np.testing.assert_allclose(p, [1.0, np.exp(-0.5), np.exp(-3.0), 0.0])
    np.testing.assert_allclose(extended_reals.neg_log(p), q)
    self.assertEqual(extended_reals.neg_log(0.0), _INF)

  def test_add_saturates(self):
    self.assertEqual(extended_reals.add(_INF, 1.0), _INF)
    self.assertEqual(extended_reals.add(_INF, _INF), _INF)

  def test_greater(self):
    self.assertEqual(extended_reals.greater(1.0, 0.5), 1)
    self.assertEqual(extended_reals.greater(1.0, _INF), 0)
    np.testing.assert_array_equal(
        extended_reals.greater(np.array([1.0, 2.0]), 1.5), [0, 1])


if __name__ == '__main__':
  absltest.main()
