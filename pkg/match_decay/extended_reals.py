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

"""Saturating arithmetic on [0, inf].

Bonuses and q-values live in [0, inf]. They are stored as float64 with +inf,
and every operation that could produce inf - inf or log(0) goes through the
helpers here.
"""

from typing import Union

import numpy as np

INF = float('inf')

ArrayOrFloat = Union[float, np.ndarray]


def excess(w: ArrayOrFloat, b: ArrayOrFloat) -> ArrayOrFloat:
  """(w - b)_+ with (w - inf)_+ = 0, for finite w."""
  w = np.asarray(w, dtype=np.float64)
  b = np.asarray(b, dtype=np.float64)
  with np.errstate(invalid='ignore'):
    out = np.where(np.isposinf(b), 0.0, np.maximum(w - b, 0.0))
  return out if out.ndim else float(out)


def exp_neg(q: ArrayOrFloat) -> ArrayOrFloat:
  """e^{-q}, with e^{-inf} = 0."""
  q = np.asarray(q, dtype=np.float64)
  out = np.where(np.isposinf(q), 0.0, np.exp(-np.where(np.isposinf(q), 0.0, q)))
  return out if out.ndim else float(out)


def neg_log(p: ArrayOrFloat) -> ArrayOrFloat:
  """-log p, with -log 0 = inf."""
  p = np.asarray(p, dtype=np.float64)
  with np.errstate(divide='ignore'):
    out = np.where(p <= 0.0, INF, -np.log(np.where(p <= 0.0, 1.0, p)))
  return out if out.ndim else float(out)


def add(a: ArrayOrFloat, b: ArrayOrFloat) -> ArrayOrFloat:
  """Sum of two values in [0, inf]; closed, never nan."""
  out = np.asarray(a, dtype=np.float64) + np.asarray(b, dtype=np.float64)
  return out if out.ndim else float(out)


def greater(w: ArrayOrFloat, b: ArrayOrFloat) -> ArrayOrFloat:
  """Indicator 1{w > b} as 0/1 ints; nothing finite exceeds inf."""
  out = (np.asarray(w, dtype=np.float64) > np.asarray(b, dtype=np.float64))
  out = out.astype(np.int64)
  return out if out.ndim else int(out)
