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

"""Fans replica chunks out over a thread pool and merges them in order."""

from multiprocessing import pool
from typing import Callable, Optional

from absl import logging
from match_decay import checkpoint
import numpy as np
import tqdm

_CHUNK_SIZE = 256

ChunkFn = Callable[[int, int], np.ndarray]


def chunk_spans(
    start: int, stop: int, chunk_size: int = _CHUNK_SIZE
) -> list[tuple[int, int]]:
  """Contiguous [a, b) spans covering start..stop-1."""
  if chunk_size < 1:
    raise ValueError(f'Chunk size must be positive, got {chunk_size}.')
  return [
      (a, min(a + chunk_size, stop)) for a in range(start, stop, chunk_size)
  ]


def run_replicas(
    compute_chunk: ChunkFn,
    n_replicas: int,
    threads: int = 1,
    chunk_size: int = _CHUNK_SIZE,
    store: Optional[checkpoint.CheckpointStore] = None,
    key: str = 'replicas',
) -> np.ndarray:
  """Values of replicas 0..n_replicas-1, in replica order.

  `compute_chunk(a, b)` must return the values of replicas a..b-1 along its
  first axis (one scalar or one fixed-shape array per replica) and depend
  on nothing but the indices, so the result is the same for every thread
  count and chunk size. With a store, replicas already completed under `key`
  are reused and the store is saved after every chunk.

  Args:
    compute_chunk: values of a span of replicas.
    n_replicas: number of replicas.
    threads: worker threads; 1 runs inline.
    chunk_size: replicas per task.
    store: optional checkpoint store.
    key: the store key of this run.

  Returns:
    An array whose first axis has length n_replicas.
  """
  if n_replicas < 1:
    raise ValueError(f'Need at least one replica, got {n_replicas}.')
  if threads < 1:
    raise ValueError(f'Need at least one thread, got {threads}.')

  done = np.zeros(0)
  if store is not None:
    done = store.completed(key)[:n_replicas]
    if len(done):
      logging.info('🐍 Resuming %s at replica %d.', key, len(done))
  parts = [done] if len(done) else []
  spans = chunk_spans(len(done), n_replicas, chunk_size)
  if not spans:
    return done

  def task(span: tuple[int, int]) -> np.ndarray:
    return np.asarray(compute_chunk(*span), dtype=np.float64)

  logging.info('🐍 Running %d replicas of %s on %d threads.',
               n_replicas - len(done), key, threads)
  workers = pool.ThreadPool(threads) if threads > 1 else None
  try:
    results = workers.imap(task, spans) if workers else map(task, spans)
    for (a, b), values in zip(
        spans, tqdm.tqdm(results, total=len(spans), desc=key, leave=False)
    ):
      assert values.shape[:1] == (b - a,), (
          f'Chunk {a}..{b} returned shape {values.shape}.'
      )
      parts.append(values)
      if store is not None:
        store.update(key, np.concatenate(parts))
  finally:
    if workers:
      workers.close()
      workers.join()
  return np.concatenate(parts)


def mean_and_stderr(values: np.ndarray) -> tuple[float, float]:
  """Sample mean and std(ddof=1)/sqrt(n); the error is 0 for one value."""
  values = np.asarray(values, dtype=np.float64)
  n = len(values)
  if n == 0:
    raise ValueError('No values to average.')
  mean = float(np.mean(values))
  if n == 1:
    return mean, 0.0
  return mean, float(np.std(values, ddof=1) / np.sqrt(n))
