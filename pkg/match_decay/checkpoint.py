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

"""A store of completed replica values, so interrupted runs can resume."""

import os

from absl import logging
import numpy as np

_CHECKPOINT_FILENAME = 'replicas.npy'


class CheckpointStore:
  """Per-key arrays of replica values, saved as one .npy dictionary.

  A key's array always holds replicas 0..k-1 for some k, in replica order.
  """

  def __init__(self, directory: str, config_hash: str):
    self._directory = directory
    self._config_hash = config_hash
    self._load_or_create()

  @property
  def path(self) -> str:
    return os.path.join(self._directory, _CHECKPOINT_FILENAME)

  def _load_or_create(self) -> None:
    if not os.path.exists(self._directory):
      os.makedirs(self._directory)

    if os.path.exists(self.path):
      logging.info('🐍 Loading checkpoint from %s.', self.path)
      with open(self.path, 'rb') as f:
        data = np.load(f, allow_pickle=True).item()
    else:
      data = {'replicas': {}, 'config_hash': self._config_hash}

    self._replicas: dict[str, np.ndarray] = dict(data['replicas'])
    self.assert_compatibility(data['config_hash'])

  def assert_compatibility(self, config_hash: str) -> None:
    """Assert that the loaded checkpoint was written for this config."""
    assert self._config_hash == config_hash, (
        f'Config in memory ({self._config_hash}) differs from config used to'
        f' write the checkpoint ({config_hash}).'
    )

  def keys(self) -> list[str]:
    return sorted(self._replicas)

  def completed(self, key: str) -> np.ndarray:
    """Values of the replicas completed so far for `key`; may be empty."""
    return self._replicas.get(key, np.zeros(0))

  def update(self, key: str, values: np.ndarray) -> None:
    """Replaces the completed prefix for `key` and saves to disk."""
    values = np.asarray(values)
    done = self.completed(key)
    assert len(values) >= len(done), (
        f'Checkpoint for {key} would shrink from {len(done)} to'
        f' {len(values)} replicas.'
    )
    self._replicas[key] = values
    self.save()

  def save(self) -> None:
    logging.debug('🐍 Saving checkpoint to %s.', self.path)
    data = {'replicas': self._replicas, 'config_hash': self._config_hash}
    with open(self.path, 'wb') as f:
      np.save(f, data)
