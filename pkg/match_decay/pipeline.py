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

"""Run one experiment end to end.

This includes validating the config, resuming from a checkpoint if there is
one, running the replicas and saving the CSV rows and the JSON summary.
"""

import os
from typing import Optional

from absl import logging
from etils import eapp
from match_decay import checkpoint
from match_decay import experiments

_OUTPUT_CSV_SUFFIX = '.csv'
_OUTPUT_JSON_SUFFIX = '.json'


class ExperimentPipeline:
  """Class for managing and running one experiment."""

  def __init__(
      self,
      config: experiments.ExperimentConfig,
      output_directory: str,
      threads: int = 1,
      checkpoint_directory: Optional[str] = None,
  ):
    self._config = config
    self._output_directory = output_directory
    self._threads = threads
    self._checkpoint_directory = checkpoint_directory

  @property
  def csv_path(self) -> str:
    return os.path.join(
        self._output_directory, self._config.experiment + _OUTPUT_CSV_SUFFIX
    )

  @property
  def json_path(self) -> str:
    return os.path.join(
        self._output_directory, self._config.experiment + _OUTPUT_JSON_SUFFIX
    )

  def _load_store(self) -> Optional[checkpoint.CheckpointStore]:
    if not self._checkpoint_directory:
      return None
    # One store per config.
    directory = os.path.join(
        self._checkpoint_directory, self._config.config_hash()[:16]
    )
    return checkpoint.CheckpointStore(directory, self._config.config_hash())

  def _save(self, record: experiments.RunRecord) -> None:
    logging.info('🐍 Saving %s', self.csv_path)
    if not os.path.exists(self._output_directory):
      os.makedirs(self._output_directory)
    record.to_csv(self.csv_path)
    record.save_json(self.json_path)

  def run_pipeline(self) -> experiments.RunRecord:
    """Run the experiment and save its rows."""
    eapp.better_logging()

    logging.info('🐍 Validating config')
    self._config.validate()
    store = self._load_store()

    record = experiments.run(self._config, threads=self._threads, store=store)

    self._save(record)
    return record
