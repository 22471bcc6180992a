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

"""Command line entry point.

  matchdecay <gen|mwm|bonus|mp|decay|experiment> [flags]

gen prints an edge list, mwm, bonus and mp print JSON, decay prints CSV rows
and experiment writes <experiment>.csv and <experiment>.json under --out.

To run:
python -m match_decay.run experiment --config=thm_tree.cfg --out=/tmp/runs
"""

import collections.abc
import io
import json
import math
import sys
from typing import Any, Optional

from absl import app
from absl import flags
from etils import eapp
from match_decay import bonus
from match_decay import decay
from match_decay import experiments
from match_decay import generators
from match_decay import graphs
from match_decay import matching
from match_decay import message_passing
from match_decay import pipeline
from match_decay import weights as weights_lib
import numpy as np
import pandas as pd

_COMMANDS = ('gen', 'mwm', 'bonus', 'mp', 'decay', 'experiment')

_SEED = flags.DEFINE_integer('seed', 0, 'Master seed.')

_THREADS = flags.DEFINE_integer('threads', 1, 'Worker threads for replicas.')

_OUT = flags.DEFINE_string(
    'out',
    '',
    'Output file (gen, mwm, bonus, mp, decay) or directory (experiment).'
    ' Empty writes to stdout.',
)

_GRAPH = flags.DEFINE_string('graph', None, 'Edge-list file to read.')

_FAMILY = flags.DEFINE_enum(
    'family', 'path', [f.value for f in generators.Family], 'Graph family.'
)

_PARAMS = flags.DEFINE_string(
    'params',
    '',
    'Family parameters, e.g. "n=10,d=3"; list values separated by ";".',
)

_WEIGHTED = flags.DEFINE_boolean(
    'weighted', False, 'gen: also write exp(1) weights.'
)

_CERTIFY = flags.DEFINE_boolean(
    'certify', False, 'mwm: search for an augmenting path.'
)

_EDGE = flags.DEFINE_integer('edge', 0, 'Edge id.')

_VERTEX = flags.DEFINE_integer('vertex', 0, 'Vertex id; the root for mp.')

_R = flags.DEFINE_list('r', ['2'], 'Radius or radii.')

_METHOD = flags.DEFINE_enum(
    'method', 'bracket-general', [m.value for m in decay.Method],
    'decay: replica estimator.',
)

_REPLICAS = flags.DEFINE_integer('replicas', 1000, 'Monte Carlo replicas.')

_BOUNDARY = flags.DEFINE_string(
    'boundary', 'zero', 'mp: "zero", "inf" or a file of "v a_v" lines.'
)

_CONFIG = flags.DEFINE_string(
    'config', None, 'experiment: a key = value config file.'
)

_EXPERIMENT = flags.DEFINE_enum(
    'experiment', 'thm_tree', [e.value for e in experiments.Experiment],
    'experiment: which experiment, when --config is not given.',
)

_MAX_DEGREE = flags.DEFINE_integer('max_degree', 2, 'experiment: D.')

_EPSILONS = flags.DEFINE_list('epsilons', ['0.1', '0.2', '0.3'],
                              'experiment: epsilon grid.')

_N_VALUES = flags.DEFINE_list('n_values', ['10', '100', '1000'],
                              'experiment: sizes.')

_SUBGRAPHS = flags.DEFINE_integer('subgraphs', 20,
                                  'experiment: subgraphs per radius in m_r.')

_CHECKPOINT_DIRECTORY = flags.DEFINE_string(
    'checkpoint_directory', None, 'experiment: where to keep checkpoints.'
)


def _parse_value(text: str) -> Any:
  if ';' in text:
    return [_parse_value(x) for x in text.split(';') if x]
  try:
    return int(text)
  except ValueError:
    return float(text)


def parse_params(text: str) -> dict[str, Any]:
  """"n=10,d=3" -> {'n': 10, 'd': 3}."""
  params = {}
  for item in text.split(','):
    if not item.strip():
      continue
    if '=' not in item:
      raise app.UsageError(f'Expected key=value in --params, got {item!r}.')
    key, value = (s.strip() for s in item.split('=', 1))
    params[key] = _parse_value(value)
  return params


def _json_value(x: Any) -> Any:
  """Infinities as "inf" or "-inf", NaN as null."""
  if isinstance(x, (float, np.floating)) and not math.isfinite(x):
    return None if math.isnan(x) else ('inf' if x > 0 else '-inf')
  return x


def dump_json(payload: dict[str, Any]) -> str:
  """Strict JSON, with non-finite floats replaced by `_json_value`."""
  return json.dumps({k: _json_value(v) for k, v in payload.items()},
                    allow_nan=False)


def _read_graph() -> tuple[graphs.Graph, Optional[np.ndarray]]:
  if not _GRAPH.value:
    raise app.UsageError('--graph is required.')
  return graphs.read_edge_list(_GRAPH.value)


def _read_weighted_graph() -> tuple[graphs.Graph, np.ndarray]:
  g, w = _read_graph()
  if w is None:
    w = weights_lib.sample_weights(g, seed=_SEED.value).values
  return g, w


def gen_command() -> str:
  g = generators.generate(_FAMILY.value, parse_params(_PARAMS.value),
                          seed=_SEED.value)
  w = None
  if _WEIGHTED.value:
    w = weights_lib.sample_weights(g, seed=_SEED.value).values
  return graphs.format_edge_list(g, w)


def mwm_command() -> str:
  g, w = _read_weighted_graph()
  result = matching.solve(g, w, certify=_CERTIFY.value)
  return dump_json(result.to_json())


def bonus_command() -> str:
  g, w = _read_weighted_graph()
  v, r = _VERTEX.value, int(_R.value[0])
  lo, hi = bonus.sandwich(g, w, v, r)
  return dump_json({
      'vertex': v,
      'r': r,
      'bonus': bonus.bonus(g, w, v),
      'lo': lo,
      'hi': hi,
  })


def mp_command() -> str:
  g, _ = _read_graph()
  t = message_passing.RootedTree.from_graph(g, root=_VERTEX.value)
  if _BOUNDARY.value == 'zero':
    a = message_passing.BoundaryCondition.zeros(t)
  elif _BOUNDARY.value == 'inf':
    a = message_passing.BoundaryCondition.infinite(t)
  else:
    with open(_BOUNDARY.value) as f:
      a = message_passing.BoundaryCondition.parse(t, f.read())
  state = message_passing.run_tree_recursion(t, a)
  sensitivity = message_passing.root_sensitivity(t)
  return dump_json({
      'root_p': state.root_p,
      'root_q': state.root_q,
      'sensitivity': sensitivity.value,
      'q_sensitivity': sensitivity.q_value,
      'bound': sensitivity.bound,
  })


def decay_command() -> str:
  g, _ = _read_graph()
  plan = weights_lib.SeedPlan(_SEED.value, _REPLICAS.value)
  rows = [
      decay.rho_estimate(
          g, _EDGE.value, int(r), _METHOD.value, _REPLICAS.value, plan,
          threads=_THREADS.value,
      ).to_row()
      for r in _R.value
  ]
  out = io.StringIO()
  pd.DataFrame(rows).to_csv(out, index=False)
  return out.getvalue()


def experiment_config() -> experiments.ExperimentConfig:
  if _CONFIG.value:
    config = experiments.ExperimentConfig.from_file(_CONFIG.value)
  else:
    r = [int(x) for x in _R.value]
    config = experiments.ExperimentConfig(
        experiment=_EXPERIMENT.value,
        family=_FAMILY.value,
        max_degree=_MAX_DEGREE.value,
        r_min=min(r),
        r_max=max(r),
        epsilons=[float(x) for x in _EPSILONS.value],
        n_values=[int(x) for x in _N_VALUES.value],
        replicas=_REPLICAS.value,
        subgraphs=_SUBGRAPHS.value,
        master_seed=_SEED.value,
    )
  config.output = _OUT.value or config.output
  return config


def experiment_command() -> experiments.RunRecord:
  config = experiment_config()
  if not config.output:
    raise app.UsageError('experiment needs --out or an output key.')
  return pipeline.ExperimentPipeline(
      config,
      output_directory=config.output,
      threads=_THREADS.value,
      checkpoint_directory=_CHECKPOINT_DIRECTORY.value,
  ).run_pipeline()


_TEXT_COMMANDS = {
    'gen': gen_command,
    'mwm': mwm_command,
    'bonus': bonus_command,
    'mp': mp_command,
    'decay': decay_command,
}


def main(argv: collections.abc.Sequence[str]) -> None:
  if len(argv) != 2 or argv[1] not in _COMMANDS:
    raise app.UsageError(f'Usage: matchdecay <{"|".join(_COMMANDS)}> [flags]')
  eapp.better_logging()
  command = argv[1]
  if command == 'experiment':
    experiment_command()
    return
  text = _TEXT_COMMANDS[command]()
  if _OUT.value:
    with open(_OUT.value, 'w') as f:
      f.write(text)
  else:
    sys.stdout.write(text if text.endswith('\n') else text + '\n')


def run_main() -> None:
  app.run(main)


if __name__ == '__main__':
  run_main()
