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

__version__ = '0.1.0'

from match_decay import bonus
from match_decay import decay
from match_decay import experiments
from match_decay import generators
from match_decay import graphs
from match_decay import matching
from match_decay import message_passing
from match_decay import pipeline
from match_decay import weights
