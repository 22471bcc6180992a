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

import os

from absl.testing import absltest
from absl.testing import parameterized
from match_decay import generators
from match_decay import graphs
import networkx as nx
import numpy as np


def _triangle_with_tail() -> graphs.Graph:
  return graphs.build_graph([(0, 1), (1, 2), (0, 2), (2, 3)])


class BuildGraphTest(parameterized.TestCase):

  def test_ids_follow_input_order(self):
    g = graphs.build_graph([(3, 1), (0, 1)])
    self.assertEqual(g.n_vertices, 4)
    self.assertEqual(g.edges, ((1, 3), (0, 1)))
    self.assertEqual(g.edge_between(3, 1), 0)
    self.assertIsNone(g.edge_between(0, 3))
    self.assertEqual(g.degree(1), 2)
    self.assertEqual(g.degree(2), 0)

  @parameterized.named_parameters(
      ('loop', [(0, 0)], None),
      ('duplicate', [(0, 1), (1, 0)], None),
      ('out_of_range', [(0, 5)], 3),
  )
  def test_malformed(self, edges, n):
    with self.assertRaises(graphs.GraphError):
      graphs.build_graph(edges, n_vertices=n)

  def test_unknown_edge(self):
    with self.assertRaises(graphs.GraphError):
      generators.path(3).endpoints(2)


class ViewTest(absltest.TestCase):

  def test_vertex_deletion_removes_incident_edges(self):
    h = graphs.delete(_triangle_with_tail(), vertices=[2])
    self.assertEqual(h.vertices, (0, 1, 3))
    self.assertEqual(h.edge_ids, (0,))
    self.assertEqual(h.degree(3), 0)
    self.assertEqual(h.neighbors(2), [])

  def test_deletions_compose_and_keep_ids(self):
    g = _triangle_with_tail()
    h = g.view().delete(edges=[0]).delete(vertices=[3])
    self.assertEqual(h.edge_ids, (1, 2))
    self.assertFalse(h.has_edge(0))
    self.assertIs(h.base, g)

  def test_noop_deletion_returns_same_view(self):
    h = graphs.delete(_triangle_with_tail(), vertices=[3])
    self.assertIs(h.delete(vertices=[3]), h)

  def test_unknown_ids(self):
    g = _triangle_with_tail()
    with self.assertRaises(graphs.GraphError):
      graphs.delete(g, vertices=[9])
    with self.assertRaises(graphs.GraphError):
      graphs.delete(g, edges=[9])

  def test_as_view_rejects_other_types(self):
    with self.assertRaises(TypeError):
      graphs.as_view([(0, 1)])


class BallTest(parameterized.TestCase):

  @parameterized.parameters((0, (3, 4)), (1, (2, 3, 4, 5)), (9, tuple(range(9))))
  def test_edge_ball_on_path(self, r, expected):
    g = generators.path(9)
    self.assertEqual(graphs.ball(g, 3, r).vertices, expected)

  def test_vertex_ball(self):
    g = generators.path(9)
    self.assertEqual(graphs.vertex_ball(g, 4, 2).vertices, (2, 3, 4, 5, 6))

  def test_ball_is_induced(self):
    g = _triangle_with_tail()
    h = graphs.ball(g, 0, 0)
    self.assertEqual(h.edge_ids, (0,))
    self.assertEqual(graphs.ball(g, 0, 1).edge_ids, (0, 1, 2))

  def test_boundary(self):
    g = generators.path(9)
    h = graphs.ball(g, 3, 1)
    self.assertEqual(graphs.boundary(g, h), frozenset({2, 5}))
    self.assertEqual(graphs.boundary(g, g.view()), frozenset())

  def test_ball_within_a_view(self):
    h = graphs.delete(generators.path(9), vertices=[5])
    self.assertEqual(graphs.ball(h, 3, 3).vertices, (0, 1, 2, 3, 4))

  def test_errors(self):
    g = generators.path(4)
    with self.assertRaises(graphs.GraphError):
      graphs.ball(g, 0, -1)
    with self.assertRaises(graphs.GraphError):
      graphs.ball(graphs.delete(g, edges=[1]), 1, 2)

  def test_distances_match_networkx(self):
    g = generators.hex_patch(3)
    nx_graph = nx.Graph(list(g.edges))
    expected = nx.single_source_shortest_path_length(nx_graph, 0)
    self.assertEqual(graphs.distances(g, [0]), expected)


class StructureTest(parameterized.TestCase):

  def test_components(self):
    h = graphs.delete(generators.path(6), edges=[2])
    self.assertEqual(graphs.components(h), [[0, 1, 2], [3, 4, 5]])
    self.assertTrue(graphs.is_forest(h))
    self.assertFalse(graphs.is_tree(h))
    self.assertFalse(graphs.is_connected(h))

  def test_cycle_is_not_forest(self):
    self.assertFalse(graphs.is_forest(generators.cycle(5)))
    self.assertTrue(graphs.is_connected(generators.cycle(5)))

  def test_empty_view(self):
    h = graphs.delete(generators.path(2), vertices=[0, 1])
    self.assertEqual(graphs.components(h), [])
    self.assertTrue(graphs.is_connected(h))

  def test_to_graph_relabels(self):
    h = graphs.delete(_triangle_with_tail(), vertices=[0])
    g, old_vertices, old_edges = graphs.to_graph(h)
    self.assertEqual(old_vertices, [1, 2, 3])
    self.assertEqual(old_edges, [1, 3])
    self.assertEqual(g.edges, ((0, 1), (1, 2)))


class EdgeListTest(parameterized.TestCase):

  def test_format(self):
    text = graphs.format_edge_list(generators.path(3), np.array([0.5, 2.0]))
    self.assertEqual(text, '3 2\n0 1 0.5\n1 2 2.0\n')

  def test_file_preserves_weights_exactly(self):
    g = generators.hex_patch(2)
    w = np.random.default_rng(0).exponential(size=g.n_edges)
    path = os.path.join(self.create_tempdir().full_path, 'g.txt')
    graphs.write_edge_list(path, g, w)
    g2, w2 = graphs.read_edge_list(path)
    self.assertEqual(g2, g)
    np.testing.assert_array_equal(w2, w)

  def test_unweighted(self):
    g, w = graphs.parse_edge_list('3 1\n0 2\n')
    self.assertIsNone(w)
    self.assertEqual(g.n_vertices, 3)

  @parameterized.named_parameters(
      ('no_header', ''),
      ('wrong_count', '3 2\n0 1\n'),
      ('mixed_widths', '3 2\n0 1\n1 2 0.5\n'),
      ('loop', '2 1\n1 1\n'),
  )
  def test_malformed(self, text):
    with self.assertRaises(graphs.GraphError):
      graphs.parse_edge_list(text)


if __name__ == '__main__':
  absltest.main()
