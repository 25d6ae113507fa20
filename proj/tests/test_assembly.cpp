#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "sbp/assembly.hpp"
#include "test_util.hpp"

using namespace sbp;
using sbp::testing::test_operators;

namespace {

GlobalNodeMap identity_numbering(const ElementOperators& ops) {
  GlobalNodeMap gmap;
  gmap.n_global = ops.size();
  gmap.coords = ops.nodes;
  gmap.element_nodes = {std::vector<int>(ops.size())};
  std::iota(gmap.element_nodes[0].begin(), gmap.element_nodes[0].end(), 0);
  return gmap;
}

}  // namespace

TEST_CASE("single-element assembly reproduces the element operator", "[assembly]") {
  const auto& ops = test_operators(2, 2);
  const auto gmap = identity_numbering(ops);
  const auto g = assemble_global({ops}, gmap, false);
  REQUIRE((g.norm - ops.norm).lpNorm<Eigen::Infinity>() == 0.0);
  REQUIRE((Mat(g.Qx) - ops.Q[0]).lpNorm<Eigen::Infinity>() == 0.0);
  REQUIRE((Mat(g.Qy) - ops.Q[1]).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("interior boundary terms cancel across a shared facet", "[assembly]") {
  const auto mesh = build_mesh(2);
  const auto elems = map_reference_nodes(mesh, test_operators(2, 2));
  // triangles 0 and 1 share the diagonal of the first quad
  std::vector<ElementOperators> pair = {elems[0], elems[1]};
  std::vector<NodeSet> nodes = {pair[0].nodes, pair[1].nodes};
  const auto gmap = build_global_numbering(nodes, false, 1e-10 / mesh.N);
  const auto g = assemble_global(pair, gmap, false);

  // Q + Q^T must equal the assembled boundary operator: the shared-facet
  // contributions appear with opposite normals and cancel
  std::vector<Mat> ex = {pair[0].E[0], pair[1].E[0]};
  const Mat Esum = Mat(assemble_matrix(ex, gmap));
  const Mat QQt = Mat(g.Qx) + Mat(Mat(g.Qx).transpose());
  REQUIRE((QQt - Esum).lpNorm<Eigen::Infinity>() < 1e-13);
  // a node whose facets are all shared (the diagonal's interior node) keeps
  // no symmetric part at all: its facet contributions cancel entirely
  std::set<int> hull_gids;
  for (int e : {0, 1})
    for (const auto& f : pair[e].facets)
      for (int i : f.node_ids) {
        // hull facets are the ones not shared between the two elements
        bool shared_facet = true;
        for (int k : f.node_ids) {
          const int gid = gmap.element_nodes[e][k];
          bool in_other = false;
          for (int b : gmap.element_nodes[1 - e])
            if (gid == b) in_other = true;
          if (!in_other) shared_facet = false;
        }
        if (!shared_facet) hull_gids.insert(gmap.element_nodes[e][i]);
      }
  int interior_facet_nodes = 0;
  for (int i = 0; i < pair[0].size(); ++i) {
    const int gid = gmap.element_nodes[0][i];
    bool on_diag = false;
    for (int b : gmap.element_nodes[1])
      if (gid == b) on_diag = true;
    if (on_diag && !hull_gids.count(gid)) {
      ++interior_facet_nodes;
      REQUIRE(QQt.row(gid).lpNorm<Eigen::Infinity>() < 1e-13);
    }
  }
  REQUIRE(interior_facet_nodes == 1);  // the diagonal midpoint for p=2
}

TEST_CASE("shared nodes accumulate both element weights", "[assembly]") {
  const auto mesh = build_mesh(2);
  const auto elems = map_reference_nodes(mesh, test_operators(1, 2));
  std::vector<ElementOperators> pair = {elems[0], elems[1]};
  std::vector<NodeSet> nodes = {pair[0].nodes, pair[1].nodes};
  const auto gmap = build_global_numbering(nodes, false, 1e-10 / mesh.N);
  const auto g = assemble_global(pair, gmap, false);
  for (int i = 0; i < pair[0].size(); ++i)
    for (int j = 0; j < pair[1].size(); ++j)
      if (gmap.element_nodes[0][i] == gmap.element_nodes[1][j])
        REQUIRE(g.norm[gmap.element_nodes[0][i]] ==
                Catch::Approx(pair[0].norm[i] + pair[1].norm[j]).margin(1e-15));
}

TEST_CASE("global mass equals the mesh area", "[assembly]") {
  for (int p : {1, 3}) {
    const auto mesh = build_mesh(4);
    const auto elems = map_reference_nodes(mesh, test_operators(p, 2));
    const auto gmap = build_global_numbering(mesh, elems, true);
    const auto g = assemble_global(elems, gmap, true);
    REQUIRE(g.norm.sum() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(g.norm.minCoeff() > 0.0);
  }
}

TEST_CASE("non-periodic global operator differentiates monomials exactly",
          "[assembly]") {
  const auto mesh = build_mesh(4);
  const auto elems = map_reference_nodes(mesh, test_operators(2, 2));
  const auto gmap = build_global_numbering(mesh, elems, false);
  const auto g = assemble_global(elems, gmap, false);
  const auto rep = verify_global(g, 2);
  REQUIRE(rep.accuracy <= 1e-9);
  REQUIRE(rep.constant_mode <= 1e-11);
}

TEST_CASE("periodic global operator is antisymmetric with imaginary spectrum",
          "[assembly]") {
  const auto mesh = build_mesh(4);
  const auto elems = map_reference_nodes(mesh, test_operators(2, 2));
  const auto gmap = build_global_numbering(mesh, elems, true);
  const auto g = assemble_global(elems, gmap, true);
  const auto rep = verify_global(g, 2);
  REQUIRE(rep.antisymmetry <= 1e-10);
  REQUIRE(rep.constant_mode <= 1e-11);

  const Mat dense = Mat(g.Qx) + Mat(g.Qy);
  const CVec ev = eig_general(dense);
  double max_abs = 0.0, max_re = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(ev[i]));
    max_re = std::max(max_re, std::abs(ev[i].real()));
  }
  REQUIRE(max_re <= 1e-10 * max_abs);
}

TEST_CASE("assembly is independent of element order", "[assembly]") {
  const auto mesh = build_mesh(3);
  const auto elems = map_reference_nodes(mesh, test_operators(2, 2));
  std::vector<NodeSet> nodes;
  for (const auto& e : elems) nodes.push_back(e.nodes);
  const auto gmap = build_global_numbering(nodes, true, 1e-10 / mesh.N);
  const auto direct = assemble_global(elems, gmap, true);

  std::vector<int> perm(elems.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<ElementOperators> shuffled;
  std::vector<NodeSet> snodes;
  for (int e : perm) {
    shuffled.push_back(elems[e]);
    snodes.push_back(nodes[e]);
  }
  const auto sgmap = build_global_numbering(snodes, true, 1e-10 / mesh.N);
  const auto redone = assemble_global(shuffled, sgmap, true);
  REQUIRE((redone.norm - direct.norm).lpNorm<Eigen::Infinity>() <= 1e-15);
  REQUIRE((Mat(redone.Qx) - Mat(direct.Qx)).lpNorm<Eigen::Infinity>() <= 1e-15);
  REQUIRE((Mat(redone.Qy) - Mat(direct.Qy)).lpNorm<Eigen::Infinity>() <= 1e-15);
}
