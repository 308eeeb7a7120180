#include "scdestim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

namespace {

using scdestim::EdgeSpec;
using scdestim::Topology;

// BFS component count; independent of any spectral computation.
bool connected_by_search(const Topology& t) {
  std::vector<bool> seen(t.n_sensors(), false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    for (const auto& nb : t.neighbors(v)) {
      if (!seen[nb.index]) {
        seen[nb.index] = true;
        ++count;
        q.push(nb.index);
      }
    }
  }
  return count == t.n_sensors();
}

// Cyclic Jacobi rotations on a plain dense copy; shares nothing with Eigen.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = a[r][p], arq = a[r][q];
          a[r][p] = c * arp - s * arq;
          a[r][q] = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = a[p][r], aqr = a[q][r];
          a[p][r] = c * apr - s * aqr;
          a[q][r] = s * apr + c * aqr;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<std::vector<double>> laplacian_by_hand(const Topology& t) {
  const std::size_t n = t.n_sensors();
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (const auto& spec : t.edge_specs()) {
    const std::size_t i = spec.i - 1, j = spec.j - 1;
    l[i][j] -= spec.weight;
    l[j][i] -= spec.weight;
    l[i][i] += spec.weight;
    l[j][j] += spec.weight;
  }
  return l;
}

Topology random_graph(std::mt19937_64& gen, std::size_t n, double p) {
  std::bernoulli_distribution keep(p);
  std::uniform_real_distribution<double> w(0.2, 3.0);
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      if (keep(gen)) edges.push_back({i, j, w(gen)});
    }
  }
  return Topology::build(n, edges);
}

TEST(Graph, PaperTopologyHasTwelveEdges) {
  const auto t = scdestim::paper_topology();
  EXPECT_EQ(t.n_sensors(), 8u);
  EXPECT_EQ(t.edge_count(), 12u);
  EXPECT_DOUBLE_EQ(t.weight(0, 6), 1.0);  // chord 1-7
  EXPECT_DOUBLE_EQ(t.weight(3, 5), 1.0);  // chord 4-6
  EXPECT_DOUBLE_EQ(t.weight(0, 2), 0.0);
  EXPECT_TRUE(scdestim::check_connected(t));
}

TEST(Graph, PaperTopologyLambda2Golden) {
  // 40-digit eigensolve of the 8x8 Laplacian: 0.66775349883499498664...
  EXPECT_NEAR(scdestim::laplacian(scdestim::paper_topology()).lambda2, 0.66775349883499498664, 1e-10);
}

TEST(Graph, PaperSpectrumAgainstJacobi) {
  const auto ev = jacobi_eigenvalues(laplacian_by_hand(scdestim::paper_topology()));
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[1], 0.66775349883499498664, 1e-12);
  EXPECT_NEAR(ev[7], 5.8268384, 1e-6);
}

TEST(Graph, Lambda2MatchesJacobiOracle) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = random_graph(gen, 2 + trial % 9, 0.5);
    const auto ev = jacobi_eigenvalues(laplacian_by_hand(t));
    EXPECT_NEAR(scdestim::laplacian(t).lambda2, std::max(0.0, ev[1]), 1e-9) << "trial " << trial;
  }
}

TEST(Graph, K2) {
  const std::vector<EdgeSpec> e = {{1, 2, 1.0}};
  const auto lap = scdestim::laplacian(Topology::build(2, e));
  EXPECT_DOUBLE_EQ(lap.matrix(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(lap.matrix(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(lap.matrix(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(lap.matrix(1, 1), 1.0);
  EXPECT_NEAR(lap.lambda2, 2.0, 1e-10);
  EXPECT_TRUE(scdestim::check_connected(Topology::build(2, e)));
}

TEST(Graph, Path3Lambda2FromCharacteristicPolynomial) {
  // det(L - x I) = -x (x - 1) (x - 3) for the unit path on 3 nodes.
  const std::vector<EdgeSpec> e = {{1, 2, 1.0}, {2, 3, 1.0}};
  EXPECT_NEAR(scdestim::laplacian(Topology::build(3, e)).lambda2, 1.0, 1e-10);
}

TEST(Graph, DisconnectedHasZeroLambda2) {
  const std::vector<EdgeSpec> e = {{1, 2, 1.0}, {3, 4, 1.0}};
  const auto t = Topology::build(4, e);
  EXPECT_NEAR(scdestim::laplacian(t).lambda2, 0.0, 1e-10);
  EXPECT_FALSE(scdestim::check_connected(t));
}

TEST(Graph, RejectsMalformedEdges) {
  const std::vector<EdgeSpec> dup = {{1, 2, 1.0}, {2, 1, 1.0}};
  EXPECT_THROW(Topology::build(3, dup), std::invalid_argument);
  const std::vector<EdgeSpec> loop = {{2, 2, 1.0}};
  EXPECT_THROW(Topology::build(3, loop), std::invalid_argument);
  const std::vector<EdgeSpec> zero = {{1, 2, 0.0}};
  EXPECT_THROW(Topology::build(3, zero), std::invalid_argument);
  const std::vector<EdgeSpec> out = {{1, 4, 1.0}};
  EXPECT_THROW(Topology::build(3, out), std::invalid_argument);
  const std::vector<EdgeSpec> none;
  EXPECT_THROW(Topology::build(1, none), std::invalid_argument);
}

TEST(Graph, LaplacianPropertiesOnRandomGraphs) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto t = random_graph(gen, n, 0.45);
    const auto lap = scdestim::laplacian(t);
    EXPECT_LT((lap.matrix - lap.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((lap.matrix * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n))).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(scdestim::check_connected(t), connected_by_search(t)) << "trial " << trial;
  }
}

TEST(Graph, AddingAnEdgeNeverDecreasesLambda2) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const auto t = random_graph(gen, n, 0.4);
    auto specs = t.edge_specs();
    // First absent pair, if any.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (t.edge_index(i, j) < 0) {
          specs.push_back({i + 1, j + 1, 0.7});
          const auto bigger = Topology::build(n, specs);
          EXPECT_GE(scdestim::laplacian(bigger).lambda2, scdestim::laplacian(t).lambda2 - 1e-12);
          goto next_trial;
        }
      }
    }
  next_trial:;
  }
}

}  // namespace
