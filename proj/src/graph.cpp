#include "scdestim/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scdestim {

Topology Topology::build(std::size_t n, std::span<const EdgeSpec> edges) {
  if (n < 2) {
    throw std::invalid_argument("topology needs at least 2 sensors, got " + std::to_string(n));
  }
  Topology t;
  t.n_ = n;
  t.neighbors_.resize(n);
  std::vector<long> seen(n * n, -1);
  for (const auto& e : edges) {
    const std::string name = "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ")";
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n) {
      throw std::invalid_argument(name + ": index outside 1.." + std::to_string(n));
    }
    if (e.i == e.j) {
      throw std::invalid_argument(name + ": self-loop");
    }
    if (!(e.weight > 0.0)) {
      throw std::invalid_argument(name + ": weight must be positive");
    }
    const std::size_t lo = std::min(e.i, e.j) - 1;
    const std::size_t hi = std::max(e.i, e.j) - 1;
    if (seen[lo * n + hi] >= 0) {
      throw std::invalid_argument(name + ": duplicate edge");
    }
    const auto id = t.edges_.size();
    seen[lo * n + hi] = static_cast<long>(id);
    t.edges_.push_back({lo, hi, e.weight});
    t.neighbors_[lo].push_back({hi, e.weight, id});
    t.neighbors_[hi].push_back({lo, e.weight, id});
  }
  return t;
}

double Topology::weight(std::size_t i, std::size_t j) const {
  const long id = edge_index(i, j);
  return id < 0 ? 0.0 : edges_[static_cast<std::size_t>(id)].weight;
}

long Topology::edge_index(std::size_t i, std::size_t j) const {
  if (i >= n_) return -1;
  for (const auto& nb : neighbors_[i]) {
    if (nb.index == j) return static_cast<long>(nb.edge);
  }
  return -1;
}

Eigen::MatrixXd Topology::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  for (const auto& e : edges_) {
    a(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.weight;
    a(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = e.weight;
  }
  return a;
}

std::vector<EdgeSpec> Topology::edge_specs() const {
  std::vector<EdgeSpec> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({e.i + 1, e.j + 1, e.weight});
  return out;
}

LaplacianView laplacian(const Topology& topology) {
  const Eigen::MatrixXd a = topology.adjacency();
  Eigen::MatrixXd l = -a;
  for (Eigen::Index r = 0; r < a.rows(); ++r) l(r, r) = a.row(r).sum();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Laplacian eigensolve failed");
  }
  // Eigenvalues come back sorted ascending.
  const double lambda2 = std::max(0.0, solver.eigenvalues()(1));
  return {std::move(l), lambda2};
}

bool check_connected(const Topology& topology) {
  return laplacian(topology).lambda2 > kConnectivityTolerance;
}

Topology paper_topology() {
  const std::vector<EdgeSpec> edges = {
      {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {5, 6, 1.0}, {6, 7, 1.0},
      {7, 8, 1.0}, {8, 1, 1.0}, {1, 7, 1.0}, {2, 7, 1.0}, {3, 6, 1.0}, {4, 6, 1.0},
  };
  return Topology::build(8, edges);
}

}  // namespace scdestim
