#ifndef SCDESTIM_GRAPH_HPP
#define SCDESTIM_GRAPH_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace scdestim {

/// Connectivity is declared when the algebraic connectivity exceeds this.
inline constexpr double kConnectivityTolerance = 1e-10;

/// Edge as written in configs and reports: 1-based endpoints.
struct EdgeSpec {
  std::size_t i;
  std::size_t j;
  double weight;
};

/// Internal edge record, 0-based with i < j.
struct Edge {
  std::size_t i;
  std::size_t j;
  double weight;
};

struct Neighbor {
  std::size_t index;
  double weight;
  std::size_t edge;  // position in Topology::edges()
};

/**
 * Weighted undirected communication graph.
 *
 * Weights are symmetric and strictly positive exactly on the edge set.
 * The object is immutable after construction and may be shared freely
 * between concurrent runs.
 */
class Topology {
 public:
  /// Empty placeholder; only build() yields a usable graph.
  Topology() = default;

  /// Validates and builds from 1-based edge triples. Throws
  /// std::invalid_argument on self-loops, duplicates, out-of-range
  /// indices, nonpositive weights, or n < 2.
  static Topology build(std::size_t n, std::span<const EdgeSpec> edges);

  std::size_t n_sensors() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Neighbor>& neighbors(std::size_t i) const { return neighbors_.at(i); }

  /// a_ij (0-based); zero when (i, j) is not an edge.
  double weight(std::size_t i, std::size_t j) const;

  /// Index into edges() of the unordered pair, or -1.
  long edge_index(std::size_t i, std::size_t j) const;

  Eigen::MatrixXd adjacency() const;

  /// Edge list in the 1-based boundary form.
  std::vector<EdgeSpec> edge_specs() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> neighbors_;
};

struct LaplacianView {
  Eigen::MatrixXd matrix;  // D - A
  double lambda2 = 0.0;    // second-smallest eigenvalue
};

LaplacianView laplacian(const Topology& topology);

bool check_connected(const Topology& topology);

/// Eight-sensor ring 1-2-...-8-1 with chords 1-7, 2-7, 3-6, 4-6, unit weights.
Topology paper_topology();

}  // namespace scdestim

#endif  // SCDESTIM_GRAPH_HPP
