// Copyright 2026 The RoME Bandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Cohesion graphs over users or time points, their incidence and Laplacian
// matrices, and the block-diagonal penalty matrix of the mixed-effects model.

#ifndef ROME_GRAPH_H_
#define ROME_GRAPH_H_

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rome {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Undirected edge with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple undirected graph: no self-loops, no duplicate edges. Immutable.
class CohesionGraph {
 public:
  // Normalizes each pair to u < v and removes duplicates. Throws
  // std::invalid_argument on self-loops or out-of-range vertices.
  CohesionGraph(int num_vertices, std::vector<Edge> edges);

  // Path t <-> t+1 over `num_vertices` sequential points.
  static CohesionGraph Chain(int num_vertices);

  // Whitespace-separated "i j" pairs, 0-based, one per line. Blank lines and
  // lines starting with '#' are skipped. If `num_vertices` is negative it is
  // inferred as max index + 1.
  static CohesionGraph FromEdgeList(const std::filesystem::path& path,
                                    int num_vertices = -1);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool HasEdge(int a, int b) const;

 private:
  int num_vertices_;
  std::vector<Edge> edges_;  // sorted
};

// Union k-nearest-neighbour graph in Euclidean distance. Each vertex links to
// its k nearest others (ties to the lower index); an edge is kept if either
// endpoint selects the other.
CohesionGraph KnnGraph(std::span<const Eigen::VectorXd> features, int k);

// Q with one column per edge: +1 at the larger vertex index, -1 at the smaller.
SparseMatrix Incidence(const CohesionGraph& graph);

// L = Q Q^T.
SparseMatrix Laplacian(const CohesionGraph& graph);

// Sum over edges of ||theta_i - theta_j||^2, read off the off-diagonal of the
// Laplacian. Equals tr(Theta^T L Theta).
double CohesionPenalty(std::span<const Eigen::VectorXd> blocks,
                       const SparseMatrix& laplacian);

// L (x) I_d.
SparseMatrix KroneckerIdentity(const SparseMatrix& m, int d);

// Symmetric block-diagonal penalty matrix. Each block is kept separately so
// the inverse can be formed block by block.
class PenaltyMatrix {
 public:
  struct Block {
    int offset = 0;
    SparseMatrix matrix;
  };

  PenaltyMatrix() = default;
  explicit PenaltyMatrix(std::vector<SparseMatrix> blocks);

  int dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const SparseMatrix& sparse() const { return sparse_; }
  Eigen::MatrixXd Dense() const;

  // Block-wise Cholesky inverse. Throws std::domain_error when a block is
  // not positive definite.
  Eigen::MatrixXd Inverse() const;

 private:
  int dim_ = 0;
  std::vector<Block> blocks_;
  SparseMatrix sparse_;
};

// Ridge plus cohesion block: gamma I + lambda (L (x) I_d).
SparseMatrix CohesionBlock(const SparseMatrix& laplacian, int d, double gamma,
                           double lambda);

// diag(gamma I_d, gamma I + lambda L_user (x) I_d, gamma I + lambda L_time (x)
// I_d). Requires gamma > 0, lambda >= 0. The Laplacian sides give the number
// of users and time points.
PenaltyMatrix BuildV0(int d, double gamma, double lambda,
                      const SparseMatrix& user_laplacian,
                      const SparseMatrix& time_laplacian);

// Square variant with K users and K time points; checks both sides equal K.
PenaltyMatrix BuildV0(int num_stages, int d, double gamma, double lambda,
                      const SparseMatrix& user_laplacian,
                      const SparseMatrix& time_laplacian);

}  // namespace rome

#endif  // ROME_GRAPH_H_
