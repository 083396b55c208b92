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

#include "rome/graph.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

namespace rome {

CohesionGraph::CohesionGraph(int num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices) {
  if (num_vertices < 0) {
    throw std::invalid_argument("CohesionGraph: negative vertex count");
  }
  for (Edge& e : edges) {
    if (e.u == e.v) {
      throw std::invalid_argument("CohesionGraph: self-loop at vertex " +
                                  std::to_string(e.u));
    }
    if (e.u < 0 || e.v < 0 || e.u >= num_vertices || e.v >= num_vertices) {
      throw std::invalid_argument("CohesionGraph: vertex out of range in edge (" +
                                  std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ")");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

CohesionGraph CohesionGraph::Chain(int num_vertices) {
  std::vector<Edge> edges;
  for (int t = 0; t + 1 < num_vertices; ++t) edges.push_back({t, t + 1});
  return CohesionGraph(num_vertices, std::move(edges));
}

CohesionGraph CohesionGraph::FromEdgeList(const std::filesystem::path& path,
                                          int num_vertices) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open edge list " + path.string());
  }
  std::vector<Edge> edges;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Edge e;
    if (!(fields >> e.u >> e.v)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected two vertex indices");
    }
    max_index = std::max({max_index, e.u, e.v});
    edges.push_back(e);
  }
  if (num_vertices < 0) num_vertices = max_index + 1;
  return CohesionGraph(num_vertices, std::move(edges));
}

bool CohesionGraph::HasEdge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

CohesionGraph KnnGraph(std::span<const Eigen::VectorXd> features, int k) {
  const int n = static_cast<int>(features.size());
  if (n < 2) throw std::invalid_argument("KnnGraph: need at least 2 points");
  if (k < 1 || k >= n) {
    throw std::invalid_argument("KnnGraph: k must satisfy 1 <= k < n");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * k);
  std::vector<std::pair<double, int>> dist(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dist[m++] = {(features[i] - features[j]).squaredNorm(), j};
    }
    // Pairs compare by distance then index, so ties go to the lower index.
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (int r = 0; r < k; ++r) edges.push_back({i, dist[r].second});
  }
  return CohesionGraph(n, std::move(edges));
}

SparseMatrix Incidence(const CohesionGraph& graph) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * graph.edges().size());
  int col = 0;
  for (const Edge& e : graph.edges()) {
    entries.emplace_back(e.v, col, 1.0);
    entries.emplace_back(e.u, col, -1.0);
    ++col;
  }
  SparseMatrix q(graph.num_vertices(), graph.num_edges());
  q.setFromTriplets(entries.begin(), entries.end());
  return q;
}

SparseMatrix Laplacian(const CohesionGraph& graph) {
  const SparseMatrix q = Incidence(graph);
  SparseMatrix l = q * q.transpose();
  l.prune(0.0);
  return l;
}

double CohesionPenalty(std::span<const Eigen::VectorXd> blocks,
                       const SparseMatrix& laplacian) {
  if (static_cast<Eigen::Index>(blocks.size()) != laplacian.rows() ||
      laplacian.rows() != laplacian.cols()) {
    throw std::invalid_argument(
        "CohesionPenalty: number of blocks must equal the Laplacian side");
  }
  double total = 0.0;
  for (int col = 0; col < laplacian.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(laplacian, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (row <= col) continue;
      if (blocks[row].size() != blocks[col].size()) {
        throw std::invalid_argument("CohesionPenalty: block sizes differ");
      }
      total += -it.value() * (blocks[row] - blocks[col]).squaredNorm();
    }
  }
  return total;
}

SparseMatrix KroneckerIdentity(const SparseMatrix& m, int d) {
  SparseMatrix identity(d, d);
  identity.setIdentity();
  SparseMatrix out = Eigen::kroneckerProduct(m, identity).eval();
  return out;
}

PenaltyMatrix::PenaltyMatrix(std::vector<SparseMatrix> blocks) {
  std::vector<Eigen::Triplet<double>> entries;
  for (SparseMatrix& m : blocks) {
    if (m.rows() != m.cols()) {
      throw std::invalid_argument("PenaltyMatrix: blocks must be square");
    }
    for (int col = 0; col < m.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
        entries.emplace_back(dim_ + it.row(), dim_ + it.col(), it.value());
      }
    }
    const int size = static_cast<int>(m.rows());
    blocks_.push_back({dim_, std::move(m)});
    dim_ += size;
  }
  sparse_.resize(dim_, dim_);
  sparse_.setFromTriplets(entries.begin(), entries.end());
}

Eigen::MatrixXd PenaltyMatrix::Dense() const { return Eigen::MatrixXd(sparse_); }

Eigen::MatrixXd PenaltyMatrix::Inverse() const {
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const Block& block : blocks_) {
    const Eigen::MatrixXd dense(block.matrix);
    Eigen::LLT<Eigen::MatrixXd> llt(dense);
    if (llt.info() != Eigen::Success) {
      throw std::domain_error(
          "PenaltyMatrix: block at offset " + std::to_string(block.offset) +
          " is not positive definite");
    }
    const auto n = dense.rows();
    inv.block(block.offset, block.offset, n, n) =
        llt.solve(Eigen::MatrixXd::Identity(n, n));
  }
  // Symmetrize away solver round-off.
  return 0.5 * (inv + inv.transpose());
}

SparseMatrix CohesionBlock(const SparseMatrix& laplacian, int d, double gamma,
                           double lambda) {
  const int n = static_cast<int>(laplacian.rows()) * d;
  SparseMatrix identity(n, n);
  identity.setIdentity();
  SparseMatrix block = gamma * identity;
  if (lambda != 0.0) block += lambda * KroneckerIdentity(laplacian, d);
  block.prune(0.0);
  return block;
}

PenaltyMatrix BuildV0(int d, double gamma, double lambda,
                      const SparseMatrix& user_laplacian,
                      const SparseMatrix& time_laplacian) {
  if (!(gamma > 0.0)) throw std::invalid_argument("BuildV0: gamma must be > 0");
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("BuildV0: lambda must be >= 0");
  }
  if (d < 1) throw std::invalid_argument("BuildV0: d must be >= 1");
  SparseMatrix shared(d, d);
  shared.setIdentity();
  shared *= gamma;
  return PenaltyMatrix({shared, CohesionBlock(user_laplacian, d, gamma, lambda),
                        CohesionBlock(time_laplacian, d, gamma, lambda)});
}

PenaltyMatrix BuildV0(int num_stages, int d, double gamma, double lambda,
                      const SparseMatrix& user_laplacian,
                      const SparseMatrix& time_laplacian) {
  if (user_laplacian.rows() != num_stages ||
      time_laplacian.rows() != num_stages) {
    throw std::invalid_argument("BuildV0: Laplacian side must equal K");
  }
  return BuildV0(d, gamma, lambda, user_laplacian, time_laplacian);
}

}  // namespace rome
