#include "symnmf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "symnmf/errors.hpp"

namespace symnmf {

std::string_view to_string(NoiseDist d) {
  switch (d) {
    case NoiseDist::Gaussian: return "gaussian";
    case NoiseDist::Uniform: return "uniform";
    case NoiseDist::Lognormal: return "lognormal";
  }
  return "unknown";
}

NoiseDist parse_noise_dist(std::string_view name) {
  if (name == "gaussian") return NoiseDist::Gaussian;
  if (name == "uniform") return NoiseDist::Uniform;
  if (name == "lognormal") return NoiseDist::Lognormal;
  throw Error(ErrorKind::InvalidArgument, "unknown noise distribution '" + std::string(name) + "'");
}

namespace {

void mirror_upper(Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i) m(i, j) = m(j, i);
}

}  // namespace

SyntheticData gen_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.r < 1) throw Error(ErrorKind::InvalidArgument, "n and r must be >= 1");
  if (!(spec.sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Matrix u(spec.n, spec.r);
  for (Index j = 0; j < spec.r; ++j)
    for (Index i = 0; i < spec.n; ++i) u(i, j) = std::abs(gauss(rng));

  Matrix x = u * u.transpose();
  mirror_upper(x);

  if (spec.sigma > 0.0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::lognormal_distribution<double> logn(0.0, 1.0);
    auto draw = [&]() {
      switch (spec.noise) {
        case NoiseDist::Gaussian: return std::abs(gauss(rng));
        case NoiseDist::Uniform: return unif(rng);
        case NoiseDist::Lognormal: return logn(rng);
      }
      return 0.0;
    };
    Matrix noise(spec.n, spec.n);
    for (Index j = 0; j < spec.n; ++j)
      for (Index i = 0; i < spec.n; ++i) noise(i, j) = draw();
    for (Index j = 0; j < spec.n; ++j) {
      for (Index i = 0; i <= j; ++i) {
        const double s = 0.5 * (noise(i, j) + noise(j, i));
        x(i, j) += spec.sigma * s;
      }
    }
    mirror_upper(x);
  }
  return {SymmetricMatrix::make(std::move(x)), Factor(std::move(u))};
}

ClusterProblem gen_planted_clusters(Index n, int k_classes, double p_in, double p_out,
                                    std::uint64_t seed) {
  if (!(0.0 <= p_out && p_out < p_in && p_in <= 1.0)) {
    throw Error(ErrorKind::InvalidProbabilities, "require 0 <= p_out < p_in <= 1");
  }
  if (k_classes < 1 || n < k_classes) {
    throw Error(ErrorKind::InvalidArgument, "need 1 <= k_classes <= n");
  }
  std::vector<int> labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = static_cast<int>((i * k_classes) / n);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> within(std::max(0.0, p_in - 0.1), p_in);
  std::uniform_real_distribution<double> across(0.0, p_out);
  Matrix a = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      a(i, j) = labels[i] == labels[j] ? within(rng) : (p_out > 0.0 ? across(rng) : 0.0);
    }
  }
  mirror_upper(a);
  return {SymmetricMatrix::make(std::move(a)), std::move(labels), k_classes};
}

SymmetricMatrix build_similarity(const Matrix& features, int knn) {
  const Index n = features.rows();
  if (knn < 1 || n < knn + 1) {
    throw Error(ErrorKind::InvalidArgument, "build_similarity needs 1 <= knn <= n - 1");
  }
  Matrix dist2(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) dist2(i, j) = (features.row(i) - features.row(j)).squaredNorm();

  // neighbours[i] = knn nearest other points, by (distance, index).
  std::vector<std::vector<Index>> neighbours(n);
  Vector scale(n);
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) {
    order.resize(n);
    std::iota(order.begin(), order.end(), Index{0});
    order.erase(order.begin() + i);
    std::partial_sort(order.begin(), order.begin() + knn, order.end(), [&](Index a, Index b) {
      return dist2(i, a) != dist2(i, b) ? dist2(i, a) < dist2(i, b) : a < b;
    });
    neighbours[i].assign(order.begin(), order.begin() + knn);
    std::sort(neighbours[i].begin(), neighbours[i].end());
    scale(i) = std::max(std::sqrt(dist2(i, order[knn - 1])), 1e-12);
  }

  auto is_neighbour = [&](Index i, Index j) {
    return std::binary_search(neighbours[i].begin(), neighbours[i].end(), j);
  };
  Matrix a = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      if (is_neighbour(i, j) && is_neighbour(j, i)) {
        a(i, j) = std::exp(-dist2(i, j) / (scale(i) * scale(j)));
      }
    }
  }
  mirror_upper(a);

  const Vector degree = a.rowwise().sum();
  Vector inv_sqrt(n);
  for (Index i = 0; i < n; ++i) inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i) a(i, j) *= inv_sqrt(i) * inv_sqrt(j);
  mirror_upper(a);
  return SymmetricMatrix::make(std::move(a));
}

std::vector<int> assign_labels(const Factor& u) {
  std::vector<int> labels(u.n(), 0);
  for (Index i = 0; i < u.n(); ++i) {
    Index best = 0;
    for (Index j = 1; j < u.r(); ++j)
      if (u(i, j) > u(i, best)) best = j;
    labels[i] = static_cast<int>(best);
  }
  return labels;
}

namespace {

// Minimum-cost perfect assignment on a square cost matrix (Hungarian method,
// potentials form). Returns assignment[row] = column.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

std::map<int, int> index_labels(const std::vector<int>& labels) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  return ids;
}

}  // namespace

double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorKind::LengthMismatch, "predicted and true labels differ in length (" +
                                               std::to_string(pred.size()) + " vs " +
                                               std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) return 1.0;
  const auto pid = index_labels(pred);
  const auto tid = index_labels(truth);
  const int k = static_cast<int>(std::max(pid.size(), tid.size()));
  if (pid.size() > 64 || tid.size() > 64) {
    throw Error(ErrorKind::InvalidArgument, "clustering_accuracy supports at most 64 classes");
  }
  std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < pred.size(); ++i) cost[pid.at(pred[i])][tid.at(truth[i])] -= 1.0;
  const std::vector<int> match = hungarian(cost);
  double agree = 0.0;
  for (int row = 0; row < k; ++row) agree -= cost[row][match[row]];
  return agree / static_cast<double>(pred.size());
}

ClusterOutcome run_clustering(const ClusterProblem& problem, SolverConfig cfg) {
  cfg.rank = problem.k_classes;
  ClusterOutcome out;
  out.solve = run(problem.similarity, cfg);
  out.labels = assign_labels(out.solve.u_final);
  out.accuracy = clustering_accuracy(out.labels, problem.labels_true);
  return out;
}

}  // namespace symnmf
