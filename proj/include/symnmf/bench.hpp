#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "symnmf/matcore.hpp"
#include "symnmf/solvers.hpp"

namespace symnmf {

enum class NoiseDist { Gaussian, Uniform, Lognormal };

std::string_view to_string(NoiseDist d);
NoiseDist parse_noise_dist(std::string_view name);  // gaussian | uniform | lognormal

struct SyntheticSpec {
  Index n = 300;
  Index r = 20;
  double sigma = 0.1;
  NoiseDist noise = NoiseDist::Gaussian;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  SymmetricMatrix x;
  Factor u_true;
};

// X = U* U*^T + sigma (|N| + |N|^T) / 2 with U* = |G|, G standard Gaussian.
// Noise: standard Gaussian, uniform on [0, 1), or lognormal(0, 1).
SyntheticData gen_synthetic(const SyntheticSpec& spec);

struct ClusterProblem {
  SymmetricMatrix similarity;
  std::vector<int> labels_true;  // 0-based
  int k_classes = 0;
};

// Contiguous balanced classes; within-class weights uniform on
// [p_in - 0.1, p_in], cross-class uniform on [0, p_out], zero diagonal.
// Throws InvalidProbabilities unless 0 <= p_out < p_in <= 1.
ClusterProblem gen_planted_clusters(Index n, int k_classes, double p_in, double p_out,
                                    std::uint64_t seed);

// Self-tuning Gaussian kernel on mutual-kNN support, normalized as
// D^{-1/2} A D^{-1/2}. Rows of `features` are items. Scale sigma_i is the
// distance to the knn-th neighbour, floored at 1e-12.
SymmetricMatrix build_similarity(const Matrix& features, int knn = 7);

// 0-based argmax per row; ties go to the lowest column.
std::vector<int> assign_labels(const Factor& u);

// Best agreement over relabelings of pred, via optimal assignment on the
// confusion matrix. Throws LengthMismatch; at most 64 distinct labels per side.
double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

struct ClusterOutcome {
  std::vector<int> labels;
  double accuracy = 0.0;
  SolverResult solve;
};

// Factorizes the similarity at rank k_classes with cfg (cfg.rank is overridden)
// and scores the argmax labels.
ClusterOutcome run_clustering(const ClusterProblem& problem, SolverConfig cfg);

}  // namespace symnmf
