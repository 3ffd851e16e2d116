#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "symnmf/bench.hpp"
#include "symnmf/errors.hpp"

using namespace symnmf;

TEST_CASE("synthetic data is symmetric, nonnegative and seed-stable") {
  SyntheticSpec spec;
  spec.n = 30;
  spec.r = 4;
  spec.seed = 5;
  for (const NoiseDist d : {NoiseDist::Gaussian, NoiseDist::Uniform, NoiseDist::Lognormal}) {
    spec.noise = d;
    const SyntheticData a = gen_synthetic(spec);
    const SyntheticData b = gen_synthetic(spec);
    CHECK(a.x.entries() == b.x.entries());
    CHECK(a.x.entries() == a.x.entries().transpose());
    CHECK(a.x.entries().minCoeff() >= 0.0);
    CHECK(a.u_true.r() == 4);
  }
  spec.sigma = 0.0;
  const SyntheticData clean = gen_synthetic(spec);
  const Matrix& u = clean.u_true.matrix();
  CHECK((clean.x.entries() - u * u.transpose()).norm() <= 1e-12 * clean.x.fro());
  CHECK(parse_noise_dist("lognormal") == NoiseDist::Lognormal);
  CHECK_THROWS_AS(parse_noise_dist("cauchy"), Error);
}

TEST_CASE("planted clusters have block structure") {
  const ClusterProblem p = gen_planted_clusters(12, 3, 0.9, 0.1, 2);
  CHECK(p.k_classes == 3);
  CHECK(p.labels_true == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2});
  const Matrix& s = p.similarity.entries();
  for (Index i = 0; i < 12; ++i) {
    CHECK(s(i, i) == 0.0);
    for (Index j = 0; j < 12; ++j) {
      if (i == j) continue;
      if (p.labels_true[i] == p.labels_true[j]) {
        CHECK(s(i, j) >= 0.8 - 1e-15);
        CHECK(s(i, j) <= 0.9);
      } else {
        CHECK(s(i, j) <= 0.1);
      }
    }
  }
  CHECK_THROWS_WITH_AS(gen_planted_clusters(12, 3, 0.1, 0.2, 0),
                       doctest::Contains("InvalidProbabilities"), Error);
  CHECK_THROWS_AS(gen_planted_clusters(12, 3, 1.2, 0.1, 0), Error);
}

TEST_CASE("accuracy agrees with brute-force relabeling") {
  CHECK(clustering_accuracy({0, 1, 0, 1}, {0, 0, 1, 1}) == doctest::Approx(0.5));
  CHECK(clustering_accuracy({2, 2, 0, 0, 1}, {0, 0, 1, 1, 2}) == doctest::Approx(1.0));
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> pred(15), truth(15);
    for (int i = 0; i < 15; ++i) {
      pred[i] = lab(rng);
      truth[i] = lab(rng);
    }
    CHECK(clustering_accuracy(pred, truth) ==
          doctest::Approx(oracles::accuracy_by_permutation(pred, truth, 4)).epsilon(1e-15));
  }
  CHECK_THROWS_WITH_AS(clustering_accuracy({0, 1}, {0}), doctest::Contains("LengthMismatch"), Error);
}

TEST_CASE("labels are row argmaxes with ties to the first column") {
  Matrix u(3, 2);
  u << 1, 2, 3, 0, 1, 1;
  CHECK(assign_labels(Factor(u)) == std::vector<int>{1, 0, 0});
}

TEST_CASE("similarity from three separated blobs") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 0.1);
  Matrix f(45, 2);
  for (int i = 0; i < 45; ++i) {
    const int c = i / 15;
    f(i, 0) = 10.0 * c + g(rng);
    f(i, 1) = (c == 1 ? 10.0 : 0.0) + g(rng);
  }
  const SymmetricMatrix s = build_similarity(f, 7);
  const Matrix& a = s.entries();
  CHECK(a == a.transpose());
  CHECK(a.minCoeff() >= 0.0);
  CHECK(oracles::count_components(a) == 3);
  CHECK(spectral_extremes(s).spec_norm <= 1.0 + 1e-8);
  CHECK_THROWS_AS(build_similarity(f.topRows(5), 7), Error);
}

TEST_CASE("clustering with no cross-class weight is exact") {
  const ClusterProblem p = gen_planted_clusters(60, 3, 0.9, 0.0, 4);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::SymANLS;
  cfg.max_iters = 2000;
  cfg.timing = false;
  const ClusterOutcome out = run_clustering(p, cfg);
  CHECK(out.accuracy == 1.0);
  CHECK(std::set<int>(out.labels.begin(), out.labels.end()).size() == 3);
}
