#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "regbench/errors.hpp"
#include "regbench/rng.hpp"
#include "regbench/spacegen.hpp"

using namespace regbench;

TEST_CASE("finalize spectrum: capping pins the smallest eigenvalue") {
  const auto spec = finalize_spectrum({1.0, 1e-9}, 2);
  REQUIRE(spec.rank == 2);
  CHECK(spec.lambdas(1) == doctest::Approx(1e-6 * spec.lambdas(0)).epsilon(1e-12));
  CHECK(spec.kappa == doctest::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("finalize spectrum: normalization hits the draw-count target") {
  const auto spec = finalize_spectrum({5.0, 3.0, 2.0}, 5);
  CHECK(spec.rank == 3);
  CHECK(spec.sum_target == doctest::Approx(3.0));
  CHECK(spec.sum_realized == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(spec.lambdas(0) == doctest::Approx(1.5));
  CHECK(spec.lambdas(3) == 0.0);
  CHECK(spec.lambdas(4) == 0.0);
}

TEST_CASE("finalize spectrum: invalid inputs rejected") {
  CHECK_THROWS_AS(finalize_spectrum({1.0}, 1), ConfigError);
  CHECK_THROWS_AS(finalize_spectrum({}, 4), ConfigError);
  CHECK_THROWS_AS(finalize_spectrum({1.0, 1.0, 1.0}, 2), ConfigError);
  CHECK_THROWS_AS(finalize_spectrum({1.0, -1.0}, 4), ConfigError);
  CHECK_THROWS_AS(finalize_spectrum({1.0, 0.0}, 4), ConfigError);
}

TEST_CASE("sampled spectra keep the hard invariants over 1000 configs") {
  Rng meta(20240);
  std::uniform_int_distribution<int> pick_p(8, 128);
  std::uniform_real_distribution<double> pick_rr(0.05, 1.0);

  for (int trial = 0; trial < 1000; ++trial) {
    const int p = pick_p(meta);
    const double rr = pick_rr(meta);
    const auto d = trial % 2 == 0 ? Dispersion::Low : Dispersion::High;
    Rng rng(meta());
    const auto spec = sample_eigenvalues(p, rr, d, rng);

    REQUIRE(spec.lambdas.size() == p);
    CHECK(spec.rank == static_cast<int>(std::ceil(rr * p)));

    double mx = 0.0, mn = 0.0, sum = 0.0;
    for (int i = 0; i < p; ++i) {
      const double v = spec.lambdas(i);
      if (i > 0) CHECK(v <= spec.lambdas(i - 1));
      if (i >= spec.rank) {
        CHECK(v == 0.0);
        continue;
      }
      CHECK(v >= 1e-8);
      mx = std::max(mx, v);
      mn = i == spec.rank - 1 ? v : mn;
      sum += v;
    }
    CHECK(mx / mn <= 1e6 * (1.0 + 1e-12));
    CHECK(spec.kappa == doctest::Approx(mx / mn).epsilon(1e-12));
    CHECK(std::abs(sum - spec.sum_target) <= 1e-6 * spec.sum_target);
  }
}

TEST_CASE("dispersion regimes land in their condition-number bands") {
  std::vector<double> low_kappas, high_kappas;
  for (int s = 0; s < 200; ++s) {
    Rng rng_low(child_seed(9000 + static_cast<std::uint64_t>(s), Stream::Eigenvalues));
    Rng rng_high(child_seed(7000 + static_cast<std::uint64_t>(s), Stream::Eigenvalues));
    low_kappas.push_back(sample_eigenvalues(64, 1.0, Dispersion::Low, rng_low).kappa);
    high_kappas.push_back(
        sample_eigenvalues(64, 1.0, Dispersion::High, rng_high).kappa);
  }
  std::sort(low_kappas.begin(), low_kappas.end());
  std::sort(high_kappas.begin(), high_kappas.end());
  const double low_med = low_kappas[100];
  const double high_med = high_kappas[100];
  CHECK(low_med >= 3.0);
  CHECK(low_med <= 30.0);
  CHECK(high_med >= 1e4);
  CHECK(high_med <= 1e6);
  CHECK(high_kappas.back() <= 1e6 * (1.0 + 1e-12));
}

TEST_CASE("covariance: flat spectrum collapses to the identity") {
  Rng rng(11);
  const auto spec = finalize_spectrum(std::vector<double>(8, 1.0), 8);
  const auto cov = build_covariance(spec, rng);
  const Eigen::MatrixXd sigma = cov.sigma();
  CHECK((sigma - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("covariance: basis orthonormal, trace preserved, spectrum recovered") {
  Rng rng(12);
  auto spec = sample_eigenvalues(16, 1.0, Dispersion::High, rng);
  const Eigen::VectorXd lambdas = spec.lambdas;
  const auto cov = build_covariance(std::move(spec), rng);

  const Eigen::MatrixXd q = cov.basis_q;
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff() <
        1e-10);

  const Eigen::MatrixXd sigma = cov.sigma();
  CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(sigma.trace() - lambdas.sum()) < 1e-9);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  REQUIRE(es.info() == Eigen::Success);
  Eigen::VectorXd recovered = es.eigenvalues().reverse();
  for (int i = 0; i < 16; ++i) {
    const double denom = std::max(1e-12, lambdas(i));
    CHECK(std::abs(recovered(i) - lambdas(i)) / denom < 1e-8);
  }
}

TEST_CASE("coefficients: uniform draw is a normalization fixed point") {
  Rng rng(31);
  const auto truth = generate_beta(4, BetaDist::uniform(), 0.0, rng);
  REQUIRE(truth.beta.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(truth.beta(i)) == doctest::Approx(1.0));
  }
  CHECK(truth.beta.norm() == doctest::Approx(2.0));
  CHECK(truth.support.size() == 4);
  CHECK(truth.regen_attempts == 0);
}

TEST_CASE("coefficients: sparsity count and norm are exact") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(child_seed(s, Stream::Beta));
    const auto truth = generate_beta(128, BetaDist::gamma(0.2), 0.15, rng);
    long zeros = 0;
    for (int i = 0; i < 128; ++i) zeros += truth.beta(i) == 0.0 ? 1 : 0;
    CHECK(zeros == 19);  // floor(0.15 * 128)
    CHECK(truth.support.size() == 128 - 19);
    CHECK(std::abs(truth.beta.norm() - std::sqrt(128.0)) < 1e-9);
    CHECK(std::is_sorted(truth.support.begin(), truth.support.end()));
    for (int j : truth.support) CHECK(truth.beta(j) != 0.0);
  }
}

TEST_CASE("coefficients: gamma magnitudes match a replayed sampler") {
  std::vector<double> emitted, oracle;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(child_seed(s, Stream::Beta, 1));
    const auto truth = generate_beta(64, BetaDist::gamma(0.04), 0.0, rng);
    for (int i = 0; i < 64; ++i) emitted.push_back(std::abs(truth.beta(i)));

    Rng ref(child_seed(s + 1000, Stream::Beta, 2));
    std::gamma_distribution<double> gamma(0.04, 1.0);
    Eigen::VectorXd raw(64);
    for (int i = 0; i < 64; ++i) raw(i) = gamma(ref);
    raw *= std::sqrt(64.0) / raw.norm();
    for (int i = 0; i < 64; ++i) oracle.push_back(raw(i));
  }
  CHECK(test::ks_statistic(emitted, oracle) < 0.1);

  // heavy concentration near zero with rare large spikes
  long tiny = 0, large = 0;
  for (double v : emitted) {
    tiny += v < 1e-3 ? 1 : 0;
    large += v > 1.0 ? 1 : 0;
  }
  CHECK(tiny > static_cast<long>(emitted.size()) / 2);
  CHECK(large > 0);
}

TEST_CASE("coefficients: invalid parameters rejected") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_beta(0, BetaDist::uniform(), 0.0, rng), ConfigError);
  CHECK_THROWS_AS(generate_beta(8, BetaDist::uniform(), 1.0, rng), ConfigError);
  CHECK_THROWS_AS(generate_beta(8, BetaDist::uniform(), -0.1, rng), ConfigError);
  CHECK_THROWS_AS(BetaDist::gamma(0.0), ConfigError);
  CHECK_THROWS_AS(BetaDist::from_name("cauchy"), ConfigError);
  CHECK(BetaDist::from_name("gamma:0.04") == BetaDist::gamma(0.04));
  CHECK(BetaDist::from_name("uniform") == BetaDist::uniform());
}

TEST_CASE("dataset: unit snr equates noise and signal variance") {
  Rng eig(41), basis(42), beta(43), feat(44), noise(45);
  auto spec = sample_eigenvalues(16, 1.0, Dispersion::Low, eig);
  const auto cov = build_covariance(std::move(spec), basis);
  auto truth = generate_beta(16, BetaDist::uniform(), 0.0, beta);
  const auto data = sample_dataset(cov, truth, 200, 1.0, feat, noise);

  const Eigen::VectorXd s = data.x * truth.beta;
  const double var_s = (s.array() - s.mean()).square().sum() / 200.0;
  CHECK(truth.noise_sigma2 == doctest::Approx(var_s).epsilon(1e-12));
  CHECK(truth.snr_target == 1.0);
}

TEST_CASE("dataset: realized snr tracks the target tier") {
  int within = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SimConfig c;
    c.features_p = 32;
    c.sample_n = 10000;
    c.snr = 0.2;
    c.seed = 500 + s;
    const auto world = generate_world(c);

    const Eigen::VectorXd sig = world.data.x * world.truth.beta;
    const Eigen::VectorXd eps = world.data.y - sig;
    const double var_s = (sig.array() - sig.mean()).square().sum() / 10000.0;
    const double var_e = (eps.array() - eps.mean()).square().sum() / 10000.0;
    const double realized = var_s / var_e;
    within += std::abs(realized - 0.2) <= 0.15 * 0.2 ? 1 : 0;
  }
  CHECK(within == 20);
}

TEST_CASE("dataset: sample covariance converges to the model covariance") {
  Rng eig(61), basis(62), beta(63), feat(64), noise(65);
  auto spec = sample_eigenvalues(16, 1.0, Dispersion::Low, eig);
  const auto cov = build_covariance(std::move(spec), basis);
  auto truth = generate_beta(16, BetaDist::uniform(), 0.0, beta);
  const auto data = sample_dataset(cov, truth, 50000, 1.0, feat, noise);

  const Eigen::MatrixXd centered =
      data.x.rowwise() - data.x.colwise().mean();
  const Eigen::MatrixXd sample_cov =
      centered.transpose() * centered / static_cast<double>(data.x.rows());
  const Eigen::MatrixXd sigma = cov.sigma();
  CHECK((sample_cov - sigma).norm() / sigma.norm() < 0.05);
}

TEST_CASE("dataset: signal orthogonal to the attained space is degenerate") {
  Rng feat(72), noise(73);
  CovarianceModel cov;
  cov.spectrum = finalize_spectrum({1.0}, 4);  // rank 1
  cov.basis_q = Eigen::MatrixXd::Identity(4, 4);
  GroundTruth truth;
  truth.beta = Eigen::VectorXd::Unit(4, 1);  // axis with zero eigenvalue
  truth.support = {1};
  CHECK_THROWS_AS(sample_dataset(cov, truth, 100, 1.0, feat, noise),
                  DegenerateSignalError);
}

TEST_CASE("holdout split: sizes, disjointness, determinism") {
  Dataset d;
  d.x = Eigen::MatrixXd::Zero(100, 2);
  d.y = Eigen::VectorXd::Zero(100);
  Rng rng(81);
  split_holdout(d, rng);
  CHECK(d.test_idx.size() == 20);
  CHECK(d.train_idx.size() == 80);

  std::vector<char> seen(100, 0);
  for (int i : d.test_idx) seen[static_cast<std::size_t>(i)] += 1;
  for (int i : d.train_idx) seen[static_cast<std::size_t>(i)] += 1;
  for (char c : seen) CHECK(c == 1);

  Dataset tiny;
  tiny.x = Eigen::MatrixXd::Zero(10, 1);
  tiny.y = Eigen::VectorXd::Zero(10);
  Rng rng2(82);
  split_holdout(tiny, rng2);
  CHECK(tiny.test_idx.size() == 2);

  Dataset too_small;
  too_small.x = Eigen::MatrixXd::Zero(4, 1);
  too_small.y = Eigen::VectorXd::Zero(4);
  Rng rng3(83);
  CHECK_THROWS_AS(split_holdout(too_small, rng3), ConfigError);
}

TEST_CASE("holdout split: seed replay and divergence at scale") {
  Dataset a, b, c;
  for (Dataset* d : {&a, &b, &c}) {
    d->x = Eigen::MatrixXd::Zero(100000, 1);
    d->y = Eigen::VectorXd::Zero(100000);
  }
  Rng r1(901), r2(901), r3(902);
  split_holdout(a, r1);
  split_holdout(b, r2);
  split_holdout(c, r3);
  CHECK(a.test_idx == b.test_idx);
  CHECK(a.train_idx == b.train_idx);
  CHECK(a.test_idx != c.test_idx);
}

TEST_CASE("generated worlds replay bit-identically per seed") {
  SimConfig c;
  c.features_p = 16;
  c.rank_ratio = 0.9;
  c.dispersion = Dispersion::High;
  c.beta_dist = BetaDist::gamma(0.2);
  c.sparsity = 0.15;
  c.snr = 0.2;
  c.sample_n = 100;
  c.seed = 424242;

  const auto w1 = generate_world(c);
  const auto w2 = generate_world(c);
  CHECK((w1.data.x.array() == w2.data.x.array()).all());
  CHECK((w1.data.y.array() == w2.data.y.array()).all());
  CHECK((w1.truth.beta.array() == w2.truth.beta.array()).all());
  CHECK(w1.data.train_idx == w2.data.train_idx);
  CHECK(w1.data.test_idx == w2.data.test_idx);

  SimConfig c2 = c;
  c2.seed = 424243;
  const auto w3 = generate_world(c2);
  CHECK_FALSE((w1.data.y.array() == w3.data.y.array()).all());

  // stage streams are independent: the coefficient stage replays on its own
  Rng beta_rng = child_rng(c.seed, Stream::Beta);
  const auto replayed = generate_beta(16, c.beta_dist, c.sparsity, beta_rng);
  CHECK((replayed.beta.array() == w1.truth.beta.array()).all());
}

TEST_CASE("rank-deficient spectra carry through to the design matrix") {
  SimConfig c;
  c.features_p = 16;
  c.rank_ratio = 0.9;
  c.dispersion = Dispersion::Low;
  c.sample_n = 100;
  c.seed = 99;
  const auto world = generate_world(c);
  CHECK(world.cov.spectrum.rank == 15);  // ceil(0.9 * 16)

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(world.data.x);
  const Eigen::VectorXd sv = svd.singularValues();
  int numerical_rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    numerical_rank += sv(i) > 1e-8 * sv(0) ? 1 : 0;
  CHECK(numerical_rank == world.cov.spectrum.rank);
}

TEST_CASE("dataset export: header, split labels, value round trip") {
  SimConfig c;
  c.features_p = 4;
  c.sample_n = 10;
  c.seed = 7;
  const auto world = generate_world(c);

  std::ostringstream out;
  write_dataset_csv(world.data, out);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "x1,x2,x3,x4,y,split");

  int rows = 0, test_rows = 0;
  std::string first_cell;
  while (std::getline(in, line)) {
    if (rows == 0) first_cell = line.substr(0, line.find(','));
    ++rows;
    if (line.size() >= 4 && line.compare(line.size() - 4, 4, "test") == 0)
      ++test_rows;
  }
  CHECK(rows == 10);
  CHECK(test_rows == 2);
  CHECK(std::strtod(first_cell.c_str(), nullptr) == world.data.x(0, 0));
}

TEST_CASE("config validation rejects out-of-domain knobs") {
  SimConfig c;
  c.features_p = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.rank_ratio = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.sparsity = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.snr = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.sample_n = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_NOTHROW(SimConfig{}.validate());
}

TEST_CASE("canonical keys separate configs and ignore the seed") {
  SimConfig a;
  SimConfig b;
  b.seed = 777;
  CHECK(a.canonical() == b.canonical());
  b.snr = 0.04;
  CHECK(a.canonical() != b.canonical());
}
