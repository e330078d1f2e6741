#include "regbench/spacegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "regbench/errors.hpp"

namespace regbench {

namespace {

constexpr double kKappaCap = 1e6;
constexpr double kZeroThreshold = 1e-8;

// Raise everything below max/cap up to max/cap.
void apply_kappa_cap(std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  const double floor_val = mx / kKappaCap;
  for (double& x : v) {
    if (x < floor_val) x = floor_val;
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

Dispersion dispersion_from_name(const std::string& name) {
  if (name == "low") return Dispersion::Low;
  if (name == "high") return Dispersion::High;
  throw ConfigError("unknown dispersion '" + name + "' (expected low|high)");
}

std::string dispersion_name(Dispersion d) {
  return d == Dispersion::Low ? "low" : "high";
}

BetaDist BetaDist::gamma(double shape) {
  if (!(shape > 0.0)) throw ConfigError("gamma shape must be positive");
  BetaDist b;
  b.kind = Kind::Gamma;
  b.shape = shape;
  return b;
}

BetaDist BetaDist::uniform() {
  BetaDist b;
  b.kind = Kind::Uniform;
  return b;
}

BetaDist BetaDist::from_name(const std::string& name) {
  if (name == "uniform") return uniform();
  if (name.rfind("gamma:", 0) == 0) {
    const std::string arg = name.substr(6);
    try {
      return gamma(std::stod(arg));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad gamma shape '" + arg + "'");
    }
  }
  throw ConfigError("unknown beta distribution '" + name +
                    "' (expected uniform or gamma:<shape>)");
}

std::string BetaDist::name() const {
  if (kind == Kind::Uniform) return "uniform";
  return "gamma:" + format_double(shape);
}

bool BetaDist::operator==(const BetaDist& o) const {
  if (kind != o.kind) return false;
  return kind == Kind::Uniform || shape == o.shape;
}

std::string SimConfig::canonical() const {
  std::string s;
  s += "p=" + std::to_string(features_p);
  s += ";rr=" + format_double(rank_ratio);
  s += ";disp=" + dispersion_name(dispersion);
  s += ";beta=" + beta_dist.name();
  s += ";sp=" + format_double(sparsity);
  s += ";snr=" + format_double(snr);
  s += ";n=" + std::to_string(sample_n);
  return s;
}

void SimConfig::validate() const {
  if (features_p < 2) throw ConfigError("features_p must be >= 2");
  if (!(rank_ratio > 0.0) || rank_ratio > 1.0)
    throw ConfigError("rank_ratio must lie in (0, 1]");
  if (sparsity < 0.0 || sparsity >= 1.0)
    throw ConfigError("sparsity must lie in [0, 1)");
  if (!(snr > 0.0)) throw ConfigError("snr must be positive");
  if (sample_n < 5) throw ConfigError("sample_n must be >= 5");
  if (beta_dist.kind == BetaDist::Kind::Gamma && !(beta_dist.shape > 0.0))
    throw ConfigError("gamma shape must be positive");
}

Eigen::MatrixXd CovarianceModel::sigma() const {
  return basis_q * spectrum.lambdas.asDiagonal() * basis_q.transpose();
}

EigenSpectrum finalize_spectrum(std::vector<double> raw, int p) {
  if (p < 2) throw ConfigError("spectrum length must be >= 2");
  if (raw.empty() || static_cast<int>(raw.size()) > p)
    throw ConfigError("raw draw count must lie in [1, p]");
  for (double v : raw) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("raw eigenvalue draws must be positive and finite");
  }

  const double target = static_cast<double>(raw.size());
  apply_kappa_cap(raw);
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (double& v : raw) v *= target / sum;
  apply_kappa_cap(raw);
  for (double& v : raw) {
    if (v < kZeroThreshold) v = 0.0;
  }

  EigenSpectrum spec;
  spec.lambdas = Eigen::VectorXd::Zero(p);
  std::sort(raw.begin(), raw.end(), std::greater<>());
  for (std::size_t i = 0; i < raw.size(); ++i) spec.lambdas(static_cast<int>(i)) = raw[i];
  spec.sum_target = target;
  double mn = 0.0;
  for (int i = 0; i < p; ++i) {
    const double v = spec.lambdas(i);
    if (v > 0.0) {
      ++spec.rank;
      spec.sum_realized += v;
      mn = v;  // descending order, last positive is the smallest
    }
  }
  spec.kappa = spec.rank > 0 ? spec.lambdas(0) / mn : 1.0;
  return spec;
}

EigenSpectrum sample_eigenvalues(int p, double rank_ratio, Dispersion d, Rng& rng) {
  if (p < 2) throw ConfigError("features_p must be >= 2");
  if (!(rank_ratio > 0.0) || rank_ratio > 1.0)
    throw ConfigError("rank_ratio must lie in (0, 1]");
  const int m = static_cast<int>(std::ceil(rank_ratio * p));

  std::vector<double> raw(static_cast<std::size_t>(m));
  if (d == Dispersion::Low) {
    // Pareto(alpha=2, x_m=1) via inverse CDF.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double& v : raw) v = 1.0 / std::sqrt(1.0 - unif(rng));
  } else {
    std::lognormal_distribution<double> lognorm(-2.0, 2.5);
    for (double& v : raw) v = lognorm(rng);
  }
  return finalize_spectrum(std::move(raw), p);
}

CovarianceModel build_covariance(EigenSpectrum spectrum, Rng& rng) {
  const int p = static_cast<int>(spectrum.lambdas.size());
  if (p < 2) throw ConfigError("spectrum length must be >= 2");

  Eigen::MatrixXd z(p, p);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i) z(i, j) = normal(rng);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the signs of R's diagonal makes the QR factor Haar-distributed.
  for (int j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }

  CovarianceModel cov;
  cov.basis_q = std::move(q);
  cov.spectrum = std::move(spectrum);
  return cov;
}

GroundTruth generate_beta(int p, const BetaDist& dist, double sparsity, Rng& rng) {
  if (p < 1) throw ConfigError("features_p must be >= 1");
  if (sparsity < 0.0 || sparsity >= 1.0)
    throw ConfigError("sparsity must lie in [0, 1)");

  const int k = static_cast<int>(std::floor(sparsity * p));
  GroundTruth truth;
  for (int attempt = 0;; ++attempt) {
    Eigen::VectorXd beta(p);
    if (dist.kind == BetaDist::Kind::Uniform) {
      std::uniform_int_distribution<int> coin(0, 1);
      for (int i = 0; i < p; ++i) beta(i) = coin(rng) == 0 ? -1.0 : 1.0;
    } else {
      std::gamma_distribution<double> gamma(dist.shape, 1.0);
      std::uniform_int_distribution<int> coin(0, 1);
      for (int i = 0; i < p; ++i) beta(i) = gamma(rng);
      for (int i = 0; i < p; ++i)
        if (coin(rng) == 0) beta(i) = -beta(i);
    }

    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < k; ++i) beta(order[static_cast<std::size_t>(i)]) = 0.0;

    const double nrm = beta.norm();
    if (nrm > 0.0) {
      beta *= std::sqrt(static_cast<double>(p)) / nrm;
      truth.beta = std::move(beta);
      truth.regen_attempts = attempt;
      break;
    }
    if (attempt >= 10)
      throw DegenerateSignalError(
          "coefficient draw collapsed to all zeros after 10 redraws");
  }

  for (int i = 0; i < p; ++i)
    if (truth.beta(i) != 0.0) truth.support.push_back(i);
  return truth;
}

Dataset sample_dataset(const CovarianceModel& cov, GroundTruth& truth, int n,
                       double snr, Rng& feature_rng, Rng& noise_rng) {
  if (n < 5) throw ConfigError("sample_n must be >= 5");
  if (!(snr > 0.0)) throw ConfigError("snr must be positive");
  const int p = static_cast<int>(cov.spectrum.lambdas.size());
  if (truth.beta.size() != p) throw ConfigError("beta length does not match spectrum");

  Eigen::MatrixXd z(n, p);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = normal(feature_rng);

  const Eigen::VectorXd scale = cov.spectrum.lambdas.cwiseSqrt();
  Dataset data;
  data.x = z * scale.asDiagonal() * cov.basis_q.transpose();

  const Eigen::VectorXd s = data.x * truth.beta;
  const double mean_s = s.mean();
  const double var_s = (s.array() - mean_s).square().sum() / n;
  if (!(var_s > 0.0))
    throw DegenerateSignalError("signal variance is zero for this draw");

  truth.snr_target = snr;
  truth.noise_sigma2 = var_s / snr;
  const double sigma = std::sqrt(truth.noise_sigma2);
  data.y.resize(n);
  for (int i = 0; i < n; ++i) data.y(i) = s(i) + sigma * normal(noise_rng);
  return data;
}

void split_holdout(Dataset& data, Rng& rng) {
  const int n = static_cast<int>(data.x.rows());
  if (n < 5) throw ConfigError("holdout split needs at least 5 rows");
  const int n_test = static_cast<int>(std::lround(0.2 * n));

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  data.test_idx.assign(order.begin(), order.begin() + n_test);
  data.train_idx.assign(order.begin() + n_test, order.end());
  std::sort(data.test_idx.begin(), data.test_idx.end());
  std::sort(data.train_idx.begin(), data.train_idx.end());
}

GeneratedWorld generate_world(const SimConfig& config) {
  config.validate();
  GeneratedWorld world;

  Rng eig_rng = child_rng(config.seed, Stream::Eigenvalues);
  Rng basis_rng = child_rng(config.seed, Stream::Basis);
  Rng beta_rng = child_rng(config.seed, Stream::Beta);
  Rng feature_rng = child_rng(config.seed, Stream::Features);
  Rng noise_rng = child_rng(config.seed, Stream::Noise);
  Rng split_rng = child_rng(config.seed, Stream::Split);

  EigenSpectrum spec = sample_eigenvalues(config.features_p, config.rank_ratio,
                                          config.dispersion, eig_rng);
  world.cov = build_covariance(std::move(spec), basis_rng);
  world.truth = generate_beta(config.features_p, config.beta_dist,
                              config.sparsity, beta_rng);
  try {
    world.data = sample_dataset(world.cov, world.truth, config.sample_n,
                                config.snr, feature_rng, noise_rng);
  } catch (const DegenerateSignalError&) {
    throw DegenerateSignalError("signal variance is zero for config " +
                                config.canonical());
  }
  split_holdout(world.data, split_rng);
  return world;
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  const int n = static_cast<int>(data.x.rows());
  const int p = static_cast<int>(data.x.cols());
  std::vector<char> is_test(static_cast<std::size_t>(n), 0);
  for (int i : data.test_idx) is_test[static_cast<std::size_t>(i)] = 1;

  for (int j = 0; j < p; ++j) out << "x" << (j + 1) << ",";
  out << "y,split\n";
  char buf[64];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.x(i, j));
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.y(i));
    out << buf << "," << (is_test[static_cast<std::size_t>(i)] ? "test" : "train")
        << "\n";
  }
}

Eigen::MatrixXd subset_rows(const Eigen::MatrixXd& x, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(idx[i]);
  return out;
}

Eigen::VectorXd subset_rows(const Eigen::VectorXd& y, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(idx[i]);
  return out;
}

}  // namespace regbench
