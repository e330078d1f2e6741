#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "regbench/rng.hpp"

namespace regbench {

// Eigenvalue dispersion regime of the design covariance.  Low draws from a
// Pareto tail and lands around kappa ~ 1e1; High draws log-normal and lands
// in the 1e4..1e6 band before the hard 1e6 cap.
enum class Dispersion { Low, High };

Dispersion dispersion_from_name(const std::string& name);
std::string dispersion_name(Dispersion d);

// Coefficient magnitude law: signed unit spikes or gamma-distributed
// magnitudes with random signs.
struct BetaDist {
  enum class Kind { Gamma, Uniform };
  Kind kind = Kind::Uniform;
  double shape = 1.0;  // gamma shape; ignored for Uniform

  static BetaDist gamma(double shape);
  static BetaDist uniform();
  static BetaDist from_name(const std::string& name);  // "gamma:0.2" | "uniform"
  std::string name() const;
  bool operator==(const BetaDist& o) const;
};

// One synthetic problem instance: the seven generator knobs plus a seed.
struct SimConfig {
  int features_p = 64;
  double rank_ratio = 1.0;
  Dispersion dispersion = Dispersion::Low;
  BetaDist beta_dist = BetaDist::uniform();
  double sparsity = 0.0;
  double snr = 1.0;
  int sample_n = 100;
  std::uint64_t seed = 0;

  // Stable key over the seven knobs (seed excluded); used for hashing,
  // resume bookkeeping, and run-seed derivation.
  std::string canonical() const;
  void validate() const;
};

struct EigenSpectrum {
  Eigen::VectorXd lambdas;   // length p, sorted descending, trailing zeros
  int rank = 0;              // count of strictly positive entries
  double kappa = 1.0;        // max/min over positive entries
  double sum_target = 0.0;   // pre-cap normalization target (positive draw count)
  double sum_realized = 0.0; // post-cap sum of positive entries
};

struct CovarianceModel {
  Eigen::MatrixXd basis_q;  // p x p orthonormal eigenbasis
  EigenSpectrum spectrum;
  Eigen::MatrixXd sigma() const;  // Q diag(lambda) Q^T
};

struct GroundTruth {
  Eigen::VectorXd beta;
  std::vector<int> support;  // sorted indices of exact nonzeros
  double snr_target = 0.0;
  double noise_sigma2 = 0.0;
  int regen_attempts = 0;  // redraws forced by an all-zero sparsified vector
};

struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<int> train_idx;  // sorted
  std::vector<int> test_idx;   // sorted
};

// Cap/normalize/threshold pipeline applied to raw positive eigenvalue draws:
// clamp to max/1e6, rescale the sum to the draw count, re-clamp, zero entries
// below 1e-8, pad with zeros to length p, sort descending.
EigenSpectrum finalize_spectrum(std::vector<double> raw_positive, int p);

EigenSpectrum sample_eigenvalues(int p, double rank_ratio, Dispersion d, Rng& rng);

// Haar-distributed orthonormal basis (QR of a standard normal matrix with the
// R-diagonal sign fix) wrapped around the spectrum.
CovarianceModel build_covariance(EigenSpectrum spectrum, Rng& rng);

GroundTruth generate_beta(int p, const BetaDist& dist, double sparsity, Rng& rng);

// X = Z diag(sqrt(lambda)) Q^T with Z standard normal, y = X beta + eps with
// noise variance sized to hit the requested signal-to-noise ratio.  Fills
// truth.noise_sigma2 / snr_target.
Dataset sample_dataset(const CovarianceModel& cov, GroundTruth& truth, int n,
                       double snr, Rng& feature_rng, Rng& noise_rng);

// Uniform 80/20 row split; test size is round(0.2 n).
void split_holdout(Dataset& data, Rng& rng);

struct GeneratedWorld {
  CovarianceModel cov;
  GroundTruth truth;
  Dataset data;
};

// Full pipeline with per-stage child streams derived from config.seed.
GeneratedWorld generate_world(const SimConfig& config);

// CSV with header x1..xp,y,split and 17 significant digits.
void write_dataset_csv(const Dataset& data, std::ostream& out);

// Row subsets as dense matrices.
Eigen::MatrixXd subset_rows(const Eigen::MatrixXd& x, const std::vector<int>& idx);
Eigen::VectorXd subset_rows(const Eigen::VectorXd& y, const std::vector<int>& idx);

}  // namespace regbench
