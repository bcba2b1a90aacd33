#pragma once

// The noise models:
//
//   naive    f_i ~ N(0, 1) per vertex
//   white    w = M^(-1/2) n,           spectral law N(0, I)
//   matern   (L + tau*M) f = sqrt(M) n, spectral law N(0, (Lambda + tau I)^-2)
//   matern normalized   tau = c*Gamma, result scaled by sqrt(Gamma); the
//            output is invariant to uniform rescaling of the mesh
//   explicit f = sum_{i<=k} chi_i / (lambda_i + tau) phi_i, chi ~ N(0, I)
//
// sqrt(M) is the entrywise square root of the lumped mass diagonal; the
// right-hand side sqrt(M) n folds the white-noise sample and the screened
// Poisson right-hand side M w into one expression.
//
// Randomness: RngStream(seed, stream) yields a reproducible standard-normal
// sequence via the Box-Muller transform over 53-bit uniforms from a
// mt19937_64 seeded with the (seed, stream) words. Bulk runs give each sample
// its own stream (stream = sample index), so parallel generation is
// reproducible regardless of scheduling. The *_from_gaussian variants accept
// the underlying Gaussian vector directly, which is what the deterministic
// equivalence tests feed.

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>

#include "matnoise/mesh.hpp"
#include "matnoise/operators.hpp"
#include "matnoise/solvers.hpp"

namespace matnoise {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index n);

 private:
  double uniform01();  // in (0, 1]
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

Eigen::VectorXd sample_naive(Eigen::Index n, RngStream& rng);

Eigen::VectorXd sample_white(const Eigen::VectorXd& mass, RngStream& rng);

Eigen::VectorXd matern_from_gaussian(const SpdFactor& factor, const Eigen::VectorXd& mass,
                                     const Eigen::VectorXd& iid_normal);
Eigen::VectorXd sample_matern(const SpdFactor& factor, const Eigen::VectorXd& mass, RngStream& rng);

// Assembles the operators, sets tau = c * Gamma, runs the screened solve and
// returns sqrt(Gamma) * f.
Eigen::VectorXd matern_normalized_from_gaussian(const TriMesh& mesh, double c, const Eigen::VectorXd& iid_normal);
Eigen::VectorXd sample_matern_normalized(const TriMesh& mesh, double c, RngStream& rng);

Eigen::VectorXd explicit_from_gaussian(const Spectrum& spectrum, double tau, Eigen::Index k,
                                       const Eigen::VectorXd& chi);
Eigen::VectorXd sample_explicit(const Spectrum& spectrum, double tau, Eigen::Index k, RngStream& rng);

// ---------------------------------------------------------------------------
// A noise model bound to one mesh, drawing by stream index.

enum class NoiseModel { kNaive, kWhite, kMatern, kMaternNormalized, kExplicit };

struct SamplerConfig {
  NoiseModel model = NoiseModel::kMatern;
  double tau = 100.0;        // fixed-screening models
  double c = 1.0;            // normalized model: tau = c * Gamma
  bool no_screening = false; // ablation: tau floored at 1e-8 * Gamma
  Eigen::Index explicit_modes = 0;  // 0 = all available
  double gain = 1.0;         // output amplitude, applied to every model
  std::uint64_t seed = 0;
};

const char* to_string(NoiseModel model);
NoiseModel noise_model_from_string(const std::string& name);

class FieldSampler {
 public:
  // `spectrum` is only required for the explicit model.
  FieldSampler(const MeshOperators& ops, const Spectrum* spectrum, const SamplerConfig& config);

  Eigen::VectorXd draw(std::uint64_t stream) const;
  // Columns are streams first_stream .. first_stream + count - 1.
  Eigen::MatrixXd draw_block(std::uint64_t first_stream, Eigen::Index count) const;

  Eigen::Index size() const { return mass_.size(); }
  double resolved_tau() const { return tau_; }
  double gamma() const { return gamma_; }
  const SamplerConfig& config() const { return config_; }

 private:
  SamplerConfig config_;
  Eigen::VectorXd mass_;
  const Spectrum* spectrum_ = nullptr;
  std::optional<SpdFactor> factor_;
  double gamma_ = 0.0;
  double tau_ = 0.0;
};

}  // namespace matnoise
