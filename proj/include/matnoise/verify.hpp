#pragma once

// Statistical verification of the three spectral properties that make a
// noise distribution triangulation-agnostic, across exact retriangulations
// of one surface:
//
//   1. per-frequency independence (off-diagonal spectral correlations ~ 0)
//   2. mesh-invariant frequency statistics (eigenvalue-matched modes have
//      matching per-mode Gaussians; W2 = |sigma_a - sigma_b| bounded by
//      |lambda_a - lambda_b| / tau^2 plus Monte-Carlo slack)
//   3. bounded high-frequency content (tail variance below a threshold)
//
// plus the scale-invariance check for the normalized sampler.
//
// Reports are deterministic: samples are generated on per-index streams and
// accumulated in fixed batch order, so the same seed reproduces the same
// report bit for bit at any thread count.

#include <Eigen/Core>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "matnoise/samplers.hpp"
#include "matnoise/solvers.hpp"

namespace matnoise {

struct Histogram {
  Eigen::VectorXd edges;  // bins + 1 ascending edges
  Eigen::VectorXi counts;
};

struct SpectralStats {
  std::vector<int> indices;  // tracked 1-based mode indices
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd coeffs;  // indices.size() x sample_count retained projections
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;  // unbiased
  std::vector<Histogram> histograms;
  std::int64_t sample_count = 0;
};

struct StatsOptions {
  int histogram_bins = 64;
  double histogram_span_sigmas = 4.0;
  int threads = 1;
  Eigen::Index batch = 256;
};

// Draws N samples on streams 0..N-1, projects each onto the tracked modes and
// accumulates moments plus one histogram per mode. N must be at least 100.
SpectralStats empirical_spectral_stats(const FieldSampler& sampler, const Spectrum& spectrum,
                                       const Eigen::VectorXd& mass, std::int64_t samples,
                                       const std::vector<int>& indices, const StatsOptions& options = {});

struct Property1Result {
  double max_abs_correlation = 0.0;
  double threshold = 0.0;
  int block = 0;
  bool pass = false;
};

Property1Result check_property1(const SpectralStats& stats, int block = 30, double threshold = 0.03);

struct MatchedPair {
  int index_a = 0, index_b = 0;
  double lambda_a = 0.0, lambda_b = 0.0;
  double sigma_a = 0.0, sigma_b = 0.0;
  double w2 = 0.0;     // |sigma_a - sigma_b|
  double bound = 0.0;  // |lambda_a - lambda_b| / tau^2
  double slack = 0.0;  // 3 sigma of the std-dev estimators, both sides
  double w2_squared_form = 0.0;  // ((la+tau)^-1 - (lb+tau)^-1)^2, recorded for reference
  double bound_squared_form = 0.0;  // (lambda difference)^2 / tau^4
  bool pass = false;
};

struct Property2Result {
  std::vector<MatchedPair> pairs;
  double match_tol = 0.0;
  bool pass = false;
};

// Greedy value-based matching of the two ascending eigenvalue lists; matching
// is index-free because refinement shifts mode indices.
Property2Result check_property2(const SpectralStats& stats_a, const SpectralStats& stats_b, double tau,
                                double match_tol = 0.05);

struct Property3Result {
  Eigen::Index k = 0;
  double tail_variance = 0.0;  // empirical sum_{i>=k} Var
  double epsilon = 0.0;
  double theoretical_tail = 0.0;  // sum_{i>=k} 1/(lambda_i+tau)^2
  double analytic_bound = 0.0;    // sum_{i>=k} A^2/i^2
  bool pass = false;
};

// Requires stats tracking the full available spectrum (modes 1..K).
Property3Result check_property3(const SpectralStats& stats, Eigen::Index k, double epsilon, double tau,
                                double area);

struct ScaleInvarianceResult {
  std::vector<double> scales;
  std::vector<double> rel_deviation;  // normalized sampler, per scale
  double max_rel_deviation = 0.0;
  double tolerance = 1e-8;
  std::vector<double> fixed_tau_deviation;  // same protocol without normalization, reported only
  double fixed_tau = 0.0;
  bool pass = false;
};

// Runs the normalized sampler with identical (seed, stream) on the mesh and
// on each scaled copy; the outputs must agree to `tolerance` relative in the
// max norm. The fixed-tau deviations demonstrate why normalization matters.
ScaleInvarianceResult scale_invariance_test(const TriMesh& mesh, double c, const std::vector<double>& scales,
                                            std::uint64_t seed, double fixed_tau = 100.0);

// Non-uniform retriangulation of the identical surface: bisects every edge
// whose midpoint x-coordinate lies above the median midpoint.
TriMesh nonuniform_refinement(const TriMesh& mesh);

// ---------------------------------------------------------------------------
// Batch protocol used by the CLI and the acceptance suite.

struct VerifyOptions {
  std::int64_t samples = 20000;
  std::int64_t tail_samples = 2000;
  int block = 30;
  double corr_threshold = 0.03;
  double match_tol = 0.05;
  Eigen::Index tail_start = 30;
  double epsilon = 0.0;  // 0 = auto: 2.5x the theoretical Matern tail at tail_start
  std::vector<double> scales;
  double scale_c = 1.0;
  int threads = 1;
  std::vector<int> histogram_indices = {2, 10, 30};
};

struct MeshSummary {
  Eigen::Index vertices = 0, faces = 0, modes = 0;
  double area = 0.0, gamma = 0.0, resolved_tau = 0.0;
};

struct HistogramDump {
  int mesh = 0;
  int index = 0;
  double eigenvalue = 0.0;
  Histogram histogram;
};

struct AgnosticismReport {
  SamplerConfig sampler;
  VerifyOptions options;
  std::vector<MeshSummary> meshes;
  Property1Result property1;  // worst case over meshes
  std::vector<Property1Result> property1_per_mesh;
  std::vector<Property2Result> property2;  // mesh 0 vs mesh j+1
  std::vector<Property3Result> property3;  // per mesh
  std::optional<ScaleInvarianceResult> scale;
  std::vector<HistogramDump> histograms;
  bool all_pass = false;
};

// Full protocol over retriangulations of one surface: per-mesh spectra and
// stats, property 1 and 3 per mesh, property 2 against the first mesh, and
// the scale test when scales are given.
AgnosticismReport run_verification(const std::vector<TriMesh>& meshes, const SamplerConfig& sampler,
                                   const VerifyOptions& options);

nlohmann::json report_to_json(const AgnosticismReport& report);

}  // namespace matnoise
