#include "matnoise/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace matnoise {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform01() {
  // 53-bit mantissa, shifted into (0, 1] so log() below is safe.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd RngStream::normal_vector(Eigen::Index n) {
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = normal();
  return out;
}

Eigen::VectorXd sample_naive(Eigen::Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_naive: need at least one vertex");
  return rng.normal_vector(n);
}

Eigen::VectorXd sample_white(const Eigen::VectorXd& mass, RngStream& rng) {
  for (Eigen::Index i = 0; i < mass.size(); ++i)
    if (!(mass[i] > 0.0)) throw std::invalid_argument("sample_white: mass entry is not positive");
  return rng.normal_vector(mass.size()).cwiseQuotient(mass.cwiseSqrt());
}

Eigen::VectorXd matern_from_gaussian(const SpdFactor& factor, const Eigen::VectorXd& mass,
                                     const Eigen::VectorXd& iid_normal) {
  if (mass.size() != factor.size() || iid_normal.size() != factor.size())
    throw std::invalid_argument("matern sampler: dimension mismatch");
  const Eigen::VectorXd rhs = mass.cwiseSqrt().cwiseProduct(iid_normal);
  return factor.solve(rhs);
}

Eigen::VectorXd sample_matern(const SpdFactor& factor, const Eigen::VectorXd& mass, RngStream& rng) {
  return matern_from_gaussian(factor, mass, rng.normal_vector(factor.size()));
}

Eigen::VectorXd matern_normalized_from_gaussian(const TriMesh& mesh, double c, const Eigen::VectorXd& iid_normal) {
  if (!(c > 0.0)) throw std::invalid_argument("normalized sampler: c must be positive");
  const MeshOperators ops = assemble_operators(mesh);
  const SpdFactor factor(screened_operator(ops.laplacian, ops.mass, c * ops.gamma));
  return std::sqrt(ops.gamma) * matern_from_gaussian(factor, ops.mass, iid_normal);
}

Eigen::VectorXd sample_matern_normalized(const TriMesh& mesh, double c, RngStream& rng) {
  return matern_normalized_from_gaussian(mesh, c, rng.normal_vector(mesh.vertex_count()));
}

Eigen::VectorXd explicit_from_gaussian(const Spectrum& spectrum, double tau, Eigen::Index k,
                                       const Eigen::VectorXd& chi) {
  if (k < 0 || k > spectrum.modes()) throw std::invalid_argument("explicit sampler: k out of range");
  if (chi.size() != k) throw std::invalid_argument("explicit sampler: need one variate per mode");
  Eigen::VectorXd field = Eigen::VectorXd::Zero(spectrum.eigenvectors.rows());
  if (k == 0) return field;
  const Eigen::VectorXd weights = chi.array() / (spectrum.eigenvalues.head(k).array() + tau);
  return spectrum.eigenvectors.leftCols(k) * weights;
}

Eigen::VectorXd sample_explicit(const Spectrum& spectrum, double tau, Eigen::Index k, RngStream& rng) {
  return explicit_from_gaussian(spectrum, tau, k, rng.normal_vector(k));
}

const char* to_string(NoiseModel model) {
  switch (model) {
    case NoiseModel::kNaive: return "naive";
    case NoiseModel::kWhite: return "white";
    case NoiseModel::kMatern: return "matern";
    case NoiseModel::kMaternNormalized: return "matern-normalized";
    case NoiseModel::kExplicit: return "explicit";
  }
  return "unknown";
}

NoiseModel noise_model_from_string(const std::string& name) {
  if (name == "naive") return NoiseModel::kNaive;
  if (name == "white") return NoiseModel::kWhite;
  if (name == "matern") return NoiseModel::kMatern;
  if (name == "matern-normalized") return NoiseModel::kMaternNormalized;
  if (name == "explicit") return NoiseModel::kExplicit;
  throw std::invalid_argument("unknown noise model '" + name + "'");
}

FieldSampler::FieldSampler(const MeshOperators& ops, const Spectrum* spectrum, const SamplerConfig& config)
    : config_(config), mass_(ops.mass), spectrum_(spectrum), gamma_(ops.gamma) {
  switch (config_.model) {
    case NoiseModel::kNaive:
    case NoiseModel::kWhite:
      break;
    case NoiseModel::kMatern:
      tau_ = config_.no_screening ? 1e-8 * gamma_ : config_.tau;
      factor_.emplace(screened_operator(ops.laplacian, ops.mass, tau_));
      break;
    case NoiseModel::kMaternNormalized:
      if (!(config_.c > 0.0)) throw std::invalid_argument("normalized sampler: c must be positive");
      tau_ = config_.c * gamma_;
      factor_.emplace(screened_operator(ops.laplacian, ops.mass, tau_));
      break;
    case NoiseModel::kExplicit:
      if (spectrum_ == nullptr) throw std::invalid_argument("explicit sampler needs a spectrum");
      tau_ = config_.no_screening ? 1e-8 * gamma_ : config_.tau;
      if (config_.explicit_modes < 0 || config_.explicit_modes > spectrum_->modes())
        throw std::invalid_argument("explicit sampler: k out of range");
      break;
  }
}

Eigen::VectorXd FieldSampler::draw(std::uint64_t stream) const {
  RngStream rng(config_.seed, stream);
  Eigen::VectorXd field;
  switch (config_.model) {
    case NoiseModel::kNaive:
      field = sample_naive(mass_.size(), rng);
      break;
    case NoiseModel::kWhite:
      field = sample_white(mass_, rng);
      break;
    case NoiseModel::kMatern:
      field = sample_matern(*factor_, mass_, rng);
      break;
    case NoiseModel::kMaternNormalized:
      field = std::sqrt(gamma_) * sample_matern(*factor_, mass_, rng);
      break;
    case NoiseModel::kExplicit: {
      const Eigen::Index k = config_.explicit_modes > 0 ? config_.explicit_modes : spectrum_->modes();
      field = sample_explicit(*spectrum_, tau_, k, rng);
      break;
    }
  }
  return config_.gain == 1.0 ? field : (config_.gain * field).eval();
}

Eigen::MatrixXd FieldSampler::draw_block(std::uint64_t first_stream, Eigen::Index count) const {
  Eigen::MatrixXd block(size(), count);
  for (Eigen::Index s = 0; s < count; ++s) block.col(s) = draw(first_stream + static_cast<std::uint64_t>(s));
  return block;
}

}  // namespace matnoise
