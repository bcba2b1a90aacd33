#include "matnoise/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "matnoise/spectral.hpp"

namespace matnoise {

SpectralStats empirical_spectral_stats(const FieldSampler& sampler, const Spectrum& spectrum,
                                       const Eigen::VectorXd& mass, std::int64_t samples,
                                       const std::vector<int>& indices, const StatsOptions& options) {
  if (samples < 100) throw std::invalid_argument("spectral stats need at least 100 samples");
  if (indices.empty()) throw std::invalid_argument("no mode indices requested");
  for (int idx : indices)
    if (idx < 1 || idx > spectrum.modes()) {
      std::ostringstream msg;
      msg << "mode index " << idx << " outside the available spectrum (1.." << spectrum.modes() << ")";
      throw std::invalid_argument(msg.str());
    }

  SpectralStats stats;
  stats.indices = indices;
  stats.sample_count = samples;
  const Eigen::Index tracked = static_cast<Eigen::Index>(indices.size());
  stats.eigenvalues.resize(tracked);
  Eigen::MatrixXd basis(spectrum.eigenvectors.rows(), tracked);
  for (Eigen::Index t = 0; t < tracked; ++t) {
    stats.eigenvalues[t] = spectrum.eigenvalues[indices[t] - 1];
    basis.col(t) = spectrum.eigenvectors.col(indices[t] - 1);
  }
  // coeffs = (M Phi_sel)^T field, one column per sample.
  const Eigen::MatrixXd projector = (mass.asDiagonal() * basis).transpose();

  stats.coeffs.resize(tracked, samples);
  const Eigen::Index batch = std::max<Eigen::Index>(1, options.batch);
  const std::int64_t n_batches = (samples + batch - 1) / batch;
  const int threads = std::max(1, options.threads);

  auto run_batches = [&](int tid) {
    for (std::int64_t b = tid; b < n_batches; b += threads) {
      const std::int64_t begin = b * batch;
      const Eigen::Index count = static_cast<Eigen::Index>(std::min<std::int64_t>(batch, samples - begin));
      stats.coeffs.middleCols(begin, count) =
          projector * sampler.draw_block(static_cast<std::uint64_t>(begin), count);
    }
  };
  if (threads == 1) {
    run_batches(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int tid = 0; tid < threads; ++tid) pool.emplace_back(run_batches, tid);
    for (auto& worker : pool) worker.join();
  }

  stats.mean = stats.coeffs.rowwise().mean();
  stats.variance.resize(tracked);
  for (Eigen::Index t = 0; t < tracked; ++t)
    stats.variance[t] = (stats.coeffs.row(t).array() - stats.mean[t]).square().sum() / double(samples - 1);

  const int bins = std::max(1, options.histogram_bins);
  stats.histograms.resize(tracked);
  for (Eigen::Index t = 0; t < tracked; ++t) {
    const double sigma = std::sqrt(stats.variance[t]);
    const double half_span = sigma > 0.0 ? options.histogram_span_sigmas * sigma : 1.0;
    Histogram& hist = stats.histograms[t];
    hist.edges = Eigen::VectorXd::LinSpaced(bins + 1, stats.mean[t] - half_span, stats.mean[t] + half_span);
    hist.counts = Eigen::VectorXi::Zero(bins);
    const double width = 2.0 * half_span / bins;
    for (std::int64_t s = 0; s < samples; ++s) {
      const double offset = stats.coeffs(t, s) - (stats.mean[t] - half_span);
      // Out-of-span samples land in the end bins so counts always sum to N.
      const auto bin = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(offset / width)), 0, bins - 1);
      ++hist.counts[static_cast<Eigen::Index>(bin)];
    }
  }
  return stats;
}

Property1Result check_property1(const SpectralStats& stats, int block, double threshold) {
  if (stats.sample_count < 100) throw std::invalid_argument("property 1 needs at least 100 samples");
  std::vector<Eigen::Index> rows;
  for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(stats.indices.size()); ++t)
    if (stats.indices[t] <= block) rows.push_back(t);
  if (rows.size() < 2) throw std::invalid_argument("property 1 needs at least two modes inside the block");

  Property1Result result;
  result.block = block;
  result.threshold = threshold;
  for (size_t p = 0; p < rows.size(); ++p) {
    for (size_t q = p + 1; q < rows.size(); ++q) {
      const Eigen::Index i = rows[p], j = rows[q];
      const auto ci = stats.coeffs.row(i).array() - stats.mean[i];
      const auto cj = stats.coeffs.row(j).array() - stats.mean[j];
      const double corr = (ci * cj).sum() / std::sqrt((ci * ci).sum() * (cj * cj).sum());
      result.max_abs_correlation = std::max(result.max_abs_correlation, std::abs(corr));
    }
  }
  result.pass = result.max_abs_correlation <= threshold;
  return result;
}

Property2Result check_property2(const SpectralStats& stats_a, const SpectralStats& stats_b, double tau,
                                double match_tol) {
  Property2Result result;
  result.match_tol = match_tol;

  const Eigen::VectorXd& la = stats_a.eigenvalues;
  const Eigen::VectorXd& lb = stats_b.eigenvalues;
  const double abs_floor = 1e-9 * std::max(la.maxCoeff(), lb.maxCoeff());

  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < la.size() && j < lb.size(); ++i) {
    while (j + 1 < lb.size() && std::abs(lb[j + 1] - la[i]) < std::abs(lb[j] - la[i])) ++j;
    const double tol = match_tol * std::max(la[i], lb[j]) + abs_floor;
    if (std::abs(la[i] - lb[j]) > tol) continue;

    MatchedPair pair;
    pair.index_a = stats_a.indices[i];
    pair.index_b = stats_b.indices[j];
    pair.lambda_a = la[i];
    pair.lambda_b = lb[j];
    pair.sigma_a = std::sqrt(stats_a.variance[i]);
    pair.sigma_b = std::sqrt(stats_b.variance[j]);
    pair.w2 = std::abs(pair.sigma_a - pair.sigma_b);
    const double eps = std::abs(pair.lambda_a - pair.lambda_b);
    pair.bound = eps / (tau * tau);
    // 3-sigma slack on each fitted sigma: sd(Var) = Var*sqrt(2/(N-1)), so
    // sd(sigma) ~ sigma*sqrt(2/(N-1))/2 by the delta method.
    pair.slack = 1.5 * (pair.sigma_a * std::sqrt(2.0 / double(stats_a.sample_count - 1)) +
                        pair.sigma_b * std::sqrt(2.0 / double(stats_b.sample_count - 1)));
    const double inv_a = 1.0 / (pair.lambda_a + tau), inv_b = 1.0 / (pair.lambda_b + tau);
    pair.w2_squared_form = (inv_a - inv_b) * (inv_a - inv_b);
    pair.bound_squared_form = eps * eps / (tau * tau * tau * tau);
    pair.pass = pair.w2 <= pair.bound + pair.slack;
    result.pairs.push_back(pair);
    ++j;
  }
  if (result.pairs.empty()) throw std::invalid_argument("property 2: no eigenvalue pairs matched");
  result.pass = std::all_of(result.pairs.begin(), result.pairs.end(), [](const MatchedPair& p) { return p.pass; });
  return result;
}

Property3Result check_property3(const SpectralStats& stats, Eigen::Index k, double epsilon, double tau,
                                double area) {
  const Eigen::Index modes = static_cast<Eigen::Index>(stats.indices.size());
  for (Eigen::Index t = 0; t < modes; ++t)
    if (stats.indices[t] != t + 1)
      throw std::invalid_argument("property 3 needs stats over the full available spectrum (modes 1..K)");
  if (k < 1 || k > modes + 1) throw std::invalid_argument("property 3: tail start out of range");

  Property3Result result;
  result.k = k;
  result.epsilon = epsilon;
  for (Eigen::Index t = k - 1; t < modes; ++t) result.tail_variance += stats.variance[t];
  const WeylTail tail = weyl_tail(stats.eigenvalues, k, tau, area);
  result.theoretical_tail = tail.computed;
  result.analytic_bound = tail.analytic_bound;
  result.pass = result.tail_variance < epsilon;
  return result;
}

ScaleInvarianceResult scale_invariance_test(const TriMesh& mesh, double c, const std::vector<double>& scales,
                                            std::uint64_t seed, double fixed_tau) {
  ScaleInvarianceResult result;
  result.scales = scales;
  result.fixed_tau = fixed_tau;

  RngStream base_rng(seed, 0);
  const Eigen::VectorXd reference = sample_matern_normalized(mesh, c, base_rng);
  const double ref_norm = reference.cwiseAbs().maxCoeff();

  const MeshOperators base_ops = assemble_operators(mesh);
  const SpdFactor base_factor(screened_operator(base_ops.laplacian, base_ops.mass, fixed_tau));
  RngStream base_fixed_rng(seed, 0);
  const Eigen::VectorXd fixed_reference = sample_matern(base_factor, base_ops.mass, base_fixed_rng);
  const double fixed_norm = fixed_reference.cwiseAbs().maxCoeff();

  for (double k : scales) {
    if (!(k > 0.0)) throw std::invalid_argument("scale factors must be positive");
    const TriMesh scaled = scale(mesh, k);

    RngStream rng(seed, 0);
    const Eigen::VectorXd field = sample_matern_normalized(scaled, c, rng);
    result.rel_deviation.push_back((field - reference).cwiseAbs().maxCoeff() / ref_norm);

    const MeshOperators ops = assemble_operators(scaled);
    const SpdFactor factor(screened_operator(ops.laplacian, ops.mass, fixed_tau));
    RngStream fixed_rng(seed, 0);
    const Eigen::VectorXd fixed_field = sample_matern(factor, ops.mass, fixed_rng);
    result.fixed_tau_deviation.push_back((fixed_field - fixed_reference).cwiseAbs().maxCoeff() / fixed_norm);
  }
  result.max_rel_deviation =
      result.rel_deviation.empty() ? 0.0 : *std::max_element(result.rel_deviation.begin(), result.rel_deviation.end());
  result.pass = result.max_rel_deviation <= result.tolerance;
  return result;
}

TriMesh nonuniform_refinement(const TriMesh& mesh) {
  const auto edges = undirected_edges(mesh);
  std::vector<double> mid_x;
  mid_x.reserve(edges.size());
  for (const auto& [a, b] : edges) mid_x.push_back(0.5 * (mesh.vertices(a, 0) + mesh.vertices(b, 0)));
  std::vector<double> sorted = mid_x;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  std::vector<std::pair<int, int>> selected;
  for (size_t e = 0; e < edges.size(); ++e)
    if (mid_x[e] > median) selected.push_back(edges[e]);
  return bisect_edges(mesh, selected);
}

AgnosticismReport run_verification(const std::vector<TriMesh>& meshes, const SamplerConfig& sampler_config,
                                   const VerifyOptions& options) {
  if (meshes.empty()) throw std::invalid_argument("verification needs at least one mesh");

  AgnosticismReport report;
  report.sampler = sampler_config;
  report.options = options;

  int max_hist_index = 0;
  for (int idx : options.histogram_indices) max_hist_index = std::max(max_hist_index, idx);

  StatsOptions stats_options;
  stats_options.threads = options.threads;

  std::vector<SpectralStats> main_stats;
  bool all_pass = true;
  for (size_t m = 0; m < meshes.size(); ++m) {
    const TriMesh& mesh = meshes[m];
    const MeshOperators ops = assemble_operators(mesh);
    const Spectrum spectrum = generalized_eigs(ops.laplacian, ops.mass, mesh.vertex_count());
    const FieldSampler sampler(ops, &spectrum, sampler_config);
    const double protocol_tau = sampler.resolved_tau() > 0.0 ? sampler.resolved_tau() : sampler_config.tau;

    MeshSummary summary;
    summary.vertices = mesh.vertex_count();
    summary.faces = mesh.face_count();
    summary.modes = spectrum.modes();
    summary.area = ops.area;
    summary.gamma = ops.gamma;
    summary.resolved_tau = protocol_tau;
    report.meshes.push_back(summary);

    // Low block for properties 1-2, with a few spare modes for matching.
    const int tracked_top = static_cast<int>(
        std::min<Eigen::Index>(spectrum.modes(), std::max(options.block + 10, max_hist_index)));
    std::vector<int> tracked(tracked_top);
    for (int i = 0; i < tracked_top; ++i) tracked[i] = i + 1;
    main_stats.push_back(
        empirical_spectral_stats(sampler, spectrum, ops.mass, options.samples, tracked, stats_options));

    const Property1Result prop1 = check_property1(main_stats.back(), options.block, options.corr_threshold);
    report.property1_per_mesh.push_back(prop1);
    all_pass = all_pass && prop1.pass;

    // Full-spectrum pass for the tail.
    std::vector<int> full(spectrum.modes());
    for (Eigen::Index i = 0; i < spectrum.modes(); ++i) full[i] = static_cast<int>(i + 1);
    const SpectralStats tail_stats =
        empirical_spectral_stats(sampler, spectrum, ops.mass, options.tail_samples, full, stats_options);
    const double epsilon =
        options.epsilon > 0.0
            ? options.epsilon
            : 2.5 * weyl_tail(spectrum.eigenvalues, options.tail_start, protocol_tau, ops.area).computed;
    const Property3Result prop3 =
        check_property3(tail_stats, options.tail_start, epsilon, protocol_tau, ops.area);
    report.property3.push_back(prop3);
    all_pass = all_pass && prop3.pass;

    for (int idx : options.histogram_indices) {
      if (idx < 1 || idx > tracked_top) continue;
      HistogramDump dump;
      dump.mesh = static_cast<int>(m);
      dump.index = idx;
      dump.eigenvalue = main_stats.back().eigenvalues[idx - 1];
      dump.histogram = main_stats.back().histograms[idx - 1];
      report.histograms.push_back(dump);
    }
  }

  report.property1 = report.property1_per_mesh.front();
  for (const Property1Result& r : report.property1_per_mesh)
    if (r.max_abs_correlation > report.property1.max_abs_correlation) report.property1 = r;

  for (size_t m = 1; m < meshes.size(); ++m) {
    const double tau = report.meshes.front().resolved_tau;
    report.property2.push_back(check_property2(main_stats.front(), main_stats[m], tau, options.match_tol));
    all_pass = all_pass && report.property2.back().pass;
  }

  if (!options.scales.empty()) {
    report.scale = scale_invariance_test(meshes.front(), options.scale_c, options.scales, sampler_config.seed);
    all_pass = all_pass && report.scale->pass;
  }

  report.all_pass = all_pass;
  return report;
}

nlohmann::json report_to_json(const AgnosticismReport& report) {
  using nlohmann::json;
  json config;
  config["model"] = to_string(report.sampler.model);
  config["tau"] = report.sampler.tau;
  config["c"] = report.sampler.c;
  config["no_screening"] = report.sampler.no_screening;
  config["gain"] = report.sampler.gain;
  config["seed"] = report.sampler.seed;
  config["samples"] = report.options.samples;
  config["tail_samples"] = report.options.tail_samples;
  config["block"] = report.options.block;
  config["corr_threshold"] = report.options.corr_threshold;
  config["match_tol"] = report.options.match_tol;
  config["tail_start"] = report.options.tail_start;
  config["epsilon"] = report.options.epsilon;
  config["scales"] = report.options.scales;
  config["scale_c"] = report.options.scale_c;
  config["threads"] = report.options.threads;
  config["histogram_indices"] = report.options.histogram_indices;

  json meshes = json::array();
  for (const MeshSummary& m : report.meshes)
    meshes.push_back({{"vertices", m.vertices},
                      {"faces", m.faces},
                      {"modes", m.modes},
                      {"area", m.area},
                      {"gamma", m.gamma},
                      {"resolved_tau", m.resolved_tau}});

  auto prop1_json = [](const Property1Result& r) {
    return json{{"max_abs_correlation", r.max_abs_correlation},
                {"threshold", r.threshold},
                {"block", r.block},
                {"pass", r.pass}};
  };
  json prop1 = prop1_json(report.property1);
  json per_mesh = json::array();
  for (const Property1Result& r : report.property1_per_mesh) per_mesh.push_back(prop1_json(r));
  prop1["per_mesh"] = per_mesh;

  json prop2 = json::array();
  for (const Property2Result& r : report.property2) {
    json pairs = json::array();
    for (const MatchedPair& p : r.pairs)
      pairs.push_back({{"index_a", p.index_a},
                       {"index_b", p.index_b},
                       {"lambda_a", p.lambda_a},
                       {"lambda_b", p.lambda_b},
                       {"sigma_a", p.sigma_a},
                       {"sigma_b", p.sigma_b},
                       {"w2", p.w2},
                       {"bound", p.bound},
                       {"slack", p.slack},
                       {"w2_squared_form", p.w2_squared_form},
                       {"bound_squared_form", p.bound_squared_form},
                       {"pass", p.pass}});
    prop2.push_back({{"pairs", pairs}, {"match_tol", r.match_tol}, {"pass", r.pass}});
  }

  json prop3 = json::array();
  for (const Property3Result& r : report.property3)
    prop3.push_back({{"k", r.k},
                     {"tail_variance", r.tail_variance},
                     {"threshold", r.epsilon},
                     {"theoretical_tail", r.theoretical_tail},
                     {"analytic_bound", r.analytic_bound},
                     {"pass", r.pass}});

  json out{{"config", config},
           {"meshes", meshes},
           {"property1", prop1},
           {"property2", prop2},
           {"property3", prop3},
           {"all_pass", report.all_pass}};
  if (report.scale) {
    out["scale"] = json{{"scales", report.scale->scales},
                        {"rel_deviation", report.scale->rel_deviation},
                        {"max_rel_deviation", report.scale->max_rel_deviation},
                        {"tolerance", report.scale->tolerance},
                        {"fixed_tau", report.scale->fixed_tau},
                        {"fixed_tau_deviation", report.scale->fixed_tau_deviation},
                        {"pass", report.scale->pass}};
  }
  return out;
}

}  // namespace matnoise
