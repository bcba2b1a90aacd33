// Command-line front end: sample / verify / spectrum / fmdemo / make-mesh.
//
// Exit codes: 0 success or all checks passed, 1 a requested check failed,
// 2 usage or I/O problem, 3 numerical failure. All randomness flows through
// --seed; two runs with the same flags produce byte-identical outputs.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "matnoise/exceptions.hpp"
#include "matnoise/flow.hpp"
#include "matnoise/mesh.hpp"
#include "matnoise/mesh_io.hpp"
#include "matnoise/operators.hpp"
#include "matnoise/primitives.hpp"
#include "matnoise/samplers.hpp"
#include "matnoise/solvers.hpp"
#include "matnoise/spectral.hpp"
#include "matnoise/verify.hpp"

namespace {

using namespace matnoise;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TriMesh load_mesh(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".ply") return load_ply(path);
  return load_obj(path);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream file(path);
  if (!file) throw IoError("cannot write " + path.string());
  file << std::setprecision(17);
  return file;
}

// The samplers assume a clean single surface; refuse meshes that do not
// validate instead of producing silently meaningless operators.
void require_validated(const TriMesh& mesh, const std::string& path) {
  const ValidationReport report = validate(mesh);
  if (!report.is_manifold) throw IoError(path + ": mesh is not edge-manifold / consistently oriented");
  if (!report.degenerate_faces.empty()) {
    std::ostringstream msg;
    msg << path << ": mesh has " << report.degenerate_faces.size() << " degenerate faces (first: face "
        << report.degenerate_faces.front() << ")";
    throw IoError(msg.str());
  }
}

std::string zero_pad(std::int64_t value, int width) {
  std::ostringstream out;
  out << std::setw(width) << std::setfill('0') << value;
  return out.str();
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string mesh_path;
  std::string model = "matern";
  double tau = 100.0;
  double c = 1.0;
  bool no_screening = false;
  std::int64_t count = 1;
  std::uint64_t seed = 0;
  Eigen::Index explicit_modes = 0;
  double gain = 1.0;
  int channels = 1;
  std::string format = "ply";
  std::string out_dir = ".";
};

int cmd_sample(const SampleArgs& args) {
  const TriMesh mesh = load_mesh(args.mesh_path);
  require_validated(mesh, args.mesh_path);
  std::filesystem::create_directories(args.out_dir);

  SamplerConfig config;
  config.model = noise_model_from_string(args.model);
  config.tau = args.tau;
  config.c = args.c;
  config.no_screening = args.no_screening;
  config.explicit_modes = args.explicit_modes;
  config.gain = args.gain;
  config.seed = args.seed;

  const auto t_setup = Clock::now();
  const MeshOperators ops = assemble_operators(mesh);
  std::optional<Spectrum> spectrum;
  if (config.model == NoiseModel::kExplicit)
    spectrum = generalized_eigs(ops.laplacian, ops.mass, mesh.vertex_count());
  const FieldSampler sampler(ops, spectrum ? &*spectrum : nullptr, config);
  const double setup_time = seconds_since(t_setup);

  const auto t_draw = Clock::now();
  std::vector<FieldMap> fields(args.count);
  for (std::int64_t i = 0; i < args.count; ++i) {
    for (int ch = 0; ch < args.channels; ++ch) {
      const std::uint64_t stream = static_cast<std::uint64_t>(i) * args.channels + ch;
      const std::string name = args.channels == 1 ? "noise" : "noise_" + std::to_string(ch);
      fields[i][name] = sampler.draw(stream);
    }
  }
  const double draw_time = seconds_since(t_draw);

  for (std::int64_t i = 0; i < args.count; ++i) {
    const std::filesystem::path base = std::filesystem::path(args.out_dir) / ("sample_" + zero_pad(i, 4));
    if (args.format == "ply" || args.format == "both") save_ply(mesh, fields[i], base.string() + ".ply");
    if (args.format == "csv" || args.format == "both") {
      auto csv = open_output(base.string() + ".csv");
      csv << "vertex";
      for (const auto& [name, values] : fields[i]) csv << "," << name;
      csv << "\n";
      for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) {
        csv << v;
        for (const auto& [name, values] : fields[i]) csv << "," << values[v];
        csv << "\n";
      }
    }
  }

  std::cout << "model=" << args.model << " vertices=" << mesh.vertex_count() << " samples=" << args.count
            << "\nsetup (operators + factorization): " << setup_time << " s"
            << "\nper-sample draw: " << draw_time / double(args.count * args.channels) * 1e3 << " ms\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> mesh_paths;
  int subdivide = 0;
  bool bisect = false;
  std::string model = "matern";
  double tau = 100.0;
  double c = 1.0;
  bool no_screening = false;
  std::uint64_t seed = 0;
  VerifyOptions options;
  std::vector<double> scales;
  std::string out_dir = ".";
};

int cmd_verify(const VerifyArgs& args) {
  std::vector<TriMesh> meshes;
  for (const std::string& path : args.mesh_paths) {
    meshes.push_back(load_mesh(path));
    require_validated(meshes.back(), path);
  }
  for (int s = 0; s < args.subdivide; ++s) meshes.push_back(subdivide_midpoint(meshes[s]));
  if (args.bisect) meshes.push_back(nonuniform_refinement(meshes.front()));

  SamplerConfig config;
  config.model = noise_model_from_string(args.model);
  config.tau = args.tau;
  config.c = args.c;
  config.no_screening = args.no_screening;
  config.seed = args.seed;

  VerifyOptions options = args.options;
  options.scales = args.scales;
  if (config.model == NoiseModel::kMaternNormalized) options.scale_c = args.c;

  const AgnosticismReport report = run_verification(meshes, config, options);

  std::filesystem::create_directories(args.out_dir);
  {
    auto file = open_output(std::filesystem::path(args.out_dir) / "report.json");
    file << report_to_json(report).dump(2) << "\n";
  }
  {
    auto file = open_output(std::filesystem::path(args.out_dir) / "histograms.csv");
    file << "mesh,index,eigenvalue,bin_left,bin_right,count\n";
    for (const HistogramDump& dump : report.histograms)
      for (Eigen::Index b = 0; b < dump.histogram.counts.size(); ++b)
        file << dump.mesh << "," << dump.index << "," << dump.eigenvalue << "," << dump.histogram.edges[b] << ","
             << dump.histogram.edges[b + 1] << "," << dump.histogram.counts[b] << "\n";
  }

  auto flag = [](bool pass) { return pass ? "pass" : "FAIL"; };
  std::cout << "meshes: ";
  for (const MeshSummary& m : report.meshes) std::cout << m.vertices << "v ";
  std::cout << "\nproperty 1 (independence): max |corr| = " << report.property1.max_abs_correlation << " -> "
            << flag(report.property1.pass) << "\n";
  for (size_t p = 0; p < report.property2.size(); ++p)
    std::cout << "property 2 (mesh 0 vs " << p + 1 << "): " << report.property2[p].pairs.size()
              << " matched modes -> " << flag(report.property2[p].pass) << "\n";
  for (size_t m = 0; m < report.property3.size(); ++m)
    std::cout << "property 3 (mesh " << m << "): tail " << report.property3[m].tail_variance << " < "
              << report.property3[m].epsilon << " -> " << flag(report.property3[m].pass) << "\n";
  if (report.scale)
    std::cout << "scale invariance: max deviation " << report.scale->max_rel_deviation << " -> "
              << flag(report.scale->pass) << "\n";
  std::cout << (report.all_pass ? "ALL CHECKS PASSED" : "CHECKS FAILED") << "\n";
  return report.all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string mesh_path;
  Eigen::Index modes = 0;  // 0 = min(n, 100)
  int eigenvector_count = 0;
  bool dump_operators = false;
  std::string out_dir = ".";
};

int cmd_spectrum(const SpectrumArgs& args) {
  const TriMesh mesh = load_mesh(args.mesh_path);
  require_validated(mesh, args.mesh_path);
  std::filesystem::create_directories(args.out_dir);

  const Eigen::VectorXd mass = lumped_mass(mesh);
  const Eigen::SparseMatrix<double> laplacian = cotan_laplacian(mesh);

  if (args.dump_operators) {
    auto mass_file = open_output(std::filesystem::path(args.out_dir) / "mass.csv");
    mass_file << "vertex,mass\n";
    for (Eigen::Index i = 0; i < mass.size(); ++i) mass_file << i << "," << mass[i] << "\n";

    std::vector<Eigen::Triplet<double>> triplets;
    for (int col = 0; col < laplacian.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(laplacian, col); it; ++it)
        triplets.emplace_back(it.row(), it.col(), it.value());
    std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
      return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
    });
    auto lap_file = open_output(std::filesystem::path(args.out_dir) / "laplacian.csv");
    lap_file << "row,col,value\n";
    for (const auto& t : triplets) lap_file << t.row() << "," << t.col() << "," << t.value() << "\n";
  }

  const Eigen::Index k = args.modes > 0 ? args.modes : std::min<Eigen::Index>(mesh.vertex_count(), 100);
  const Spectrum spectrum = generalized_eigs(laplacian, mass, k);

  auto csv = open_output(std::filesystem::path(args.out_dir) / "spectrum.csv");
  csv << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < spectrum.modes(); ++i) csv << i + 1 << "," << spectrum.eigenvalues[i] << "\n";

  if (args.eigenvector_count > 0) {
    FieldMap fields;
    const Eigen::Index count = std::min<Eigen::Index>(args.eigenvector_count, spectrum.modes());
    for (Eigen::Index i = 0; i < count; ++i)
      fields["phi_" + zero_pad(i + 1, 4)] = spectrum.eigenvectors.col(i);
    save_ply(mesh, fields, (std::filesystem::path(args.out_dir) / "eigenvectors.ply").string());
  }

  std::cout << "modes: " << spectrum.modes() << ", lambda_1 = " << spectrum.eigenvalues[0]
            << ", lambda_k = " << spectrum.eigenvalues[spectrum.modes() - 1] << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct FmDemoArgs {
  std::string mesh_path;
  int steps = 100;
  std::int64_t samples = 5000;
  double tau_source = 100.0;
  double tau_target = 10.0;
  Eigen::Index modes = 0;  // 0 = all
  std::uint64_t seed = 0;
  int variance_modes = 30;
  std::int64_t mmd_gen = 400;
  std::int64_t mmd_ref = 800;
  double max_variance_error = 0.05;
  double max_mmd_ratio = 1.2;
  std::string out_dir = ".";
};

int cmd_fmdemo(const FmDemoArgs& args) {
  const TriMesh mesh = load_mesh(args.mesh_path);
  require_validated(mesh, args.mesh_path);
  std::filesystem::create_directories(args.out_dir);

  const MeshOperators ops = assemble_operators(mesh);
  const Spectrum spectrum = generalized_eigs(ops.laplacian, ops.mass, mesh.vertex_count());
  const Eigen::Index k = args.modes > 0 ? std::min(args.modes, spectrum.modes()) : spectrum.modes();
  const SpectralGaussianTarget target =
      matern_transport_target(spectrum.eigenvalues.head(k), args.tau_source, args.tau_target);

  SamplerConfig source_config;
  source_config.model = NoiseModel::kMatern;
  source_config.tau = args.tau_source;
  source_config.seed = args.seed;
  const FieldSampler source(ops, nullptr, source_config);

  Eigen::MatrixXd basis = spectrum.eigenvectors.leftCols(k);
  const Eigen::MatrixXd projector = (ops.mass.asDiagonal() * basis).transpose();

  // Generate: transport source noise through the flow, batch by batch.
  FlowConfig flow_config;
  flow_config.steps = args.steps;
  Eigen::MatrixXd generated_coeffs(k, args.samples);
  std::vector<Eigen::VectorXd> generated_fields;
  const Eigen::Index batch = 256;
  for (std::int64_t begin = 0; begin < args.samples; begin += batch) {
    const Eigen::Index count = static_cast<Eigen::Index>(std::min<std::int64_t>(batch, args.samples - begin));
    const Eigen::MatrixXd f0 = source.draw_block(static_cast<std::uint64_t>(begin), count);
    const Eigen::MatrixXd x0 = projector * f0;
    const Eigen::MatrixXd x1 = integrate_coeffs(x0, target, args.steps);
    generated_coeffs.middleCols(begin, count) = x1;
    for (Eigen::Index s = 0; s < count && begin + s < args.mmd_gen; ++s)
      generated_fields.push_back(f0.col(s) + basis * (x1.col(s) - x0.col(s)));
  }

  // Per-mode variance against the target law.
  double variance_error = 0.0;
  const int checked_modes = std::min<int>(args.variance_modes, static_cast<int>(k));
  for (int m = 0; m < checked_modes; ++m) {
    const auto row = generated_coeffs.row(m);
    const double mean = row.mean();
    const double var = (row.array() - mean).square().sum() / double(args.samples - 1);
    const double want = target.target_std[m] * target.target_std[m];
    variance_error = std::max(variance_error, std::abs(var / want - 1.0));
  }

  // Reference set drawn directly from the target law, independent seed.
  SamplerConfig ref_config;
  ref_config.model = NoiseModel::kMatern;
  ref_config.tau = args.tau_target;
  ref_config.seed = args.seed + 1;
  const FieldSampler reference(ops, nullptr, ref_config);
  std::vector<Eigen::VectorXd> ref_fields, ref_a, ref_b;
  for (std::int64_t r = 0; r < args.mmd_ref; ++r) {
    ref_fields.push_back(reference.draw(static_cast<std::uint64_t>(r)));
    (r % 2 == 0 ? ref_a : ref_b).push_back(ref_fields.back());
  }

  const double mmd_gen_ref = mmd(generated_fields, ref_fields, ops.mass);
  const double mmd_split = mmd(ref_a, ref_b, ops.mass);
  const double mmd_ratio = mmd_gen_ref / mmd_split;
  const double cov_gen_ref = coverage(generated_fields, ref_fields, ops.mass);

  // Convergence against the closed-form trajectory x(1) = x0 * b / a.
  SpectralGaussianTarget scalar;
  scalar.source_std = Eigen::VectorXd::Constant(1, 1.0);
  scalar.target_std = Eigen::VectorXd::Constant(1, 2.0);
  json convergence = json::array();
  double prev_error = 0.0;
  auto conv_csv = open_output(std::filesystem::path(args.out_dir) / "convergence.csv");
  conv_csv << "steps,error,ratio\n";
  const Eigen::VectorXd x_start = Eigen::VectorXd::Constant(1, 0.5);
  for (int s : {25, 50, 100, 200}) {
    const double x1 = integrate_coeffs(x_start, scalar, s)[0];
    const double error = std::abs(x1 - 1.0);
    const double ratio = prev_error > 0.0 ? prev_error / error : 0.0;
    convergence.push_back({{"steps", s}, {"error", error}, {"ratio", ratio}});
    conv_csv << s << "," << error << "," << ratio << "\n";
    std::cout << "steps " << std::setw(4) << s << ": trajectory error " << error;
    if (ratio > 0.0) std::cout << " (halving ratio " << ratio << ")";
    std::cout << "\n";
    prev_error = error;
  }

  json metrics{{"mmd", mmd_gen_ref},
               {"cov", cov_gen_ref},
               {"mmd_ref_split", mmd_split},
               {"mmd_ratio", mmd_ratio},
               {"per_mode_variance_error", variance_error},
               {"variance_modes", checked_modes},
               {"convergence", convergence},
               {"config", {{"mesh_vertices", mesh.vertex_count()},
                           {"steps", args.steps},
                           {"samples", args.samples},
                           {"tau_source", args.tau_source},
                           {"tau_target", args.tau_target},
                           {"modes", k},
                           {"seed", args.seed},
                           {"mmd_gen", args.mmd_gen},
                           {"mmd_ref", args.mmd_ref},
                           {"max_variance_error", args.max_variance_error},
                           {"max_mmd_ratio", args.max_mmd_ratio}}}};
  {
    auto file = open_output(std::filesystem::path(args.out_dir) / "metrics.json");
    file << metrics.dump(2) << "\n";
  }

  std::cout << "per-mode variance error (first " << checked_modes << " modes): " << variance_error
            << " (max " << args.max_variance_error << ")\n"
            << "mmd(gen, ref) = " << mmd_gen_ref << ", mmd(ref_A, ref_B) = " << mmd_split
            << ", ratio = " << mmd_ratio << " (max " << args.max_mmd_ratio << ")\n"
            << "cov = " << cov_gen_ref << "\n";

  const bool pass = variance_error <= args.max_variance_error && mmd_ratio <= args.max_mmd_ratio;
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct MakeMeshArgs {
  std::string shape = "icosphere";
  int level = 3;
  int nx = 16, ny = 16;
  double scale_factor = 1.0;
  std::string out_path;
};

int cmd_make_mesh(const MakeMeshArgs& args) {
  TriMesh mesh;
  if (args.shape == "icosphere")
    mesh = make_icosphere(args.level);
  else if (args.shape == "icosahedron")
    mesh = make_icosahedron();
  else if (args.shape == "square")
    mesh = make_unit_square();
  else if (args.shape == "grid")
    mesh = make_grid(args.nx, args.ny);
  else
    throw std::invalid_argument("unknown shape '" + args.shape + "'");
  if (args.scale_factor != 1.0) mesh = scale(mesh, args.scale_factor);
  if (args.out_path.size() >= 4 && args.out_path.substr(args.out_path.size() - 4) == ".ply")
    save_ply(mesh, {}, args.out_path);
  else
    save_obj(mesh, args.out_path);
  std::cout << args.out_path << ": " << mesh.vertex_count() << " vertices, " << mesh.face_count() << " faces\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangulation-agnostic Matern noise on triangle meshes"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Draw noise samples and write them as PLY/CSV");
  sample->add_option("--mesh", sample_args.mesh_path, "input mesh (.obj or .ply)")
      ->required()
      ->check(CLI::ExistingFile);
  sample->add_option("--model", sample_args.model, "naive|white|matern|matern-normalized|explicit")
      ->check(CLI::IsMember({"naive", "white", "matern", "matern-normalized", "explicit"}));
  auto* sample_tau = sample->add_option("--tau", sample_args.tau, "screening term (fixed-tau models)");
  auto* sample_c = sample->add_option("--c", sample_args.c, "normalized screening factor, tau = c * Gamma");
  sample_tau->excludes(sample_c);
  sample_c->excludes(sample_tau);
  sample->add_flag("--no-screening", sample_args.no_screening, "ablation: floor tau at 1e-8 * Gamma");
  sample->add_option("--n", sample_args.count, "number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--seed", sample_args.seed, "RNG seed");
  sample->add_option("--k", sample_args.explicit_modes, "modes for the explicit model (0 = all)");
  sample->add_option("--gain", sample_args.gain, "output amplitude factor");
  sample->add_option("--channels", sample_args.channels, "independent channels per sample")
      ->check(CLI::PositiveNumber);
  sample->add_option("--format", sample_args.format, "ply|csv|both")
      ->check(CLI::IsMember({"ply", "csv", "both"}));
  sample->add_option("--out-dir", sample_args.out_dir, "output directory")->envname("MATNOISE_OUT_DIR");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check the spectral agnosticism properties");
  verify->add_option("--mesh", verify_args.mesh_paths, "input meshes of the same surface")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--subdivide", verify_args.subdivide, "append K midpoint subdivisions of the first mesh");
  verify->add_flag("--bisect", verify_args.bisect, "append a non-uniform edge-bisected copy of the first mesh");
  verify->add_option("--model", verify_args.model, "noise model under test")
      ->check(CLI::IsMember({"naive", "white", "matern", "matern-normalized", "explicit"}));
  auto* verify_tau = verify->add_option("--tau", verify_args.tau, "screening term");
  auto* verify_c = verify->add_option("--c", verify_args.c, "normalized screening factor");
  verify_tau->excludes(verify_c);
  verify_c->excludes(verify_tau);
  verify->add_flag("--no-screening", verify_args.no_screening, "ablation: floor tau at 1e-8 * Gamma");
  verify->add_option("--seed", verify_args.seed, "RNG seed");
  verify->add_option("--n", verify_args.options.samples, "samples for properties 1-2");
  verify->add_option("--tail-n", verify_args.options.tail_samples, "samples for the property-3 tail");
  verify->add_option("--block", verify_args.options.block, "mode block for properties 1-2");
  verify->add_option("--corr-threshold", verify_args.options.corr_threshold, "property-1 threshold");
  verify->add_option("--match-tol", verify_args.options.match_tol, "relative eigenvalue matching tolerance");
  verify->add_option("--tail-k", verify_args.options.tail_start, "property-3 tail start index");
  verify->add_option("--epsilon", verify_args.options.epsilon,
                     "property-3 threshold (0 = 2.5x the theoretical tail)");
  verify->add_option("--indices", verify_args.options.histogram_indices, "histogram mode indices")->delimiter(',');
  verify->add_option("--scales", verify_args.scales, "scale factors for the invariance test")->delimiter(',');
  verify->add_option("--threads", verify_args.options.threads, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out-dir", verify_args.out_dir, "output directory")->envname("MATNOISE_OUT_DIR");

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "Dump generalized eigenvalues (verification scale)");
  spectrum->add_option("--mesh", spectrum_args.mesh_path, "input mesh")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--k", spectrum_args.modes, "modes to compute (0 = min(n, 100))");
  spectrum->add_option("--eigenvectors", spectrum_args.eigenvector_count, "dump this many eigenvectors as PLY");
  spectrum->add_flag("--dump-operators", spectrum_args.dump_operators, "also write mass.csv and laplacian.csv");
  spectrum->add_option("--out-dir", spectrum_args.out_dir, "output directory")->envname("MATNOISE_OUT_DIR");

  FmDemoArgs fmdemo_args;
  auto* fmdemo = app.add_subcommand("fmdemo", "Noise -> flow -> sample pipeline with the analytic velocity");
  fmdemo->add_option("--mesh", fmdemo_args.mesh_path, "input mesh")->required()->check(CLI::ExistingFile);
  fmdemo->add_option("--steps", fmdemo_args.steps, "ODE steps")->check(CLI::PositiveNumber);
  fmdemo->add_option("--n", fmdemo_args.samples, "generated samples")->check(CLI::PositiveNumber);
  fmdemo->add_option("--tau", fmdemo_args.tau_source, "source screening term");
  fmdemo->add_option("--tau-target", fmdemo_args.tau_target, "target screening term");
  fmdemo->add_option("--k", fmdemo_args.modes, "transported modes (0 = all)");
  fmdemo->add_option("--seed", fmdemo_args.seed, "RNG seed");
  fmdemo->add_option("--variance-modes", fmdemo_args.variance_modes, "modes checked against the target law");
  fmdemo->add_option("--mmd-gen", fmdemo_args.mmd_gen, "generated samples used for MMD/COV");
  fmdemo->add_option("--mmd-ref", fmdemo_args.mmd_ref, "reference samples used for MMD/COV");
  fmdemo->add_option("--max-variance-error", fmdemo_args.max_variance_error, "pass threshold");
  fmdemo->add_option("--max-mmd-ratio", fmdemo_args.max_mmd_ratio, "pass threshold");
  fmdemo->add_option("--out-dir", fmdemo_args.out_dir, "output directory")->envname("MATNOISE_OUT_DIR");

  MakeMeshArgs make_args;
  auto* make_mesh = app.add_subcommand("make-mesh", "Write a procedural test mesh");
  make_mesh->add_option("--shape", make_args.shape, "icosphere|icosahedron|square|grid")
      ->check(CLI::IsMember({"icosphere", "icosahedron", "square", "grid"}));
  make_mesh->add_option("--level", make_args.level, "icosphere subdivision level");
  make_mesh->add_option("--nx", make_args.nx, "grid cells in x");
  make_mesh->add_option("--ny", make_args.ny, "grid cells in y");
  make_mesh->add_option("--scale", make_args.scale_factor, "uniform scale factor");
  make_mesh->add_option("--out", make_args.out_path, "output path (.obj or .ply)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sample) return cmd_sample(sample_args);
    if (*verify) return cmd_verify(verify_args);
    if (*spectrum) return cmd_spectrum(spectrum_args);
    if (*fmdemo) return cmd_fmdemo(fmdemo_args);
    if (*make_mesh) return cmd_make_mesh(make_args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
