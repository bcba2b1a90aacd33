#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "matnoise/mesh_io.hpp"
#include "matnoise/primitives.hpp"
#include "test_helpers.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const fs::path log = test_helpers::temp_dir() / "cli_output.txt";
  const std::string command = std::string(MATNOISE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream file(log);
  std::stringstream buffer;
  buffer << file.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream file(path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

fs::path fixture_mesh() {
  static const fs::path path = [] {
    const fs::path p = test_helpers::temp_dir() / "cli_icosphere.obj";
    matnoise::save_obj(matnoise::make_icosphere(1), p.string());
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("cli: sample runs are byte-identical") {
  const fs::path out_a = test_helpers::temp_dir() / "sample_a";
  const fs::path out_b = test_helpers::temp_dir() / "sample_b";
  const std::string base = "sample --mesh " + fixture_mesh().string() +
                           " --model matern --tau 100 --n 3 --seed 7 --format both --out-dir ";
  CHECK(run_cli(base + out_a.string()).exit_code == 0);
  CHECK(run_cli(base + out_b.string()).exit_code == 0);
  for (const char* name : {"sample_0000.ply", "sample_0002.ply", "sample_0001.csv"}) {
    const std::string a = read_file(out_a / name);
    CHECK_FALSE(a.empty());
    CHECK(a == read_file(out_b / name));
  }
}

TEST_CASE("cli: missing mesh exits 2 and names the path") {
  const RunResult result = run_cli("sample --mesh /no/such/mesh.obj --n 1");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("/no/such/mesh.obj") != std::string::npos);
}

TEST_CASE("cli: tau and c are mutually exclusive") {
  const RunResult result =
      run_cli("sample --mesh " + fixture_mesh().string() + " --tau 100 --c 1 --n 1");
  CHECK(result.exit_code == 2);
}

TEST_CASE("cli: unknown flags are hard errors") {
  CHECK(run_cli("sample --mesh " + fixture_mesh().string() + " --frobnicate").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("sample --help").exit_code == 0);
}

TEST_CASE("cli: verify passes for matern and fails for naive") {
  const fs::path out = test_helpers::temp_dir() / "verify_matern";
  const std::string protocol =
      " --subdivide 1 --n 2000 --tail-n 500 --block 8 --tail-k 10 --match-tol 0.1 --indices 2,5,8";
  const RunResult good = run_cli("verify --mesh " + fixture_mesh().string() + protocol +
                                 " --model matern --out-dir " + out.string());
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("ALL CHECKS PASSED") != std::string::npos);

  const nlohmann::json report = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(report["all_pass"] == true);
  CHECK(report["config"]["model"] == "matern");
  const std::string histograms = read_file(out / "histograms.csv");
  CHECK(histograms.find("mesh,index,eigenvalue,bin_left,bin_right,count") != std::string::npos);

  const fs::path out_naive = test_helpers::temp_dir() / "verify_naive";
  const RunResult bad = run_cli("verify --mesh " + fixture_mesh().string() + protocol +
                                " --model naive --out-dir " + out_naive.string());
  CHECK(bad.exit_code == 1);
}

TEST_CASE("cli: verify scale report") {
  const fs::path out = test_helpers::temp_dir() / "verify_scale";
  const RunResult result = run_cli("verify --mesh " + fixture_mesh().string() +
                                   " --model matern-normalized --c 1 --n 500 --tail-n 500 --block 8 " +
                                   "--tail-k 10 --scales 0.1,2.0 --out-dir " + out.string());
  const nlohmann::json report = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(report["scale"]["pass"] == true);
  CHECK(result.output.find("scale invariance") != std::string::npos);
}

TEST_CASE("cli: spectrum emits eigenvalues and operator dumps") {
  const fs::path out = test_helpers::temp_dir() / "spectrum_out";
  const RunResult result = run_cli("spectrum --mesh " + fixture_mesh().string() +
                                   " --k 10 --dump-operators --eigenvectors 2 --out-dir " + out.string());
  CHECK(result.exit_code == 0);
  const std::string csv = read_file(out / "spectrum.csv");
  CHECK(csv.find("index,eigenvalue") != std::string::npos);
  CHECK(csv.find("1,0") != std::string::npos);  // lambda_1 = 0 on a closed mesh
  CHECK(read_file(out / "mass.csv").find("vertex,mass") != std::string::npos);
  CHECK(read_file(out / "laplacian.csv").find("row,col,value") != std::string::npos);
  CHECK(fs::exists(out / "eigenvectors.ply"));
}

TEST_CASE("cli: spectrum refuses oversized meshes") {
  const fs::path big = test_helpers::temp_dir() / "big.obj";
  matnoise::save_obj(matnoise::make_icosphere(5), big.string());  // 10242 vertices
  const RunResult result = run_cli("spectrum --mesh " + big.string() + " --k 10");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("verification-scale") != std::string::npos);
}

TEST_CASE("cli: fmdemo writes metrics and respects thresholds") {
  const fs::path out = test_helpers::temp_dir() / "fmdemo_out";
  // Desk-scale run: 2e3 samples put the variance estimator's 3-sigma band
  // near 10%, so the strict 5% gate belongs to the acceptance suite.
  const RunResult good = run_cli("fmdemo --mesh " + fixture_mesh().string() +
                                 " --n 2000 --mmd-gen 100 --mmd-ref 200 --max-variance-error 0.2 --out-dir " +
                                 out.string());
  CHECK(good.exit_code == 0);
  const nlohmann::json metrics = nlohmann::json::parse(read_file(out / "metrics.json"));
  for (const char* key : {"mmd", "cov", "mmd_ref_split", "mmd_ratio", "per_mode_variance_error", "convergence"})
    CHECK(metrics.contains(key));
  CHECK(read_file(out / "convergence.csv").find("steps,error,ratio") != std::string::npos);

  // One Euler-sized step cannot reach the target law.
  const fs::path out_coarse = test_helpers::temp_dir() / "fmdemo_coarse";
  const RunResult coarse = run_cli("fmdemo --mesh " + fixture_mesh().string() +
                                   " --steps 1 --n 500 --mmd-gen 50 --mmd-ref 100 --out-dir " +
                                   out_coarse.string());
  CHECK(coarse.exit_code == 1);
}

TEST_CASE("cli: make-mesh round trips through the loader") {
  const fs::path path = test_helpers::temp_dir() / "made_square.obj";
  CHECK(run_cli("make-mesh --shape square --out " + path.string()).exit_code == 0);
  const matnoise::TriMesh mesh = matnoise::load_obj(path.string());
  CHECK(mesh.vertex_count() == 4);
  CHECK(mesh.face_count() == 2);
}

TEST_CASE("cli: out-dir env var override") {
  const fs::path out = test_helpers::temp_dir() / "env_out";
  const std::string command = "MATNOISE_OUT_DIR=" + out.string() + " " + std::string(MATNOISE_CLI_PATH) +
                              " sample --mesh " + fixture_mesh().string() + " --n 1 > /dev/null 2>&1";
  REQUIRE(std::system(command.c_str()) == 0);
  CHECK(fs::exists(out / "sample_0000.ply"));
}
