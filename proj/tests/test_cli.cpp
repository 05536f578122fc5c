#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gremfield");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = gremfield::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string config(const std::string& name, const std::string& body) const {
    std::ofstream f(path_ / name);
    f << body;
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("tstar table") {
  TempDir dir("gremfield_cli_tstar");
  const auto cfg = dir.config("c.json", R"({"h_grid": [0, 0.5]})");
  const Run r = run({"tstar", "--config", cfg});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"h", "t_star", "M", "rho_t_star"});
  CHECK(std::stod(rows[1][1]) == 0.0);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(1.177410).epsilon(1e-6));
  CHECK(std::stod(rows[1][3]) == doctest::Approx(1.177410).epsilon(1e-6));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(0.48791971665974743).epsilon(1e-12));

  const auto bad = dir.config("bad.json", R"({"h_grid": [1, 0.5]})");
  CHECK(run({"tstar", "--config", bad}).code == 2);
}

TEST_CASE("coarse-grain table") {
  TempDir dir("gremfield_cli_cg");
  CHECK(csv(run({"coarse-grain"}).out).size() == 2);
  const auto two = dir.config("two.json", R"({"x": [0.5, 1], "q": [0.75, 1], "h": 0})");
  const auto rows = csv(run({"coarse-grain", "--config", two}).out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "block");
  CHECK(rows[1][1] == "1");
  CHECK(rows[2][1] == "2");
  const auto bad = dir.config("bad.json", R"({"x": [0.5, 1], "q": [1, 0.5]})");
  const Run r = run({"coarse-grain", "--config", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("free-energy curve") {
  TempDir dir("gremfield_cli_fe");
  const auto cfg = dir.config("c.json", R"({"h": 0, "betas": [0.001, 0.5, 1.0, 2.0, 3.0]})");
  const Run r = run({"free-energy", "--config", cfg, "--out", dir.path().string()});
  REQUIRE(r.code == 0);
  const auto rows = csv(slurp(dir.path() / "free_energy.csv"));
  CHECK(rows[0] == std::vector<std::string>{"beta", "p", "level", "p_variational"});
  const double b0 = std::sqrt(2 * std::log(2.0));
  CHECK(std::stod(rows[1][1]) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double beta = std::stod(rows[i][0]);
    const double expected = beta <= b0 ? beta * beta / 2 + std::log(2.0) : beta * b0;
    CHECK(std::stod(rows[i][1]) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(std::abs(std::stod(rows[i][3]) - std::stod(rows[i][1])) <= 1e-8);
  }
  CHECK(fs::exists(dir.path() / "config.json"));
}

TEST_CASE("simulate outputs") {
  TempDir dir("gremfield_cli_sim");
  const auto cfg = dir.config(
      "c.json", R"({"N": 10, "h": 0.7, "betas": [0.5, 2], "replicas": 2, "seed": 3})");
  const fs::path a = dir.path() / "a";
  const Run r = run({"simulate", "--config", cfg, "--zero-disorder", "--top-k", "8", "--out",
                     a.string()});
  REQUIRE(r.code == 0);
  std::istringstream lines(slurp(a / "observables.jsonl"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const json rec = json::parse(line);
    for (int b = 0; b < 2; ++b) {
      const double beta = rec["betas"][b].get<double>();
      CHECK(rec["log_z"][b].get<double>() ==
            doctest::Approx(10 * std::log(2 * std::cosh(0.7 * beta))).epsilon(1e-12));
    }
    ++count;
  }
  CHECK(count == 2);
  const auto points = csv(slurp(a / "points" / "replica_0001.csv"));
  CHECK(points[0] == std::vector<std::string>{"rank", "value"});
  CHECK(points.size() == 9);

  const json resolved = json::parse(slurp(a / "config.json"));
  CHECK(resolved["zero_disorder"] == true);
  CHECK(resolved["top_k"] == 8);
  CHECK_FALSE(resolved.contains("threads"));

  // Re-running produces identical bytes.
  const fs::path b = dir.path() / "b";
  REQUIRE(run({"simulate", "--config", cfg, "--zero-disorder", "--top-k", "8", "--out",
               b.string()}).code == 0);
  CHECK(slurp(a / "observables.jsonl") == slurp(b / "observables.jsonl"));
  CHECK(slurp(a / "points" / "replica_0000.csv") == slurp(b / "points" / "replica_0000.csv"));
}

TEST_CASE("simulate rejects bad configs") {
  TempDir dir("gremfield_cli_simbad");
  CHECK(run({"simulate", "--config", dir.config("big.json", R"({"N": 40})")}).code == 2);
  CHECK(run({"simulate", "--config", dir.config("unk.json", R"({"N": 8, "colour": 1})")}).code == 2);
  CHECK(run({"simulate", "--config", dir.config("odd.json", R"({"N": 7, "x": [0.5, 1], "q": [0.5, 1]})")})
            .code == 2);
  CHECK(run({"simulate", "--config", dir.config("bad.json", "{not json")}).code == 2);
  CHECK(run({"simulate"}).code == 2);
  CHECK(run({"simulate", "--threads", "0"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
}

TEST_CASE("fluctuations pass and negative control") {
  TempDir dir("gremfield_cli_fluct");
  const auto good = dir.config(
      "good.json", R"({"N": 12, "h": 0.5, "replicas": 200, "seed": 4, "cascade_seeds": 2000})");
  const Run r = run({"fluctuations", "--config", good, "--out", dir.path().string()});
  CHECK(r.code == 0);
  const json report = json::parse(slurp(dir.path() / "fluctuations.json"));
  CHECK(report["pass"] == true);
  CHECK(csv(slurp(dir.path() / "maxima.csv")).size() == 201);

  const auto wrong = dir.config(
      "wrong.json",
      R"({"N": 12, "h": 0.5, "scaling_h": 1.5, "replicas": 200, "seed": 4, "cascade_seeds": 2000})");
  CHECK(run({"fluctuations", "--config", wrong}).code == 3);
}

TEST_CASE("cascade command") {
  TempDir dir("gremfield_cli_cascade");
  const auto ok = dir.config("ok.json", R"({"gamma_bar": [1.0], "beta": 3, "samples": 400})");
  REQUIRE(run({"cascade", "--config", ok, "--out", dir.path().string()}).code == 0);
  const auto points = csv(slurp(dir.path() / "cascade_points.csv"));
  CHECK(points.size() == 65);
  const json report = json::parse(slurp(dir.path() / "cascade_report.json"));
  CHECK(report["predicted_alpha"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(report.contains("hill"));
  CHECK(csv(slurp(dir.path() / "integrals.csv")).size() == 401);

  const auto model = dir.config("model.json",
                                R"({"x": [0.5, 1], "q": [0.75, 1], "h": 0.5, "beta": 2, "K": 8, "samples": 5})");
  CHECK(run({"cascade", "--config", model}).code == 0);

  const auto hot = dir.config("hot.json", R"({"gamma_bar": [1.0], "beta": 1.0})");
  CHECK(run({"cascade", "--config", hot}).code == 2);
  const auto rising = dir.config("rising.json", R"({"gamma_bar": [0.5, 0.9], "beta": 5})");
  CHECK(run({"cascade", "--config", rising}).code == 2);
}

TEST_CASE("validate command") {
  TempDir dir("gremfield_cli_validate");
  const auto ok = dir.config("ok.json", R"({"N": 12, "x": [0.5, 1], "q": [0.75, 1], "beta": 2})");
  const Run r = run({"validate", "--config", ok});
  CHECK(r.code == 0);
  CHECK(r.out == "valid\n");
  CHECK(run({"validate", "--config", dir.config("q.json", R"({"x": [1], "q": [0.5]})")}).code == 2);
  CHECK(run({"validate", "--config", dir.config("k.json", R"({"extra": 1})")}).code == 2);
  CHECK(gremfield::cli::allowed_keys("tstar") == std::vector<std::string>{"h_grid"});
  CHECK_THROWS(gremfield::cli::allowed_keys("bogus"));
}
