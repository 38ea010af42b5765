#include "doctest.h"

#include "ptqa/errors.hpp"
#include "ptqa/sweep.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

using namespace ptqa;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ptqa_sweep_io_test";
  fs::create_directories(dir);
  return dir / name;
}

json qaa_config() {
  return json::parse(R"({
    "target": "qaa",
    "fixed": {"epsilon": 0.0, "g": 1.0},
    "axes": [{"name": "gamma", "min": 0.0, "max": 0.2, "count": 3},
             {"name": "k", "min": 0.01, "max": 0.1, "count": 3, "spacing": "log"}]
  })");
}

std::vector<std::string> cell_fills(const std::string& svg) {
  std::vector<std::string> out;
  const std::regex cell(R"re(<rect class="cell"[^>]*fill="(#[0-9a-f]{6})")re");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cell); it != std::sregex_iterator(); ++it) {
    out.push_back((*it)[1]);
  }
  return out;
}

}  // namespace

TEST_CASE("config parsing is strict") {
  CHECK_NOTHROW(parse_job(qaa_config()));

  auto bad = qaa_config();
  bad["gama"] = 0.1;
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["fixed"]["epsilonn"] = 0.1;
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["axes"][0]["step"] = 0.1;
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["axes"][0]["count"] = 1;
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["axes"][0]["min"] = 0.3;
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["axes"][1]["min"] = 0.0;
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["axes"][0]["name"] = "s";
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["axes"][1]["name"] = "gamma";
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["outputs"] = {"eigenvalues"};
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["fixed"]["gamma"] = "0.1";
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  bad = qaa_config();
  bad["target"] = "annealing";
  CHECK_THROWS_AS(parse_job(bad), ConfigError);

  CHECK_THROWS_AS(parse_job(json::parse(R"({"target": "spectrum"})")), ConfigError);
  CHECK_THROWS_AS(parse_job(json::parse(R"({"target": "lzs", "model": "full"})")), ConfigError);
  CHECK_THROWS_AS(load_job("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config round trip") {
  auto j = qaa_config();
  j["outputs"] = {"p_ground"};
  j["description"] = "round trip";
  const SweepJob a = parse_job(j);
  const SweepJob b = parse_job(to_json(a));
  CHECK(to_json(a) == to_json(b));
  CHECK(b.axes.size() == 2);
  CHECK(b.axes[1].spacing == Spacing::Log);
  CHECK(b.wants("p_ground"));
  CHECK_FALSE(b.wants("coefficients"));
}

TEST_CASE("axis values") {
  const Axis lin{"gamma", 0.0, 0.2, 5, Spacing::Linear};
  const auto v = lin.values();
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 0.2);
  CHECK(v[2] == doctest::Approx(0.1));
  const Axis lg{"k", 1e-3, 0.05, 40, Spacing::Log};
  const auto w = lg.values();
  CHECK(w.front() == 1e-3);
  CHECK(w.back() == 0.05);
  for (std::size_t i = 2; i < w.size(); ++i) {
    CHECK(w[i] / w[i - 1] == doctest::Approx(w[1] / w[0]).epsilon(1e-12));
  }
}

TEST_CASE("qaa sweep: completeness and worker independence") {
  const SweepJob job = parse_job(qaa_config());
  const auto one = run_sweep(job, 1);
  const auto three = run_sweep(job, 3);
  REQUIRE(one.row_count() == 9);
  CHECK(one.failed_rows() == 0);

  std::set<std::pair<double, double>> points;
  for (std::size_t i = 0; i < one.row_count(); ++i) points.emplace(one.at(i, "gamma"), one.at(i, "k"));
  CHECK(points.size() == 9);

  // first axis is the slow one
  CHECK(one.at(0, "gamma") == 0.0);
  CHECK(one.at(1, "gamma") == 0.0);
  CHECK(one.at(3, "gamma") == doctest::Approx(0.1));

  const auto pa = scratch("qaa_1.csv");
  const auto pb = scratch("qaa_3.csv");
  emit_csv(one, pa);
  emit_csv(three, pb);
  CHECK(slurp(pa) == slurp(pb));
  CHECK(slurp(metadata_path(pa)) == slurp(metadata_path(pb)));

  for (std::size_t i = 0; i < 3; ++i) CHECK(one.at(i, "P_gr") < 0.01);  // gamma = 0
  for (std::size_t i = 0; i < one.row_count(); ++i) {
    double total = 0;
    for (int c = 0; c < 4; ++c) {
      total += std::pow(one.at(i, "a" + std::to_string(c) + "_re"), 2) +
               std::pow(one.at(i, "a" + std::to_string(c) + "_im"), 2);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lzs sweep: Hermitian column vanishes, validity is flagged") {
  const SweepJob job = parse_job(json::parse(R"({
    "target": "lzs",
    "axes": [{"name": "gamma", "min": 0.0, "max": 0.1, "count": 2},
             {"name": "k", "min": 0.001, "max": 0.01, "count": 2, "spacing": "log"}]
  })"));
  const auto t = run_sweep(job);
  REQUIRE(t.row_count() == 4);
  CHECK(t.at(0, "P_lzs") == 0.0);
  CHECK(t.at(1, "P_lzs") == 0.0);
  CHECK(t.at(2, "P_lzs") == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(t.at(2, "trusted") == 1.0);
  CHECK(t.at(3, "trusted") == 0.0);
  CHECK(t.metadata["flags"]["lzs_untrusted_rows"] == 2);
}

TEST_CASE("failed points stay in the table") {
  const SweepJob job = parse_job(json::parse(R"({
    "target": "lzs",
    "fixed": {"gamma": 0.1, "k": 0.01},
    "axes": [{"name": "epsilon", "min": 0.5, "max": 1.5, "count": 3}]
  })"));
  const auto t = run_sweep(job);
  REQUIRE(t.row_count() == 3);
  CHECK(t.error(0).empty());
  CHECK_FALSE(t.error(1).empty());  // epsilon = g: no crossing
  CHECK_FALSE(t.error(2).empty());
  CHECK(std::isnan(t.at(2, "P_lzs")));
  CHECK(t.at(2, "epsilon") == 1.5);
  CHECK(t.failed_rows() == 2);

  const SweepJob traj = parse_job(json::parse(R"({
    "target": "driven_evolve", "model": "effective",
    "axes": [{"name": "epsilon", "min": 0.0, "max": 1.2, "count": 2}],
    "grid": {"min": 0.0, "max": 1.0, "count": 5}
  })"));
  const auto tt = run_sweep(traj);
  CHECK(tt.row_count() == 10);
  CHECK(tt.failed_rows() == 5);
  CHECK(tt.at(9, "s") == 1.0);
}

TEST_CASE("spectrum sweep is continuity ordered and phase labelled") {
  const SweepJob job = parse_job(json::parse(R"({
    "target": "spectrum",
    "fixed": {"gamma": 0.1},
    "axes": [{"name": "s", "min": 0.0, "max": 1.0, "count": 201}]
  })"));
  const auto t = run_sweep(job);
  REQUIRE(t.row_count() == 201);
  for (std::size_t i = 0; i < t.row_count(); ++i) {
    const double s = t.at(i, "s");
    const double bp = t.at(i, "broken_pairs");
    if (s > 0.33 && s < 0.5) CHECK(bp == 1);
    if (s < 0.3 || s > 0.53) CHECK(bp == 0);
  }
  for (std::size_t i = 1; i < t.row_count(); ++i) {
    for (int b = 0; b < 4; ++b) {
      const auto c = "E" + std::to_string(b) + "_re";
      CHECK(std::abs(t.at(i, c) - t.at(i - 1, c)) < 0.05);
    }
  }
}

TEST_CASE("spectrum with two axes orders each curve separately") {
  const SweepJob job = parse_job(json::parse(R"({
    "target": "spectrum", "model": "effective",
    "axes": [{"name": "gamma", "min": 0.0, "max": 0.1, "count": 2},
             {"name": "s", "min": 0.2, "max": 0.6, "count": 41}]
  })"));
  const auto t = run_sweep(job);
  REQUIRE(t.row_count() == 82);
  CHECK(t.failed_rows() == 0);
  // gamma = 0: linear crossing, gap closes only at s_cr
  for (std::size_t i = 0; i < 41; ++i) CHECK(t.at(i, "decay") == 0.0);
  // gamma = 0.1 at s_cr: decay 2 ell
  bool seen_broken = false;
  for (std::size_t i = 41; i < 82; ++i) seen_broken |= t.at(i, "broken_pairs") == 1.0;
  CHECK(seen_broken);
}

TEST_CASE("exceptional point sweep") {
  const SweepJob job = parse_job(json::parse(R"({
    "target": "ep_find",
    "axes": [{"name": "gamma", "min": 0.0, "max": 0.1, "count": 2}]
  })"));
  const auto t = run_sweep(job);
  CHECK(t.at(0, "ep_count") == 0);
  CHECK(t.at(1, "ep_count") == 2);
  CHECK(t.at(1, "s_ep0") < 0.414);
  CHECK(t.at(1, "s_ep1") > 0.414);
  CHECK(std::isnan(t.at(1, "s_ep2")));
}

TEST_CASE("static trajectory rows") {
  const SweepJob job = parse_job(json::parse(R"({
    "target": "static_evolve", "model": "effective",
    "fixed": {"gamma": 0.1, "s_tilde0": 0.0},
    "grid": {"min": 0.0, "max": 200.0, "count": 11}
  })"));
  const auto t = run_sweep(job);
  REQUIRE(t.row_count() == 11);
  CHECK(t.at(10, "t") == 200.0);
  CHECK(t.at(0, "P_down") == 1.0);
  CHECK(t.at(10, "P_up") == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(t.at(10, "P_up") + t.at(10, "P_down") == doctest::Approx(1.0));
}

TEST_CASE("driven trajectory starting after s = 0") {
  const SweepJob job = parse_job(json::parse(R"({
    "target": "driven_evolve",
    "fixed": {"gamma": 0.0, "k": 0.05},
    "grid": {"min": 0.5, "max": 1.0, "count": 3}
  })"));
  const auto t = run_sweep(job);
  REQUIRE(t.row_count() == 3);
  CHECK(t.at(0, "s") == 0.5);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(t.at(i, "log_norm")) < 1e-8);
  CHECK(t.has_column("P_uu"));
  CHECK(t.has_column("P_dd"));
}

TEST_CASE("csv format") {
  ResultTable t({"x", "E1_re", "E1_im"});
  t.add_row({0.1, 1.0 / 3.0, -0.0});
  t.add_row({std::nan(""), std::numeric_limits<double>::infinity(), 2.0}, "bad, \"quoted\" cell");
  const auto path = scratch("tiny.csv");
  emit_csv(t, path);
  const std::string text = slurp(path);
  std::vector<std::string> lines;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "x,E1_re,E1_im,error\r");
  CHECK(lines[1] == "0.10000000000000001,0.33333333333333331,-0,\r");
  CHECK(lines[2] == "nan,inf,2,\"bad, \"\"quoted\"\" cell\"\r");

  emit_csv(t, path);
  CHECK(slurp(path) == text);

  const json meta = json::parse(slurp(metadata_path(path)));
  CHECK(meta["rows"] == 2);
  CHECK(meta["failed_rows"] == 1);
  CHECK(metadata_path("out/fig8a.csv") == fs::path("out/fig8a.meta.json"));

  CHECK_THROWS(ResultTable({"a", "a"}));
  CHECK_THROWS(ResultTable({"error"}));
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("sweep metadata echoes the job") {
  const SweepJob job = parse_job(qaa_config());
  const auto t = run_sweep(job, 1);
  CHECK(t.metadata["job"] == to_json(job));
  CHECK(t.metadata["version"] == PTQA_VERSION);
  CHECK(t.metadata["tolerances"]["ode_rtol"] == 1e-10);
}

TEST_CASE("heatmap") {
  ResultTable t({"x", "y", "z"});
  t.add_row({0, 0, 0});
  t.add_row({1, 0, 0});
  t.add_row({0, 1, 0.5});
  t.add_row({1, 1, 0.5});
  const auto svg = heatmap_svg(t, "x", "y", "z");
  const auto fills = cell_fills(svg);
  CHECK(fills.size() == 4);
  CHECK(std::set<std::string>(fills.begin(), fills.end()).size() == 2);
  CHECK(svg.find(">x<") != std::string::npos);
  CHECK(svg.find(">y<") != std::string::npos);

  ResultTable flat({"x", "y", "z"});
  for (double x : {0.0, 1.0})
    for (double y : {0.0, 1.0}) flat.add_row({x, y, 0.25});
  const auto flat_svg = heatmap_svg(flat, "x", "y", "z");
  const auto flat_fills = cell_fills(flat_svg);
  CHECK(std::set<std::string>(flat_fills.begin(), flat_fills.end()).size() == 1);
  CHECK(flat_svg.find(">0.25<") != std::string::npos);

  ResultTable ragged({"x", "y", "z"});
  ragged.add_row({0, 0, 1});
  ragged.add_row({1, 0, 1});
  ragged.add_row({0, 1, 1});
  CHECK_THROWS_AS(heatmap_svg(ragged, "x", "y", "z"), std::invalid_argument);

  const auto path = scratch("map.svg");
  emit_heatmap_svg(t, "x", "y", "z", path);
  CHECK(slurp(path) == svg);
}

TEST_CASE("shipped configs load and round trip") {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(PTQA_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().filename().string());
    ++seen;
    const SweepJob job = load_job(entry.path());
    CHECK_NOTHROW(job.validate());
    CHECK(to_json(parse_job(to_json(job))) == to_json(job));
  }
  CHECK(seen >= 27);
}
