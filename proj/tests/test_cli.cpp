#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = geomom::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("qdist csv") {
  const auto r = invoke({"qdist", "--l", "0", "--m", "0", "--kmax", "6", "--step", "0.02", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  const auto rows = split_csv(r.out);
  REQUIRE(rows.size() == 602);
  CHECK(rows[0] == std::vector<std::string>{"k", "density"});
  bool found = false;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::stod(rows[i][0]) == 0.0) {
      CHECK(std::stod(rows[i][1]) == doctest::Approx(0.785398).epsilon(1e-6));
      found = true;
    }
  CHECK(found);
}

TEST_CASE("csv round-trips and repeats byte for byte") {
  const std::vector<std::string> args{"qamp", "--l", "3", "--m", "1", "--kmax", "4", "--step", "0.1"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto rows = split_csv(a.out);
  CHECK(rows[0] == std::vector<std::string>{"k", "re_q", "im_q"});
  std::string rebuilt = "k,re_q,im_q\n";
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", std::strtod(rows[i][j].c_str(), nullptr));
      rebuilt += buf;
      rebuilt += j + 1 < rows[i].size() ? "," : "\n";
    }
  }
  CHECK(rebuilt == a.out);
}

TEST_CASE("json table output") {
  const auto r = invoke({"qdist", "--l", "2", "--m", "1", "--kmax", "2", "--step", "0.5", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["l"] == 2);
  CHECK(j["m"] == 1);
  CHECK(j["source"] == "closed_form");
  CHECK(j["grid"]["points"] == 9);
  CHECK(j["k"].size() == 9);
  CHECK(j["density"].size() == 9);
  const auto q = invoke({"qamp", "--l", "4", "--m", "0", "--kmax", "1", "--step", "0.5", "--format", "json"});
  CHECK(nlohmann::json::parse(q.out)["source"] == "quadrature");
  CHECK(invoke({"qdist", "--l", "1", "--m", "0", "--kmax", "1", "--step", "0.5", "--format", "text"}).code == 0);
}

TEST_CASE("uncertainty") {
  const auto r = invoke({"uncertainty", "--radius-angstrom", "1.0"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["delta_p_au"].get<double>() == doctest::Approx(0.3055).epsilon(1e-3));
  const auto bad = invoke({"uncertainty", "--radius-angstrom", "-2"});
  CHECK(bad.code == 1);
  CHECK(nlohmann::json::parse(bad.out)["error"] == "NonpositiveRadius");
}

TEST_CASE("verification verbs") {
  const auto q = invoke({"verify-qlm", "--lmax", "6"});
  REQUIRE(q.code == 0);
  const auto jq = nlohmann::json::parse(q.out);
  CHECK(jq["all_within_threshold"] == true);
  for (const auto& [name, c] : jq["checks"].items()) {
    CAPTURE(name);
    CHECK(c["max_residual"].get<double>() <= c["threshold"].get<double>());
  }
  const auto a = invoke({"verify-algebra", "--lmax", "8", "--interior", "6"});
  REQUIRE(a.code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  CHECK(ja["relations"].size() == 15);
  CHECK(ja["all_within_threshold"] == true);
  const auto tight = invoke({"verify-algebra", "--lmax", "8", "--interior", "7"});
  CHECK(tight.code == 1);
  CHECK(nlohmann::json::parse(tight.out)["error"] == "TruncationTooTight");
}

TEST_CASE("surface and oscillator reports") {
  const auto s = invoke({"surface", "--surface", "cylinder:R=2", "--q1", "0.4", "--q2", "0.1"});
  REQUIRE(s.code == 0);
  const auto js = nlohmann::json::parse(s.out);
  CHECK(js["geometric_potential"].get<double>() == doctest::Approx(-1.0 / 32.0).epsilon(1e-10));
  const auto pole = invoke({"surface", "--surface", "sphere:r=1", "--q1", "0", "--q2", "0"});
  CHECK(pole.code == 1);
  CHECK(nlohmann::json::parse(pole.out)["error"] == "DegenerateChart");
  CHECK(invoke({"surface", "--surface", "cone:h=1"}).code == 2);
  const auto h = invoke({"compare-ho", "--l", "0"});
  REQUIRE(h.code == 0);
  CHECK(nlohmann::json::parse(h.out)["beta"].get<double>() == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-8));
}

TEST_CASE("figure data") {
  const auto dir = std::filesystem::temp_directory_path() / "geomom_fig_test";
  std::filesystem::remove_all(dir);
  const auto r = invoke({"figure", "--id", "2", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["files"].size() == 4);
  CHECK(j["summary"]["node_counts"] == nlohmann::json::array({3, 2, 1, 0}));
  for (const auto& f : j["files"]) CHECK(std::filesystem::exists(f.get<std::string>()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("usage and numerical errors") {
  const auto unknown = invoke({"qdist", "--l", "0", "--m", "0", "--bogus", "1"});
  CHECK(unknown.code == 2);
  CHECK(!unknown.err.empty());
  CHECK(unknown.out.empty());
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"qdist", "--l", "1", "--m", "2"}).code == 2);
  CHECK(invoke({"qdist", "--l", "1", "--m", "0", "--format", "xml"}).code == 2);
  CHECK(invoke({"qdist", "--l", "1", "--m", "0", "--kmax", "1", "--step", "0.3"}).code == 2);
  const auto loss = invoke({"qdist", "--l", "3", "--m", "0", "--kmax", "60", "--step", "0.5"});
  CHECK(loss.code == 1);
  const auto j = nlohmann::json::parse(loss.out);
  CHECK(j["error"] == "AccuracyLoss");
  CHECK(j.contains("message"));
  CHECK(invoke({"--help"}).code == 0);
}
