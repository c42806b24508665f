#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sllift/cli.hpp"

using namespace sllift;
using namespace sllift::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("matrix wire format") {
  CHECK(parse_matrix("5,0;0,5", 2) == IntMatrix{{5, 0}, {0, 5}});
  CHECK(parse_matrix(" -1 , 2 ; 3,4;", 2) == IntMatrix{{-1, 2}, {3, 4}});
  try {
    parse_matrix("1,x;0,1", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.token() == "x");
  }
  CHECK_THROWS_AS(parse_matrix("1,0", 2), ParseError);
  CHECK_THROWS_AS(parse_matrix("1,0,0;0,1,0", 2), ParseError);
  CHECK_THROWS_AS(parse_matrix("1,--2;0,1", 2), ParseError);
}

TEST_CASE("ranges") {
  CHECK(parse_range("2..5") == std::vector<std::int64_t>{2, 3, 4, 5});
  CHECK(parse_range("7") == std::vector<std::int64_t>{7});
  CHECK(parse_range("4,1,9") == std::vector<std::int64_t>{4, 1, 9});
  CHECK(parse_range("0,2..4") == std::vector<std::int64_t>{0, 2, 3, 4});
  CHECK_THROWS_AS(parse_range("5..2"), ParseError);
  CHECK_THROWS_AS(parse_range("a..2"), ParseError);
}

TEST_CASE("big integers go to _str fields") {
  json j;
  put_int(j, "small", Int(1) << 53);
  put_int(j, "big", (Int(1) << 53) + 1);
  CHECK(j["small"].get<std::int64_t>() == (std::int64_t{1} << 53));
  CHECK(j["big_str"] == "9007199254740993");
  CHECK_FALSE(j.contains("big"));
}

TEST_CASE("csv quoting and atomic writes") {
  std::vector<json> recs{make_record("x", json{{"a", "p,q"}}, 1, json{{"v", "say \"hi\""}, {"w", 2}}, 5),
                         make_record("x", json{{"a", "r"}}, 1, json{{"v", "line\nbreak"}}, 6)};
  const std::string csv = to_csv(recs);
  CHECK(csv ==
        "schema_version,command,seed,params.a,results.v,results.w,wall_time_ms\r\n"
        "1.0,x,1,\"p,q\",\"say \"\"hi\"\"\",2,5\r\n"
        "1.0,x,1,r,\"line\nbreak\",,6\r\n");

  const auto dir = std::filesystem::temp_directory_path() / "sllift_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_atomic(path, csv);
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == csv);
  CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("lift command exit codes") {
  const Run ok = run_cli({"lift", "--n", "2", "--q", "8", "--matrix", "5,0;0,5", "--json"});
  CHECK(ok.code == 0);
  const json rec = json::parse(ok.out);
  CHECK(rec["schema_version"] == "1.0");
  CHECK(rec["command"] == "lift");
  CHECK(rec["results"]["verified"] == true);
  CHECK(rec.contains("wall_time_ms"));

  CHECK(run_cli({"lift", "--n", "2", "--q", "1", "--matrix", "0,0;0,0"}).code == 0);
  CHECK(run_cli({"lift", "--n", "2", "--q", "8", "--matrix", "1,0;0,2"}).code == 2);
  const Run bad = run_cli({"lift", "--n", "2", "--q", "8", "--matrix", "1,0;0,z"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("'z'") != std::string::npos);
  CHECK(run_cli({"lift", "--n", "2"}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"lift", "--n", "3", "--q", "101", "--matrix", "random", "--seed", "4"}).code == 0);
}

TEST_CASE("hard command") {
  const Run r = run_cli({"hard", "--n", "2", "--q", "8", "--verify-oracle", "30", "--json"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["oracle"]["holds"] == true);
  CHECK(j["results"]["oracle"]["min_max_norm"].get<std::int64_t>() >= j["results"]["lower_bound_ceil"].get<std::int64_t>());

  const json s = json::parse(run_cli({"hard", "--sarnak-m", "1", "--verify-oracle", "30", "--json"}).out);
  CHECK(s["results"]["trace_residue"] == 18);
  CHECK(s["results"]["trace_modulus"] == 64);
  CHECK(s["results"]["oracle"]["min_max_norm"] == 13);

  const json v = json::parse(run_cli({"hard", "--n", "2", "--q", "3", "--json"}).out);
  CHECK(v["results"]["vacuous"] == true);

  setenv("SLLIFT_BUDGET", "5", 1);
  const Run b = run_cli({"hard", "--sarnak-m", "1", "--verify-oracle", "30", "--json"});
  unsetenv("SLLIFT_BUDGET");
  CHECK(b.code == 3);
  CHECK(json::parse(b.out)["results"]["flagged"] == true);
}

TEST_CASE("sweeps") {
  const auto drs = lines(run_cli({"sweep", "drs", "--n", "2", "--T", "1..8"}).out);
  REQUIRE(drs.size() == 8);
  CHECK(drs[0]["results"]["count"] == 20);
  CHECK(drs[0]["results"]["ratio"] == 20.0);
  for (std::size_t i = 0; i < drs.size(); ++i) CHECK(drs[i]["params"]["t"] == static_cast<std::int64_t>(i + 1));

  const auto roots = lines(run_cli({"sweep", "roots", "--q", "2..30", "--n", "2", "--k", "2"}).out);
  REQUIRE(roots.size() == 29);
  for (const auto& r : roots) CHECK(r["results"]["valid"] == true);

  const auto dia = lines(run_cli({"sweep", "diameter", "--space", "P", "--n", "2", "--q", "2..6"}).out);
  REQUIRE(dia.size() == 5);
  CHECK(dia[0]["results"]["diameter_norm"] == 1);

  const auto sk = lines(run_cli({"sweep", "skewed", "--T", "1..3"}).out);
  REQUIRE(sk.size() == 3);

  const auto lb = lines(run_cli({"sweep", "lift-bounds", "--n", "2", "--q", "16", "--samples", "5"}).out);
  REQUIRE(lb.size() == 1);
  CHECK(lb[0]["results"]["verified"] == 5);

  // One failing point does not fail the sweep; all failing does.
  const Run partial = run_cli({"sweep", "roots", "--q", "0,5"});
  CHECK(partial.code == 0);
  CHECK(lines(partial.out)[0]["results"].contains("error"));
  CHECK(run_cli({"sweep", "roots", "--q", "0"}).code == 1);

  setenv("SLLIFT_BUDGET", "10", 1);
  CHECK(run_cli({"sweep", "drs", "--T", "5"}).code == 3);
  unsetenv("SLLIFT_BUDGET");
}

TEST_CASE("sweep csv mirrors the records") {
  const auto path = std::filesystem::temp_directory_path() / "sllift_sweep.csv";
  const Run r = run_cli({"sweep", "drs", "--T", "1..3", "--csv", path.string()});
  CHECK(r.code == 0);
  std::ifstream f(path, std::ios::binary);
  std::string header;
  std::getline(f, header);
  CHECK(header.find("results.count") != std::string::npos);
  std::string first;
  std::getline(f, first);
  CHECK(first.find(",20,") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("identical invocations give identical payloads") {
  const std::vector<std::string> args{"sweep", "lift-bounds", "--n", "3", "--q", "101", "--samples", "10", "--seed",
                                      "42"};
  const auto a = lines(run_cli(args).out);
  const auto b = lines(run_cli(args).out);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(payload(a[i]) == payload(b[i]));
}
