#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hamcond/cli.hpp"
#include "json.hpp"

using namespace hamcond;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hamcond");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hamcond_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("sample prints an edge list") {
  const Run r = run({"sample", "--n", "3", "--m", "4", "--seed", "7"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "3 4");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 4);
  CHECK(nlohmann::json::parse(r.err).contains("switches"));

  CHECK(run({"sample", "--n", "3", "--m", "4", "--seed", "7"}).out == r.out);
  const Run js = run({"sample", "--n", "30", "--m", "90", "--seed", "1", "--format", "json"});
  CHECK(js.code == 0);
  const auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["edges"].size() == 90);
}

TEST_CASE("count reports the exact value") {
  const Run r = run({"count", "--n", "3", "--m", "4", "--exact"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["exact_count"] == 9);
  CHECK(doc["asymptotic"].size() == 3);
  CHECK(run({"count", "--n", "3000", "--m", "9000", "--exact"}).code == 3);
  CHECK(run({"count", "--n", "5", "--m", "5"}).code == 2);
}

TEST_CASE("verify and hamilton") {
  const auto graph = scratch("c3.txt");
  const auto good = scratch("good.txt");
  const auto bad = scratch("bad.txt");
  write_file(graph, "3 3\n0 1\n1 2\n2 0\n");
  write_file(good, "0 1 2\n");
  write_file(bad, "[0, 2, 1]\n");

  const Run ok = run({"verify", "--in", graph.string(), "--cycle", good.string()});
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["verdict"] == true);
  const Run no = run({"verify", "--in", graph.string(), "--cycle", bad.string()});
  CHECK(no.code == 1);
  CHECK(nlohmann::json::parse(no.out)["verdict"] == false);

  const Run ham = run({"hamilton", "--in", graph.string(), "--seed", "1"});
  CHECK(ham.code == 0);
  const auto doc = nlohmann::json::parse(ham.out);
  CHECK(doc["found"] == true);
  CHECK(doc["cycle"].size() == 3);
  CHECK(doc.contains("trace"));

  const auto obstructed = scratch("ob.txt");
  write_file(obstructed, "4 6\n2 0\n2 1\n0 2\n1 2\n0 3\n3 2\n");
  const Run neg = run({"hamilton", "--in", obstructed.string(), "--seed", "1"});
  CHECK(neg.code == 1);
  CHECK(nlohmann::json::parse(neg.out)["status"] == "obstruction_found");

  const auto isolated = scratch("iso.txt");
  write_file(isolated, "3 2\n0 1\n1 0\n");
  CHECK(run({"hamilton", "--in", isolated.string(), "--seed", "1"}).code == 1);

  const auto broken = scratch("broken.txt");
  write_file(broken, "3 2\n0 0\n1 2\n");
  CHECK(run({"hamilton", "--in", broken.string(), "--seed", "1"}).code == 2);

  const Run sampled = run({"hamilton", "--n", "300", "--m", "1500", "--seed", "5"});
  CHECK((sampled.code == 0 || sampled.code == 1 || sampled.code == 3));
  CHECK(run({"hamilton", "--n", "300", "--m", "1500", "--seed", "5"}).out == sampled.out);
}

TEST_CASE("experiment output is deterministic") {
  const std::vector<std::string> args{"experiment", "obstruction", "--n", "200", "--c=-1,0", "--trials", "10",
                                      "--seed", "3"};
  const Run a = run(args);
  CHECK(a.code == 0);
  CHECK(a.out.rfind("n,c,m,trials,p_hat,lo95,hi95,prediction\n", 0) == 0);
  CHECK(run(args).out == a.out);

  const Run u = run({"experiment", "uniformity", "--n", "3", "--m", "4", "--trials", "900", "--seed", "1"});
  CHECK(u.code == 0);
  CHECK(nlohmann::json::parse(u.out)["support"] == 9);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"sample", "--n", "3"}).code == 2);
  CHECK(run({"sample", "--n", "3", "--m", "4"}).code == 2);  // --seed is required
  CHECK(run({"sample", "--n", "3", "--m", "4", "--seed", "1", "--profile", "fast"}).code == 2);
  CHECK(run({"sample", "--n", "3", "--m", "2", "--seed", "1"}).code == 2);
  CHECK(run({"verify", "--in", "/nonexistent", "--cycle", "/nonexistent"}).code == 2);
}

TEST_CASE("help documents flags and output") {
  for (const char* sub : {"sample", "hamilton", "count", "verify", "experiment"}) {
    const Run r = run({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--") != std::string::npos);
    CHECK(r.out.find("Output") != std::string::npos);
  }
}
