#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kmslab/config.hpp"
#include "kmslab/experiments.hpp"

using namespace kmslab;
using namespace kmslab::cfg;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

}  // namespace

TEST_CASE("well formed config") {
  const auto c = parse(
      "experiment = decay-sweep\n"
      "seed = 42\n"
      "output = out/dir\n"
      "; comment\n"
      "[parameters]\n"
      "lambda = 5:50:5\n"
      "h = 1\n");
  CHECK(c.experiment == "decay-sweep");
  CHECK(c.seed == 42);
  CHECK(c.output_path == "out/dir");
  CHECK(c.parameters.size() == 2);
  CHECK(c.parameters.at("h") == "1");
  CHECK(c.coupling.empty());
}

TEST_CASE("coupling section keeps its lines in order") {
  const auto c = parse("[coupling]\n0 1 1 0 = 0.01\n1 0 0 1 = 0.01 0\n# hash comment\n");
  REQUIRE(c.coupling.size() == 2);
  CHECK(c.coupling[0].first == "0 1 1 0");
  CHECK(c.coupling[1].second == "0.01 0");
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_AS(parse("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("experiment = nonsense\n"), ConfigError);
  CHECK_THROWS_AS(parse("seed = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse("seed = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[extras]\na = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[parameters]\na = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("this line has no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("lists and ranges") {
  CHECK(parse_list("0, 0.5,1 ,2") == std::vector<double>{0, 0.5, 1, 2});
  const auto r = parse_list("5:50:5");
  REQUIRE(r.size() == 10);
  CHECK(r.front() == 5);
  CHECK(r.back() == 50);
  CHECK(parse_list("0:1:0.25").size() == 5);
  CHECK_THROWS_AS(parse_list("1:0:1"), ConfigError);
  CHECK_THROWS_AS(parse_list("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_list("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_list("1,x"), ConfigError);
  CHECK_THROWS_AS(parse_real("inf"), ConfigError);
  CHECK_THROWS_AS(parse_real("2e"), ConfigError);
  CHECK(parse_real(" -1.5e-3 ") == -1.5e-3);
}

TEST_CASE("parameters reject unread keys") {
  Parameters p({{"a", "1"}, {"b", "2,3"}, {"typo", "0"}});
  CHECK(p.real("a", 0.0) == 1.0);
  CHECK(p.list("b", {}) == std::vector<double>{2, 3});
  CHECK(p.integer("n", 7) == 7);
  CHECK_THROWS_AS(p.finish(), ConfigError);
  CHECK(p.resolved().at("n") == "7");

  Parameters q(std::map<std::string, std::string>{{"n", "2.5"}});
  CHECK_THROWS_AS(q.integer("n", 1), ConfigError);
}

TEST_CASE("experiments validate their parameters") {
  ExperimentConfig c;
  c.experiment = "fermi-dirac";
  c.parameters = {{"p0", "0,1"}, {"temperature", "3"}};
  CHECK_THROWS_AS(lab::run_experiment(c), ConfigError);
  c.parameters = {{"p0", "0,1"}};
  c.coupling = {{"0 0 0 0", "1"}};
  CHECK_THROWS_AS(lab::run_experiment(c), ConfigError);

  ExperimentConfig d;
  d.experiment = "decay-sweep";
  d.parameters = {{"profile", "bounded"}, {"d", "0.5"}};
  CHECK_THROWS_AS(lab::run_experiment(d), ConfigError);
  d.parameters = {{"profile", "cubic"}};
  CHECK_THROWS_AS(lab::run_experiment(d), ConfigError);

  ExperimentConfig t;
  t.experiment = "toy-chain";
  t.parameters = {{"sites", "2"}, {"d", "2"}};
  t.coupling = {{"0 1 2 0", "0.1"}};
  CHECK_THROWS_AS(lab::run_experiment(t), ConfigError);
  t.coupling = {{"0 1 1 0", "0.1 0.2"}};  // not Hermitian without its partner
  CHECK_THROWS_AS(lab::run_experiment(t), ConfigError);
}

TEST_CASE("fermi-dirac experiment") {
  ExperimentConfig c;
  c.experiment = "fermi-dirac";
  c.parameters = {{"p0", "0,0.5,1,2"}, {"mu", "0"}};
  const auto r = lab::run_experiment(c);
  CHECK(r.pass());
  REQUIRE(r.table.rows().size() == 4);
  const double p0[] = {0, 0.5, 1, 2};
  for (std::size_t i = 0; i < 4; ++i) {
    const double w = std::stod(r.table.rows()[i][2]);
    CHECK(std::abs(w - 1.0 / (1.0 + std::exp(p0[i] * p0[i]))) <= 1e-12);
    CHECK(std::abs(std::stod(r.table.rows()[i][3]) - w) <= 1e-12);
  }
}

TEST_CASE("toy chain with an explicit Hermitian coupling") {
  ExperimentConfig t;
  t.experiment = "toy-chain";
  t.parameters = {{"sites", "2"}, {"d", "3"}, {"windows", "1"}};
  t.coupling = {{"0 1 1 0", "0.05"}, {"1 0 0 1", "0.05"}, {"2 2 2 2", "-0.01"}};
  const auto r = lab::run_experiment(t);
  CHECK(r.table.rows().size() == 3);
  CHECK(r.pass());
}

TEST_CASE("jobs do not change results") {
  ExperimentConfig c;
  c.experiment = "entropy-dominance";
  c.seed = 11;
  c.parameters = {{"states", "40"}};
  const auto a = lab::run_experiment(c, 1);
  const auto b = lab::run_experiment(c, 4);
  CHECK(a.table.rows() == b.table.rows());
  CHECK(a.pass());
  c.seed = 12;
  CHECK(lab::run_experiment(c, 2).table.rows() != a.table.rows());
}
