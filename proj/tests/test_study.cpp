#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include "levytrans/errors.hpp"
#include "levytrans/study.hpp"

using namespace levytrans;

TEST_CASE("linear grid construction") {
  CHECK(linear_grid(1.0, 3.0, 1.0) == std::vector<double>{1.0, 2.0, 3.0});
  const auto g = linear_grid(0.5, 1.0, 0.1);
  REQUIRE(g.size() == 6);
  CHECK(g.front() == 0.5);
  CHECK(g.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(linear_grid(1.0, 0.5, 0.1), ValidationError);
  CHECK_THROWS_AS(linear_grid(0.5, 1.0, 0.0), ValidationError);
}

TEST_CASE("default grid shape matches the published sweep") {
  const StudyGrid g = default_study_grid();
  CHECK(g.alphas.size() == 10);
  CHECK(g.epsilons.size() == 6);
  CHECK(g.n == 100);
  CHECK(g.replicates == 100);
}

TEST_CASE("replicates replay from their stream coordinates") {
  const double a = study_replicate(3.0, 0.6, 50, 1e-9, 99, 2, 1, 7);
  const double b = study_replicate(3.0, 0.6, 50, 1e-9, 99, 2, 1, 7);
  CHECK(a == b);
  CHECK(a > 0.0);
  CHECK(a < 1.0);
  // Distinct coordinates decorrelate.
  CHECK(study_replicate(3.0, 0.6, 50, 1e-9, 99, 2, 1, 8) != a);
  CHECK(study_replicate(3.0, 0.6, 50, 1e-9, 98, 2, 1, 7) != a);
}

TEST_CASE("study statistics: trends and ranges on a reduced grid") {
  StudyGrid g;
  g.alphas = {2.0, 5.0, 9.0};
  g.epsilons = {0.5, 1.0};
  g.n = 100;
  g.replicates = 40;
  const StudyResult r = run_study(g, 4242, 1);
  REQUIRE(r.cells.size() == 6);
  for (const auto& c : r.cells) {
    CHECK(c.mean > 0.0);
    CHECK(c.mean < 1.0);
    CHECK(c.sd >= 0.0);
    CHECK(c.sd < c.mean);
  }
  // The normalized distance decays in the tail exponent at fixed threshold.
  CHECK(r.cell(0, 0).mean > r.cell(1, 0).mean);
  CHECK(r.cell(1, 0).mean > r.cell(2, 0).mean);
  CHECK(r.cell(0, 1).mean > r.cell(1, 1).mean);
  CHECK(r.cell(1, 1).mean > r.cell(2, 1).mean);
}

TEST_CASE("study determinism: thread count does not change results") {
  StudyGrid g;
  g.alphas = {1.0, 3.0};  // exponent 1 exercises the quadrature fallback
  g.epsilons = {0.6, 0.9};
  g.n = 30;
  g.replicates = 10;
  const StudyResult r1 = run_study(g, 777, 1);
  const StudyResult r4 = run_study(g, 777, 4);
  REQUIRE(r1.cells.size() == r4.cells.size());
  for (std::size_t i = 0; i < r1.cells.size(); ++i) {
    CHECK(r1.cells[i].mean == r4.cells[i].mean);
    CHECK(r1.cells[i].sd == r4.cells[i].sd);
  }
  CHECK(matrix_csv(r1, false) == matrix_csv(r4, false));
  CHECK(matrix_csv(r1, true) == matrix_csv(r4, true));
}

TEST_CASE("matrix CSV layout") {
  StudyGrid g;
  g.alphas = {2.0, 3.0};
  g.epsilons = {0.5, 0.7, 0.9};
  g.n = 20;
  g.replicates = 5;
  const StudyResult r = run_study(g, 31, 1);
  const std::string csv = matrix_csv(r, false);
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "alpha,0.5,0.7,0.9");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 2);
  // Byte-identical on rerun.
  CHECK(matrix_csv(run_study(g, 31, 1), false) == csv);
}

TEST_CASE("study JSON carries seeds and per-cell streams") {
  StudyGrid g;
  g.alphas = {2.0};
  g.epsilons = {0.5};
  g.n = 10;
  g.replicates = 3;
  const StudyResult r = run_study(g, 606, 1);
  const auto j = study_to_json(r);
  CHECK(j.at("master_seed").get<std::uint64_t>() == 606);
  REQUIRE(j.at("cells").size() == 1);
  CHECK(j.at("cells")[0].at("stream_id").get<std::uint64_t>() == r.cells[0].stream_id);
}

TEST_CASE("study input validation") {
  StudyGrid g;
  g.alphas = {};
  g.epsilons = {0.5};
  CHECK_THROWS_AS(run_study(g, 1, 1), ValidationError);
  g.alphas = {2.0};
  g.n = 0;
  CHECK_THROWS_AS(run_study(g, 1, 1), ValidationError);
  g.n = 10;
  g.replicates = 0;
  CHECK_THROWS_AS(run_study(g, 1, 1), ValidationError);
}
