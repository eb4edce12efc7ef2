#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace levytrans {

// Monte Carlo sweep of the normalized distance between the empirical measure
// of n power-tail draws and the sampled tail itself, across an
// (alpha, eps) grid.
struct StudyGrid {
  std::vector<double> alphas;
  std::vector<double> epsilons;
  std::size_t n = 100;
  std::size_t replicates = 100;
  double quadrature_tol = 1e-9;  // used where the antiderivative form is unavailable
};

StudyGrid default_study_grid();

// Evenly spaced inclusive range lo, lo+step, ..., hi (hi matched within 1e-9).
std::vector<double> linear_grid(double lo, double hi, double step);

struct StudyCell {
  double alpha = 0.0;
  double eps = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation over replicates
  std::uint64_t stream_id = 0;
};

struct StudyResult {
  StudyGrid grid;
  std::uint64_t master_seed = 0;
  std::vector<StudyCell> cells;  // row-major: alphas x epsilons

  const StudyCell& cell(std::size_t alpha_idx, std::size_t eps_idx) const;
};

// threads == 0 uses all hardware threads; results are identical regardless.
StudyResult run_study(const StudyGrid& grid, std::uint64_t master_seed, unsigned threads);

// Single replicate of one cell; exposed so any cell can be replayed in
// isolation from its (alpha index, eps index, replicate) stream.
double study_replicate(double alpha, double eps, std::size_t n, double quadrature_tol,
                       std::uint64_t master_seed, std::size_t alpha_idx,
                       std::size_t eps_idx, std::size_t replicate);

// alpha rows x eps columns, header row of eps values.
std::string matrix_csv(const StudyResult& result, bool sds);

// Seeds bundle: master seed, grid, per-cell stream ids and statistics.
nlohmann::json study_to_json(const StudyResult& result);

}  // namespace levytrans
