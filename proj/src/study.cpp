#include "levytrans/study.hpp"

#include <cmath>
#include <sstream>

#include "levytrans/csv.hpp"
#include "levytrans/distance.hpp"
#include "levytrans/errors.hpp"
#include "levytrans/parallel.hpp"
#include "levytrans/sampling.hpp"

namespace levytrans {

namespace {

std::uint64_t cell_stream_id(std::size_t alpha_idx, std::size_t eps_idx) {
  return combine64(combine64(hash_label("study-cell"), alpha_idx), eps_idx);
}

}  // namespace

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw ValidationError("grid needs step > 0 and hi >= lo");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
  std::vector<double> out;
  out.reserve(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    out.push_back(lo + static_cast<double>(k) * step);
  }
  if (std::abs(out.back() - hi) > 1e-9) out.push_back(hi);
  return out;
}

StudyGrid default_study_grid() {
  StudyGrid g;
  g.alphas = linear_grid(1.0, 10.0, 1.0);
  g.epsilons = linear_grid(0.5, 1.0, 0.1);
  g.n = 100;
  g.replicates = 100;
  return g;
}

const StudyCell& StudyResult::cell(std::size_t alpha_idx, std::size_t eps_idx) const {
  return cells.at(alpha_idx * grid.epsilons.size() + eps_idx);
}

double study_replicate(double alpha, double eps, std::size_t n, double quadrature_tol,
                       std::uint64_t master_seed, std::size_t alpha_idx,
                       std::size_t eps_idx, std::size_t replicate) {
  RngStream rng(master_seed, combine64(cell_stream_id(alpha_idx, eps_idx), replicate));
  const std::vector<double> sample = sample_pareto(alpha, eps, n, rng);
  DistanceResult d;
  if (std::abs(alpha - 1.0) < 1e-6) {
    // The antiderivative form degenerates at exponent 1; integrate instead.
    d = tp_quadrature(transport_empirical(sample),
                      transport_pareto(alpha, eps, pareto_probability_lambda(alpha, eps)),
                      1.0, quadrature_tol);
  } else {
    d = t1_empirical_vs_pareto(sample, eps, alpha);
  }
  return normalize(d, eps).value;
}

StudyResult run_study(const StudyGrid& grid, std::uint64_t master_seed, unsigned threads) {
  if (grid.alphas.empty() || grid.epsilons.empty()) {
    throw ValidationError("study grid must have at least one alpha and one eps");
  }
  if (grid.n == 0 || grid.replicates == 0) {
    throw ValidationError("study needs positive sample size and replicate count");
  }
  StudyResult result;
  result.grid = grid;
  result.master_seed = master_seed;
  result.cells.resize(grid.alphas.size() * grid.epsilons.size());

  const std::size_t cells = result.cells.size();
  const unsigned workers = threads == 0 ? default_thread_count() : threads;
  parallel_for(cells, workers, [&](std::size_t idx) {
    const std::size_t ai = idx / grid.epsilons.size();
    const std::size_t ei = idx % grid.epsilons.size();
    const double alpha = grid.alphas[ai];
    const double eps = grid.epsilons[ei];
    double sum = 0.0;
    double sumsq = 0.0;
    for (std::size_t r = 0; r < grid.replicates; ++r) {
      const double v = study_replicate(alpha, eps, grid.n, grid.quadrature_tol,
                                       master_seed, ai, ei, r);
      sum += v;
      sumsq += v * v;
    }
    const double m = sum / static_cast<double>(grid.replicates);
    double var = 0.0;
    if (grid.replicates > 1) {
      var = (sumsq - sum * m) / static_cast<double>(grid.replicates - 1);
    }
    StudyCell& cell = result.cells[idx];
    cell.alpha = alpha;
    cell.eps = eps;
    cell.mean = m;
    cell.sd = std::sqrt(std::max(0.0, var));
    cell.stream_id = cell_stream_id(ai, ei);
  });
  return result;
}

std::string matrix_csv(const StudyResult& result, bool sds) {
  std::ostringstream out;
  out << "alpha";
  for (double e : result.grid.epsilons) out << ',' << format_double(e);
  out << '\n';
  for (std::size_t ai = 0; ai < result.grid.alphas.size(); ++ai) {
    out << format_double(result.grid.alphas[ai]);
    for (std::size_t ei = 0; ei < result.grid.epsilons.size(); ++ei) {
      const StudyCell& c = result.cell(ai, ei);
      out << ',' << format_double(sds ? c.sd : c.mean);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json study_to_json(const StudyResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"alpha", c.alpha},
                     {"eps", c.eps},
                     {"mean", c.mean},
                     {"sd", c.sd},
                     {"stream_id", c.stream_id}});
  }
  return {{"master_seed", result.master_seed},
          {"n", result.grid.n},
          {"replicates", result.grid.replicates},
          {"alphas", result.grid.alphas},
          {"epsilons", result.grid.epsilons},
          {"cells", cells}};
}

}  // namespace levytrans
