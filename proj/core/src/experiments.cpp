#include "eulercs/experiments.hpp"

#include <chrono>
#include <cmath>

#include "eulercs/construct.hpp"
#include "eulercs/error.hpp"
#include "eulercs/euler.hpp"
#include "eulercs/parallel.hpp"
#include "eulercs/random.hpp"

namespace eulercs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Holds one prepared solver so that per-trial work is only the solve itself.
class TrialSolver {
 public:
  TrialSolver(Solver kind, const Eigen::MatrixXd& phi) : kind_(kind) {
    if (kind == Solver::Omp) {
      omp_.emplace(phi);
    } else {
      bp_.emplace(phi);
    }
  }

  RecoveryResult solve(const Eigen::VectorXd& y, std::size_t sparsity) const {
    if (kind_ == Solver::Omp) return omp_->solve(y, sparsity, 1e-12 * y.norm());
    return bp_->solve(y);
  }

 private:
  Solver kind_;
  std::optional<OmpSolver> omp_;
  std::optional<BasisPursuitSolver> bp_;
};

// Successful trials out of `trials` at one sparsity level.
std::size_t count_successes(const TrialSolver& solver, const Eigen::MatrixXd& phi, std::size_t sparsity,
                            std::size_t trials, double threshold_db, std::uint64_t master,
                            std::uint64_t stream_base) {
  std::vector<unsigned char> ok(trials, 0);
  const auto dimension = static_cast<std::size_t>(phi.cols());
  parallel_for(trials, [&](std::size_t t) {
    const SparseSignal signal = gen_sparse_signal(dimension, sparsity, substream_seed(master, stream_base | t));
    const Eigen::VectorXd x = signal.dense();
    const Eigen::VectorXd y = phi * x;
    try {
      const RecoveryResult r = solver.solve(y, sparsity);
      ok[t] = snr(x, r.estimate) >= threshold_db ? 1 : 0;
    } catch (const ConvergenceFailure&) {
      ok[t] = 0;
    }
  });
  std::size_t n = 0;
  for (const unsigned char v : ok) n += v;
  return n;
}

}  // namespace

std::string_view family_name(MatrixFamily f) noexcept {
  switch (f) {
    case MatrixFamily::Euler: return "euler";
    case MatrixFamily::RowSize: return "rows";
    case MatrixFamily::Gaussian: return "gaussian";
    case MatrixFamily::Bernoulli: return "bernoulli";
  }
  return "unknown";
}

MatrixFamily parse_family(std::string_view name) {
  if (name == "euler") return MatrixFamily::Euler;
  if (name == "rows") return MatrixFamily::RowSize;
  if (name == "gaussian") return MatrixFamily::Gaussian;
  if (name == "bernoulli") return MatrixFamily::Bernoulli;
  throw Error(Errc::InvalidInput, "unknown matrix family '" + std::string(name) + "'");
}

std::string_view solver_name(Solver s) noexcept {
  return s == Solver::Omp ? "omp" : "bp";
}

Solver parse_solver(std::string_view name) {
  if (name == "omp") return Solver::Omp;
  if (name == "bp" || name == "basis_pursuit") return Solver::BasisPursuit;
  throw Error(Errc::InvalidInput, "unknown solver '" + std::string(name) + "'");
}

MatrixSource MatrixSource::euler(std::uint32_t n, std::uint32_t k) {
  MatrixSource s;
  s.family = MatrixFamily::Euler;
  s.order = n;
  s.degree = k;
  return s;
}

MatrixSource MatrixSource::row_size(std::uint32_t m) {
  MatrixSource s;
  s.family = MatrixFamily::RowSize;
  s.rows = m;
  return s;
}

MatrixSource MatrixSource::gaussian(std::uint32_t m, std::uint32_t cols, std::uint64_t seed) {
  MatrixSource s;
  s.family = MatrixFamily::Gaussian;
  s.rows = m;
  s.cols = cols;
  s.seed = seed;
  return s;
}

MatrixSource MatrixSource::bernoulli(std::uint32_t m, std::uint32_t cols, std::uint64_t seed) {
  MatrixSource s = gaussian(m, cols, seed);
  s.family = MatrixFamily::Bernoulli;
  return s;
}

nlohmann::ordered_json MatrixSource::describe() const {
  nlohmann::ordered_json j;
  j["family"] = family_name(family);
  switch (family) {
    case MatrixFamily::Euler:
      j["n"] = order;
      j["k"] = degree;
      break;
    case MatrixFamily::RowSize:
      j["rows"] = rows;
      if (cols != 0) j["cols"] = cols;
      break;
    case MatrixFamily::Gaussian:
    case MatrixFamily::Bernoulli:
      j["rows"] = rows;
      j["cols"] = cols;
      j["seed"] = seed;
      break;
  }
  return j;
}

BuiltMatrix build_matrix(const MatrixSource& source) {
  BuiltMatrix out;
  switch (source.family) {
    case MatrixFamily::Euler:
      out.sparse = build_binary_matrix(euler_square(source.order, source.degree));
      break;
    case MatrixFamily::RowSize: {
      SensingMatrix full = build_for_row_size(source.rows);
      if (source.cols != 0 && source.cols != full.cols()) {
        if (source.cols > full.cols()) {
          throw Error(Errc::ShapeError, "row size " + std::to_string(source.rows) + " gives only " +
                                            std::to_string(full.cols()) + " columns, " +
                                            std::to_string(source.cols) + " requested");
        }
        std::vector<Column> cols(full.columns().begin(), full.columns().begin() + source.cols);
        Provenance prov = full.provenance();
        full = SensingMatrix(full.rows(), full.alphabet(), std::move(cols), std::move(prov));
      }
      out.sparse = std::move(full);
      break;
    }
    case MatrixFamily::Gaussian:
      out.dictionary = gen_gaussian_matrix(source.rows, source.cols, source.seed);
      return out;
    case MatrixFamily::Bernoulli:
      out.dictionary = gen_bernoulli_matrix(source.rows, source.cols, source.seed);
      return out;
  }
  out.dictionary = normalize(*out.sparse);
  return out;
}

RecoveryResult run_solver(Solver solver, const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                          std::size_t sparsity) {
  return TrialSolver(solver, phi).solve(y, sparsity);
}

ExperimentReport run_sweep(const SweepConfig& cfg) {
  const auto start = Clock::now();
  if (cfg.trials < 1) throw Error(Errc::InvalidInput, "trials must be at least 1");
  if (!(cfg.threshold_db > 0.0)) throw Error(Errc::InvalidInput, "success threshold must be positive");
  const BuiltMatrix built = build_matrix(cfg.source);
  const auto m = static_cast<std::size_t>(built.dictionary.rows());
  if (cfg.k_min < 1 || cfg.k_max < cfg.k_min || cfg.k_max > m) {
    throw Error(Errc::InvalidSparsity, "sparsity range " + std::to_string(cfg.k_min) + ".." +
                                           std::to_string(cfg.k_max) + " is not within 1.." +
                                           std::to_string(m));
  }

  ExperimentReport report;
  report.kind = "sweep";
  report.config["matrix"] = cfg.source.describe();
  report.config["rows"] = built.dictionary.rows();
  report.config["cols"] = built.dictionary.cols();
  report.config["k_min"] = cfg.k_min;
  report.config["k_max"] = cfg.k_max;
  report.config["trials"] = cfg.trials;
  report.config["threshold_db"] = cfg.threshold_db;
  report.config["solver"] = solver_name(cfg.solver);
  report.config["seed"] = cfg.seed;

  const TrialSolver solver(cfg.solver, built.dictionary);
  for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
    SweepPoint p;
    p.sparsity = k;
    p.trials = cfg.trials;
    p.successes = count_successes(solver, built.dictionary, k, cfg.trials, cfg.threshold_db, cfg.seed,
                                  static_cast<std::uint64_t>(k) << 32);
    p.percent = 100.0 * static_cast<double>(p.successes) / static_cast<double>(p.trials);
    report.sweep.push_back(p);
  }
  report.wall_clock_s = seconds_since(start);
  return report;
}

ExperimentReport run_phase_transition(const PhaseConfig& cfg) {
  const auto start = Clock::now();
  if (cfg.trials < 1) throw Error(Errc::InvalidInput, "trials must be at least 1");
  if (!(cfg.fraction > 0.0 && cfg.fraction <= 1.0)) {
    throw Error(Errc::InvalidInput, "success fraction must lie in (0, 1]");
  }
  if (cfg.rows.empty()) throw Error(Errc::InvalidInput, "no row sizes given");

  ExperimentReport report;
  report.kind = "phase";
  report.config["family"] = family_name(cfg.family);
  report.config["cols"] = cfg.cols;
  report.config["rows"] = cfg.rows;
  report.config["fraction"] = cfg.fraction;
  report.config["trials"] = cfg.trials;
  report.config["threshold_db"] = cfg.threshold_db;
  report.config["solver"] = solver_name(cfg.solver);
  report.config["seed"] = cfg.seed;

  const double needed = cfg.fraction * static_cast<double>(cfg.trials) - 1e-9;
  for (std::size_t idx = 0; idx < cfg.rows.size(); ++idx) {
    const std::uint32_t m = cfg.rows[idx];
    MatrixSource source;
    switch (cfg.family) {
      case MatrixFamily::Euler: {
        const auto n = static_cast<std::uint32_t>(std::llround(std::sqrt(static_cast<double>(cfg.cols))));
        if (static_cast<std::uint64_t>(n) * n != cfg.cols || n == 0 || m % n != 0) {
          throw Error(Errc::IndexNotConstructible,
                      "no Euler index gives a " + std::to_string(m) + "x" + std::to_string(cfg.cols) +
                          " matrix (needs M = n^2 and n | m)");
        }
        source = MatrixSource::euler(n, m / n);
        break;
      }
      case MatrixFamily::RowSize:
        throw Error(Errc::InvalidInput, "phase transition needs a fixed column count; use euler or a random family");
      case MatrixFamily::Gaussian:
        source = MatrixSource::gaussian(m, cfg.cols, substream_seed(cfg.seed, 0xFFFF0000ULL | idx));
        break;
      case MatrixFamily::Bernoulli:
        source = MatrixSource::bernoulli(m, cfg.cols, substream_seed(cfg.seed, 0xFFFF0000ULL | idx));
        break;
    }
    const BuiltMatrix built = build_matrix(source);
    const TrialSolver solver(cfg.solver, built.dictionary);
    const std::uint64_t level_seed = substream_seed(cfg.seed, m);
    auto successes_at = [&](std::size_t k) {
      return count_successes(solver, built.dictionary, k, cfg.trials, cfg.threshold_db, level_seed,
                             static_cast<std::uint64_t>(k) << 32);
    };

    // Largest k in [0, hi] whose success rate reaches the fraction; k = 0 passes vacuously.
    std::size_t lo = 0;
    std::size_t lo_successes = 0;
    std::size_t hi = std::min<std::size_t>(m, cfg.cols);
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      const std::size_t s = successes_at(mid);
      if (static_cast<double>(s) >= needed) {
        lo = mid;
        lo_successes = s;
      } else {
        hi = mid - 1;
      }
    }
    PhasePoint p;
    p.rows = m;
    p.largest_k = lo;
    p.successes = lo_successes;
    p.delta = static_cast<double>(m) / static_cast<double>(cfg.cols);
    p.rho = static_cast<double>(lo) / static_cast<double>(cfg.cols);
    report.phase.push_back(p);
  }
  report.wall_clock_s = seconds_since(start);
  return report;
}

MatrixSource recon_source_for_rows(std::uint32_t rows, std::size_t edge) {
  const auto e = static_cast<std::uint32_t>(edge);
  if (e >= 3 && rows % e == 0) {
    const std::uint32_t k = rows / e;
    if (k >= 2 && k <= macneish_bound(e)) return MatrixSource::euler(e, k);
  }
  MatrixSource s = MatrixSource::row_size(rows);
  s.cols = e * e;
  return s;
}

ReconOutcome run_patch_reconstruction(const Image& image, const ReconConfig& cfg) {
  const auto start = Clock::now();
  const std::size_t levels = cfg.levels == 0 ? haar_max_levels(cfg.edge) : cfg.levels;
  if (levels > haar_max_levels(cfg.edge)) {
    throw Error(Errc::PatchSizeError, "wavelet depth " + std::to_string(levels) + " exceeds " +
                                          std::to_string(haar_max_levels(cfg.edge)) + " for patch edge " +
                                          std::to_string(cfg.edge));
  }
  PatchSet patches = patchify(image, cfg.edge);
  const BuiltMatrix built = build_matrix(cfg.source);
  const Eigen::MatrixXd& phi = built.dictionary;
  if (static_cast<std::size_t>(phi.cols()) != cfg.edge * cfg.edge) {
    throw Error(Errc::ShapeError, "matrix has " + std::to_string(phi.cols()) + " columns, patch edge " +
                                      std::to_string(cfg.edge) + " needs " +
                                      std::to_string(cfg.edge * cfg.edge));
  }
  const auto m = static_cast<std::size_t>(phi.rows());
  const std::size_t atoms = cfg.max_atoms == 0 ? std::max<std::size_t>(1, m / 4) : std::min(cfg.max_atoms, m);
  const TrialSolver solver(cfg.solver, phi);

  std::vector<unsigned char> failed(patches.patches.size(), 0);
  std::vector<Eigen::VectorXd> rebuilt(patches.patches.size());
  parallel_for(patches.patches.size(), [&](std::size_t i) {
    const Eigen::VectorXd& patch = patches.patches[i];
    const Eigen::VectorXd w = haar_forward({patch.data(), static_cast<std::size_t>(patch.size())}, cfg.edge, levels);
    const Eigen::VectorXd y = phi * w;
    Eigen::VectorXd w_hat;
    try {
      w_hat = solver.solve(y, atoms).estimate;
    } catch (const ConvergenceFailure& e) {
      w_hat = e.best_iterate();
      failed[i] = 1;
    }
    rebuilt[i] = haar_inverse({w_hat.data(), static_cast<std::size_t>(w_hat.size())}, cfg.edge, levels);
  });
  patches.patches = std::move(rebuilt);

  ReconOutcome out;
  out.image = unpatchify(patches);

  const Eigen::Map<const Eigen::VectorXd> x(image.pixels.data(), static_cast<Eigen::Index>(image.pixels.size()));
  const Eigen::Map<const Eigen::VectorXd> x_hat(out.image.pixels.data(),
                                                static_cast<Eigen::Index>(out.image.pixels.size()));

  ExperimentReport& report = out.report;
  report.kind = "recon";
  report.config["matrix"] = cfg.source.describe();
  report.config["height"] = image.height;
  report.config["width"] = image.width;
  report.config["edge"] = cfg.edge;
  report.config["levels"] = levels;
  report.config["max_atoms"] = atoms;
  report.config["solver"] = solver_name(cfg.solver);

  ReconPoint p;
  p.rows = static_cast<std::uint32_t>(m);
  p.cols = static_cast<std::uint32_t>(phi.cols());
  p.factor = static_cast<double>(phi.cols()) / static_cast<double>(m);
  p.snr_db = snr(x, x_hat);
  p.patches = patches.patches.size();
  for (const unsigned char f : failed) p.failed_patches += f;
  report.recon.push_back(p);
  report.wall_clock_s = seconds_since(start);
  return out;
}

}  // namespace eulercs
