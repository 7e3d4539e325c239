#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "cli_common.hpp"
#include "eulercs/construct.hpp"
#include "eulercs/error.hpp"
#include "eulercs/experiments.hpp"
#include "eulercs/matrix_io.hpp"

namespace eulercs::cli {

namespace {

struct RecoverFlags {
  std::string matrix, index, signal, measurements, solver = "omp", out, save_signal;
  std::size_t sparsity = 0, atoms = 0;
  std::uint64_t seed = 0;
};

int run_recover(const CLI::App& sub, const RecoverFlags& f, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  if (f.matrix.empty() == f.index.empty()) {
    note("error: recover needs exactly one of --matrix, --index");
    return kUsage;
  }
  const int inputs = !f.signal.empty() + (f.sparsity != 0) + !f.measurements.empty();
  if (inputs != 1) {
    note("error: recover needs exactly one of --signal, --sparsity, --y");
    return kUsage;
  }
  const SensingMatrix matrix = matrix_from_flags(f.matrix, f.index);
  const Eigen::MatrixXd phi = normalize(matrix);

  std::optional<SparseSignal> truth;
  Eigen::VectorXd y;
  std::vector<std::string> in_paths;
  if (!f.matrix.empty()) in_paths.push_back(f.matrix);
  if (!f.signal.empty()) {
    std::ifstream in(f.signal);
    if (!in) throw Error(Errc::IoError, "cannot open " + f.signal);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ParseError, f.signal + ": " + e.what());
    }
    truth = sparse_signal_from_json(j);
    in_paths.push_back(f.signal);
  } else if (f.sparsity != 0) {
    truth = gen_sparse_signal(static_cast<std::size_t>(phi.cols()), f.sparsity, f.seed);
  } else {
    std::ifstream in(f.measurements);
    if (!in) throw Error(Errc::IoError, "cannot open " + f.measurements);
    const Eigen::MatrixXd col = read_csv(in);
    if (col.cols() != 1 || col.rows() != phi.rows()) {
      throw Error(Errc::ShapeError, "--y must hold one value per line, " + std::to_string(phi.rows()) + " lines");
    }
    y = col.col(0);
    in_paths.push_back(f.measurements);
  }
  if (truth) {
    if (truth->dimension != static_cast<std::size_t>(phi.cols())) {
      throw Error(Errc::ShapeError, "signal dimension " + std::to_string(truth->dimension) + " does not match " +
                                        std::to_string(phi.cols()) + " columns");
    }
    y = phi * truth->dense();
  }

  std::size_t atoms = f.atoms;
  if (atoms == 0) atoms = truth ? truth->support.size() : static_cast<std::size_t>(phi.rows()) / 4;
  int code = kOk;
  RecoveryResult result;
  try {
    result = run_solver(parse_solver(f.solver), phi, y, atoms);
  } catch (const ConvergenceFailure& e) {
    note(std::string("recover: ") + e.what());
    result.estimate = e.best_iterate();
    result.iterations = e.iterations();
    result.residual_norm = (phi * result.estimate - y).norm();
    for (Eigen::Index i = 0; i < result.estimate.size(); ++i) {
      if (result.estimate(i) != 0.0) result.support.push_back(static_cast<std::size_t>(i));
    }
    code = kFailure;
  }
  if (truth) result.snr_db = snr(truth->dense(), result.estimate);

  Json j;
  j["matrix"] = matrix.provenance().to_string();
  j["solver"] = solver_name(parse_solver(f.solver));
  j["atoms"] = atoms;
  if (truth) j["signal"] = to_json(*truth);
  j["result"] = to_json(result);

  if (!f.save_signal.empty() && truth) save_json(f.save_signal, to_json(*truth));
  if (f.out.empty()) {
    write_json(std::cout, j);
  } else {
    save_json(f.out, j);
    RunManifest m = manifest_for(sub, "recover");
    if (f.sparsity != 0) m.seed = f.seed;
    m.inputs = in_paths;
    m.outputs.push_back(f.out);
    if (!f.save_signal.empty()) m.outputs.push_back(f.save_signal);
    write_manifest(std::move(m), f.out, g, start);
  }
  std::ostringstream s;
  s << "recover: " << result.support.size() << " atoms, residual " << result.residual_norm;
  if (truth) s << ", SNR " << capped_snr(result.snr_db) << " dB";
  note(s.str());
  return code;
}

}  // namespace

void register_recover_command(CLI::App& root, const Globals& globals, std::vector<Command>& out) {
  auto f = std::make_shared<RecoverFlags>();
  CLI::App* r = root.add_subcommand("recover", "Recover a sparse signal from compressed measurements");
  r->add_option("--matrix", f->matrix, "ESM matrix file");
  r->add_option("--index", f->index, "Euler index n,k instead of a file");
  r->add_option("--signal", f->signal, "ground-truth signal record (JSON)");
  r->add_option("--sparsity", f->sparsity, "generate a random signal with this many non-zeros");
  r->add_option("--y", f->measurements, "measurements, one value per line");
  r->add_option("--seed", f->seed, "seed for --sparsity")->capture_default_str();
  r->add_option("--solver", f->solver, "omp or bp")->capture_default_str();
  r->add_option("--atoms", f->atoms, "OMP atom cap (default: signal sparsity)");
  r->add_option("--save-signal", f->save_signal, "write the ground-truth signal record here");
  r->add_option("--out", f->out, "write JSON here instead of stdout");
  out.push_back({r, [r, f, &globals] { return run_recover(*r, *f, globals); }});
}

}  // namespace eulercs::cli
