#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "cli_common.hpp"
#include "eulercs/construct.hpp"
#include "eulercs/error.hpp"
#include "eulercs/euler.hpp"
#include "eulercs/matrix_io.hpp"
#include "eulercs/props.hpp"

namespace eulercs::cli {

namespace {

struct GenOptions {
  std::string index, extend_order, ternary, out = "-", format = "esm";
  std::string rows;
};

int run_gen(const CLI::App& sub, const GenOptions& o, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const int selectors = !o.index.empty() + !o.rows.empty() + !o.extend_order.empty() + !o.ternary.empty();
  if (selectors != 1) {
    note("error: gen needs exactly one of --index, --rows, --extend, --ternary");
    return kUsage;
  }
  SensingMatrix matrix;
  if (!o.index.empty()) {
    const auto nk = parse_uints(o.index, 2, "--index");
    matrix = build_binary_matrix(euler_square(nk[0], nk[1]));
  } else if (!o.rows.empty()) {
    matrix = build_for_row_size(parse_uints(o.rows, 1, "--rows")[0]);
  } else if (!o.extend_order.empty()) {
    matrix = build_extended(parse_uints(o.extend_order, 1, "--extend")[0]).matrix;
  } else {
    const auto pij = parse_uints(o.ternary, 3, "--ternary");
    matrix = build_ternary(pij[0], pij[1], pij[2]);
  }

  std::ostringstream text;
  if (o.format == "esm") {
    write_esm(text, matrix);
  } else {
    write_csv(text, matrix.dense());
  }
  if (o.out == "-") {
    std::cout << text.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(Errc::IoError, "cannot write " + o.out);
    f << text.str();
    f.close();
    RunManifest m = manifest_for(sub, "gen");
    m.outputs.push_back(o.out);
    write_manifest(std::move(m), o.out, g, start);
  }
  note("gen: " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) + " " +
       std::string(alphabet_name(matrix.alphabet())) + " matrix (" + matrix.provenance().to_string() + ")");
  return kOk;
}

struct Check {
  std::string name;
  std::string status;  // pass, fail, skipped
  std::string detail;
};

bool euler_family(const std::string& kind) { return kind == "euler" || kind == "rows" || kind == "extended"; }

int run_verify(const CLI::App& sub, const std::string& path, const std::string& out, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  std::uint32_t declared = 0;
  const SensingMatrix matrix = load_esm(path, &declared);
  const CoherenceReport report = coherence(matrix);
  const Provenance& prov = matrix.provenance();
  std::vector<Check> checks;

  {
    const auto w = matrix.column_weight();
    if (declared == 0) {
      checks.push_back({"column_weight", w ? "fail" : "pass",
                        w ? "header declares no common weight but every column has " + std::to_string(*w)
                          : "no common column weight"});
    } else if (!w || *w != declared) {
      checks.push_back({"column_weight", "fail",
                        "header declares k=" + std::to_string(declared) + " but columns disagree"});
    } else {
      checks.push_back({"column_weight", "pass", "every column has weight " + std::to_string(declared)});
    }
  }

  if (matrix.alphabet() == Alphabet::Binary && euler_family(prov.kind)) {
    checks.push_back({"max_overlap", report.max_overlap <= 1 ? "pass" : "fail",
                      "largest support overlap " + std::to_string(report.max_overlap) + " between columns " +
                          std::to_string(report.col_a + 1) + " and " + std::to_string(report.col_b + 1)});
    const auto k = prov.get("k");
    if (k && *k > 0 && matrix.cols() > 1) {
      // Overlap <= 1 with weight k everywhere gives coherence exactly 1/k once any pair meets.
      const bool exact = report.max_overlap == 1 && report.weight_product == *k * *k;
      const bool bounded = report.max_overlap <= 1;
      const bool ok = prov.kind == "extended" ? bounded : exact;
      checks.push_back({"coherence", ok ? "pass" : "fail",
                        "measured " + std::to_string(report.coherence) + ", expected " +
                            (prov.kind == "extended" ? "<= 1/" : "1/") + std::to_string(*k)});
    }
  }

  if (matrix.alphabet() == Alphabet::Ternary && matrix.column_weight() && matrix.cols() > 1) {
    const std::uint32_t k = *matrix.column_weight();
    checks.push_back({"coherence", report.max_overlap <= 1 ? "pass" : "fail",
                      "measured " + std::to_string(report.coherence) + ", expected <= 1/" + std::to_string(k)});
  }

  try {
    const SensingMatrix rebuilt = rebuild_from_provenance(prov);
    checks.push_back({"rebuild", rebuilt == matrix ? "pass" : "fail",
                      rebuilt == matrix ? "matches a fresh build of '" + prov.to_string() + "'"
                                        : "differs from a fresh build of '" + prov.to_string() + "'"});
  } catch (const Error& e) {
    if (e.code() == Errc::ProvenanceRequired) {
      checks.push_back({"rebuild", "skipped", e.what()});
    } else {
      checks.push_back({"rebuild", "fail", e.what()});
    }
  }

  if (matrix.alphabet() == Alphabet::Binary && (prov.kind == "euler" || prov.kind == "rows")) {
    const auto n = prov.get("n");
    const auto k = prov.get("k");
    if (n && k) {
      try {
        const EulerSquare sq =
            square_from_matrix(matrix, static_cast<std::uint32_t>(*n), static_cast<std::uint32_t>(*k));
        const ValidationReport v = validate_euler_square(sq);
        checks.push_back({"euler_square", v.ok() ? "pass" : "fail",
                          v.ok() ? "square read back from the matrix is valid" : v.message});
      } catch (const Error& e) {
        checks.push_back({"euler_square", "fail", e.what()});
      }
    }
  }

  bool ok = true;
  Json jchecks = Json::array();
  for (const auto& c : checks) {
    ok = ok && c.status != "fail";
    jchecks.push_back(Json{{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
  }
  Json j;
  j["file"] = path;
  j["provenance"] = prov.to_string();
  j["alphabet"] = alphabet_name(matrix.alphabet());
  j["report"] = to_json(report);
  j["checks"] = jchecks;
  j["ok"] = ok;

  if (out.empty()) {
    write_json(std::cout, j);
  } else {
    save_json(out, j);
    RunManifest m = manifest_for(sub, "verify");
    m.inputs.push_back(path);
    m.outputs.push_back(out);
    write_manifest(std::move(m), out, g, start);
  }
  for (const auto& c : checks) note("verify: " + c.name + " " + c.status + ": " + c.detail);
  note(std::string("verify: ") + (ok ? "all checks passed" : "FAILED"));
  return ok ? kOk : kFailure;
}

}  // namespace

void register_matrix_commands(CLI::App& root, const Globals& globals, std::vector<Command>& out) {
  auto gen = std::make_shared<GenOptions>();
  CLI::App* g = root.add_subcommand("gen", "Build a sensing matrix");
  g->add_option("--index", gen->index, "Euler index n,k");
  g->add_option("--rows", gen->rows, "row size m (neither prime nor a prime square)");
  g->add_option("--extend", gen->extend_order, "column-extended matrix for order n");
  g->add_option("--ternary", gen->ternary, "ternary matrix p,i,j");
  g->add_option("--out", gen->out, "output path, - for stdout")->capture_default_str();
  g->add_option("--format", gen->format, "esm or csv")
      ->check(CLI::IsMember({"esm", "csv"}))
      ->capture_default_str();
  out.push_back({g, [g, gen, &globals] { return run_gen(*g, *gen, globals); }});

  auto path = std::make_shared<std::string>();
  auto report = std::make_shared<std::string>();
  CLI::App* v = root.add_subcommand("verify", "Check a matrix file against its invariants");
  v->add_option("matrix", *path, "ESM matrix file")->required();
  v->add_option("--out", *report, "write the JSON report here instead of stdout");
  out.push_back({v, [v, path, report, &globals] { return run_verify(*v, *path, *report, globals); }});
}

}  // namespace eulercs::cli
