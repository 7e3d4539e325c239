#include "eulercs/records.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "eulercs/error.hpp"

namespace eulercs {

namespace {

Json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

Json snr_value(double v) {
  if (std::isnan(v)) return nullptr;
  return capped_snr(v);
}

}  // namespace

Json to_json(const CoherenceReport& r) {
  Json j;
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["coherence"] = r.coherence;
  j["argmax"] = {r.col_a + 1, r.col_b + 1};
  j["max_overlap"] = r.max_overlap;
  j["weight_product"] = r.weight_product;
  j["welch"] = number_or_null(r.welch);
  j["coherence_to_welch"] = number_or_null(r.coherence / r.welch);
  j["density"] = r.density;
  Json hist = Json::object();
  for (const auto& [w, c] : r.weight_histogram) hist[std::to_string(w)] = c;
  j["weight_histogram"] = hist;
  return j;
}

Json to_json(const SparseSignal& s) {
  Json j;
  j["dimension"] = s.dimension;
  Json support = Json::array();
  for (const std::size_t i : s.support) support.push_back(i + 1);
  j["support"] = support;
  j["values"] = s.values;
  j["seed"] = s.seed;
  return j;
}

SparseSignal sparse_signal_from_json(const Json& j) {
  try {
    SparseSignal s;
    s.dimension = j.at("dimension").get<std::size_t>();
    for (const auto& i : j.at("support")) {
      const auto one_based = i.get<std::size_t>();
      if (one_based < 1 || one_based > s.dimension) {
        throw Error(Errc::ParseError, "support index " + std::to_string(one_based) + " out of range");
      }
      s.support.push_back(one_based - 1);
    }
    s.values = j.at("values").get<std::vector<double>>();
    if (s.values.size() != s.support.size()) {
      throw Error(Errc::ParseError, "support and values differ in length");
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("signal record: ") + e.what());
  }
}

Json to_json(const RecoveryResult& r) {
  Json j;
  Json support = Json::array();
  for (const std::size_t i : r.support) support.push_back(i + 1);
  j["support"] = support;
  std::vector<double> values;
  values.reserve(r.support.size());
  for (const std::size_t i : r.support) values.push_back(r.estimate(static_cast<Eigen::Index>(i)));
  j["values"] = values;
  j["residual_norm"] = r.residual_norm;
  j["iterations"] = r.iterations;
  j["snr_db"] = snr_value(r.snr_db);
  j["rank_deficient"] = r.rank_deficient;
  return j;
}

Json to_json(const ExperimentReport& r, bool timing) {
  Json j;
  j["format_version"] = ExperimentReport::kFormatVersion;
  j["kind"] = r.kind;
  j["config"] = r.config;
  Json points = Json::array();
  for (const auto& p : r.sweep) {
    points.push_back(
        Json{{"k", p.sparsity}, {"successes", p.successes}, {"trials", p.trials}, {"percent", p.percent}});
  }
  for (const auto& p : r.phase) {
    points.push_back(Json{{"m", p.rows},
                          {"largest_k", p.largest_k},
                          {"successes", p.successes},
                          {"delta", p.delta},
                          {"rho", p.rho}});
  }
  for (const auto& p : r.recon) {
    points.push_back(Json{{"m", p.rows},
                          {"M", p.cols},
                          {"factor", p.factor},
                          {"snr_db", snr_value(p.snr_db)},
                          {"patches", p.patches},
                          {"failed_patches", p.failed_patches}});
  }
  j["points"] = points;
  if (timing) j["wall_clock_s"] = r.wall_clock_s;
  return j;
}

Json to_json(const RetrievalMetrics& m) {
  Json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  Json per_query = Json::array();
  for (const auto& q : m.per_query) {
    per_query.push_back(Json{{"query", q.query_id},
                             {"class", q.label},
                             {"correct", q.correct},
                             {"false_alarms", q.false_alarms},
                             {"relevant", q.relevant},
                             {"precision", q.precision},
                             {"recall", q.recall}});
  }
  j["per_query"] = per_query;
  Json per_class = Json::array();
  for (const auto& c : m.per_class) {
    per_class.push_back(
        Json{{"class", c.label}, {"queries", c.queries}, {"precision", c.precision}, {"recall", c.recall}});
  }
  j["per_class"] = per_class;
  j["classes"] = m.classes;
  j["confusion"] = m.confusion;
  return j;
}

void write_series_csv(std::ostream& out, const ExperimentReport& r) {
  const auto old_precision = out.precision(17);
  if (r.kind == "sweep") {
    out << "k,percent,successes,trials\n";
    for (const auto& p : r.sweep) out << p.sparsity << ',' << p.percent << ',' << p.successes << ',' << p.trials << '\n';
  } else if (r.kind == "phase") {
    out << "delta,rho,m,largest_k\n";
    for (const auto& p : r.phase) out << p.delta << ',' << p.rho << ',' << p.rows << ',' << p.largest_k << '\n';
  } else {
    out << "factor,snr_db,m,M\n";
    for (const auto& p : r.recon) {
      out << p.factor << ',' << capped_snr(p.snr_db) << ',' << p.rows << ',' << p.cols << '\n';
    }
  }
  out.precision(old_precision);
}

Json to_json(const RunManifest& m) {
  Json j;
  j["tool"] = "eulercs";
  j["version"] = kToolVersion;
  j["subcommand"] = m.subcommand;
  Json flags = Json::object();
  for (const auto& [k, v] : m.flags) flags[k] = v;
  j["flags"] = flags;
  if (m.seed) j["seed"] = *m.seed;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  if (m.wall_clock_s) j["wall_clock_s"] = *m.wall_clock_s;
  return j;
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_json(out, j);
}

}  // namespace eulercs
