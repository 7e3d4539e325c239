#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "cli_common.hpp"
#include "eulercs/construct.hpp"
#include "eulercs/error.hpp"
#include "eulercs/matrix_io.hpp"
#include "eulercs/parallel.hpp"

namespace eulercs::cli {

namespace {

namespace fs = std::filesystem;

struct ListedImage {
  std::string id, label, path;
  fs::path resolved;
};

// Lines of "id class path", whitespace separated; '#' starts a comment line.
std::vector<ListedImage> read_list(const std::string& list_path) {
  std::ifstream in(list_path);
  if (!in) throw Error(Errc::IoError, "cannot open " + list_path);
  const fs::path base = fs::path(list_path).parent_path();
  std::vector<ListedImage> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    ListedImage img;
    if (!(row >> img.id >> img.label >> img.path)) {
      throw Error(Errc::ParseError, list_path + ": line " + std::to_string(line_no) + ": expected id class path");
    }
    img.resolved = fs::path(img.path).is_absolute() ? fs::path(img.path) : base / img.path;
    out.push_back(std::move(img));
  }
  return out;
}

std::vector<Eigen::VectorXd> features_for(const std::vector<ListedImage>& images, const SensingMatrix& t,
                                          std::size_t edge, std::size_t levels) {
  std::vector<Eigen::VectorXd> out(images.size());
  parallel_for(images.size(), [&](std::size_t i) {
    out[i] = extract_features(load_pgm(images[i].resolved.string()), t, edge, levels);
  });
  return out;
}

struct IndexFlags {
  std::string list, matrix, index, out;
  std::size_t edge = 32, levels = 0;
};

int run_index(const CLI::App& sub, const IndexFlags& f, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  if (f.matrix.empty() == f.index.empty()) {
    note("error: cbir index needs exactly one of --matrix, --index");
    return kUsage;
  }
  const SensingMatrix t = matrix_from_flags(f.matrix, f.index);
  const std::size_t levels = f.levels == 0 ? haar_max_levels(f.edge) : f.levels;
  const auto images = read_list(f.list);
  const auto features = features_for(images, t, f.edge, levels);
  FeatureDB db(f.edge, levels, t.provenance().to_string(), matrix_fingerprint(t));
  for (std::size_t i = 0; i < images.size(); ++i) {
    db.add(FeatureEntry{images[i].id, images[i].label, images[i].path, features[i]});
  }
  db.save(f.out + ".tsv", f.out + ".bin");
  RunManifest m = manifest_for(sub, "cbir index");
  m.inputs.push_back(f.list);
  if (!f.matrix.empty()) m.inputs.push_back(f.matrix);
  m.outputs = {f.out + ".tsv", f.out + ".bin"};
  write_manifest(std::move(m), f.out, g, start);
  note("cbir index: " + std::to_string(db.size()) + " images, feature length " +
       std::to_string(db.feature_length()));
  return kOk;
}

struct QueryFlags {
  std::string db, matrix, image, id, label, list, out;
  std::size_t top = 10;
};

int run_query(const CLI::App& sub, const QueryFlags& f, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  if (f.image.empty() == f.list.empty()) {
    note("error: cbir query needs exactly one of --image, --list");
    return kUsage;
  }
  const FeatureDB db = FeatureDB::load(f.db + ".tsv", f.db + ".bin");
  const SensingMatrix t = f.matrix.empty() ? rebuild_from_provenance(Provenance::parse(db.matrix_provenance()))
                                           : load_esm(f.matrix);
  if (matrix_fingerprint(t) != db.matrix_hash()) {
    note("error: query matrix differs from the one the database was built with");
    return kFailure;
  }
  std::vector<ListedImage> queries;
  if (!f.list.empty()) {
    queries = read_list(f.list);
  } else {
    const std::string id = f.id.empty() ? fs::path(f.image).stem().string() : f.id;
    queries.push_back(ListedImage{id, f.label, f.image, fs::path(f.image)});
  }
  const auto features = features_for(queries, t, db.edge(), db.levels());
  std::vector<std::vector<RetrievalHit>> hits(queries.size());
  parallel_for(queries.size(), [&](std::size_t i) { hits[i] = retrieve(features[i], db, f.top); });

  Json jq = Json::array();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    Json h = Json::array();
    for (const auto& hit : hits[i]) {
      h.push_back(Json{{"id", hit.id}, {"similarity", hit.similarity}, {"degenerate", hit.degenerate}});
    }
    jq.push_back(Json{{"query", queries[i].id}, {"class", queries[i].label}, {"hits", h}});
  }
  Json j;
  j["top"] = f.top;
  j["matrix"] = db.matrix_provenance();
  j["queries"] = jq;
  if (f.out.empty()) {
    write_json(std::cout, j);
  } else {
    save_json(f.out, j);
    RunManifest m = manifest_for(sub, "cbir query");
    m.inputs = {f.db + ".tsv", f.db + ".bin", f.list.empty() ? f.image : f.list};
    m.outputs.push_back(f.out);
    write_manifest(std::move(m), f.out, g, start);
  }
  note("cbir query: " + std::to_string(queries.size()) + " queries against " + std::to_string(db.size()) +
       " images");
  return kOk;
}

struct ScoreFlags {
  std::string results, db, out;
  std::size_t top = 10;
};

int run_score(const CLI::App& sub, const ScoreFlags& f, const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const FeatureDB db = FeatureDB::load(f.db + ".tsv", f.db + ".bin");
  std::ifstream in(f.results);
  if (!in) throw Error(Errc::IoError, "cannot open " + f.results);
  std::vector<QueryOutcome> outcomes;
  try {
    const Json j = Json::parse(in);
    for (const auto& q : j.at("queries")) {
      QueryOutcome o;
      o.query_id = q.at("query").get<std::string>();
      o.query_label = q.at("class").get<std::string>();
      for (const auto& h : q.at("hits")) o.retrieved.push_back(h.at("id").get<std::string>());
      outcomes.push_back(std::move(o));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, f.results + ": " + e.what());
  }
  const RetrievalMetrics metrics = score_retrieval(outcomes, db.labels(), f.top);
  const Json j = to_json(metrics);
  if (f.out.empty()) {
    write_json(std::cout, j);
  } else {
    save_json(f.out, j);
    RunManifest m = manifest_for(sub, "cbir score");
    m.inputs = {f.results, f.db + ".tsv"};
    m.outputs.push_back(f.out);
    write_manifest(std::move(m), f.out, g, start);
  }
  std::ostringstream s;
  s << "cbir score: precision " << metrics.precision << ", recall " << metrics.recall;
  note(s.str());
  return kOk;
}

}  // namespace

void register_cbir_commands(CLI::App& root, const Globals& globals, std::vector<Command>& out) {
  CLI::App* cbir = root.add_subcommand("cbir", "Content-based image retrieval on compressed patch features");
  cbir->require_subcommand(1);

  auto ix = std::make_shared<IndexFlags>();
  CLI::App* i = cbir->add_subcommand("index", "Build a feature database");
  i->add_option("--list", ix->list, "image list: id class path per line")->required();
  i->add_option("--matrix", ix->matrix, "ESM transform with patch^2 columns");
  i->add_option("--index", ix->index, "Euler index n,k with n = patch edge");
  i->add_option("--patch", ix->edge, "patch edge (power of two)")->capture_default_str();
  i->add_option("--levels", ix->levels, "Haar depth (0: full)")->capture_default_str();
  i->add_option("--out", ix->out, "database prefix (.tsv manifest, .bin features)")->required();
  out.push_back({i, [i, ix, &globals] { return run_index(*i, *ix, globals); }});

  auto qf = std::make_shared<QueryFlags>();
  CLI::App* q = cbir->add_subcommand("query", "Rank database images against queries");
  q->add_option("--db", qf->db, "database prefix")->required();
  q->add_option("--matrix", qf->matrix, "transform file (default: rebuilt from the database)");
  q->add_option("--image", qf->image, "single query image");
  q->add_option("--id", qf->id, "id for --image (default: file stem)");
  q->add_option("--label", qf->label, "class for --image");
  q->add_option("--list", qf->list, "query list: id class path per line");
  q->add_option("--top", qf->top, "hits per query")->capture_default_str();
  q->add_option("--out", qf->out, "write JSON here instead of stdout");
  out.push_back({q, [q, qf, &globals] { return run_query(*q, *qf, globals); }});

  auto sf = std::make_shared<ScoreFlags>();
  CLI::App* s = cbir->add_subcommand("score", "Precision, recall and confusion of query results");
  s->add_option("--results", sf->results, "output of cbir query")->required();
  s->add_option("--db", sf->db, "database prefix (labels)")->required();
  s->add_option("--top", sf->top, "hits scored per query")->capture_default_str();
  s->add_option("--out", sf->out, "write JSON here instead of stdout");
  out.push_back({s, [s, sf, &globals] { return run_score(*s, *sf, globals); }});
}

}  // namespace eulercs::cli
