#include "eulercs/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "eulercs/error.hpp"

namespace eulercs {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

std::size_t pgm_number(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, std::string("PGM ") + what + " '" + tok + "' is not a number");
  }
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

void check_haar_args(std::size_t size, std::size_t edge, std::size_t levels) {
  if (!is_power_of_two(edge)) {
    throw Error(Errc::PatchSizeError, "patch edge " + std::to_string(edge) + " is not a power of two");
  }
  if (levels > haar_max_levels(edge)) {
    throw Error(Errc::PatchSizeError, "levels " + std::to_string(levels) + " exceed log2(" +
                                          std::to_string(edge) + ")");
  }
  if (size != edge * edge) throw Error(Errc::ShapeError, "patch data does not have edge^2 values");
}

// In-place single-level transform of `count` values spaced by `stride`.
void haar_step(double* data, std::size_t count, std::size_t stride, std::vector<double>& tmp) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t half = count / 2;
  tmp.resize(count);
  for (std::size_t i = 0; i < half; ++i) {
    const double a = data[(2 * i) * stride];
    const double b = data[(2 * i + 1) * stride];
    tmp[i] = (a + b) * s;
    tmp[half + i] = (a - b) * s;
  }
  for (std::size_t i = 0; i < count; ++i) data[i * stride] = tmp[i];
}

void haar_step_inverse(double* data, std::size_t count, std::size_t stride, std::vector<double>& tmp) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t half = count / 2;
  tmp.resize(count);
  for (std::size_t i = 0; i < half; ++i) {
    const double avg = data[i * stride];
    const double diff = data[(half + i) * stride];
    tmp[2 * i] = (avg + diff) * s;
    tmp[2 * i + 1] = (avg - diff) * s;
  }
  for (std::size_t i = 0; i < count; ++i) data[i * stride] = tmp[i];
}

}  // namespace

Image read_pgm(std::istream& in) {
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw Error(Errc::ParseError, "not a P2/P5 PGM (magic '" + magic + "')");
  const std::size_t width = pgm_number(in, "width");
  const std::size_t height = pgm_number(in, "height");
  const std::size_t maxval = pgm_number(in, "maxval");
  if (width == 0 || height == 0) throw Error(Errc::ParseError, "PGM has zero size");
  if (maxval == 0 || maxval > 255) throw Error(Errc::ParseError, "only 8-bit PGM (maxval <= 255) is supported");
  Image image(height, width);
  if (magic == "P5") {
    std::vector<unsigned char> raw(width * height);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw Error(Errc::ParseError, "PGM raster truncated");
    for (std::size_t i = 0; i < raw.size(); ++i) image.pixels[i] = raw[i];
  } else {
    for (double& p : image.pixels) {
      const std::size_t v = pgm_number(in, "sample");
      if (v > maxval) throw Error(Errc::ParseError, "PGM sample exceeds maxval");
      p = static_cast<double>(v);
    }
  }
  return image;
}

Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const Image& image) {
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  std::vector<unsigned char> raw(image.pixels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = std::clamp(std::round(image.pixels[i]), 0.0, 255.0);
    raw[i] = static_cast<unsigned char>(v);
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void save_pgm(const std::string& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_pgm(out, image);
}

std::size_t haar_max_levels(std::size_t edge) {
  if (!is_power_of_two(edge)) {
    throw Error(Errc::PatchSizeError, "patch edge " + std::to_string(edge) + " is not a power of two");
  }
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < edge) ++levels;
  return levels;
}

Eigen::VectorXd haar_forward(std::span<const double> patch, std::size_t edge, std::size_t levels) {
  check_haar_args(patch.size(), edge, levels);
  Eigen::VectorXd out(static_cast<Eigen::Index>(patch.size()));
  std::copy(patch.begin(), patch.end(), out.data());
  std::vector<double> tmp;
  std::size_t size = edge;
  for (std::size_t l = 0; l < levels; ++l, size /= 2) {
    for (std::size_t r = 0; r < size; ++r) haar_step(out.data() + r * edge, size, 1, tmp);
    for (std::size_t c = 0; c < size; ++c) haar_step(out.data() + c, size, edge, tmp);
  }
  return out;
}

Eigen::VectorXd haar_inverse(std::span<const double> coefficients, std::size_t edge, std::size_t levels) {
  check_haar_args(coefficients.size(), edge, levels);
  Eigen::VectorXd out(static_cast<Eigen::Index>(coefficients.size()));
  std::copy(coefficients.begin(), coefficients.end(), out.data());
  std::vector<double> tmp;
  for (std::size_t l = levels; l-- > 0;) {
    const std::size_t size = edge >> l;
    for (std::size_t c = 0; c < size; ++c) haar_step_inverse(out.data() + c, size, edge, tmp);
    for (std::size_t r = 0; r < size; ++r) haar_step_inverse(out.data() + r * edge, size, 1, tmp);
  }
  return out;
}

PatchSet patchify(const Image& image, std::size_t edge) {
  if (edge == 0 || image.height % edge != 0 || image.width % edge != 0) {
    throw Error(Errc::PatchGridError, std::to_string(image.height) + "x" + std::to_string(image.width) +
                                          " image is not divisible into " + std::to_string(edge) +
                                          "x" + std::to_string(edge) + " patches");
  }
  PatchSet set;
  set.grid = PatchGrid{image.height, image.width, edge};
  set.patches.reserve(set.grid.count());
  for (std::size_t pr = 0; pr < set.grid.patch_rows(); ++pr) {
    for (std::size_t pc = 0; pc < set.grid.patch_cols(); ++pc) {
      Eigen::VectorXd patch(static_cast<Eigen::Index>(edge * edge));
      for (std::size_t r = 0; r < edge; ++r) {
        for (std::size_t c = 0; c < edge; ++c) {
          patch(static_cast<Eigen::Index>(r * edge + c)) = image.at(pr * edge + r, pc * edge + c);
        }
      }
      set.patches.push_back(std::move(patch));
    }
  }
  return set;
}

Image unpatchify(const PatchSet& set) {
  const PatchGrid& g = set.grid;
  if (g.edge == 0 || g.height % g.edge != 0 || g.width % g.edge != 0 || set.patches.size() != g.count()) {
    throw Error(Errc::PatchGridError, "patch set does not tile its grid");
  }
  Image image(g.height, g.width);
  std::size_t index = 0;
  for (std::size_t pr = 0; pr < g.patch_rows(); ++pr) {
    for (std::size_t pc = 0; pc < g.patch_cols(); ++pc, ++index) {
      const Eigen::VectorXd& patch = set.patches[index];
      if (patch.size() != static_cast<Eigen::Index>(g.edge * g.edge)) {
        throw Error(Errc::PatchGridError, "patch " + std::to_string(index) + " has the wrong size");
      }
      for (std::size_t r = 0; r < g.edge; ++r) {
        for (std::size_t c = 0; c < g.edge; ++c) {
          image.at(pr * g.edge + r, pc * g.edge + c) = patch(static_cast<Eigen::Index>(r * g.edge + c));
        }
      }
    }
  }
  return image;
}

Eigen::VectorXd extract_features(const Image& image, const Eigen::MatrixXd& transform,
                                 std::size_t edge, std::size_t levels) {
  if (transform.cols() != static_cast<Eigen::Index>(edge * edge)) {
    throw Error(Errc::ShapeError, "transform has " + std::to_string(transform.cols()) +
                                      " columns, patch vectors have " + std::to_string(edge * edge));
  }
  const PatchSet set = patchify(image, edge);
  const Eigen::Index m = transform.rows();
  Eigen::VectorXd feature(m * static_cast<Eigen::Index>(set.patches.size()));
  for (std::size_t p = 0; p < set.patches.size(); ++p) {
    const Eigen::VectorXd& patch = set.patches[p];
    const Eigen::VectorXd coeffs =
        haar_forward(std::span<const double>(patch.data(), static_cast<std::size_t>(patch.size())), edge, levels);
    feature.segment(static_cast<Eigen::Index>(p) * m, m) = transform * coeffs;
  }
  return feature;
}

Eigen::VectorXd extract_features(const Image& image, const SensingMatrix& transform,
                                 std::size_t edge, std::size_t levels) {
  return extract_features(image, transform.dense(), edge, levels);
}

Similarity normalized_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw Error(Errc::ShapeError, "feature lengths differ (" + std::to_string(a.size()) + " vs " +
                                      std::to_string(b.size()) + ")");
  }
  if (a.size() == 0) return {0.0, true};
  const Eigen::VectorXd da = a.array() - a.mean();
  const Eigen::VectorXd db = b.array() - b.mean();
  const double na = da.norm();
  const double nb = db.norm();
  if (na == 0.0 || nb == 0.0) return {0.0, true};
  return {std::clamp(da.dot(db) / (na * nb), -1.0, 1.0), false};
}

std::vector<RetrievalHit> retrieve(const Eigen::VectorXd& query, const FeatureDB& db, std::size_t top_n) {
  std::vector<RetrievalHit> hits;
  hits.reserve(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    const FeatureEntry& e = db.entries()[i];
    const Similarity s = normalized_correlation(query, e.feature);
    hits.push_back({i, e.id, s.value, s.degenerate});
  }
  std::stable_sort(hits.begin(), hits.end(), [](const RetrievalHit& x, const RetrievalHit& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return x.id < y.id;
  });
  if (hits.size() > top_n) hits.resize(top_n);
  return hits;
}

RetrievalMetrics score_retrieval(const std::vector<QueryOutcome>& results,
                                 const std::map<std::string, std::string>& labels, std::size_t top_n) {
  RetrievalMetrics metrics;
  std::set<std::string> class_set;
  std::map<std::string, std::size_t> class_size;
  for (const auto& [id, label] : labels) {
    class_set.insert(label);
    ++class_size[label];
  }
  for (const auto& q : results) class_set.insert(q.query_label);
  metrics.classes.assign(class_set.begin(), class_set.end());
  auto class_index = [&](const std::string& label) {
    return static_cast<std::size_t>(std::lower_bound(metrics.classes.begin(), metrics.classes.end(), label) -
                                    metrics.classes.begin());
  };
  metrics.confusion.assign(metrics.classes.size(), std::vector<std::size_t>(metrics.classes.size(), 0));

  std::map<std::string, ClassMetrics> per_class;
  for (const auto& q : results) {
    QueryMetrics qm;
    qm.query_id = q.query_id;
    qm.label = q.query_label;
    const std::size_t count = std::min(top_n, q.retrieved.size());
    for (std::size_t t = 0; t < count; ++t) {
      const auto it = labels.find(q.retrieved[t]);
      if (it == labels.end()) {
        throw Error(Errc::LabelError, "retrieved id '" + q.retrieved[t] + "' has no class label");
      }
      ++metrics.confusion[class_index(q.query_label)][class_index(it->second)];
      if (it->second == q.query_label) {
        ++qm.correct;
      } else {
        ++qm.false_alarms;
      }
    }
    const auto sz = class_size.find(q.query_label);
    qm.relevant = sz == class_size.end() ? 0 : sz->second;
    qm.precision = count == 0 ? 0.0 : static_cast<double>(qm.correct) / static_cast<double>(count);
    qm.recall = qm.relevant == 0 ? 0.0 : static_cast<double>(qm.correct) / static_cast<double>(qm.relevant);

    ClassMetrics& cm = per_class[q.query_label];
    cm.label = q.query_label;
    ++cm.queries;
    cm.precision += qm.precision;
    cm.recall += qm.recall;
    metrics.precision += qm.precision;
    metrics.recall += qm.recall;
    metrics.per_query.push_back(std::move(qm));
  }
  for (auto& [label, cm] : per_class) {
    cm.precision /= static_cast<double>(cm.queries);
    cm.recall /= static_cast<double>(cm.queries);
    metrics.per_class.push_back(cm);
  }
  if (!results.empty()) {
    metrics.precision /= static_cast<double>(results.size());
    metrics.recall /= static_cast<double>(results.size());
  }
  return metrics;
}

}  // namespace eulercs
