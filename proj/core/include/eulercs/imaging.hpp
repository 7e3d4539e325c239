#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eulercs/sensing_matrix.hpp"

namespace eulercs {

// Grayscale image, row-major doubles.
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t h, std::size_t w, double fill = 0.0) : height(h), width(w), pixels(h * w, fill) {}

  double& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
  double at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }

  friend bool operator==(const Image&, const Image&) = default;
};

// Reads P2 or P5 with maxval <= 255.
Image read_pgm(std::istream& in);
Image load_pgm(const std::string& path);
// Writes P5; values are rounded and clamped to 0..255.
void write_pgm(std::ostream& out, const Image& image);
void save_pgm(const std::string& path, const Image& image);

// Number of dyadic levels available for an edge of 2^a pixels (that is, a).
std::size_t haar_max_levels(std::size_t edge);

// Orthonormal 2-D Haar analysis of an edge x edge patch (row-major). Each
// level transforms the rows then the columns of the current low-pass block.
Eigen::VectorXd haar_forward(std::span<const double> patch, std::size_t edge, std::size_t levels);
Eigen::VectorXd haar_inverse(std::span<const double> coefficients, std::size_t edge, std::size_t levels);

struct PatchGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t edge = 0;

  std::size_t patch_rows() const noexcept { return height / edge; }
  std::size_t patch_cols() const noexcept { return width / edge; }
  std::size_t count() const noexcept { return patch_rows() * patch_cols(); }
};

struct PatchSet {
  PatchGrid grid;
  std::vector<Eigen::VectorXd> patches;  // row-major grid order, each patch row-major
};

PatchSet patchify(const Image& image, std::size_t edge);
Image unpatchify(const PatchSet& patches);

// Concatenation over patches of T * haar_forward(patch). T must have edge^2
// columns.
Eigen::VectorXd extract_features(const Image& image, const Eigen::MatrixXd& transform,
                                 std::size_t edge, std::size_t levels);
Eigen::VectorXd extract_features(const Image& image, const SensingMatrix& transform,
                                 std::size_t edge, std::size_t levels);

struct FeatureEntry {
  std::string id;
  std::string label;
  std::string path;
  Eigen::VectorXd feature;
};

/// Immutable-after-build collection of image features sharing one transform,
/// patch edge and wavelet depth.
class FeatureDB {
 public:
  FeatureDB() = default;
  FeatureDB(std::size_t edge, std::size_t levels, std::string matrix_provenance,
            std::uint64_t matrix_hash);

  void add(FeatureEntry entry);

  std::size_t edge() const noexcept { return edge_; }
  std::size_t levels() const noexcept { return levels_; }
  const std::string& matrix_provenance() const noexcept { return provenance_; }
  std::uint64_t matrix_hash() const noexcept { return hash_; }
  std::size_t feature_length() const noexcept { return length_; }
  const std::vector<FeatureEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::map<std::string, std::string> labels() const;

  // Manifest: header line plus "id<TAB>class<TAB>path" rows. Feature blocks:
  // "ESFD" magic, u32 version, u64 count, u64 feature length, u64 matrix
  // hash, then count * length little-endian doubles in manifest order.
  void save(const std::string& manifest_path, const std::string& blocks_path) const;
  static FeatureDB load(const std::string& manifest_path, const std::string& blocks_path);

 private:
  std::size_t edge_ = 0;
  std::size_t levels_ = 0;
  std::string provenance_;
  std::uint64_t hash_ = 0;
  std::size_t length_ = 0;
  std::vector<FeatureEntry> entries_;
};

// FNV-1a over the ESM text of the matrix.
std::uint64_t matrix_fingerprint(const SensingMatrix& matrix);

struct Similarity {
  double value = 0.0;
  bool degenerate = false;  // a zero-variance operand; value forced to 0
};

// Zero-lag normalised cross-correlation of two equal-length vectors.
Similarity normalized_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct RetrievalHit {
  std::size_t index = 0;
  std::string id;
  double similarity = 0.0;
  bool degenerate = false;
};

// Sorted by similarity descending, ties by id ascending; at most top_n hits.
std::vector<RetrievalHit> retrieve(const Eigen::VectorXd& query, const FeatureDB& db, std::size_t top_n);

struct QueryOutcome {
  std::string query_id;
  std::string query_label;
  std::vector<std::string> retrieved;  // ranked ids
};

struct QueryMetrics {
  std::string query_id;
  std::string label;
  std::size_t correct = 0;       // N_c
  std::size_t false_alarms = 0;  // N_f
  std::size_t relevant = 0;      // N_m
  double precision = 0.0;
  double recall = 0.0;
};

struct ClassMetrics {
  std::string label;
  std::size_t queries = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct RetrievalMetrics {
  std::vector<QueryMetrics> per_query;
  std::vector<ClassMetrics> per_class;
  std::vector<std::string> classes;  // sorted; indexes the confusion matrix
  // confusion[query class][retrieved class] = retrieved image counts.
  std::vector<std::vector<std::size_t>> confusion;
  double precision = 0.0;
  double recall = 0.0;
};

// `labels` maps every database id to its class. N_m counts the query's class
// in `labels`; only the first top_n retrieved ids of each outcome are scored.
RetrievalMetrics score_retrieval(const std::vector<QueryOutcome>& results,
                                 const std::map<std::string, std::string>& labels, std::size_t top_n);

}  // namespace eulercs
