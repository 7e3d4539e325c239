#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "errc.hpp"
#include "eulercs/construct.hpp"
#include "eulercs/imaging.hpp"
#include "eulercs/random.hpp"

using namespace eulercs;

namespace {

Image noise_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  Image img(h, w);
  for (auto& p : img.pixels) p = std::floor(rng.uniform() * 256.0);
  return img;
}

FeatureDB toy_db() {
  FeatureDB db(2, 1, "toy", 0);
  Eigen::VectorXd a(4), b(4), c(4);
  a << 1, -1, 1, -1;
  b << 1, 1, -1, -1;
  c << 2, 0, 0, -2;
  db.add({"a", "A", "", a});
  db.add({"b", "A", "", b});
  db.add({"c", "B", "", c});
  return db;
}

}  // namespace

TEST(Haar, HandComputedTwoByTwo) {
  const std::vector<double> patch{1, 2, 3, 4};
  const Eigen::VectorXd w = haar_forward(patch, 2, 1);
  // rows: (a+b)/sqrt2, (a-b)/sqrt2; then columns of that.
  EXPECT_NEAR(w(0), 5.0, 1e-14);   // (1+2+3+4)/2
  EXPECT_NEAR(w(1), -1.0, 1e-14);  // ((1-2)+(3-4))/2
  EXPECT_NEAR(w(2), -2.0, 1e-14);  // ((1+2)-(3+4))/2
  EXPECT_NEAR(w(3), 0.0, 1e-14);
}

TEST(Haar, ConstantPatchHasOnlyDc) {
  const std::vector<double> patch(64, 3.0);
  const Eigen::VectorXd w = haar_forward(patch, 8, 3);
  EXPECT_NEAR(w(0), 24.0, 1e-12);  // 3 * 8
  EXPECT_NEAR(w.tail(63).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(Haar, RoundTripAndEnergy) {
  Rng rng(5);
  for (std::size_t edge : {2u, 4u, 16u, 32u}) {
    for (std::size_t levels = 0; levels <= haar_max_levels(edge); ++levels) {
      std::vector<double> patch(edge * edge);
      for (auto& v : patch) v = rng.normal();
      const Eigen::VectorXd w = haar_forward(patch, edge, levels);
      const Eigen::Map<const Eigen::VectorXd> x(patch.data(), static_cast<Eigen::Index>(patch.size()));
      EXPECT_NEAR(w.norm(), x.norm(), 1e-10);
      const Eigen::VectorXd back = haar_inverse({w.data(), static_cast<std::size_t>(w.size())}, edge, levels);
      EXPECT_LE((back - x).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Haar, RejectsBadSizes) {
  EXPECT_EQ(errc_of([] { (void)haar_max_levels(12); }), Errc::PatchSizeError);
  const std::vector<double> patch(16, 0.0);
  EXPECT_EQ(errc_of([&] { (void)haar_forward(patch, 4, 3); }), Errc::PatchSizeError);
  EXPECT_EQ(errc_of([&] { (void)haar_forward(patch, 8, 1); }), Errc::ShapeError);
  EXPECT_EQ(haar_max_levels(32), 5u);
}

TEST(Patches, GridAndRoundTrip) {
  const Image img = noise_image(256, 256, 1);
  const PatchSet set = patchify(img, 32);
  EXPECT_EQ(set.grid.count(), 64u);
  EXPECT_EQ(set.patches.size(), 64u);
  EXPECT_EQ(set.patches[1](0), img.at(0, 32));
  EXPECT_EQ(set.patches[8](0), img.at(32, 0));
  EXPECT_EQ(unpatchify(set), img);
  EXPECT_EQ(errc_of([] { (void)patchify(Image(250, 250), 32); }), Errc::PatchGridError);
}

TEST(Pgm, RoundTripBinaryAndAscii) {
  const Image img = noise_image(6, 10, 2);
  std::stringstream buf;
  write_pgm(buf, img);
  EXPECT_EQ(read_pgm(buf), img);
  std::istringstream ascii("P2\n# comment\n3 2\n255\n0 1 2\n253 254 255\n");
  const Image a = read_pgm(ascii);
  EXPECT_EQ(a.width, 3u);
  EXPECT_EQ(a.height, 2u);
  EXPECT_EQ(a.at(1, 2), 255.0);
  std::istringstream sixteen("P2\n1 1\n65535\n7\n");
  EXPECT_EQ(errc_of([&] { (void)read_pgm(sixteen); }), Errc::ParseError);
  std::istringstream truncated("P5\n4 4\n255\nabc");
  EXPECT_EQ(errc_of([&] { (void)read_pgm(truncated); }), Errc::ParseError);
}

TEST(Features, LengthZeroAndLinearity) {
  const SensingMatrix t = build_binary_matrix(euler_square(16, 4));
  const Image a = noise_image(64, 32, 3);
  const Image b = noise_image(64, 32, 4);
  const Eigen::VectorXd fa = extract_features(a, t, 16, 4);
  EXPECT_EQ(fa.size(), 8 * 64);
  EXPECT_TRUE(extract_features(Image(64, 32), t, 16, 4).isZero());
  EXPECT_EQ(extract_features(a, t, 16, 4), fa);
  Image mix(64, 32);
  for (std::size_t i = 0; i < mix.pixels.size(); ++i) mix.pixels[i] = 2.0 * a.pixels[i] - 0.5 * b.pixels[i];
  const Eigen::VectorXd expected = 2.0 * fa - 0.5 * extract_features(b, t, 16, 4);
  EXPECT_LE((extract_features(mix, t, 16, 4) - expected).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(errc_of([&] { (void)extract_features(a, t, 8, 3); }), Errc::ShapeError);
}

TEST(Retrieval, CorrelationBasics) {
  Eigen::VectorXd a(4), b(4);
  a << 1, 2, 3, 4;
  b << 2, 4, 6, 8;
  EXPECT_NEAR(normalized_correlation(a, b).value, 1.0, 1e-15);
  EXPECT_NEAR(normalized_correlation(a, -a).value, -1.0, 1e-15);
  const Similarity flat = normalized_correlation(a, Eigen::VectorXd::Constant(4, 3.0));
  EXPECT_TRUE(flat.degenerate);
  EXPECT_EQ(flat.value, 0.0);
  EXPECT_EQ(errc_of([&] { (void)normalized_correlation(a, Eigen::VectorXd::Zero(3)); }), Errc::ShapeError);
}

TEST(Retrieval, ToyRanking) {
  const FeatureDB db = toy_db();
  Eigen::VectorXd q(4);
  q << 2, 0, 0, -2;
  const auto hits = retrieve(q, db, 3);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].id, "c");
  EXPECT_NEAR(hits[0].similarity, 1.0, 1e-15);
  // a and b tie at 1/sqrt(2); ties go by id.
  EXPECT_EQ(hits[1].id, "a");
  EXPECT_EQ(hits[2].id, "b");
  EXPECT_NEAR(hits[1].similarity, std::sqrt(0.5), 1e-15);
  EXPECT_EQ(retrieve(q, db, 1).size(), 1u);
}

TEST(Retrieval, NegatedMemberRanksLast) {
  const FeatureDB db = toy_db();
  Eigen::VectorXd q(4);
  q << -2, 0, 0, 2;
  const auto hits = retrieve(q, db, 3);
  EXPECT_EQ(hits.back().id, "c");
  EXPECT_NEAR(hits.back().similarity, -1.0, 1e-15);
}

TEST(Metrics, ToyCaseByHand) {
  const FeatureDB db = toy_db();
  std::vector<QueryOutcome> outcomes;
  for (const auto& e : db.entries()) {
    QueryOutcome o{e.id, e.label, {}};
    for (const auto& h : retrieve(e.feature, db, 2)) o.retrieved.push_back(h.id);
    outcomes.push_back(o);
  }
  ASSERT_EQ(outcomes[0].retrieved, (std::vector<std::string>{"a", "c"}));
  ASSERT_EQ(outcomes[1].retrieved, (std::vector<std::string>{"b", "c"}));
  ASSERT_EQ(outcomes[2].retrieved, (std::vector<std::string>{"c", "a"}));
  const RetrievalMetrics m = score_retrieval(outcomes, db.labels(), 2);
  EXPECT_EQ(m.classes, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.confusion, (std::vector<std::vector<std::size_t>>{{2, 2}, {1, 1}}));
  EXPECT_EQ(m.per_query[0].correct, 1u);
  EXPECT_EQ(m.per_query[0].false_alarms, 1u);
  EXPECT_EQ(m.per_query[0].relevant, 2u);
  EXPECT_EQ(m.per_query[2].recall, 1.0);
  EXPECT_EQ(m.precision, 0.5);
  EXPECT_DOUBLE_EQ(m.recall, 2.0 / 3.0);
  ASSERT_EQ(m.per_class.size(), 2u);
  EXPECT_EQ(m.per_class[0].recall, 0.5);
  EXPECT_EQ(m.per_class[1].recall, 1.0);
}

TEST(Metrics, FormulaExamples) {
  std::map<std::string, std::string> labels;
  for (int i = 0; i < 20; ++i) labels["x" + std::to_string(i)] = "X";
  for (int i = 0; i < 20; ++i) labels["y" + std::to_string(i)] = "Y";
  QueryOutcome all{"x0", "X", {}};
  QueryOutcome none{"x1", "X", {}};
  for (int i = 0; i < 10; ++i) {
    all.retrieved.push_back("x" + std::to_string(i));
    none.retrieved.push_back("y" + std::to_string(i));
  }
  const RetrievalMetrics m = score_retrieval({all, none}, labels, 10);
  EXPECT_EQ(m.per_query[0].precision, 1.0);
  EXPECT_EQ(m.per_query[0].recall, 0.5);
  EXPECT_EQ(m.per_query[1].precision, 0.0);
  EXPECT_EQ(m.per_query[1].recall, 0.0);
  QueryOutcome bad{"x0", "X", {"nobody"}};
  EXPECT_EQ(errc_of([&] { (void)score_retrieval({bad}, labels, 10); }), Errc::LabelError);
}

TEST(FeatureDb, RejectsLengthMismatchAndDuplicates) {
  FeatureDB db = toy_db();
  EXPECT_EQ(errc_of([&] { db.add({"d", "A", "", Eigen::VectorXd::Zero(3)}); }), Errc::ShapeError);
  EXPECT_EQ(errc_of([&] { db.add({"a", "A", "", Eigen::VectorXd::Zero(4)}); }), Errc::InvalidInput);
}
