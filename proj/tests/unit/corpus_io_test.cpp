#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "stc/common/error.hpp"
#include "stc/common/rng.hpp"
#include "stc/corpus/bow.hpp"
#include "stc/corpus/corpus.hpp"
#include "stc/corpus/labels.hpp"
#include "stc/corpus/stce_io.hpp"
#include "stc/corpus/word_vectors.hpp"

namespace stc::corpus {
namespace {

namespace fs = std::filesystem;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an stc::Error";
  return ErrorKind::invalid_argument;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("stc_corpus_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

std::string serialize(const EmbeddingMatrix& m) {
  std::ostringstream out(std::ios::binary);
  write_embeddings(m, out);
  return out.str();
}

EmbeddingMatrix deserialize(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_embeddings(in);
}

TEST(Stce, TwoByThreeRoundTrip) {
  const EmbeddingMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
  const auto back = deserialize(serialize(m));
  EXPECT_EQ(back.rows(), 2u);
  EXPECT_EQ(back.cols(), 3u);
  EXPECT_EQ(back, m);
}

TEST(Stce, SingleValueLayoutIsFormatExact) {
  const std::string bytes = serialize(EmbeddingMatrix(1, 1, {0.5f}));
  // magic 4 + version 4 + n 8 + d 8 + payload 4 + flag 1
  ASSERT_EQ(bytes.size(), 29u);
  EXPECT_EQ(bytes.substr(0, 4), "STCE");
  EXPECT_EQ(bytes.substr(4, 4), std::string("\x01\x00\x00\x00", 4));
  EXPECT_EQ(bytes.substr(8, 8), std::string("\x01\0\0\0\0\0\0\0", 8));
  EXPECT_EQ(bytes.substr(16, 8), std::string("\x01\0\0\0\0\0\0\0", 8));
  // 0.5f == 0x3F000000, little-endian
  EXPECT_EQ(bytes.substr(24, 4), std::string("\x00\x00\x00\x3f", 4));
  EXPECT_EQ(bytes[28], '\0');
}

TEST(Stce, RejectsBadMagic) {
  std::string bytes = serialize(EmbeddingMatrix(1, 1, {1.0f}));
  bytes.replace(0, 4, "XXXX");
  EXPECT_EQ(kind_of([&] { deserialize(bytes); }), ErrorKind::bad_magic);
}

TEST(Stce, RejectsTruncatedPayload) {
  // Header says 5 rows of 2, payload has 4 rows.
  std::string bytes = serialize(EmbeddingMatrix(5, 2, std::vector<float>(10, 1.0f)));
  bytes.resize(24 + 4 * 2 * 4);
  EXPECT_EQ(kind_of([&] { deserialize(bytes); }), ErrorKind::truncated);
}

TEST(Stce, RejectsNanPayload) {
  std::string bytes = serialize(EmbeddingMatrix(1, 2, {1.0f, 2.0f}));
  const auto nan_bits = std::bit_cast<std::uint32_t>(std::numeric_limits<float>::quiet_NaN());
  for (int b = 0; b < 4; ++b) bytes[28 + b] = static_cast<char>((nan_bits >> (8 * b)) & 0xFF);
  EXPECT_EQ(kind_of([&] { deserialize(bytes); }), ErrorKind::non_finite);
}

TEST(Stce, RefusesToWriteInfinity) {
  EmbeddingMatrix m(1, 2, {1.0f, 2.0f});
  m.data()[1] = std::numeric_limits<float>::infinity();
  std::ostringstream out;
  EXPECT_EQ(kind_of([&] { write_embeddings(m, out); }), ErrorKind::non_finite);
  EXPECT_TRUE(out.str().empty());
}

TEST(Stce, ConstructorRejectsNonFiniteAndBadShapes) {
  EXPECT_EQ(kind_of([] { EmbeddingMatrix(1, 1, {std::nanf("")}); }), ErrorKind::non_finite);
  EXPECT_EQ(kind_of([] { EmbeddingMatrix(2, 2, {1, 2, 3}); }), ErrorKind::shape_mismatch);
  EXPECT_EQ(kind_of([] { EmbeddingMatrix(0, 2, {}); }), ErrorKind::empty_input);
  EXPECT_EQ(kind_of([] { EmbeddingMatrix(2, 1, {1, 2}, {"a", "a"}); }), ErrorKind::invalid_argument);
}

TEST(Stce, RandomMatricesWithIdsRoundTripBitExactly) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    const std::size_t d = 1 + rng.index(8);
    std::vector<float> values(n * d);
    for (auto& v : values) {
      // Arbitrary finite bit patterns, including subnormals and negative zero.
      std::uint32_t bits = static_cast<std::uint32_t>(rng());
      while (!std::isfinite(std::bit_cast<float>(bits))) bits = static_cast<std::uint32_t>(rng());
      v = std::bit_cast<float>(bits);
    }
    std::vector<std::string> ids;
    if (trial % 2 == 0)
      for (std::size_t i = 0; i < n; ++i) ids.push_back("text-\xc3\xa9-" + std::to_string(i));
    const EmbeddingMatrix m(n, d, values, ids);
    const auto back = deserialize(serialize(m));
    ASSERT_EQ(back.ids(), m.ids());
    for (std::size_t k = 0; k < values.size(); ++k)
      ASSERT_EQ(std::bit_cast<std::uint32_t>(back.data()[k]), std::bit_cast<std::uint32_t>(values[k]));
  }
}

TEST_F(TempDir, FileRoundTripAndUnwritablePath) {
  const EmbeddingMatrix m(2, 2, {1, -2, 3.5f, 0}, {"x", "y"});
  write_embeddings(m, dir_ / "m.stce");
  EXPECT_EQ(read_embeddings(dir_ / "m.stce"), m);
  EXPECT_EQ(kind_of([&] { write_embeddings(m, dir_ / "missing" / "m.stce"); }), ErrorKind::io);
  EXPECT_EQ(kind_of([&] { read_embeddings(dir_ / "nope.stce"); }), ErrorKind::io);
}

TEST_F(TempDir, TsvImporter) {
  std::ofstream(dir_ / "m.tsv") << "a\t1\t2\nb\t3\t4\n";
  const auto m = read_embeddings_tsv(dir_ / "m.tsv", true);
  EXPECT_EQ(m, EmbeddingMatrix(2, 2, {1, 2, 3, 4}, {"a", "b"}));
  std::ofstream(dir_ / "ragged.tsv") << "1 2\n3\n";
  EXPECT_EQ(kind_of([&] { read_embeddings_tsv(dir_ / "ragged.tsv"); }), ErrorKind::shape_mismatch);
}

TEST(Labels, CanonicalizesInFirstAppearanceOrder) {
  const std::vector<long long> raw = {7, 3, 7, 9, 3};
  const LabelVector labels{std::span<const long long>(raw)};
  EXPECT_EQ(labels.labels(), (std::vector<std::size_t>{0, 1, 0, 2, 1}));
  EXPECT_EQ(labels.k(), 3u);
}

TEST(Labels, CanonicalizationIsIdempotentAndKeepsCoMembership) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<long long> raw(1 + rng.index(30));
    for (auto& v : raw) v = static_cast<long long>(rng.index(6)) * 13;
    const LabelVector once{std::span<const long long>(raw)};
    const LabelVector twice{std::span<const std::size_t>(once.labels())};
    ASSERT_EQ(once, twice);
    for (std::size_t i = 0; i < raw.size(); ++i)
      for (std::size_t j = 0; j < raw.size(); ++j) ASSERT_EQ(raw[i] == raw[j], once[i] == once[j]);
    std::set<long long> distinct(raw.begin(), raw.end());
    ASSERT_EQ(once.k(), distinct.size());
  }
}

TEST_F(TempDir, LabelFileParsing) {
  std::ofstream(dir_ / "labels.txt") << "3\n3\n1\n";
  EXPECT_EQ(read_labels(dir_ / "labels.txt").labels(), (std::vector<std::size_t>{0, 0, 1}));
  std::ofstream(dir_ / "bad.txt") << "1\nx\n";
  EXPECT_EQ(kind_of([&] { read_labels(dir_ / "bad.txt"); }), ErrorKind::parse);
  std::ofstream(dir_ / "neg.txt") << "-1\n";
  EXPECT_EQ(kind_of([&] { read_labels(dir_ / "neg.txt"); }), ErrorKind::invalid_argument);
}

TEST(Tokenizer, LowercasesAndSplitsOnNonAlphanumericRuns) {
  EXPECT_EQ(tokenize("Hello, World!! C++20 rocks"),
            (std::vector<std::string>{"hello", "world", "c", "20", "rocks"}));
  EXPECT_TRUE(tokenize("  ...  ").empty());
  EXPECT_EQ(tokenize("caf\xc3\xa9 Bar"), (std::vector<std::string>{"caf\xc3\xa9", "bar"}));
}

TEST(Tokenizer, IsIdempotent) {
  const std::string text = "The QUICK-brown fox's 3rd jump...";
  std::string joined;
  for (const auto& t : tokenize(text)) joined += t + " ";
  EXPECT_EQ(tokenize(joined), tokenize(text));
}

TEST(Bow, BinaryColumnsFollowFirstOccurrence) {
  const auto bow = bow_features(Corpus({"a b", "a"}), BowWeighting::binary);
  EXPECT_EQ(bow.vocabulary, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(bow.features, EmbeddingMatrix(2, 2, {1, 1, 1, 0}));
}

TEST(Bow, TfidfOfRepeatedTermIsUnitRow) {
  const auto bow = bow_features(Corpus({"a", "a"}), BowWeighting::tfidf);
  EXPECT_EQ(bow.features, EmbeddingMatrix(2, 1, {1, 1}));
}

TEST(Bow, TfidfMatchesHandEvaluatedFormula) {
  // idf(a) = idf(c) = ln(3/2) + 1, idf(b) = 1, then row L2 normalization.
  const auto bow = bow_features(Corpus({"a b", "b c"}), BowWeighting::tfidf);
  const std::vector<double> expected = {0.8148024746671689, 0.5797386715376657, 0.0,
                                        0.0, 0.5797386715376657, 0.8148024746671689};
  ASSERT_EQ(bow.features.data().size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(bow.features.data()[i], expected[i], 1e-6);
}

TEST(Bow, TfidfRowsAreUnitOrEmpty) {
  const auto bow = bow_features(Corpus({"x y y z", "", "!!", "z z z", "w x"}), BowWeighting::tfidf);
  for (std::size_t i = 0; i < bow.features.rows(); ++i) {
    double sq = 0.0;
    for (float v : bow.features.row(i)) {
      ASSERT_FALSE(std::isnan(v));
      sq += static_cast<double>(v) * v;
    }
    if (i == 1 || i == 2) EXPECT_EQ(sq, 0.0);
    else EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-6);
  }
}

TEST(Bow, AllEmptyCorpusIsAnError) {
  EXPECT_EQ(kind_of([] { bow_features(Corpus({"", "?!"}), BowWeighting::binary); }), ErrorKind::empty_input);
  EXPECT_EQ(kind_of([] { Corpus({}); }), ErrorKind::empty_input);
}

WordVectorTable small_table() { return WordVectorTable({"x", "y"}, 2, {1, 0, 0, 1}); }

TEST(WordVectors, SingleKnownWordIsItsVector) {
  const auto r = average_word_vectors(Corpus({"x"}), small_table(), 0);
  EXPECT_EQ(r.features, EmbeddingMatrix(1, 2, {1, 0}));
  EXPECT_EQ(r.oov_tokens, 0u);
}

TEST(WordVectors, TwoWordsAverage) {
  const auto r = average_word_vectors(Corpus({"x y"}), small_table(), 0);
  EXPECT_EQ(r.features, EmbeddingMatrix(1, 2, {0.5f, 0.5f}));
}

TEST(WordVectors, OovVectorsAreSeedDeterministicAndBounded) {
  const Corpus corpus({"unseen words only", "unseen"});
  const auto a = average_word_vectors(corpus, small_table(), 42);
  const auto b = average_word_vectors(corpus, small_table(), 42);
  const auto c = average_word_vectors(corpus, small_table(), 43);
  EXPECT_EQ(a.features, b.features);
  EXPECT_NE(a.features, c.features);
  EXPECT_EQ(a.oov_tokens, 4u);
  for (float v : oov_vector(42, "unseen", 300)) {
    EXPECT_GE(v, -0.25f);
    EXPECT_LE(v, 0.25f);
  }
  // Same token, same vector, wherever it appears.
  for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(a.features.row(1)[j], oov_vector(42, "unseen", 2)[j]);
}

TEST(WordVectors, EmptyTextYieldsZeroRowAndCountsWarning) {
  const auto r = average_word_vectors(Corpus({"x", "..."}), small_table(), 0);
  EXPECT_EQ(r.empty_texts, 1u);
  EXPECT_EQ(r.features.row(1)[0], 0.0f);
  EXPECT_EQ(r.features.row(1)[1], 0.0f);
}

TEST(WordVectors, RowDependsOnlyOnTokenMultiset) {
  const WordVectorTable table({"a", "b", "c"}, 3, {0.1f, 0.7f, -0.3f, 1e-3f, 5.f, 2.f, -1.f, 0.25f, 3.3f});
  const auto r = average_word_vectors(Corpus({"a b c a zz", "zz a c b a", "c a a zz b"}), table, 9);
  EXPECT_TRUE(std::ranges::equal(r.features.row(0), r.features.row(1)));
  EXPECT_TRUE(std::ranges::equal(r.features.row(0), r.features.row(2)));
}

TEST_F(TempDir, WordVectorFileFormat) {
  std::ofstream(dir_ / "wv.txt") << "2 3\nhello 1 2 3\nworld 4 5 6\n";
  const auto table = read_word_vectors(dir_ / "wv.txt");
  EXPECT_EQ(table.size(), 2u);
  EXPECT_EQ(table.dim(), 3u);
  ASSERT_TRUE(table.find("world"));
  EXPECT_EQ((*table.find("world"))[2], 6.0f);
  EXPECT_FALSE(table.find("nope"));
  std::ofstream(dir_ / "short.txt") << "3 2\na 1 2\n";
  EXPECT_EQ(kind_of([&] { read_word_vectors(dir_ / "short.txt"); }), ErrorKind::truncated);
}

}  // namespace
}  // namespace stc::corpus
