#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "acs/binary_coder.hpp"

using namespace acs;

namespace {

const std::vector<double> kSix{0.033, 0.066, 0.083, 0.124, 0.157, 0.537};
const std::vector<std::uint64_t> kSixCounts{4, 8, 10, 15, 19, 65};

std::vector<unsigned> depths(const DecisionTree& t) {
  std::vector<unsigned> d;
  for (Symbol s = 0; s < t.size(); ++s) d.push_back(t.depth(s));
  return d;
}

}  // namespace

TEST(BinaryCoder, HalfSplitHalvesLength) {
  auto cfg = CoderConfig::make(256, 4);
  Encoder enc(cfg);
  std::uint64_t L = enc.length();
  enc.narrow(0, L * 5 / 10);  // keep renormalization out of the way
  L = enc.length();
  BinaryFrequency f{5, 10};
  Encoder e2 = enc;
  binary_encode(e2, 0, f);
  EXPECT_NEAR(double(e2.length()), double(L) / 2, 1.0);
}

TEST(BinaryCoder, RejectsTotalAboveLength) {
  auto cfg = CoderConfig::make(2, 8);
  Encoder enc(cfg);
  BinaryFrequency f{1, 1000, kDefaultMaxTotal};
  EXPECT_THROW(binary_encode(enc, 0, f), PrecisionError);
}

TEST(BinaryCoder, AdaptiveRoundTrip) {
  std::mt19937_64 rng(1);
  for (unsigned D : {2u, 16u, 256u}) {
    auto cfg = CoderConfig::make(D, D == 2 ? 16 : 4);
    for (int trial = 0; trial < 30; ++trial) {
      double p0 = double(rng() % 1000) / 1000.0;
      std::vector<unsigned> bitsv(rng() % 5000);
      for (auto& b : bitsv) b = double(rng() % 1000) / 1000.0 < p0 ? 0 : 1;
      Encoder enc(cfg);
      BinaryFrequency f{1, 2, cfg.top()};
      for (unsigned b : bitsv) {
        binary_encode(enc, b, f);
        f.update(b);
      }
      auto out = enc.finish();
      Decoder dec(cfg, out);
      BinaryFrequency g{1, 2, cfg.top()};
      for (unsigned b : bitsv) {
        ASSERT_EQ(binary_decode(dec, g), b);
        g.update(b);
      }
    }
  }
}

TEST(DecisionTree, Bisection) {
  auto two = DecisionTree::bisection(2);
  ASSERT_EQ(two.nodes().size(), 1u);
  EXPECT_EQ(two.nodes()[0].key, 1u);
  auto six = DecisionTree::bisection(6);
  EXPECT_EQ(six.nodes()[0].key, 3u);
  EXPECT_EQ(six.nodes()[six.nodes()[0].left].key, 1u);
  EXPECT_EQ(six.nodes()[six.nodes()[0].right].key, 4u);
  for (std::size_t M = 2; M <= 1024; ++M) {
    auto t = DecisionTree::bisection(M);
    unsigned lo = unsigned(std::floor(std::log2(double(M)))), hi = unsigned(std::ceil(std::log2(double(M))));
    for (Symbol s = 0; s < M; ++s) {
      ASSERT_GE(t.depth(s), lo);
      ASSERT_LE(t.depth(s), hi);
    }
  }
}

TEST(DecisionTree, OptimalDepthsSixSymbols) {
  auto t = DecisionTree::optimal(kSixCounts);
  EXPECT_EQ(depths(t), (std::vector<unsigned>{4, 4, 3, 3, 3, 1}));
  auto two = DecisionTree::optimal(std::vector<std::uint64_t>{3, 9});
  EXPECT_EQ(depths(two), (std::vector<unsigned>{1, 1}));
}

TEST(DecisionTree, SerializeRoundTrip) {
  for (auto t : {DecisionTree::optimal(kSixCounts), DecisionTree::bisection(37)}) {
    auto bytes = t.serialize();
    std::size_t used = 0;
    auto u = DecisionTree::deserialize(bytes, &used);
    EXPECT_EQ(used, bytes.size());
    EXPECT_EQ(depths(u), depths(t));
    EXPECT_EQ(u.serialize(), bytes);
  }
  std::vector<std::uint8_t> broken{0, 1, 0, 1, 0, 0};
  EXPECT_THROW(DecisionTree::deserialize(broken), std::invalid_argument);
  std::vector<std::uint8_t> dup{0, 1, 0, 1, 0, 0, 1, 0, 0};
  EXPECT_THROW(DecisionTree::deserialize(dup), std::invalid_argument);
}

TEST(ExpectedTests, CostTable) {
  EXPECT_NEAR(expected_sequential_tests(kSix), 2.083, 0.001);
  EXPECT_NEAR(expected_tests(DecisionTree::bisection(6), kSix), 2.843, 0.001);
  EXPECT_NEAR(expected_tests(DecisionTree::optimal(kSixCounts), kSix), 2.025, 0.001);
}

TEST(ExpectedTests, HuffmanNeverWorseAndNearEntropy) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t M = 2 + rng() % 40;
    std::vector<std::uint64_t> c(M);
    double tot = 0;
    for (auto& x : c) tot += double(x = 1 + rng() % (trial % 2 ? 10 : 100000));
    std::vector<double> p;
    for (auto x : c) p.push_back(double(x) / tot);
    double h = 0, pmax = 0;
    for (double x : p) {
      h -= x * std::log2(x);
      pmax = std::max(pmax, x);
    }
    double opt = expected_tests(DecisionTree::optimal(c), p);
    EXPECT_LE(opt, expected_tests(DecisionTree::bisection(M), p) + 1e-12);
    EXPECT_LE(opt, h + 0.086 + pmax);
    EXPECT_GE(opt, h - 1e-12);
  }
}

TEST(TreeCoding, ProbabilityChainForSymbolTwo) {
  // conditional estimates along the path of s=2 multiply to p(2)
  TreeModel m(TreeShape::bisection(6));
  m.set_counters({121, 4, 8, 22, 15, 19});
  // root 3 (s<3: 22/121), node 1 (s<1 fails: 1 - 4/22), node 2 (s<2 fails: 1 - 8/18)
  double chain = (22.0 / 121) * (18.0 / 22) * (10.0 / 18);
  EXPECT_NEAR(std::log2(chain), std::log2(10.0 / 121), 1e-12);
  auto b = m.bounds(2);
  EXPECT_EQ(b.high - b.low, 10u);

  // the coder feeds those exact ratios: first decision is 22/121
  auto cfg = CoderConfig::make(256, 4);
  Encoder enc(cfg);
  encode_symbol_bisection(enc, 2, m);
  EXPECT_EQ(m.counters()[3], 23u);
  EXPECT_EQ(m.total(), 122u);
}

TEST(TreeCoding, RoundTripBothTreeKinds) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    auto cfg = trial % 3 == 0 ? CoderConfig::make(2, 16) : CoderConfig::make(256, 4);
    std::size_t M = 2 + rng() % 60;
    std::vector<std::uint64_t> counts(M);
    for (auto& c : counts) c = rng() % 50;
    std::vector<Symbol> S(rng() % 3000);
    for (auto& s : S) s = rng() % 4 ? rng() % (M / 3 + 1) : rng() % M;

    auto huff = DecisionTree::optimal(counts);
    huff.reset_frequencies(cfg.top());
    auto bis = DecisionTree::bisection(M);
    bis.reset_frequencies(cfg.top());
    auto tm = TreeModel::bisection(M, cfg.top());
    Encoder e1(cfg), e2(cfg), e3(cfg);
    for (Symbol s : S) {
      encode_symbol_tree(e1, s, huff);
      encode_symbol_tree(e2, s, bis);
      encode_symbol_bisection(e3, s, tm);
    }
    auto o1 = e1.finish(), o2 = e2.finish(), o3 = e3.finish();

    auto huff2 = DecisionTree::optimal(counts);
    huff2.reset_frequencies(cfg.top());
    auto bis2 = DecisionTree::bisection(M);
    bis2.reset_frequencies(cfg.top());
    auto tm2 = TreeModel::bisection(M, cfg.top());
    Decoder d1(cfg, o1), d2(cfg, o2), d3(cfg, o3);
    for (Symbol s : S) {
      ASSERT_EQ(decode_symbol_tree(d1, huff2), s);
      ASSERT_EQ(decode_symbol_tree(d2, bis2), s);
      ASSERT_EQ(decode_symbol_bisection(d3, tm2), s);
    }
  }
}

TEST(TreeCoding, TwoSymbolTreeIsPlainBinaryCoder) {
  auto cfg = CoderConfig::make(16, 4);
  std::mt19937_64 rng(4);
  std::vector<Symbol> S(2000);
  for (auto& s : S) s = rng() % 7 == 0;
  auto tree = DecisionTree::bisection(2);
  tree.reset_frequencies(cfg.top());
  Encoder a(cfg), b(cfg);
  BinaryFrequency f{1, 2, cfg.top()};
  for (Symbol s : S) {
    encode_symbol_tree(a, s, tree);
    binary_encode(b, s, f);
    f.update(s);
  }
  EXPECT_EQ(a.finish(), b.finish());
}

// Per-node counters after coding equal brute-force branch counts.
TEST(TreeCoding, NodeCountersMatchBranchCounts) {
  std::mt19937_64 rng(5);
  auto cfg = CoderConfig::make(256, 4);
  for (std::size_t M = 2; M <= 8; ++M) {
    auto tree = DecisionTree::bisection(M);
    tree.reset_frequencies();
    auto tm = TreeModel::bisection(M);
    std::vector<std::uint64_t> zeros(tree.nodes().size(), 0), visits(tree.nodes().size(), 0);
    Encoder e1(cfg), e2(cfg);
    for (int k = 0; k < 500; ++k) {
      Symbol s = rng() % M;
      for (const auto& st : tree.path(s)) {
        ++visits[st.node];
        zeros[st.node] += st.bit == 0;
      }
      encode_symbol_tree(e1, s, tree);
      encode_symbol_bisection(e2, s, tm);
    }
    auto fresh = DecisionTree::bisection(M);
    for (std::size_t n = 0; n < tree.nodes().size(); ++n) {
      EXPECT_EQ(tree.nodes()[n].freq.c1, fresh.nodes()[n].freq.c1 + zeros[n]);
      EXPECT_EQ(tree.nodes()[n].freq.c2, fresh.nodes()[n].freq.c2 + visits[n]);
      // the same count sits in the TreeModel counter of that key
      EXPECT_EQ(tm.counters()[tree.nodes()[n].key], tree.nodes()[n].freq.c1);
    }
    EXPECT_EQ(e1.finish(), e2.finish());
  }
}

TEST(TreeCoding, CompressionMatchesMaryCoder) {
  auto cfg = CoderConfig::make(256, 4);
  std::mt19937_64 rng(6);
  const std::size_t M = 16;
  std::vector<double> w(M);
  for (std::size_t i = 0; i < M; ++i) w[i] = std::pow(0.7, double(i));
  std::discrete_distribution<Symbol> pick(w.begin(), w.end());
  std::vector<Symbol> S(100000);
  for (auto& s : S) s = pick(rng);
  Encoder tree_enc(cfg), mary(cfg);
  auto tm = TreeModel::bisection(M, cfg.top());
  auto tm2 = TreeModel::bisection(M, cfg.top());
  for (Symbol s : S) {
    encode_symbol_bisection(tree_enc, s, tm);
    mary.encode(s, tm2);
  }
  double a = double(tree_enc.finish().size()), b = double(mary.finish().size());
  EXPECT_LE(std::fabs(a - b) / b, 0.005);
}

TEST(ExpectedSequential, IsMMinusS) {
  std::vector<double> p{0.25, 0.25, 0.5};
  EXPECT_DOUBLE_EQ(expected_sequential_tests(p), 0.25 * 3 + 0.25 * 2 + 0.5 * 1);
}
