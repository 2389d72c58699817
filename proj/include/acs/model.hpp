#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "acs/config.hpp"
#include "acs/instrument.hpp"
#include "acs/rational.hpp"

namespace acs {

inline constexpr std::uint64_t kDefaultMaxTotal = std::uint64_t{1} << 30;

// Exact probabilities p(m) and cumulative values c(m), c(0)=0, c(M)=1.
class StaticDistribution {
 public:
  static StaticDistribution from_probabilities(std::vector<Rational> p);
  static StaticDistribution from_decimal(std::initializer_list<std::string_view> p);
  static StaticDistribution from_counts(std::span<const std::uint64_t> counts);
  static StaticDistribution uniform(std::size_t M);

  std::size_t size() const { return p_.size(); }
  const Rational& probability(Symbol s) const { return p_.at(s); }
  const Rational& cumulative(std::size_t m) const { return c_.at(m); }
  std::vector<double> probabilities() const;

 private:
  std::vector<Rational> p_;
  std::vector<Rational> c_;
};

double entropy(const StaticDistribution& dist);
double entropy(std::span<const double> p);
double optimal_bits(const StaticDistribution& dist, Symbol s);
double optimal_bits(double p);
// Sum p log2(p/p'); p' need not sum to one.
double compression_loss(std::span<const double> p, std::span<const double> p_approx);
double compression_loss(const StaticDistribution& p, std::span<const double> p_approx);

// Integer cumulative counts C(0)=0 .. C(M)=D^P with every gap >= D.
class ScaledDistribution {
 public:
  ScaledDistribution(CoderConfig cfg, std::vector<std::uint64_t> cumulative);

  // C(s) = floor(c(s) D^P)
  static ScaledDistribution from_static(const StaticDistribution& dist, CoderConfig cfg);
  // freq must already sum to D^P
  static ScaledDistribution from_frequencies(std::span<const std::uint32_t> freq, CoderConfig cfg);

  std::size_t size() const { return cum_.size() - 1; }
  const CoderConfig& config() const { return cfg_; }
  std::uint64_t total() const { return cum_.back(); }
  std::uint64_t cumulative(std::size_t m) const { return cum_[m]; }
  std::uint64_t frequency(Symbol s) const { return cum_[s + 1] - cum_[s]; }
  std::span<const std::uint64_t> cumulative() const { return cum_; }
  std::vector<std::uint32_t> frequencies() const;

  friend bool operator==(const ScaledDistribution&, const ScaledDistribution&) = default;

 private:
  CoderConfig cfg_;
  std::vector<std::uint64_t> cum_;
};

// Direct occurrence counters P~(m) >= 1 with cumulative C~ kept explicitly.
class FrequencyModel {
 public:
  explicit FrequencyModel(std::size_t M, std::uint64_t max_total = kDefaultMaxTotal);
  static FrequencyModel from_counts(std::span<const std::uint64_t> counts,
                                    std::uint64_t max_total = kDefaultMaxTotal);

  std::size_t size() const { return counts_.size(); }
  std::uint64_t count(Symbol s) const { return counts_[s]; }
  std::uint64_t cumulative(std::size_t m) const { return cum_[m]; }
  std::uint64_t total() const { return cum_.back(); }
  std::uint64_t max_total() const { return max_total_; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::span<const std::uint64_t> cumulative() const { return cum_; }

  // Increments C~(m) for every m > s; rescales once total passes max_total.
  void update(Symbol s);
  // P~(m) <- max(1, ceil(P~(m)/2))
  void rescale();

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> cum_;
  std::uint64_t max_total_;
};

// Adaptive binary estimate: c1 = zeros + 1, c2 = total + 2.
struct BinaryFrequency {
  std::uint64_t c1 = 1;
  std::uint64_t c2 = 2;
  std::uint64_t max_total = kDefaultMaxTotal;

  void update(unsigned bit) {
    ++c2;
    if (bit == 0) ++c1;
    if (c2 > max_total) rescale();
  }
  void rescale() {
    std::uint64_t zeros = (c1 + 1) / 2, ones = (c2 - c1 + 1) / 2;
    c1 = zeros;
    c2 = zeros + ones;
  }
};

// Binary search tree over keys 1..M-1; node m tests "s < m". Leaves are symbols.
class TreeShape {
 public:
  static TreeShape bisection(std::size_t M);
  // Inserting keys in BST preorder reproduces any key-comparable tree.
  static TreeShape from_preorder(std::size_t M, std::span<const Symbol> keys);

  std::size_t size() const { return M_; }
  Symbol root() const { return root_; }
  // Child key, or 0 if that branch is a leaf.
  Symbol left(Symbol key) const { return left_[key]; }
  Symbol right(Symbol key) const { return right_[key]; }
  // First symbol of the key's subtree.
  Symbol low(Symbol key) const { return low_[key]; }
  Symbol high(Symbol key) const { return high_[key]; }
  unsigned depth(Symbol s) const;

 private:
  std::size_t M_ = 0;
  Symbol root_ = 0;
  std::vector<Symbol> left_, right_, low_, high_;
};

// Counters Cbar(0) = total, Cbar(m) = occurrences in node m's left branch.
class TreeModel {
 public:
  explicit TreeModel(TreeShape shape, std::uint64_t max_total = kDefaultMaxTotal);
  static TreeModel bisection(std::size_t M, std::uint64_t max_total = kDefaultMaxTotal) {
    return TreeModel(TreeShape::bisection(M), max_total);
  }

  struct Bounds {
    std::uint64_t low;   // C~(s)
    std::uint64_t high;  // C~(s+1)
  };

  std::size_t size() const { return shape_.size(); }
  const TreeShape& shape() const { return shape_; }
  std::uint64_t total() const { return counters_[0]; }
  std::uint64_t max_total() const { return max_total_; }
  std::span<const std::uint64_t> counters() const { return counters_; }
  void set_counters(std::vector<std::uint64_t> counters);
  // For coders that walk the counters themselves.
  std::span<std::uint64_t> mutable_counters() { return counters_; }

  Bounds bounds(Symbol s) const;
  // Bounds of s, then count it (counters along the path and the total).
  Bounds code(Symbol s);
  // Decoder walk: exceeds(z) reports whether cumulative z lies above the code value.
  template <class Exceeds>
  Symbol search(Exceeds&& exceeds, Bounds& out);

  void rescale();

 private:
  void after_update() {
    if (counters_[0] > max_total_) rescale();
  }

  TreeShape shape_;
  std::vector<std::uint64_t> counters_;
  std::uint64_t max_total_;
};

std::vector<std::uint64_t> cumulative_from_tree(const TreeModel& model);

template <class Exceeds>
Symbol TreeModel::search(Exceeds&& exceeds, Bounds& out) {
  std::uint64_t e = 0, f = counters_[0];
  Symbol key = shape_.root();
  Symbol s = 0;
  for (;;) {
    std::uint64_t z = e + counters_[key];
    ACS_COUNT(additions, 1);
    Symbol next;
    if (exceeds(z)) {
      f = z;
      ++counters_[key];
      next = shape_.left(key);
      if (next == 0) { s = key - 1; break; }
    } else {
      e = z;
      next = shape_.right(key);
      if (next == 0) { s = key; break; }
    }
    key = next;
  }
  ++counters_[0];
  ACS_COUNT(additions, 1);
  out = {e, f};
  after_update();
  return s;
}

struct Rebuild {
  ScaledDistribution dist;
  std::vector<Symbol> order;  // symbols by increasing probability, ties by index
};

// Scale raw counts (zeros allowed, positive sum) to D^P with every gap >= D.
Rebuild rebuild_periodic(std::span<const std::uint64_t> counts, CoderConfig cfg);
inline Rebuild rebuild_periodic(const FrequencyModel& model, CoderConfig cfg) {
  return rebuild_periodic(model.counts(), cfg);
}

// Occurrence counters refreshed into a ScaledDistribution every R symbols.
class PeriodicModel {
 public:
  PeriodicModel(std::size_t M, CoderConfig cfg, std::size_t period = 0);

  std::size_t size() const { return counts_.size(); }
  std::size_t period() const { return period_; }
  const ScaledDistribution& distribution() const { return current_.dist; }
  const std::vector<Symbol>& order() const { return current_.order; }
  std::uint64_t generation() const { return generation_; }
  // Count s; returns true when the distribution was rebuilt.
  bool observe(Symbol s);

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_;
  CoderConfig cfg_;
  std::size_t period_;
  std::size_t until_rebuild_;
  Rebuild current_;
  std::uint64_t generation_ = 0;
};

}  // namespace acs
