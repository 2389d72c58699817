#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "acs/coder.hpp"
#include "acs/model.hpp"

namespace acs {

// For quantized position E in [0, K_t): every symbol whose interval meets
// [E/K_t, (E+1)/K_t) lies in [smin, smax].
struct LookupTable {
  unsigned size = 0;  // K_t
  std::vector<Symbol> smin, smax;
};

LookupTable build_lookup(const ScaledDistribution& dist, unsigned table_size);

// Node of a key-comparable search tree; child < 0 encodes leaf ~child.
struct SearchNode {
  Symbol key;
  std::int32_t left, right;
};

struct SearchTree {
  std::vector<SearchNode> nodes;  // root at 0
  std::int32_t root = 0;          // < 0 when M == 1 (never built)
};

SearchTree bisection_search_tree(std::size_t M);
// Minimum expected probes for the given weights (Knuth's DP).
SearchTree optimal_search_tree(std::span<const std::uint64_t> weights);
unsigned search_depth(const SearchTree& tree, Symbol s);

// Dyadic quantiles: for level k, the symbols m with c(m) <= j/2^k < c(m+1), j odd.
struct QuantileIndex {
  unsigned levels = 0;
  // entries[k-1][j] for q = (2j+1)/2^k
  std::vector<std::vector<Symbol>> entries;
  Symbol at(unsigned level, std::uint64_t j) const { return entries[level - 1][j]; }
};

QuantileIndex build_quantile_index(const ScaledDistribution& dist, unsigned levels);
// Bisection whose first splits follow the quantile index.
SearchTree quantile_search_tree(const ScaledDistribution& dist, const QuantileIndex& index);

Selection select_tree(const DecoderState& st, const ScaledDistribution& dist, const SearchTree& tree);
// Sequential probing in the given order (most probable first gives M - rank tests).
Selection select_sequential_sorted(const DecoderState& st, const ScaledDistribution& dist,
                                   std::span<const Symbol> by_decreasing_probability);
// E = floor((K_t (V+1) - 1) / L), then the bisection tree walk skipping
// every node the table already decides.
Selection select_lookup(const DecoderState& st, const ScaledDistribution& dist,
                        const LookupTable& table, const SearchTree& bisection);
std::uint64_t lookup_index(const DecoderState& st, unsigned table_size);

enum class SearchStrategy { kSequential, kSequentialSorted, kBisection, kOptimal, kQuantile, kLookup };

const char* to_string(SearchStrategy s);
SearchStrategy parse_search_strategy(std::string_view name);

// Auxiliary structures for one distribution, rebuilt whenever it changes.
class SymbolSearch {
 public:
  SymbolSearch(SearchStrategy strategy, const ScaledDistribution& dist, unsigned table_size = 16,
               unsigned quantile_levels = 2);
  Selection operator()(const DecoderState& st, const ScaledDistribution& dist) const;
  SearchStrategy strategy() const { return strategy_; }

 private:
  SearchStrategy strategy_;
  std::vector<Symbol> order_;
  SearchTree tree_;
  LookupTable table_;
};

struct ProbeStats {
  double mean = 0;
  double variance = 0;
  std::uint64_t total = 0;
  std::size_t symbols = 0;
};

// Encodes the workload with dist, decodes it with the strategy, counts probes.
ProbeStats probe_counter(SearchStrategy strategy, const ScaledDistribution& dist,
                         std::span<const Symbol> workload, unsigned table_size = 16);

}  // namespace acs
