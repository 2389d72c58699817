#include "acs/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace acs {

LookupTable build_lookup(const ScaledDistribution& dist, unsigned table_size) {
  if (table_size < 2 || (table_size & (table_size - 1)) != 0)
    throw std::invalid_argument("table size must be a power of two >= 2");
  const std::size_t M = dist.size();
  const unsigned __int128 T = dist.total(), K = table_size;
  LookupTable t;
  t.size = table_size;
  t.smin.resize(table_size);
  t.smax.resize(table_size);
  Symbol lo = 0, hi = 0;
  for (unsigned e = 0; e < table_size; ++e) {
    // c(s) <= e/K < c(s+1)
    while (lo + 1 < M && dist.cumulative(lo + 1) * K <= e * T) ++lo;
    // c(s) < (e+1)/K <= c(s+1)
    while (hi + 1 < M && dist.cumulative(hi + 1) * K < (e + 1) * T) ++hi;
    t.smin[e] = lo;
    t.smax[e] = hi;
  }
  return t;
}

// ---- search trees

namespace {

std::int32_t leaf(Symbol s) { return ~static_cast<std::int32_t>(s); }

template <class KeyFn>
std::int32_t build_tree(SearchTree& t, Symbol lo, Symbol hi, KeyFn&& key_for, unsigned depth) {
  if (hi - lo == 1) return leaf(lo);
  Symbol k = key_for(lo, hi, depth);
  auto id = static_cast<std::int32_t>(t.nodes.size());
  t.nodes.push_back({k, 0, 0});
  std::int32_t l = build_tree(t, lo, k, key_for, depth + 1);
  std::int32_t r = build_tree(t, k, hi, key_for, depth + 1);
  t.nodes[id].left = l;
  t.nodes[id].right = r;
  return id;
}

}  // namespace

SearchTree bisection_search_tree(std::size_t M) {
  if (M < 2) throw std::invalid_argument("need at least two symbols");
  SearchTree t;
  t.root = build_tree(t, 0, static_cast<Symbol>(M),
                      [](Symbol lo, Symbol hi, unsigned) { return (lo + hi) / 2; }, 0);
  return t;
}

SearchTree optimal_search_tree(std::span<const std::uint64_t> weights) {
  const std::size_t M = weights.size();
  if (M < 2) throw std::invalid_argument("need at least two symbols");
  // leaves i..j inclusive; root key r in (i, j] splits [i, r) | [r, j]
  std::vector<std::uint64_t> prefix(M + 1, 0);
  for (std::size_t i = 0; i < M; ++i) prefix[i + 1] = prefix[i] + weights[i];
  std::vector<std::vector<std::uint64_t>> cost(M, std::vector<std::uint64_t>(M, 0));
  std::vector<std::vector<Symbol>> root(M, std::vector<Symbol>(M, 0));
  for (std::size_t i = 0; i + 1 < M; ++i) {
    cost[i][i + 1] = weights[i] + weights[i + 1];
    root[i][i + 1] = static_cast<Symbol>(i + 1);
  }
  for (std::size_t len = 3; len <= M; ++len) {
    for (std::size_t i = 0; i + len <= M; ++i) {
      std::size_t j = i + len - 1;
      std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
      Symbol arg = 0;
      Symbol from = std::max<Symbol>(root[i][j - 1], static_cast<Symbol>(i + 1));
      Symbol to = std::min<Symbol>(root[i + 1][j], static_cast<Symbol>(j));
      for (Symbol r = from; r <= to; ++r) {
        std::uint64_t c = (r - 1 > i ? cost[i][r - 1] : 0) + (r < j ? cost[r][j] : 0);
        if (c < best) {
          best = c;
          arg = r;
        }
      }
      cost[i][j] = best + prefix[j + 1] - prefix[i];
      root[i][j] = arg;
    }
  }
  SearchTree t;
  t.root = build_tree(t, 0, static_cast<Symbol>(M),
                      [&](Symbol lo, Symbol hi, unsigned) { return root[lo][hi - 1]; }, 0);
  return t;
}

unsigned search_depth(const SearchTree& tree, Symbol s) {
  unsigned d = 0;
  std::int32_t at = tree.root;
  while (at >= 0) {
    ++d;
    const auto& n = tree.nodes[at];
    at = s < n.key ? n.left : n.right;
  }
  return d;
}

QuantileIndex build_quantile_index(const ScaledDistribution& dist, unsigned levels) {
  if (levels < 1 || levels > 16) throw std::invalid_argument("levels must be in 1..16");
  QuantileIndex q;
  q.levels = levels;
  const std::size_t M = dist.size();
  const unsigned __int128 T = dist.total();
  for (unsigned k = 1; k <= levels; ++k) {
    std::vector<Symbol> row;
    Symbol s = 0;
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << (k - 1)); ++j) {
      // c(s) <= (2j+1)/2^k
      unsigned __int128 num = (2 * j + 1) * T;
      while (s + 1 < M && (static_cast<unsigned __int128>(dist.cumulative(s + 1)) << k) <= num) ++s;
      row.push_back(s);
    }
    q.entries.push_back(std::move(row));
  }
  return q;
}

SearchTree quantile_search_tree(const ScaledDistribution& dist, const QuantileIndex& index) {
  const std::size_t M = dist.size();
  SearchTree t;
  // Walk the probability axis alongside the symbol range: node at depth d
  // covering dyadic cell j splits at q = (2j+1)/2^(d+1).
  struct Rec {
    const QuantileIndex& index;
    SearchTree& t;
    std::int32_t build(Symbol lo, Symbol hi, unsigned depth, std::uint64_t cell) {
      if (hi - lo == 1) return leaf(lo);
      Symbol k = (lo + hi) / 2;
      if (depth < index.levels) {
        Symbol m = index.at(depth + 1, cell);
        if (m > lo && m < hi) k = m;
        else if (m + 1 > lo && m + 1 < hi) k = m + 1;
      }
      auto id = static_cast<std::int32_t>(t.nodes.size());
      t.nodes.push_back({k, 0, 0});
      std::int32_t l = build(lo, k, depth + 1, 2 * cell);
      std::int32_t r = build(k, hi, depth + 1, 2 * cell + 1);
      t.nodes[id].left = l;
      t.nodes[id].right = r;
      return id;
    }
  } rec{index, t};
  t.root = rec.build(0, static_cast<Symbol>(M), 0, 0);
  return t;
}

// ---- selections

Selection select_tree(const DecoderState& st, const ScaledDistribution& dist, const SearchTree& tree) {
  std::uint64_t x = 0, y = st.length;
  unsigned probes = 0;
  std::int32_t at = tree.root;
  while (at >= 0) {
    const auto& n = tree.nodes[at];
    std::uint64_t z = st.product(dist.cumulative(n.key));
    ++probes;
    if (z > st.value) {
      y = z;
      at = n.left;
    } else {
      x = z;
      at = n.right;
    }
  }
  return {static_cast<Symbol>(~at), x, y, probes};
}

Selection select_sequential_sorted(const DecoderState& st, const ScaledDistribution& dist,
                                   std::span<const Symbol> order) {
  const std::size_t M = dist.size();
  unsigned probes = 0;
  for (Symbol s : order) {
    ++probes;
    std::uint64_t x = s == 0 ? 0 : st.product(dist.cumulative(s));
    if (x > st.value) continue;
    std::uint64_t y = s + 1 == M ? st.length : st.product(dist.cumulative(s + 1));
    if (st.value < y) return {s, x, y, probes};
  }
  throw std::logic_error("code value outside every symbol interval");
}

std::uint64_t lookup_index(const DecoderState& st, unsigned table_size) {
  ACS_COUNT(divisions, 1);
  std::uint64_t e = (static_cast<std::uint64_t>(table_size) * (st.value + 1) - 1) / st.length;
  return e < table_size ? e : table_size - 1;  // only corrupt input has V >= L
}

Selection select_lookup(const DecoderState& st, const ScaledDistribution& dist,
                        const LookupTable& table, const SearchTree& bisection) {
  const std::uint64_t e = lookup_index(st, table.size);
  const Symbol lo = table.smin[e], hi = table.smax[e];
  std::uint64_t x = 0, y = st.length;
  bool have_x = true, have_y = true;
  unsigned probes = 0;
  std::int32_t at = bisection.root;
  while (at >= 0) {
    const auto& n = bisection.nodes[at];
    if (n.key <= lo) {
      have_x = false;
      at = n.right;
    } else if (n.key > hi) {
      have_y = false;
      at = n.left;
    } else {
      std::uint64_t z = st.product(dist.cumulative(n.key));
      ++probes;
      if (z > st.value) {
        y = z;
        have_y = true;
        at = n.left;
      } else {
        x = z;
        have_x = true;
        at = n.right;
      }
    }
  }
  Symbol s = static_cast<Symbol>(~at);
  if (!have_x || !have_y) {
    Selection full = make_selection(st, dist, s, probes);
    if (have_x) full.low = x;
    if (have_y) full.high = y;
    return full;
  }
  return {s, x, y, probes};
}

// ---- strategy dispatch

const char* to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::kSequential: return "sequential";
    case SearchStrategy::kSequentialSorted: return "sorted";
    case SearchStrategy::kBisection: return "bisection";
    case SearchStrategy::kOptimal: return "optimal";
    case SearchStrategy::kQuantile: return "quantile";
    case SearchStrategy::kLookup: return "lookup";
  }
  return "?";
}

SearchStrategy parse_search_strategy(std::string_view name) {
  for (auto s : {SearchStrategy::kSequential, SearchStrategy::kSequentialSorted,
                 SearchStrategy::kBisection, SearchStrategy::kOptimal, SearchStrategy::kQuantile,
                 SearchStrategy::kLookup})
    if (name == to_string(s)) return s;
  throw std::invalid_argument("unknown search strategy: " + std::string(name));
}

SymbolSearch::SymbolSearch(SearchStrategy strategy, const ScaledDistribution& dist,
                           unsigned table_size, unsigned quantile_levels)
    : strategy_(strategy) {
  const std::size_t M = dist.size();
  switch (strategy) {
    case SearchStrategy::kSequential:
    case SearchStrategy::kBisection:
      break;
    case SearchStrategy::kSequentialSorted:
      order_.resize(M);
      std::iota(order_.begin(), order_.end(), Symbol{0});
      std::stable_sort(order_.begin(), order_.end(), [&](Symbol a, Symbol b) {
        return dist.frequency(a) > dist.frequency(b) || (dist.frequency(a) == dist.frequency(b) && a > b);
      });
      break;
    case SearchStrategy::kOptimal: {
      auto f = dist.frequencies();
      std::vector<std::uint64_t> w(f.begin(), f.end());
      tree_ = optimal_search_tree(w);
      break;
    }
    case SearchStrategy::kQuantile:
      tree_ = quantile_search_tree(dist, build_quantile_index(dist, quantile_levels));
      break;
    case SearchStrategy::kLookup:
      tree_ = bisection_search_tree(M);
      table_ = build_lookup(dist, table_size);
      break;
  }
}

Selection SymbolSearch::operator()(const DecoderState& st, const ScaledDistribution& dist) const {
  switch (strategy_) {
    case SearchStrategy::kSequential: return select_sequential(st, dist);
    case SearchStrategy::kSequentialSorted: return select_sequential_sorted(st, dist, order_);
    case SearchStrategy::kBisection: return select_bisection(st, dist);
    case SearchStrategy::kOptimal:
    case SearchStrategy::kQuantile: return select_tree(st, dist, tree_);
    case SearchStrategy::kLookup: return select_lookup(st, dist, table_, tree_);
  }
  return select_bisection(st, dist);
}

ProbeStats probe_counter(SearchStrategy strategy, const ScaledDistribution& dist,
                         std::span<const Symbol> workload, unsigned table_size) {
  Encoder enc(dist.config());
  for (Symbol s : workload) enc.encode(s, dist);
  auto digits = enc.finish();
  Decoder dec(dist.config(), digits);
  SymbolSearch search(strategy, dist, table_size);
  ProbeStats st;
  double sum = 0, sq = 0;
  for (Symbol expected : workload) {
    Selection sel = search(dec.state(), dist);
    if (dec.apply(sel, dist) != expected) throw std::logic_error("probe workload decoded wrongly");
    sum += sel.probes;
    sq += double(sel.probes) * sel.probes;
    st.total += sel.probes;
  }
  st.symbols = workload.size();
  if (st.symbols) {
    st.mean = sum / st.symbols;
    st.variance = sq / st.symbols - st.mean * st.mean;
  }
  return st;
}

}  // namespace acs
