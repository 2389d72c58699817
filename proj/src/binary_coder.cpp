#include "acs/binary_coder.hpp"

#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace acs {

namespace {

std::uint64_t split_point(std::uint64_t length, const BinaryFrequency& f) {
  if (f.c1 == 0 || f.c1 >= f.c2) throw std::logic_error("invalid binary estimate");
  if (f.c2 > length)
    throw PrecisionError("binary total " + std::to_string(f.c2) + " exceeds interval length");
  ACS_COUNT(multiplications, 1);
  ACS_COUNT(divisions, 1);
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(length) * f.c1 / f.c2);
}

}  // namespace

void binary_encode(Encoder& enc, unsigned bit, const BinaryFrequency& freq) {
  const std::uint64_t l = enc.length();
  const std::uint64_t x = split_point(l, freq);
  if (bit == 0) enc.narrow(0, x);
  else enc.narrow(x, l);
  enc.renormalize();
}

unsigned binary_decode(Decoder& dec, const BinaryFrequency& freq) {
  const std::uint64_t l = dec.length();
  const std::uint64_t x = split_point(l, freq);
  ACS_COUNT(probes, 1);
  unsigned bit = dec.value() < x ? 0 : 1;
  if (bit == 0) dec.narrow(0, x);
  else dec.narrow(x, l);
  dec.renormalize();
  return bit;
}

// ---- DecisionTree

DecisionTree DecisionTree::bisection(std::size_t M) {
  if (M < 2) throw std::invalid_argument("need at least two symbols");
  DecisionTree t;
  t.M_ = M;
  auto rec = [&](auto&& self, Symbol u, Symbol n) -> std::int32_t {
    if (n - u == 1) return ~static_cast<std::int32_t>(u);
    Symbol m = (u + n) / 2;
    auto id = static_cast<std::int32_t>(t.nodes_.size());
    t.nodes_.push_back({m, 0, 0, {}});
    std::int32_t l = self(self, u, m);
    std::int32_t r = self(self, m, n);
    t.nodes_[id].left = l;
    t.nodes_[id].right = r;
    return id;
  };
  rec(rec, 0, static_cast<Symbol>(M));
  t.finish();
  return t;
}

DecisionTree DecisionTree::optimal(std::span<const std::uint64_t> counts) {
  const std::size_t M = counts.size();
  if (M < 2) throw std::invalid_argument("need at least two symbols");
  if (M > 65536) throw std::invalid_argument("alphabet too large for a stored tree");
  // (weight, lowest symbol, handle); handle < 0 is a leaf
  using Item = std::tuple<std::uint64_t, Symbol, std::int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (Symbol s = 0; s < M; ++s) heap.emplace(counts[s], s, ~static_cast<std::int64_t>(s));
  struct Proto {
    std::int64_t left, right;
  };
  std::vector<Proto> protos;
  while (heap.size() > 1) {
    auto [wa, sa, a] = heap.top();
    heap.pop();
    auto [wb, sb, b] = heap.top();
    heap.pop();
    protos.push_back({a, b});
    heap.emplace(wa + wb, std::min(sa, sb), static_cast<std::int64_t>(protos.size() - 1));
  }
  // renumber in preorder so the root is node 0
  DecisionTree t;
  t.M_ = M;
  auto min_symbol = [&](auto&& self, std::int64_t h) -> Symbol {
    if (h < 0) return static_cast<Symbol>(~h);
    return std::min(self(self, protos[h].left), self(self, protos[h].right));
  };
  auto rec = [&](auto&& self, std::int64_t h) -> std::int32_t {
    if (h < 0) return static_cast<std::int32_t>(h);
    auto id = static_cast<std::int32_t>(t.nodes_.size());
    t.nodes_.push_back({min_symbol(min_symbol, protos[h].right), 0, 0, {}});
    std::int32_t l = self(self, protos[h].left);
    std::int32_t r = self(self, protos[h].right);
    t.nodes_[id].left = l;
    t.nodes_[id].right = r;
    return id;
  };
  rec(rec, std::get<2>(heap.top()));
  t.finish();
  return t;
}

void DecisionTree::finish() {
  paths_.assign(M_, {});
  std::vector<bool> seen(M_, false);
  std::vector<Step> path;
  // returns leaf count of the subtree
  auto rec = [&](auto&& self, std::int32_t at) -> std::uint64_t {
    if (at < 0) {
      auto s = static_cast<Symbol>(~at);
      if (s >= M_ || seen[s]) throw std::invalid_argument("tree leaves must cover each symbol once");
      seen[s] = true;
      paths_[s] = path;
      return 1;
    }
    path.push_back({static_cast<std::uint32_t>(at), 0});
    std::uint64_t l = self(self, nodes_[at].left);
    path.back().bit = 1;
    std::uint64_t r = self(self, nodes_[at].right);
    path.pop_back();
    nodes_[at].freq.c1 = l;
    nodes_[at].freq.c2 = l + r;
    return l + r;
  };
  if (nodes_.size() + 1 != M_) throw std::invalid_argument("tree needs M-1 internal nodes");
  rec(rec, 0);
}

void DecisionTree::reset_frequencies(std::uint64_t max_total) {
  finish();
  for (auto& n : nodes_) {
    if (n.freq.c2 > max_total) throw PrecisionError("alphabet too large for the counter limit");
    n.freq.max_total = max_total;
  }
}

std::vector<std::uint8_t> DecisionTree::serialize() const {
  std::vector<std::uint8_t> out;
  auto put16 = [&](std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  auto rec = [&](auto&& self, std::int32_t at) -> void {
    if (at < 0) {
      out.push_back(1);
      put16(static_cast<std::uint32_t>(~at));
      return;
    }
    out.push_back(0);
    put16(nodes_[at].key);
    self(self, nodes_[at].left);
    self(self, nodes_[at].right);
  };
  rec(rec, 0);
  return out;
}

DecisionTree DecisionTree::deserialize(std::span<const std::uint8_t> bytes, std::size_t* consumed) {
  DecisionTree t;
  std::size_t pos = 0, leaves = 0;
  auto get16 = [&]() -> std::uint32_t {
    if (pos + 2 > bytes.size()) throw std::invalid_argument("truncated tree");
    std::uint32_t v = bytes[pos] | (std::uint32_t{bytes[pos + 1]} << 8);
    pos += 2;
    return v;
  };
  auto rec = [&](auto&& self, unsigned depth) -> std::int32_t {
    if (depth > 65536) throw std::invalid_argument("tree too deep");
    if (pos >= bytes.size()) throw std::invalid_argument("truncated tree");
    std::uint8_t tag = bytes[pos++];
    if (tag == 1) {
      ++leaves;
      return ~static_cast<std::int32_t>(get16());
    }
    if (tag != 0) throw std::invalid_argument("bad tree tag");
    auto id = static_cast<std::int32_t>(t.nodes_.size());
    t.nodes_.push_back({get16(), 0, 0, {}});
    std::int32_t l = self(self, depth + 1);
    std::int32_t r = self(self, depth + 1);
    t.nodes_[id].left = l;
    t.nodes_[id].right = r;
    return id;
  };
  std::int32_t root = rec(rec, 0);
  if (root < 0) throw std::invalid_argument("tree needs at least two symbols");
  t.M_ = leaves;
  t.finish();
  if (consumed) *consumed = pos;
  return t;
}

void encode_symbol_tree(Encoder& enc, Symbol s, DecisionTree& tree) {
  if (s >= tree.size()) throw std::out_of_range("symbol out of range");
  auto& nodes = tree.nodes();
  for (const auto& step : tree.path(s)) {
    auto& f = nodes[step.node].freq;
    binary_encode(enc, step.bit, f);
    f.update(step.bit);
  }
}

Symbol decode_symbol_tree(Decoder& dec, DecisionTree& tree) {
  auto& nodes = tree.nodes();
  std::int32_t at = 0;
  while (at >= 0) {
    auto& n = nodes[at];
    unsigned bit = binary_decode(dec, n.freq);
    n.freq.update(bit);
    at = bit ? n.right : n.left;
  }
  return static_cast<Symbol>(~at);
}

// ---- bisection decomposition straight from Cbar

void encode_symbol_bisection(Encoder& enc, Symbol s, TreeModel& model) {
  const std::size_t M = model.size();
  if (s >= M) throw std::out_of_range("symbol out of range");
  auto c = model.mutable_counters();
  std::uint64_t k = c[0]++;
  Symbol u = 0, n = static_cast<Symbol>(M);
  while (n - u > 1) {
    Symbol m = (u + n) / 2;
    if (s < m) {
      n = m;
      binary_encode(enc, 0, {c[m], k});
      k = c[m]++;
    } else {
      u = m;
      binary_encode(enc, 1, {c[m], k});
      k -= c[m];
    }
  }
  if (c[0] > model.max_total()) model.rescale();
}

Symbol decode_symbol_bisection(Decoder& dec, TreeModel& model) {
  const std::size_t M = model.size();
  auto c = model.mutable_counters();
  std::uint64_t k = c[0]++;
  Symbol s = 0, n = static_cast<Symbol>(M);
  while (n - s > 1) {
    Symbol m = (s + n) / 2;
    if (binary_decode(dec, {c[m], k}) == 0) {
      n = m;
      k = c[m]++;
    } else {
      s = m;
      k -= c[m];
    }
  }
  if (c[0] > model.max_total()) model.rescale();
  return s;
}

double expected_tests(const DecisionTree& tree, std::span<const double> p) {
  if (p.size() != tree.size()) throw std::invalid_argument("size mismatch");
  double e = 0;
  for (Symbol s = 0; s < p.size(); ++s) e += p[s] * tree.depth(s);
  return e;
}

double expected_sequential_tests(std::span<const double> p) {
  const std::size_t M = p.size();
  double e = 0;
  for (std::size_t s = 0; s < M; ++s) e += p[s] * static_cast<double>(M - s);
  return e;
}

}  // namespace acs
