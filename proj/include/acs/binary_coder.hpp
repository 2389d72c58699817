#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "acs/coder.hpp"
#include "acs/model.hpp"

namespace acs {

// x = floor(L c1 / c2); 0 keeps [B, B+x), 1 keeps [B+x, B+L). Renormalizes.
void binary_encode(Encoder& enc, unsigned bit, const BinaryFrequency& freq);
unsigned binary_decode(Decoder& dec, const BinaryFrequency& freq);

// Binary decision tree. Internal node children: >= 0 node index, < 0 leaf ~symbol.
// Node key m means "s < m" goes left for key-comparable trees; Huffman trees
// route by the stored per-symbol paths instead.
class DecisionTree {
 public:
  struct Node {
    Symbol key;
    std::int32_t left, right;
    BinaryFrequency freq;
  };
  struct Step {
    std::uint32_t node;
    std::uint8_t bit;  // 0 = left
  };

  static DecisionTree bisection(std::size_t M);
  // Huffman over the counts, ties by (weight, lowest symbol index).
  static DecisionTree optimal(std::span<const std::uint64_t> counts);
  static DecisionTree deserialize(std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr);

  std::size_t size() const { return M_; }
  std::size_t root() const { return 0; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& nodes() { return nodes_; }
  const std::vector<Step>& path(Symbol s) const { return paths_[s]; }
  unsigned depth(Symbol s) const { return static_cast<unsigned>(paths_[s].size()); }
  // Preorder: tag byte (0 internal, 1 leaf) then key or symbol as u16 LE.
  std::vector<std::uint8_t> serialize() const;
  // Zero counts, max_total for every node.
  void reset_frequencies(std::uint64_t max_total = kDefaultMaxTotal);

 private:
  void finish();  // paths and initial per-node frequencies

  std::size_t M_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::vector<Step>> paths_;
};

void encode_symbol_tree(Encoder& enc, Symbol s, DecisionTree& tree);
Symbol decode_symbol_tree(Decoder& dec, DecisionTree& tree);

// Same decomposition driven by the Cbar counters of a TreeModel: node m
// is coded with c1 = Cbar(m) and c2 = the count of symbols reaching m.
void encode_symbol_bisection(Encoder& enc, Symbol s, TreeModel& model);
Symbol decode_symbol_bisection(Decoder& dec, TreeModel& model);

double expected_tests(const DecisionTree& tree, std::span<const double> p);
// Sequential search from M-1 down tests M - s boundaries for symbol s.
double expected_sequential_tests(std::span<const double> p);

}  // namespace acs
