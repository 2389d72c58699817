#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acs/binary_coder.hpp"
#include "acs/coder.hpp"
#include "acs/search.hpp"

namespace acs {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode : std::uint8_t {
  kStatic = 0,    // two-pass, scaled frequencies in the header
  kAdaptive = 1,  // direct cumulative update
  kTree = 2,      // tree counters, one interval update per symbol
  kBinary = 3,    // binary decisions on the bisection tree
  kPeriodic = 4,  // distribution rebuilt every R symbols
  kOptimal = 5,   // binary decisions on a two-pass Huffman tree
};

const char* to_string(Mode m);
Mode parse_mode(std::string_view name);

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kFixedHeaderBytes = 19;

struct CompressOptions {
  Mode mode = Mode::kTree;
  unsigned radix = 256;
  unsigned precision = 4;
  std::uint32_t period = 0;  // 0: 4M
  CarryStrategy carry = CarryStrategy::kBuffer;
};

struct DecompressOptions {
  SearchStrategy search = SearchStrategy::kBisection;  // static and periodic modes
  unsigned table_size = 16;
};

struct Header {
  std::uint8_t version = kFormatVersion;
  CoderConfig config;
  Mode mode = Mode::kTree;
  std::uint32_t M = 0;
  std::uint64_t N = 0;
  std::vector<std::uint32_t> frequencies;  // static
  std::uint32_t period = 0;                // periodic
  std::vector<std::uint8_t> tree;          // optimal, serialized
  std::size_t size = 0;                    // bytes before the payload
};

Header read_header(std::span<const std::uint8_t> container);

std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input, const CompressOptions& opt = {});
std::vector<std::uint8_t> compress_symbols(std::span<const Symbol> symbols, std::size_t M,
                                           const CompressOptions& opt = {});

std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> container,
                                     const DecompressOptions& opt = {});
struct DecodedSymbols {
  std::size_t M = 0;
  std::vector<Symbol> symbols;
};
DecodedSymbols decompress_symbols(std::span<const std::uint8_t> container,
                                  const DecompressOptions& opt = {});

struct ContainerInfo {
  Header header;
  std::size_t payload_bytes = 0;
  std::size_t total_bytes = 0;
  double bits_per_symbol = 0;  // whole container
  double payload_bits_per_symbol = 0;
};
ContainerInfo info(std::span<const std::uint8_t> container);
std::string format_info(const ContainerInfo& info);

}  // namespace acs
