#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acs {

using Symbol = std::uint32_t;

// Raised when registers are too narrow for the requested model.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output radix D = 2^radix_bits, registers of P base-D digits.
struct CoderConfig {
  unsigned radix_bits = 8;
  unsigned precision = 4;

  static CoderConfig make(unsigned radix, unsigned precision) {
    unsigned bits = 0;
    switch (radix) {
      case 2: bits = 1; break;
      case 4: bits = 2; break;
      case 16: bits = 4; break;
      case 256: bits = 8; break;
      default:
        throw std::invalid_argument("radix must be 2, 4, 16 or 256, got " + std::to_string(radix));
    }
    CoderConfig cfg{bits, precision};
    cfg.validate();
    return cfg;
  }

  void validate() const {
    if (precision < 2) throw std::invalid_argument("precision must be at least 2 digits");
    // products of two P-digit registers must fit in 64 bits
    if (radix_bits * precision > 32)
      throw std::invalid_argument("register width " + std::to_string(radix_bits * precision) +
                                  " bits exceeds 32");
  }

  std::uint64_t radix() const { return std::uint64_t{1} << radix_bits; }
  unsigned bits() const { return radix_bits * precision; }
  std::uint64_t full() const { return std::uint64_t{1} << bits(); }      // D^P
  std::uint64_t mask() const { return full() - 1; }
  std::uint64_t top() const { return std::uint64_t{1} << (bits() - radix_bits); }  // D^(P-1)
  unsigned top_shift() const { return bits() - radix_bits; }

  friend bool operator==(const CoderConfig&, const CoderConfig&) = default;
};

}  // namespace acs
