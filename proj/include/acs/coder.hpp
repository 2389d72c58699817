#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "acs/config.hpp"
#include "acs/instrument.hpp"
#include "acs/model.hpp"

namespace acs {

enum class CarryStrategy { kBuffer, kCounter };

// Plain keeps L (starts at D^P - 1). MinusOne keeps L' = length - 1 with the
// new length floor((L'+1)(C(s+1)-C(s))/D^P); only used to replay register traces.
enum class LengthMode { kPlain, kMinusOne };

// TwoDigit adds D^(P-1)/2 and emits two digits. Minimal emits the shortest
// code value the window allows (one digit at most).
enum class Termination { kTwoDigit, kMinimal };

// Output digits d(1..t) with carry propagation.
class DigitBuffer {
 public:
  explicit DigitBuffer(unsigned radix, CarryStrategy strategy = CarryStrategy::kBuffer)
      : radix_(radix), strategy_(strategy) {}
  static DigitBuffer from_digits(unsigned radix, std::vector<std::uint8_t> digits);

  void push(std::uint8_t digit) {
    if (strategy_ == CarryStrategy::kBuffer) {
      digits_.push_back(digit);
      return;
    }
    if (has_pending_ && digit == radix_ - 1) {
      ++run_;
      return;
    }
    settle();
    pending_ = digit;
    has_pending_ = true;
  }
  // Trailing (D-1)-digits become 0 and the digit before them is incremented.
  void propagate_carry();

  std::size_t size() const { return digits_.size() + (has_pending_ ? 1 + run_ : 0); }
  CarryStrategy strategy() const { return strategy_; }
  // Flushes outstanding digits.
  std::vector<std::uint8_t> take();
  const std::vector<std::uint8_t>& settled() const { return digits_; }

 private:
  void settle();

  unsigned radix_;
  CarryStrategy strategy_;
  std::vector<std::uint8_t> digits_;
  // counter-carry: first outstanding digit and the run of D-1 after it
  std::uint8_t pending_ = 0;
  bool has_pending_ = false;
  std::uint64_t run_ = 0;
};

struct EncoderOptions {
  CarryStrategy carry = CarryStrategy::kBuffer;
  LengthMode length_mode = LengthMode::kPlain;
  Termination termination = Termination::kTwoDigit;
};

// Register snapshot taken after every interval update, carry and digit.
struct TraceEvent {
  enum Kind { kUpdate, kCarry, kDigit, kFinal } kind;
  std::uint64_t product;  // X of the update
  std::uint64_t base;
  std::uint64_t length;   // the register: L, or L' in MinusOne mode
  unsigned digit;
};

class Encoder {
 public:
  explicit Encoder(CoderConfig cfg, EncoderOptions opt = {});

  void encode(Symbol s, const ScaledDistribution& dist) {
    interval_update(s, dist);
    renormalize();
  }
  void interval_update(Symbol s, const ScaledDistribution& dist);
  // One division for gamma = L / total, then the model is updated.
  void encode(Symbol s, FrequencyModel& model);
  void encode(Symbol s, TreeModel& model);

  // B += x (carry checked), L = y - x
  void narrow(std::uint64_t x, std::uint64_t y) {
    std::uint64_t b = (base_ + x) & mask_;
    if (b < base_) carry();
    base_ = b;
    length_ = y - x;
  }
  void renormalize() {
    while (length_ < top_) emit_digit();
  }
  // Terminates the stream; returns the digit count t.
  std::size_t finalize();
  std::vector<std::uint8_t> finish();

  const CoderConfig& config() const { return cfg_; }
  std::uint64_t base() const { return base_; }
  std::uint64_t length() const { return length_; }
  std::uint64_t length_register() const {
    return opt_.length_mode == LengthMode::kMinusOne ? length_ - 1 : length_;
  }
  std::size_t digit_count() const { return buf_.size(); }
  const DigitBuffer& buffer() const { return buf_; }

  void set_trace(std::vector<TraceEvent>* trace) { trace_ = trace; }

 private:
  void carry();
  void emit_digit() {
    std::uint8_t d = static_cast<std::uint8_t>(base_ >> shift_);
    buf_.push(d);
    base_ = (base_ << cfg_.radix_bits) & mask_;
    length_ <<= cfg_.radix_bits;
    ACS_COUNT(renormalizations, 1);
    if (trace_) trace_->push_back({TraceEvent::kDigit, 0, base_, length_register(), d});
  }
  void check_adaptive(std::uint64_t total) const;

  CoderConfig cfg_;
  EncoderOptions opt_;
  std::uint64_t mask_, top_;
  unsigned shift_;
  std::uint64_t base_ = 0;
  std::uint64_t length_;  // true length; L' + 1 in MinusOne mode
  DigitBuffer buf_;
  std::vector<TraceEvent>* trace_ = nullptr;
};

// floor(a * b / 2^bits) without overflow
inline std::uint64_t scaled_product(std::uint64_t a, std::uint64_t b, unsigned bits) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) >> bits);
}

// Decoder registers as seen by the symbol search strategies.
struct DecoderState {
  std::uint64_t value;   // V = D^P (v - b)
  std::uint64_t length;  // true length (L, or L' + 1)
  unsigned bits;         // P log2 D

  std::uint64_t product(std::uint64_t cum) const {
    ACS_COUNT(multiplications, 1);
    return scaled_product(length, cum, bits);
  }
};

// Result of a symbol search: X = low, Y = high are the encoder's products.
struct Selection {
  Symbol symbol;
  std::uint64_t low;
  std::uint64_t high;
  unsigned probes;
};

// Finishes a selection whose interval bounds were not all computed.
Selection make_selection(const DecoderState& st, const ScaledDistribution& dist, Symbol s,
                         unsigned probes);

Selection select_bisection(const DecoderState& st, const ScaledDistribution& dist);
// Probes from M-1 downward; M - s probes for symbol s.
Selection select_sequential(const DecoderState& st, const ScaledDistribution& dist);

struct DecoderOptions {
  LengthMode length_mode = LengthMode::kPlain;
  // Reads allowed past the end of the digits before the stream counts as
  // truncated. The two-digit terminator needs at most P - 2.
  std::size_t overrun_allowance = SIZE_MAX;
};

class Decoder {
 public:
  Decoder(CoderConfig cfg, std::span<const std::uint8_t> digits, DecoderOptions opt = {});

  DecoderState state() const { return {value_, length_, cfg_.bits()}; }

  Symbol decode(const ScaledDistribution& dist) { return apply(select_bisection(state(), dist), dist); }
  template <class Select>
  Symbol decode(const ScaledDistribution& dist, Select&& select) {
    return apply(select(state(), dist), dist);
  }
  Symbol decode(FrequencyModel& model, bool sequential = false);
  Symbol decode(TreeModel& model);

  // Takes the selected interval and renormalizes.
  Symbol apply(const Selection& sel, const ScaledDistribution& dist);
  void narrow(std::uint64_t x, std::uint64_t y) {
    value_ -= x;
    length_ = y - x;
  }
  void renormalize() {
    while (length_ < top_) {
      value_ = ((value_ << cfg_.radix_bits) & mask_) | next_digit();
      length_ <<= cfg_.radix_bits;
      ACS_COUNT(renormalizations, 1);
    }
  }

  const CoderConfig& config() const { return cfg_; }
  std::uint64_t value() const { return value_; }
  std::uint64_t length() const { return length_; }
  std::uint64_t length_register() const {
    return opt_.length_mode == LengthMode::kMinusOne ? length_ - 1 : length_;
  }
  std::size_t digits_read() const { return cursor_; }
  bool overrun() const {
    return cursor_ > digits_.size() && cursor_ - digits_.size() > opt_.overrun_allowance;
  }

 private:
  std::uint64_t next_digit() {
    std::size_t i = cursor_++;
    return i < digits_.size() ? digits_[i] : 0;
  }
  void check_adaptive(std::uint64_t total) const;

  CoderConfig cfg_;
  DecoderOptions opt_;
  std::uint64_t mask_, top_;
  std::span<const std::uint8_t> digits_;
  std::size_t cursor_ = 0;
  std::uint64_t value_ = 0;
  std::uint64_t length_;
};

// Digits packed most significant first: bytes verbatim for D=256, two per byte
// for D=16, four for D=4, eight for D=2. The tail is zero padded.
std::vector<std::uint8_t> pack_digits(std::span<const std::uint8_t> digits, unsigned radix_bits);
std::vector<std::uint8_t> unpack_digits(std::span<const std::uint8_t> bytes, unsigned radix_bits);

// Re-expresses a binary code value 0.b1..bn as the smallest n_digits-digit
// base-D value not below it, i.e. a uniform D-symbol decode with ceiling
// selection. Invertible whenever D^-n_digits <= 2^-n.
std::vector<unsigned> transcode_radix(std::span<const std::uint8_t> bits, unsigned radix,
                                      std::size_t n_digits);
// floor(w 2^n_bits) as n_bits bits.
std::vector<std::uint8_t> inverse_transcode_radix(std::span<const unsigned> digits, unsigned radix,
                                                  std::size_t n_bits);

}  // namespace acs
