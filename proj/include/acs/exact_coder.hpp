#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "acs/model.hpp"
#include "acs/rational.hpp"

namespace acs::exact {

// [b, b + l)
struct Interval {
  Rational b{0};
  Rational l{1};
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Value with a finite base-D expansion 0.d1 d2 ...
struct CodeValue {
  Rational v{0};
  unsigned radix = 2;
  std::vector<unsigned> digits;

  static CodeValue from_digits(std::vector<unsigned> digits, unsigned radix);
};

// One model per symbol, or a single model used for all of them.
using Models = std::span<const StaticDistribution>;

// Phi_0 .. Phi_N
std::vector<Interval> encode_sequence(Models models, std::span<const Symbol> S);

// ceil(-log_D l)
unsigned min_code_length(const Rational& l, unsigned radix);

// Shortest base-D value inside the interval, smallest among ties.
CodeValue select_code_value(const Interval& interval, unsigned radix);

struct NormalizedDecode {
  std::vector<Symbol> symbols;
  std::vector<Rational> normalized;  // v~_1 .. v~_N
};
NormalizedDecode decode_normalized(const Rational& v, Models models, std::size_t N);

struct IntervalDecode {
  std::vector<Symbol> symbols;
  std::vector<Interval> intervals;  // Phi_0 .. Phi_N
};
IntervalDecode decode_by_intervals(const Rational& v, Models models, std::size_t N);

struct Rescaled {
  Interval interval;
  std::optional<Rational> v;
};
struct RescaleStep {
  Rational delta;
  Rational gamma;
};

// b' = gamma (b - delta), l' = gamma l, v' = gamma (v - delta)
Rescaled rescale(const Interval& interval, const Rational& delta, const Rational& gamma,
                 std::optional<Rational> v = std::nullopt);
// Undo a chain of rescalings, last step first.
Rescaled recover_original(const Interval& scaled, std::span<const RescaleStep> steps,
                          std::optional<Rational> v = std::nullopt);

// Exact coder that renormalizes with delta in [0,1), gamma = D, emitting base-D
// digits and propagating carries into its buffer. Used to replay
// renormalization traces without floating point.
class RenormEncoder {
 public:
  struct Event {
    enum Kind { kSymbol, kCarry, kDigit, kFinal } kind;
    Symbol symbol = 0;     // kSymbol
    unsigned digit = 0;    // kDigit, kFinal
    Rational b, l;         // state after the event
    std::vector<unsigned> buffer;
  };

  explicit RenormEncoder(unsigned radix) : D_(radix) {}

  void encode(Symbol s, const StaticDistribution& dist);
  // Emits the code value digits; returns the whole buffer.
  std::vector<unsigned> finish();

  const Rational& base() const { return b_; }
  const Rational& length() const { return l_; }
  const std::vector<unsigned>& buffer() const { return buf_; }
  const std::vector<Event>& events() const { return events_; }

 private:
  void carry();
  void record(Event::Kind kind, Symbol s = 0, unsigned digit = 0);

  unsigned D_;
  Rational b_{0}, l_{1};
  std::vector<unsigned> buf_;
  std::vector<Event> events_;
};

// Mirror of RenormEncoder working on the full code value.
class RenormDecoder {
 public:
  RenormDecoder(unsigned radix, const Rational& v) : D_(radix), v_(v) {}

  Symbol decode(const StaticDistribution& dist);

  const Rational& base() const { return b_; }
  const Rational& length() const { return l_; }
  const Rational& value() const { return v_; }

 private:
  unsigned D_;
  Rational b_{0}, l_{1}, v_;
};

}  // namespace acs::exact
