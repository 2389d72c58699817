#include "acs/coder.hpp"

#include <stdexcept>
#include <string>

#include "acs/rational.hpp"

namespace acs {

OpCounts& op_counts() {
  thread_local OpCounts counts;
  return counts;
}
void reset_op_counts() { op_counts() = OpCounts{}; }

// ---- DigitBuffer

DigitBuffer DigitBuffer::from_digits(unsigned radix, std::vector<std::uint8_t> digits) {
  DigitBuffer b(radix, CarryStrategy::kBuffer);
  b.digits_ = std::move(digits);
  return b;
}

void DigitBuffer::settle() {
  if (!has_pending_) return;
  digits_.push_back(pending_);
  digits_.insert(digits_.end(), run_, static_cast<std::uint8_t>(radix_ - 1));
  has_pending_ = false;
  run_ = 0;
}

void DigitBuffer::propagate_carry() {
  if (strategy_ == CarryStrategy::kBuffer) {
    std::size_t n = digits_.size();
    while (n > 0 && digits_[n - 1] == radix_ - 1) digits_[--n] = 0;
    if (n == 0) throw std::logic_error("carry past the start of the digit buffer");
    ++digits_[n - 1];
    return;
  }
  // Only one carry can reach the outstanding digits, so all of them settle.
  if (!has_pending_ || pending_ == radix_ - 1)
    throw std::logic_error("carry into settled digits");
  digits_.push_back(static_cast<std::uint8_t>(pending_ + 1));
  digits_.insert(digits_.end(), run_, std::uint8_t{0});
  has_pending_ = false;
  run_ = 0;
}

std::vector<std::uint8_t> DigitBuffer::take() {
  settle();
  return std::move(digits_);
}

// ---- Encoder

Encoder::Encoder(CoderConfig cfg, EncoderOptions opt)
    : cfg_(cfg),
      opt_(opt),
      mask_(cfg.mask()),
      top_(cfg.top()),
      shift_(cfg.top_shift()),
      length_(opt.length_mode == LengthMode::kMinusOne ? cfg.full() : cfg.full() - 1),
      buf_(static_cast<unsigned>(cfg.radix()), opt.carry) {
  cfg_.validate();
}

void Encoder::carry() {
  buf_.propagate_carry();
  ACS_COUNT(carries, 1);
  if (trace_) trace_->push_back({TraceEvent::kCarry, 0, base_, length_register(), 0});
}

void Encoder::interval_update(Symbol s, const ScaledDistribution& dist) {
  const std::size_t M = dist.size();
  if (s >= M) throw std::out_of_range("symbol " + std::to_string(s) + " out of range");
  const unsigned bits = cfg_.bits();
  std::uint64_t x = s == 0 ? 0 : scaled_product(length_, dist.cumulative(s), bits);
  ACS_COUNT(multiplications, (s != 0) + (s + 1 != M));
  std::uint64_t y;
  if (opt_.length_mode == LengthMode::kMinusOne)
    y = x + scaled_product(length_, dist.frequency(s), bits);
  else
    y = s + 1 == M ? length_ : scaled_product(length_, dist.cumulative(s + 1), bits);
  narrow(x, y);
  if (trace_) trace_->push_back({TraceEvent::kUpdate, x, base_, length_register(), 0});
}

void Encoder::check_adaptive(std::uint64_t total) const {
  if (opt_.length_mode != LengthMode::kPlain)
    throw std::logic_error("adaptive coding needs the plain length register");
  if (total > top_)
    throw PrecisionError("adaptive total " + std::to_string(total) + " exceeds D^(P-1) = " +
                         std::to_string(top_));
}

void Encoder::encode(Symbol s, FrequencyModel& model) {
  const std::size_t M = model.size();
  if (s >= M) throw std::out_of_range("symbol out of range");
  check_adaptive(model.total());
  const std::uint64_t gamma = length_ / model.total();
  ACS_COUNT(divisions, 1);
  ACS_COUNT(multiplications, 2);
  std::uint64_t x = gamma * model.cumulative(s);
  std::uint64_t y = s + 1 == M ? length_ : gamma * model.cumulative(s + 1);
  narrow(x, y);
  renormalize();
  model.update(s);
}

void Encoder::encode(Symbol s, TreeModel& model) {
  const std::size_t M = model.size();
  if (s >= M) throw std::out_of_range("symbol out of range");
  check_adaptive(model.total());
  const std::uint64_t gamma = length_ / model.total();
  ACS_COUNT(divisions, 1);
  ACS_COUNT(multiplications, 2);
  auto b = model.code(s);
  narrow(gamma * b.low, s + 1 == M ? length_ : gamma * b.high);
  renormalize();
}

std::size_t Encoder::finalize() {
  if (opt_.termination == Termination::kTwoDigit) {
    narrow(top_ / 2, top_ / 2 + length_);
    // exactly two digits, whatever L is
    emit_digit();
    emit_digit();
  } else {
    const std::uint64_t half = cfg_.full() / 2;
    const std::uint64_t end = base_ + length_;
    std::uint8_t d;
    if (base_ <= half && half < end) {
      d = static_cast<std::uint8_t>(cfg_.radix() / 2);
    } else if (end > cfg_.full()) {
      carry();
      d = 0;
    } else {
      d = static_cast<std::uint8_t>((base_ + top_ - 1) / top_);
    }
    buf_.push(d);
  }
  if (trace_) trace_->push_back({TraceEvent::kFinal, 0, base_, length_register(), 0});
  return buf_.size();
}

std::vector<std::uint8_t> Encoder::finish() {
  finalize();
  return buf_.take();
}

// ---- symbol search on the integer state

Selection make_selection(const DecoderState& st, const ScaledDistribution& dist, Symbol s,
                         unsigned probes) {
  const std::size_t M = dist.size();
  std::uint64_t x = s == 0 ? 0 : st.product(dist.cumulative(s));
  std::uint64_t y = s + 1 == M ? st.length : st.product(dist.cumulative(s + 1));
  return {s, x, y, probes};
}

Selection select_bisection(const DecoderState& st, const ScaledDistribution& dist) {
  Symbol s = 0, n = static_cast<Symbol>(dist.size());
  std::uint64_t x = 0, y = st.length;
  unsigned probes = 0;
  while (n - s > 1) {
    Symbol m = (s + n) >> 1;
    std::uint64_t z = st.product(dist.cumulative(m));
    ++probes;
    if (z > st.value) {
      n = m;
      y = z;
    } else {
      s = m;
      x = z;
    }
  }
  return {s, x, y, probes};
}

Selection select_sequential(const DecoderState& st, const ScaledDistribution& dist) {
  Symbol s = static_cast<Symbol>(dist.size() - 1);
  std::uint64_t y = st.length;
  std::uint64_t x = st.product(dist.cumulative(s));
  unsigned probes = 1;
  while (x > st.value) {
    --s;
    y = x;
    x = s == 0 ? 0 : st.product(dist.cumulative(s));
    ++probes;
  }
  return {s, x, y, probes};
}

// ---- Decoder

Decoder::Decoder(CoderConfig cfg, std::span<const std::uint8_t> digits, DecoderOptions opt)
    : cfg_(cfg),
      opt_(opt),
      mask_(cfg.mask()),
      top_(cfg.top()),
      digits_(digits),
      length_(opt.length_mode == LengthMode::kMinusOne ? cfg.full() : cfg.full() - 1) {
  cfg_.validate();
  for (unsigned i = 0; i < cfg_.precision; ++i) value_ = (value_ << cfg_.radix_bits) | next_digit();
}

Symbol Decoder::apply(const Selection& sel, const ScaledDistribution& dist) {
  ACS_COUNT(probes, sel.probes);
  if (opt_.length_mode == LengthMode::kMinusOne) {
    value_ -= sel.low;
    length_ = scaled_product(length_, dist.frequency(sel.symbol), cfg_.bits());
  } else {
    narrow(sel.low, sel.high);
  }
  renormalize();
  return sel.symbol;
}

void Decoder::check_adaptive(std::uint64_t total) const {
  if (opt_.length_mode != LengthMode::kPlain)
    throw std::logic_error("adaptive coding needs the plain length register");
  if (total > top_)
    throw PrecisionError("adaptive total " + std::to_string(total) + " exceeds D^(P-1) = " +
                         std::to_string(top_));
}

Symbol Decoder::decode(FrequencyModel& model, bool sequential) {
  const std::size_t M = model.size();
  check_adaptive(model.total());
  const std::uint64_t gamma = length_ / model.total();
  const std::uint64_t w = value_ / gamma;  // gamma C~(s) <= V  <=>  C~(s) <= w
  ACS_COUNT(divisions, 2);
  auto cum = model.cumulative();
  Symbol s;
  if (sequential) {
    s = static_cast<Symbol>(M - 1);
    while (cum[s] > w) {
      ACS_COUNT(probes, 1);
      --s;
    }
    ACS_COUNT(probes, 1);
  } else {
    Symbol lo = 0, hi = static_cast<Symbol>(M);
    while (hi - lo > 1) {
      Symbol m = (lo + hi) >> 1;
      ACS_COUNT(probes, 1);
      if (cum[m] > w) hi = m; else lo = m;
    }
    s = lo;
  }
  ACS_COUNT(multiplications, 2);
  narrow(gamma * cum[s], s + 1 == M ? length_ : gamma * cum[s + 1]);
  renormalize();
  model.update(s);
  return s;
}

Symbol Decoder::decode(TreeModel& model) {
  const std::size_t M = model.size();
  check_adaptive(model.total());
  const std::uint64_t gamma = length_ / model.total();
  ACS_COUNT(divisions, 1);
  const std::uint64_t v = value_;
  TreeModel::Bounds b;
  Symbol s = model.search([&](std::uint64_t z) {
    ACS_COUNT(multiplications, 1);
    ACS_COUNT(probes, 1);
    return gamma * z > v;
  }, b);
  narrow(gamma * b.low, s + 1 == M ? length_ : gamma * b.high);
  renormalize();
  return s;
}

// ---- packing

std::vector<std::uint8_t> pack_digits(std::span<const std::uint8_t> digits, unsigned radix_bits) {
  if (radix_bits == 8) return {digits.begin(), digits.end()};
  const unsigned per = 8 / radix_bits;
  std::vector<std::uint8_t> out((digits.size() + per - 1) / per, 0);
  for (std::size_t i = 0; i < digits.size(); ++i)
    out[i / per] |= static_cast<std::uint8_t>(digits[i] << (8 - radix_bits * (i % per + 1)));
  return out;
}

std::vector<std::uint8_t> unpack_digits(std::span<const std::uint8_t> bytes, unsigned radix_bits) {
  if (radix_bits == 8) return {bytes.begin(), bytes.end()};
  const unsigned per = 8 / radix_bits;
  const std::uint8_t mask = static_cast<std::uint8_t>((1u << radix_bits) - 1);
  std::vector<std::uint8_t> out;
  out.reserve(bytes.size() * per);
  for (std::uint8_t b : bytes)
    for (unsigned k = 1; k <= per; ++k) out.push_back((b >> (8 - radix_bits * k)) & mask);
  return out;
}

// ---- radix transcoding

std::vector<unsigned> transcode_radix(std::span<const std::uint8_t> bits, unsigned radix,
                                      std::size_t n_digits) {
  if (radix < 2) throw std::invalid_argument("radix must be at least 2");
  BigInt v(0);
  for (auto b : bits) {
    if (b > 1) throw std::invalid_argument("not a bit");
    v = v * 2 + b;
  }
  // w = ceil(v D^n / 2^bits)
  BigInt num = v * big_pow(radix, n_digits), w;
  mpz_cdiv_q_2exp(w.get_mpz_t(), num.get_mpz_t(), bits.size());
  std::vector<unsigned> out(n_digits);
  for (std::size_t i = n_digits; i-- > 0;) {
    BigInt r;
    mpz_fdiv_qr_ui(w.get_mpz_t(), r.get_mpz_t(), w.get_mpz_t(), radix);
    out[i] = static_cast<unsigned>(r.get_ui());
  }
  if (w != 0) throw std::invalid_argument("value does not fit the requested digits");
  return out;
}

std::vector<std::uint8_t> inverse_transcode_radix(std::span<const unsigned> digits, unsigned radix,
                                                  std::size_t n_bits) {
  BigInt w(0);
  for (unsigned d : digits) {
    if (d >= radix) throw std::invalid_argument("digit out of range");
    w = w * radix + d;
  }
  // floor(w 2^n / D^m)
  BigInt num = w, v;
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), n_bits);
  mpz_fdiv_q(v.get_mpz_t(), num.get_mpz_t(), big_pow(radix, digits.size()).get_mpz_t());
  std::vector<std::uint8_t> out(n_bits);
  for (std::size_t i = n_bits; i-- > 0;) {
    out[i] = static_cast<std::uint8_t>(mpz_tstbit(v.get_mpz_t(), n_bits - 1 - i));
  }
  return out;
}

}  // namespace acs
