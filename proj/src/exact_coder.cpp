#include "acs/exact_coder.hpp"

#include <stdexcept>

namespace acs::exact {

namespace {

const StaticDistribution& model_at(Models models, std::size_t k) {
  if (models.empty()) throw std::invalid_argument("no model given");
  return models.size() == 1 ? models[0] : models[k];
}

Rational floor_of(const Rational& q) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

// s with c(s) <= u < c(s+1); u outside [0,1) is clamped to the end symbols
Symbol locate(const StaticDistribution& dist, const Rational& u) {
  Symbol s = 0;
  while (s + 1 < dist.size() && dist.cumulative(s + 1) <= u) ++s;
  return s;
}

}  // namespace

CodeValue CodeValue::from_digits(std::vector<unsigned> digits, unsigned radix) {
  CodeValue cv;
  cv.radix = radix;
  Rational scale(1), v(0);
  for (unsigned d : digits) {
    if (d >= radix) throw std::invalid_argument("digit out of range");
    scale /= radix;
    v += scale * d;
  }
  cv.v = v;
  cv.digits = std::move(digits);
  return cv;
}

std::vector<Interval> encode_sequence(Models models, std::span<const Symbol> S) {
  if (models.size() != 1 && models.size() != S.size())
    throw std::invalid_argument("need one model, or one per symbol");
  std::vector<Interval> out{Interval{}};
  for (std::size_t k = 0; k < S.size(); ++k) {
    const auto& dist = model_at(models, k);
    if (S[k] >= dist.size()) throw std::out_of_range("symbol out of range");
    const Interval& prev = out.back();
    out.push_back({prev.b + dist.cumulative(S[k]) * prev.l, dist.probability(S[k]) * prev.l});
  }
  return out;
}

unsigned min_code_length(const Rational& l, unsigned radix) {
  if (l <= 0 || l > 1) throw std::invalid_argument("length must be in (0, 1]");
  unsigned n = 0;
  Rational scaled = l;
  while (scaled < 1) {
    scaled *= radix;
    ++n;
  }
  return n;
}

CodeValue select_code_value(const Interval& interval, unsigned radix) {
  const Rational end = interval.b + interval.l;
  BigInt scale(1);
  for (unsigned n = 0;; ++n, scale *= radix) {
    // smallest multiple of D^-n at or above b
    Rational x = interval.b * scale;
    BigInt k;
    mpz_cdiv_q(k.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Rational v(k, scale);
    v.canonicalize();
    if (v < end) {
      std::vector<unsigned> digits(n);
      for (unsigned i = n; i-- > 0;) {
        BigInt r;
        mpz_fdiv_qr_ui(k.get_mpz_t(), r.get_mpz_t(), k.get_mpz_t(), radix);
        digits[i] = static_cast<unsigned>(r.get_ui());
      }
      CodeValue cv;
      cv.v = v;
      cv.radix = radix;
      cv.digits = std::move(digits);
      return cv;
    }
  }
}

NormalizedDecode decode_normalized(const Rational& v, Models models, std::size_t N) {
  NormalizedDecode out;
  Rational u = v;
  for (std::size_t k = 0; k < N; ++k) {
    const auto& dist = model_at(models, k);
    out.normalized.push_back(u);
    Symbol s = locate(dist, u);
    out.symbols.push_back(s);
    u = (u - dist.cumulative(s)) / dist.probability(s);
  }
  return out;
}

IntervalDecode decode_by_intervals(const Rational& v, Models models, std::size_t N) {
  IntervalDecode out;
  out.intervals.push_back(Interval{});
  for (std::size_t k = 0; k < N; ++k) {
    const auto& dist = model_at(models, k);
    const Interval prev = out.intervals.back();
    // c(s) <= (v - b)/l < c(s+1), compared without dividing
    Symbol s = 0;
    while (s + 1 < dist.size() && prev.b + dist.cumulative(s + 1) * prev.l <= v) ++s;
    out.symbols.push_back(s);
    out.intervals.push_back({prev.b + dist.cumulative(s) * prev.l, dist.probability(s) * prev.l});
  }
  return out;
}

Rescaled rescale(const Interval& interval, const Rational& delta, const Rational& gamma,
                 std::optional<Rational> v) {
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  Rescaled r{{gamma * (interval.b - delta), gamma * interval.l}, std::nullopt};
  if (v) r.v = gamma * (*v - delta);
  return r;
}

Rescaled recover_original(const Interval& scaled, std::span<const RescaleStep> steps,
                          std::optional<Rational> v) {
  Rescaled r{scaled, std::move(v)};
  for (std::size_t i = steps.size(); i-- > 0;) {
    const auto& st = steps[i];
    if (st.gamma <= 0) throw std::invalid_argument("gamma must be positive");
    r.interval = {st.delta + r.interval.b / st.gamma, r.interval.l / st.gamma};
    if (r.v) r.v = st.delta + *r.v / st.gamma;
  }
  return r;
}

// ---- renormalizing exact coder

void RenormEncoder::record(Event::Kind kind, Symbol s, unsigned digit) {
  events_.push_back({kind, s, digit, b_, l_, buf_});
}

void RenormEncoder::carry() {
  std::size_t n = buf_.size();
  while (n > 0 && buf_[n - 1] == D_ - 1) buf_[--n] = 0;
  if (n == 0) throw std::logic_error("carry past the start of the buffer");
  ++buf_[n - 1];
}

void RenormEncoder::encode(Symbol s, const StaticDistribution& dist) {
  if (s >= dist.size()) throw std::out_of_range("symbol out of range");
  b_ += dist.cumulative(s) * l_;
  l_ *= dist.probability(s);
  record(Event::kSymbol, s);
  if (b_ >= 1) {
    b_ -= 1;
    carry();
    record(Event::kCarry);
  }
  const Rational inv(1, D_);
  while (l_ <= inv) {
    Rational x = b_ * D_;
    Rational d = floor_of(x);
    unsigned digit = static_cast<unsigned>(d.get_num().get_ui());
    buf_.push_back(digit);
    b_ = x - d;
    l_ *= D_;
    record(Event::kDigit, 0, digit);
  }
}

std::vector<unsigned> RenormEncoder::finish() {
  const Rational half(1, 2);
  const Rational end = b_ + l_;
  unsigned digit;
  if (D_ % 2 == 0 && b_ <= half && half < end) {
    digit = D_ / 2;
  } else if (end > 1) {
    carry();
    record(Event::kCarry);
    digit = 0;
  } else {
    Rational x = b_ * D_;
    BigInt k;
    mpz_cdiv_q(k.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    digit = static_cast<unsigned>(k.get_ui());
    if (digit == D_) {
      carry();
      digit = 0;
    }
  }
  buf_.push_back(digit);
  record(Event::kFinal, 0, digit);
  return buf_;
}

Symbol RenormDecoder::decode(const StaticDistribution& dist) {
  Symbol s = 0;
  while (s + 1 < dist.size() && b_ + dist.cumulative(s + 1) * l_ <= v_) ++s;
  b_ += dist.cumulative(s) * l_;
  l_ *= dist.probability(s);
  if (b_ >= 1) {
    b_ -= 1;
    v_ -= 1;
  }
  const Rational inv(1, D_);
  while (l_ <= inv) {
    Rational x = b_ * D_;
    Rational d = floor_of(x);
    b_ = x - d;
    v_ = v_ * D_ - d;
    l_ *= D_;
  }
  return s;
}

}  // namespace acs::exact
