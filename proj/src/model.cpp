#include "acs/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "acs/instrument.hpp"

namespace acs {

Rational parse_decimal(std::string_view text) {
  std::string s(text);
  if (s.find('/') != std::string::npos) {
    Rational q(s, 10);
    q.canonicalize();
    return q;
  }
  bool neg = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  std::string digits;
  std::size_t frac = 0;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits += ch;
      if (seen_point) ++frac;
    } else {
      throw std::invalid_argument("not a decimal number: " + s);
    }
  }
  if (digits.empty()) throw std::invalid_argument("not a decimal number: " + s);
  Rational q(BigInt(digits, 10), big_pow(10, frac));
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string to_decimal(const Rational& q) {
  BigInt den = q.get_den();
  unsigned long twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) { den /= 2; ++twos; }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) { den /= 5; ++fives; }
  if (den != 1) return q.get_str();
  unsigned long places = std::max(twos, fives);
  BigInt scaled = q.get_num() * big_pow(10, places) / q.get_den();
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string d = scaled.get_str();
  if (places == 0) return (neg ? "-" : "") + d;
  if (d.size() <= places) d.insert(0, places - d.size() + 1, '0');
  d.insert(d.size() - places, ".");
  return (neg ? "-" : "") + d;
}

BigInt big_pow(unsigned long base, unsigned long exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

// ---- StaticDistribution

StaticDistribution StaticDistribution::from_probabilities(std::vector<Rational> p) {
  if (p.empty()) throw std::invalid_argument("empty distribution");
  StaticDistribution d;
  d.c_.reserve(p.size() + 1);
  d.c_.emplace_back(0);
  for (auto& x : p) {
    x.canonicalize();
    if (x <= 0) throw std::invalid_argument("probabilities must be positive");
    d.c_.push_back(d.c_.back() + x);
  }
  if (d.c_.back() != 1) throw std::invalid_argument("probabilities must sum to one");
  d.p_ = std::move(p);
  return d;
}

StaticDistribution StaticDistribution::from_decimal(std::initializer_list<std::string_view> p) {
  std::vector<Rational> q;
  for (auto s : p) q.push_back(parse_decimal(s));
  return from_probabilities(std::move(q));
}

StaticDistribution StaticDistribution::from_counts(std::span<const std::uint64_t> counts) {
  std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  std::vector<Rational> q;
  for (auto c : counts) q.emplace_back(Rational(BigInt(std::to_string(c)), BigInt(std::to_string(total))));
  return from_probabilities(std::move(q));
}

StaticDistribution StaticDistribution::uniform(std::size_t M) {
  return from_probabilities(std::vector<Rational>(M, Rational(1, static_cast<unsigned long>(M))));
}

std::vector<double> StaticDistribution::probabilities() const {
  std::vector<double> out;
  for (const auto& x : p_) out.push_back(x.get_d());
  return out;
}

// ---- diagnostics

double entropy(std::span<const double> p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

double entropy(const StaticDistribution& dist) {
  auto p = dist.probabilities();
  return entropy(p);
}

double optimal_bits(double p) { return -std::log2(p); }

double optimal_bits(const StaticDistribution& dist, Symbol s) {
  return optimal_bits(dist.probability(s).get_d());
}

double compression_loss(std::span<const double> p, std::span<const double> p_approx) {
  if (p.size() != p_approx.size()) throw std::invalid_argument("size mismatch");
  double d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p_approx[i] > 0)) throw std::invalid_argument("approximate probabilities must be positive");
    if (p[i] > 0) d += p[i] * std::log2(p[i] / p_approx[i]);
  }
  return d;
}

double compression_loss(const StaticDistribution& p, std::span<const double> p_approx) {
  auto q = p.probabilities();
  return compression_loss(q, p_approx);
}

// ---- ScaledDistribution

ScaledDistribution::ScaledDistribution(CoderConfig cfg, std::vector<std::uint64_t> cumulative)
    : cfg_(cfg), cum_(std::move(cumulative)) {
  if (cum_.size() < 3) throw std::invalid_argument("need at least two symbols");
  if (cum_.front() != 0 || cum_.back() != cfg_.full())
    throw std::invalid_argument("cumulative counts must run from 0 to D^P");
  for (std::size_t s = 0; s + 1 < cum_.size(); ++s)
    if (cum_[s + 1] < cum_[s] + cfg_.radix())
      throw PrecisionError("symbol " + std::to_string(s) + " has scaled frequency below D");
}

ScaledDistribution ScaledDistribution::from_static(const StaticDistribution& dist, CoderConfig cfg) {
  std::vector<std::uint64_t> cum;
  BigInt full(static_cast<unsigned long>(cfg.full()));
  for (std::size_t m = 0; m <= dist.size(); ++m) {
    BigInt num = dist.cumulative(m).get_num() * full;
    BigInt q = num / dist.cumulative(m).get_den();
    cum.push_back(q.get_ui());
  }
  return ScaledDistribution(cfg, std::move(cum));
}

ScaledDistribution ScaledDistribution::from_frequencies(std::span<const std::uint32_t> freq,
                                                        CoderConfig cfg) {
  std::vector<std::uint64_t> cum{0};
  for (auto f : freq) cum.push_back(cum.back() + f);
  return ScaledDistribution(cfg, std::move(cum));
}

std::vector<std::uint32_t> ScaledDistribution::frequencies() const {
  std::vector<std::uint32_t> f;
  for (std::size_t s = 0; s < size(); ++s) f.push_back(static_cast<std::uint32_t>(frequency(s)));
  return f;
}

// ---- FrequencyModel

FrequencyModel::FrequencyModel(std::size_t M, std::uint64_t max_total)
    : counts_(M, 1), cum_(M + 1), max_total_(max_total) {
  if (M < 2) throw std::invalid_argument("need at least two symbols");
  if (M >= max_total) throw PrecisionError("alphabet too large for the counter limit");
  std::iota(cum_.begin(), cum_.end(), std::uint64_t{0});
}

FrequencyModel FrequencyModel::from_counts(std::span<const std::uint64_t> counts,
                                           std::uint64_t max_total) {
  FrequencyModel m(counts.size(), max_total);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) throw std::invalid_argument("occurrence counters start at one");
    m.counts_[i] = counts[i];
    m.cum_[i + 1] = m.cum_[i] + counts[i];
  }
  if (m.total() > max_total) m.rescale();
  return m;
}

void FrequencyModel::update(Symbol s) {
  ++counts_[s];
  const std::size_t M = counts_.size();
  for (std::size_t m = s + 1; m <= M; ++m) ++cum_[m];
  ACS_COUNT(additions, M - s);
  if (cum_[M] > max_total_) rescale();
}

void FrequencyModel::rescale() {
  do {
    for (std::size_t m = 0; m < counts_.size(); ++m) {
      counts_[m] = std::max<std::uint64_t>(1, (counts_[m] + 1) / 2);
      cum_[m + 1] = cum_[m] + counts_[m];
    }
  } while (cum_.back() > max_total_);
}

// ---- TreeShape / TreeModel

TreeShape TreeShape::bisection(std::size_t M) {
  if (M < 2) throw std::invalid_argument("need at least two symbols");
  std::vector<Symbol> keys;
  // preorder of the midpoint recursion
  auto rec = [&](auto&& self, Symbol n, Symbol u) -> void {
    if (u - n < 2) return;
    Symbol m = (u + n) / 2;
    keys.push_back(m);
    self(self, n, m);
    self(self, m, u);
  };
  rec(rec, 0, static_cast<Symbol>(M));
  return from_preorder(M, keys);
}

TreeShape TreeShape::from_preorder(std::size_t M, std::span<const Symbol> keys) {
  if (M < 2) throw std::invalid_argument("need at least two symbols");
  if (keys.size() != M - 1) throw std::invalid_argument("tree needs M-1 keys");
  TreeShape t;
  t.M_ = M;
  t.left_.assign(M, 0);
  t.right_.assign(M, 0);
  t.low_.assign(M, 0);
  t.high_.assign(M, 0);
  std::vector<bool> seen(M, false);
  for (Symbol k : keys) {
    if (k == 0 || k >= M || seen[k]) throw std::invalid_argument("bad tree key");
    seen[k] = true;
    if (t.root_ == 0) {
      t.root_ = k;
      t.low_[k] = 0;
      t.high_[k] = static_cast<Symbol>(M);
      continue;
    }
    Symbol at = t.root_;
    for (;;) {
      Symbol& next = k < at ? t.left_[at] : t.right_[at];
      if (next == 0) {
        next = k;
        t.low_[k] = k < at ? t.low_[at] : at;
        t.high_[k] = k < at ? at : t.high_[at];
        break;
      }
      at = next;
    }
  }
  return t;
}

unsigned TreeShape::depth(Symbol s) const {
  unsigned d = 0;
  Symbol key = root_;
  while (key != 0) {
    ++d;
    key = s < key ? left_[key] : right_[key];
  }
  return d;
}

TreeModel::TreeModel(TreeShape shape, std::uint64_t max_total)
    : shape_(std::move(shape)), counters_(shape_.size(), 0), max_total_(max_total) {
  if (shape_.size() >= max_total) throw PrecisionError("alphabet too large for the counter limit");
  counters_[0] = shape_.size();
  for (Symbol k = 1; k < shape_.size(); ++k) counters_[k] = k - shape_.low(k);
}

void TreeModel::set_counters(std::vector<std::uint64_t> counters) {
  if (counters.size() != shape_.size()) throw std::invalid_argument("counter vector size must be M");
  counters_ = std::move(counters);
}

TreeModel::Bounds TreeModel::bounds(Symbol s) const {
  std::uint64_t e = 0, f = counters_[0];
  Symbol key = shape_.root();
  while (key != 0) {
    if (s < key) {
      f = e + counters_[key];
      key = shape_.left(key);
    } else {
      e += counters_[key];
      key = shape_.right(key);
    }
  }
  return {e, f};
}

TreeModel::Bounds TreeModel::code(Symbol s) {
  if (s >= shape_.size()) throw std::out_of_range("symbol out of range");
  std::uint64_t e = 0, f = counters_[0];
  Symbol key = shape_.root();
  unsigned steps = 0;
  while (key != 0) {
    ++steps;
    if (s < key) {
      f = e + counters_[key];
      ++counters_[key];
      key = shape_.left(key);
    } else {
      e += counters_[key];
      key = shape_.right(key);
    }
  }
  ++counters_[0];
  ACS_COUNT(additions, steps + 1);
  after_update();
  return {e, f};
}

void TreeModel::rescale() {
  auto cum = cumulative_from_tree(*this);
  const std::size_t M = shape_.size();
  do {
    std::vector<std::uint64_t> next(M + 1, 0);
    for (std::size_t m = 0; m < M; ++m)
      next[m + 1] = next[m] + std::max<std::uint64_t>(1, (cum[m + 1] - cum[m] + 1) / 2);
    cum.swap(next);
  } while (cum[M] > max_total_);
  counters_[0] = cum[M];
  for (Symbol k = 1; k < M; ++k) counters_[k] = cum[k] - cum[shape_.low(k)];
}

std::vector<std::uint64_t> cumulative_from_tree(const TreeModel& model) {
  const std::size_t M = model.size();
  std::vector<std::uint64_t> cum(M + 1);
  for (Symbol s = 0; s < M; ++s) cum[s] = model.bounds(s).low;
  cum[M] = model.total();
  return cum;
}

// ---- periodic rebuild

Rebuild rebuild_periodic(std::span<const std::uint64_t> counts, CoderConfig cfg) {
  const std::size_t M = counts.size();
  const std::uint64_t T = cfg.full(), D = cfg.radix();
  if (M < 2) throw std::invalid_argument("need at least two symbols");
  if (M * D > T)
    throw PrecisionError("precision insufficient: " + std::to_string(M) + " symbols need " +
                         std::to_string(M * D) + " > D^P = " + std::to_string(T));
  std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw std::invalid_argument("all counts are zero");

  // largest remainder
  std::vector<std::uint64_t> f(M);
  std::vector<std::uint64_t> rem(M);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < M; ++i) {
    unsigned __int128 q = static_cast<unsigned __int128>(counts[i]) * T;
    f[i] = static_cast<std::uint64_t>(q / total);
    rem[i] = static_cast<std::uint64_t>(q % total);
    assigned += f[i];
  }
  ACS_COUNT(divisions, M);
  std::vector<std::size_t> idx(M);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < T; ++k, ++assigned) ++f[idx[k]];

  // minimum gap D, paid for by the widest interval
  std::uint64_t deficit = 0;
  for (auto& x : f)
    if (x < D) {
      deficit += D - x;
      x = D;
    }
  while (deficit > 0) {
    std::size_t w = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
    std::uint64_t take = std::min(deficit, f[w] - D);
    f[w] -= take;
    deficit -= take;
  }

  std::vector<std::uint64_t> cum(M + 1, 0);
  for (std::size_t i = 0; i < M; ++i) cum[i + 1] = cum[i] + f[i];
  std::vector<Symbol> order(M);
  std::iota(order.begin(), order.end(), Symbol{0});
  std::stable_sort(order.begin(), order.end(), [&](Symbol a, Symbol b) { return f[a] < f[b]; });
  return {ScaledDistribution(cfg, std::move(cum)), std::move(order)};
}

PeriodicModel::PeriodicModel(std::size_t M, CoderConfig cfg, std::size_t period)
    : counts_(M, 1),
      total_(M),
      cfg_(cfg),
      period_(period ? period : 4 * M),
      until_rebuild_(period_),
      current_(rebuild_periodic(counts_, cfg)) {}

bool PeriodicModel::observe(Symbol s) {
  ++counts_[s];
  ++total_;
  if (total_ > kDefaultMaxTotal) {
    total_ = 0;
    for (auto& c : counts_) total_ += c = std::max<std::uint64_t>(1, (c + 1) / 2);
  }
  if (--until_rebuild_ > 0) return false;
  until_rebuild_ = period_;
  current_ = rebuild_periodic(counts_, cfg_);
  ++generation_;
  return true;
}

}  // namespace acs
