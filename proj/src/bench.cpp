#include "acs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace acs {

namespace {

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (auto b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

BenchReport run_cell(const BenchSource& src, const BenchCell& cell, const BenchConfig& cfg,
                     const BenchOptions& opt) {
  BenchReport r;
  r.source = src.name;
  r.strategy = cell.id();
  r.config = cfg;
  r.M = src.M;
  r.N = src.symbols.size();
  r.entropy = empirical_entropy(src);
  try {
    CompressOptions copt;
    copt.mode = cell.mode;
    copt.radix = cfg.radix;
    copt.precision = cfg.precision;
    auto container = compress_symbols(src.symbols, src.M, copt);
    Header h = read_header(container);
    r.payload_hash = fnv1a(std::span<const std::uint8_t>(container).subspan(h.size));
    r.overhead_bits = 8.0 * double(h.size);
    if (r.N) r.bits_per_symbol = 8.0 * double(container.size()) / double(r.N);

    DecompressOptions dopt;
    dopt.search = cell.search;
    dopt.table_size = opt.table_size;
    reset_op_counts();
    auto decoded = decompress_symbols(container, dopt);
    OpCounts ops = op_counts();
    if (decoded.symbols != src.symbols) {
      r.error = "round trip mismatch";
      return r;
    }
    if (r.N) {
      const double n = double(r.N);
      r.probes_per_symbol = double(ops.probes) / n;
      r.divisions_per_symbol = double(ops.divisions) / n;
      r.multiplications_per_symbol = double(ops.multiplications) / n;
      r.additions_per_symbol = double(ops.additions) / n;
      r.renormalizations_per_symbol = double(ops.renormalizations) / n;
    }

    for (unsigned w = 0; w < opt.warmup; ++w) (void)decompress_symbols(container, dopt);
    std::vector<double> secs;
    for (unsigned k = 0; k < std::max(1u, opt.repeats); ++k) {
      auto t0 = std::chrono::steady_clock::now();
      auto out = decompress_symbols(container, dopt);
      auto t1 = std::chrono::steady_clock::now();
      secs.push_back(std::chrono::duration<double>(t1 - t0).count());
      if (out.symbols.size() != r.N) r.error = "decode length changed";
    }
    double t = median(secs);
    if (t > 0) {
      r.symbols_per_sec = double(r.N) / t;
      r.info_bits_per_sec = r.symbols_per_sec * r.entropy;
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

}  // namespace

BenchSource iid_source(std::string name, std::span<const double> p, std::size_t N, std::uint64_t seed) {
  BenchSource src{std::move(name), p.size(), {}};
  std::mt19937_64 rng(seed);
  std::discrete_distribution<Symbol> pick(p.begin(), p.end());
  src.symbols.reserve(N);
  for (std::size_t k = 0; k < N; ++k) src.symbols.push_back(pick(rng));
  return src;
}

BenchSource byte_source(std::string name, std::span<const std::uint8_t> bytes) {
  return {std::move(name), 256, {bytes.begin(), bytes.end()}};
}

double empirical_entropy(const BenchSource& src) {
  if (src.symbols.empty()) return 0;
  std::vector<double> p(src.M, 0);
  for (Symbol s : src.symbols) p[s] += 1;
  for (auto& x : p) x /= double(src.symbols.size());
  return entropy(p);
}

std::string BenchCell::id() const {
  std::string m = to_string(mode);
  switch (mode) {
    case Mode::kStatic:
    case Mode::kPeriodic:
      return m + "/" + to_string(search);
    case Mode::kAdaptive:
      return m + (search == SearchStrategy::kSequential ? "/sequential" : "/bisection");
    default:
      return m;
  }
}

std::vector<BenchCell> default_cells() {
  std::vector<BenchCell> cells;
  for (auto s : {SearchStrategy::kSequential, SearchStrategy::kSequentialSorted, SearchStrategy::kBisection,
                 SearchStrategy::kOptimal, SearchStrategy::kQuantile, SearchStrategy::kLookup})
    cells.push_back({Mode::kStatic, s});
  cells.push_back({Mode::kPeriodic, SearchStrategy::kBisection});
  cells.push_back({Mode::kPeriodic, SearchStrategy::kLookup});
  cells.push_back({Mode::kAdaptive, SearchStrategy::kSequential});
  cells.push_back({Mode::kAdaptive, SearchStrategy::kBisection});
  cells.push_back({Mode::kTree, SearchStrategy::kBisection});
  cells.push_back({Mode::kBinary, SearchStrategy::kBisection});
  cells.push_back({Mode::kOptimal, SearchStrategy::kBisection});
  return cells;
}

unsigned bench_threads(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ACS_THREADS")) {
    char* end = nullptr;
    unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<BenchReport> run_matrix(std::span<const BenchSource> sources, std::span<const BenchCell> cells,
                                    std::span<const BenchConfig> configs, const BenchOptions& opt) {
  const std::size_t n = sources.size() * cells.size() * configs.size();
  std::vector<BenchReport> out(n);
  parallel_for(n, bench_threads(opt.threads), [&](std::size_t i) {
    std::size_t c = i % configs.size();
    std::size_t rest = i / configs.size();
    std::size_t k = rest % cells.size();
    std::size_t s = rest / cells.size();
    out[i] = run_cell(sources[s], cells[k], configs[c], opt);
  });
  return out;
}

const char* const kBenchColumns =
    "source\tstrategy\tD\tP\tM\tN\tsymbols_per_sec\tinfo_bits_per_sec\tprobes_per_symbol\t"
    "divisions_per_symbol\tmultiplications_per_symbol\tadditions_per_symbol\t"
    "renormalizations_per_symbol\tbits_per_symbol\tentropy\toverhead_bits\tpayload_hash\t"
    "instrumented\terror";

void write_tsv(std::ostream& os, std::span<const BenchReport> reports) {
  os << '#' << kBenchColumns << '\n';
  for (const auto& r : reports) {
    os << r.source << '\t' << r.strategy << '\t' << r.config.radix << '\t' << r.config.precision << '\t'
       << r.M << '\t' << r.N << '\t' << fmt(r.symbols_per_sec, 0) << '\t' << fmt(r.info_bits_per_sec, 0)
       << '\t' << fmt(r.probes_per_symbol) << '\t' << fmt(r.divisions_per_symbol) << '\t'
       << fmt(r.multiplications_per_symbol) << '\t' << fmt(r.additions_per_symbol) << '\t'
       << fmt(r.renormalizations_per_symbol) << '\t' << fmt(r.bits_per_symbol, 6) << '\t'
       << fmt(r.entropy, 6) << '\t' << fmt(r.overhead_bits, 0) << '\t' << std::hex << std::setw(16)
       << std::setfill('0') << r.payload_hash << std::dec << std::setfill(' ') << '\t'
       << (r.instrumented ? 1 : 0) << '\t' << (r.error.empty() ? "-" : r.error) << '\n';
  }
}

void write_table(std::ostream& os, std::span<const BenchReport> reports) {
  os << std::left << std::setw(14) << "source" << std::setw(22) << "strategy" << std::right << std::setw(5)
     << "D" << std::setw(3) << "P" << std::setw(12) << "Msym/s" << std::setw(12) << "Mbit/s" << std::setw(9)
     << "probes" << std::setw(7) << "divs" << std::setw(7) << "mults" << std::setw(7) << "adds"
     << std::setw(10) << "bits/sym" << std::setw(9) << "H" << '\n';
  for (const auto& r : reports) {
    os << std::left << std::setw(14) << r.source << std::setw(22) << r.strategy << std::right
       << std::setw(5) << r.config.radix << std::setw(3) << r.config.precision;
    if (!r.error.empty()) {
      os << "  error: " << r.error << '\n';
      continue;
    }
    os << std::setw(12) << fmt(r.symbols_per_sec / 1e6, 2) << std::setw(12)
       << fmt(r.info_bits_per_sec / 1e6, 2);
    if (r.instrumented)
      os << std::setw(9) << fmt(r.probes_per_symbol, 2) << std::setw(7) << fmt(r.divisions_per_symbol, 2)
         << std::setw(7) << fmt(r.multiplications_per_symbol, 2) << std::setw(7)
         << fmt(r.additions_per_symbol, 2);
    else
      os << std::setw(9) << "-" << std::setw(7) << "-" << std::setw(7) << "-" << std::setw(7) << "-";
    os << std::setw(10) << fmt(r.bits_per_symbol, 4) << std::setw(9) << fmt(r.entropy, 4) << '\n';
  }
}

// ---- efficiency

std::vector<EfficiencyPoint> efficiency_sweep(std::span<const double> p, std::size_t N,
                                              std::span<const BenchConfig> configs, std::uint64_t seed) {
  auto src = iid_source("sweep", p, N, seed);
  std::vector<Rational> exact;
  Rational sum = 0;
  for (double x : p) {
    exact.emplace_back(x);
    sum += exact.back();
  }
  for (auto& x : exact) x /= sum;
  std::vector<double> pn;
  for (auto& x : exact) pn.push_back(x.get_d());
  auto dist = StaticDistribution::from_probabilities(exact);

  double ideal = 0;
  for (Symbol s : src.symbols) ideal -= std::log2(pn[s]);

  std::vector<EfficiencyPoint> out;
  for (const auto& c : configs) {
    EfficiencyPoint pt;
    pt.config = c;
    pt.N = N;
    pt.entropy = entropy(pn);
    pt.ideal_bits = N ? ideal / double(N) : 0;
    try {
      CoderConfig cfg = CoderConfig::make(c.radix, c.precision);
      auto scaled = ScaledDistribution::from_static(dist, cfg);
      // a static container stores the fixed header, M and M frequencies
      pt.overhead_bits = 8.0 * double(kFixedHeaderBytes + 4 + 4 * p.size());
      Encoder enc(cfg);
      double leak = 0, worst = 0;
      for (Symbol s : src.symbols) {
        const double before = double(enc.length());
        enc.interval_update(s, scaled);
        const double ratio = pn[s] * before / double(enc.length());
        leak += std::log2(ratio);
        worst = std::max(worst, ratio);
        enc.renormalize();
      }
      auto digits = enc.finish();
      pt.bits_per_symbol = N ? double(digits.size()) * cfg.radix_bits / double(N) : 0;
      pt.leakage = N ? leak / double(N) : 0;
      pt.max_ratio = worst;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

void write_sweep_tsv(std::ostream& os, std::span<const EfficiencyPoint> points) {
  os << "#D\tP\tN\tbits_per_symbol\tentropy\tideal_bits\tleakage\tmax_ratio\toverhead_bits\terror\n";
  for (const auto& pt : points)
    os << pt.config.radix << '\t' << pt.config.precision << '\t' << pt.N << '\t' << fmt(pt.bits_per_symbol, 6)
       << '\t' << fmt(pt.entropy, 6) << '\t' << fmt(pt.ideal_bits, 6) << '\t' << fmt(pt.leakage, 6) << '\t'
       << fmt(pt.max_ratio, 6) << '\t' << fmt(pt.overhead_bits, 0) << '\t'
       << (pt.error.empty() ? "-" : pt.error) << '\n';
}

}  // namespace acs
