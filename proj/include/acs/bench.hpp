#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "acs/container.hpp"

namespace acs {

struct BenchSource {
  std::string name;
  std::size_t M = 0;
  std::vector<Symbol> symbols;
};

// N symbols drawn i.i.d. from p with a fixed seed (std::mt19937_64).
BenchSource iid_source(std::string name, std::span<const double> p, std::size_t N, std::uint64_t seed = 1);
BenchSource byte_source(std::string name, std::span<const std::uint8_t> bytes);
// Empirical entropy of the symbols, bits/symbol.
double empirical_entropy(const BenchSource& src);

// A container mode plus the decoder-side search (only static and periodic use it;
// adaptive distinguishes sequential from anything else).
struct BenchCell {
  Mode mode = Mode::kTree;
  SearchStrategy search = SearchStrategy::kBisection;
  std::string id() const;
};
std::vector<BenchCell> default_cells();

struct BenchConfig {
  unsigned radix = 256;
  unsigned precision = 4;
};

struct BenchReport {
  std::string source;
  std::string strategy;
  BenchConfig config;
  std::size_t M = 0;
  std::size_t N = 0;
  double symbols_per_sec = 0;     // decoding, median of the timed runs
  double info_bits_per_sec = 0;   // symbols_per_sec times the empirical entropy
  double probes_per_symbol = 0;   // these five are zero unless instrumented
  double divisions_per_symbol = 0;
  double multiplications_per_symbol = 0;
  double additions_per_symbol = 0;
  double renormalizations_per_symbol = 0;
  double bits_per_symbol = 0;     // whole container
  double entropy = 0;
  double overhead_bits = 0;       // header and model
  std::uint64_t payload_hash = 0;
  bool instrumented = kInstrumented;
  std::string error;              // empty when the cell ran and round-tripped
};

struct BenchOptions {
  unsigned repeats = 5;
  unsigned warmup = 1;
  unsigned table_size = 16;  // lookup cells
  unsigned threads = 0;  // 0: hardware concurrency, capped by ACS_THREADS
};

unsigned bench_threads(unsigned requested = 0);

// One report per (source, cell, config), ordered by that key whatever the
// thread count.
std::vector<BenchReport> run_matrix(std::span<const BenchSource> sources, std::span<const BenchCell> cells,
                                    std::span<const BenchConfig> configs, const BenchOptions& opt = {});

// Tab separated, one record per line, after a '#' line naming the columns.
void write_tsv(std::ostream& os, std::span<const BenchReport> reports);
void write_table(std::ostream& os, std::span<const BenchReport> reports);
extern const char* const kBenchColumns;

struct EfficiencyPoint {
  BenchConfig config;
  std::size_t N = 0;
  double bits_per_symbol = 0;   // payload digits only
  double entropy = 0;           // of the model distribution
  double ideal_bits = 0;        // sum of -log2 p(s_k) over the sequence, per symbol
  double leakage = 0;           // interval loss per symbol: mean log2(p(s) L / (Y - X))
  double max_ratio = 0;         // max p(s) L / (Y - X) over coded symbols
  double overhead_bits = 0;     // header plus model for a static container
  std::string error;
};

// Static coding of an i.i.d. sequence under the true distribution p.
std::vector<EfficiencyPoint> efficiency_sweep(std::span<const double> p, std::size_t N,
                                              std::span<const BenchConfig> configs, std::uint64_t seed = 1);
void write_sweep_tsv(std::ostream& os, std::span<const EfficiencyPoint> points);

}  // namespace acs
