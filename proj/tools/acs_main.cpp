#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "acs/bench.hpp"
#include "acs/container.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kFormat = 2, kIo = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_all(const std::string& path) {
  if (path == "-") {
    std::vector<std::uint8_t> data;
    std::istreambuf_iterator<char> it(std::cin), end;
    for (; it != end; ++it) data.push_back(static_cast<std::uint8_t>(*it));
    return data;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path);
  return data;
}

void write_all(const std::string& path, const std::vector<std::uint8_t>& data) {
  if (path == "-") {
    std::cout.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("cannot write " + path);
}

const std::vector<double> kFourSymbol = {0.2, 0.5, 0.2, 0.1};

std::vector<double> geometric(std::size_t M, double ratio) {
  std::vector<double> p(M);
  double w = 1;
  for (auto& x : p) {
    x = w;
    w *= ratio;
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic coding compressor"};
  app.require_subcommand(1);

  // compress
  std::string c_in, c_out = "-", c_mode = "tree", c_carry = "buffer";
  unsigned c_radix = 256, c_precision = 4;
  std::uint32_t c_period = 0;
  auto* compress = app.add_subcommand("compress", "compress a file");
  compress->add_option("input", c_in, "input file, - for stdin")->required();
  compress->add_option("output", c_out, "output file, - for stdout");
  compress->add_option("-m,--mode", c_mode, "static|adaptive|tree|binary|periodic|optimal")
      ->check(CLI::IsMember({"static", "adaptive", "tree", "binary", "periodic", "optimal"}));
  compress->add_option("-D,--radix", c_radix, "output radix")->check(CLI::IsMember({2, 4, 16, 256}));
  compress->add_option("-P,--precision", c_precision, "register size in radix digits");
  compress->add_option("--period", c_period, "rebuild period for periodic mode (default 4M)");
  compress->add_option("--carry", c_carry, "buffer|counter")->check(CLI::IsMember({"buffer", "counter"}));

  // decompress
  std::string d_in, d_out = "-", d_search = "bisection";
  unsigned d_lookup = 0;
  auto* decompress = app.add_subcommand("decompress", "restore a compressed file");
  decompress->add_option("input", d_in, "container file, - for stdin")->required();
  decompress->add_option("output", d_out, "output file, - for stdout");
  decompress->add_option("--search", d_search, "sequential|sorted|bisection|optimal|quantile|lookup");
  decompress->add_option("--lookup", d_lookup, "lookup table size K_t (implies --search lookup)")
      ->check(CLI::Range(1u, 1u << 20));

  // info
  std::string i_in;
  auto* info = app.add_subcommand("info", "describe a container");
  info->add_option("input", i_in, "container file")->required();

  // bench
  std::vector<std::string> b_files;
  std::vector<unsigned> b_radix = {256}, b_precision = {4};
  std::size_t b_n = 100000;
  unsigned b_lookup = 16, b_repeats = 5;
  std::uint64_t b_seed = 1;
  bool b_table = false, b_sweep = false;
  std::vector<std::string> b_modes;
  auto* bench = app.add_subcommand("bench", "time and count coder operations");
  bench->add_option("files", b_files, "extra byte sources");
  bench->add_option("-N,--symbols", b_n, "symbols per synthetic source");
  bench->add_option("-D,--radix", b_radix, "radix list")->check(CLI::IsMember({2, 4, 16, 256}));
  bench->add_option("-P,--precision", b_precision, "precision list");
  bench->add_option("--lookup", b_lookup, "lookup table size K_t")->check(CLI::Range(1u, 1u << 20));
  bench->add_option("--repeats", b_repeats, "timed runs per cell (median reported)");
  bench->add_option("--seed", b_seed, "source seed");
  bench->add_option("-m,--mode", b_modes, "restrict to these container modes");
  bench->add_flag("--table", b_table, "human-readable table instead of TSV");
  bench->add_flag("--sweep", b_sweep, "efficiency sweep over the -D/-P grid on the 4-symbol source");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compress) {
      acs::CompressOptions opt;
      opt.mode = acs::parse_mode(c_mode);
      opt.radix = c_radix;
      opt.precision = c_precision;
      opt.period = c_period;
      opt.carry = c_carry == "counter" ? acs::CarryStrategy::kCounter : acs::CarryStrategy::kBuffer;
      acs::CoderConfig::make(c_radix, c_precision);  // reject bad D/P before reading input
      auto data = read_all(c_in);
      write_all(c_out, acs::compress(data, opt));
    } else if (*decompress) {
      acs::DecompressOptions opt;
      opt.search = acs::parse_search_strategy(d_search);
      if (d_lookup) {
        opt.search = acs::SearchStrategy::kLookup;
        opt.table_size = d_lookup;
      }
      auto data = read_all(d_in);
      write_all(d_out, acs::decompress(data, opt));
    } else if (*info) {
      auto data = read_all(i_in);
      std::cout << acs::format_info(acs::info(data));
    } else if (*bench) {
      std::vector<acs::BenchConfig> configs;
      for (unsigned d : b_radix)
        for (unsigned p : b_precision) configs.push_back({d, p});
      if (b_sweep) {
        auto pts = acs::efficiency_sweep(kFourSymbol, b_n, configs, b_seed);
        acs::write_sweep_tsv(std::cout, pts);
        return kOk;
      }
      std::vector<acs::BenchSource> sources;
      sources.push_back(acs::iid_source("four", kFourSymbol, b_n, b_seed));
      sources.push_back(acs::iid_source("geometric256", geometric(256, 0.97), b_n, b_seed + 1));
      sources.push_back(acs::iid_source("uniform256", std::vector<double>(256, 1.0), b_n, b_seed + 2));
      for (const auto& f : b_files) sources.push_back(acs::byte_source(f, read_all(f)));

      std::vector<acs::BenchCell> cells;
      for (const auto& c : acs::default_cells()) {
        if (!b_modes.empty() &&
            std::find(b_modes.begin(), b_modes.end(), acs::to_string(c.mode)) == b_modes.end())
          continue;
        cells.push_back(c);
      }
      acs::BenchOptions opt;
      opt.repeats = b_repeats;
      opt.table_size = b_lookup;
      auto reports = acs::run_matrix(sources, cells, configs, opt);
      if (b_table) acs::write_table(std::cout, reports);
      else acs::write_tsv(std::cout, reports);
    }
  } catch (const IoError& e) {
    std::cerr << "acs: " << e.what() << '\n';
    return kIo;
  } catch (const acs::FormatError& e) {
    std::cerr << "acs: format error: " << e.what() << '\n';
    return kFormat;
  } catch (const acs::PrecisionError& e) {
    std::cerr << "acs: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "acs: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "acs: " << e.what() << '\n';
    return kFormat;
  }
  return kOk;
}
