#include "acs/container.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

namespace acs {

namespace {

constexpr std::uint8_t kMagic[4] = {'A', 'C', 'S', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Reader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
  void need(std::size_t n) const {
    if (bytes.size() - pos < n) throw FormatError("container header is truncated");
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes[pos++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes[pos++]} << (8 * i);
    return v;
  }
};

unsigned log2_exact(unsigned v) {
  unsigned r = 0;
  while ((1u << r) < v) ++r;
  return r;
}

std::uint8_t pack_config(const CoderConfig& cfg) {
  return static_cast<std::uint8_t>(log2_exact(cfg.radix_bits) << 6 | cfg.precision);
}

CoderConfig unpack_config(std::uint8_t b) {
  CoderConfig cfg{1u << (b >> 6), static_cast<unsigned>(b & 0x3f)};
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad coder configuration: ") + e.what());
  }
  return cfg;
}

std::uint64_t adaptive_limit(const CoderConfig& cfg) { return std::min(kDefaultMaxTotal, cfg.top()); }

std::vector<std::uint64_t> occurrences(std::span<const Symbol> symbols, std::size_t M) {
  std::vector<std::uint64_t> counts(M, 0);
  for (Symbol s : symbols) ++counts[s];
  return counts;
}

void check_alphabet(std::size_t M) {
  if (M < 2) throw std::invalid_argument("alphabet needs at least two symbols");
  if (M > 0xffffffffu) throw std::invalid_argument("alphabet too large");
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::kStatic: return "static";
    case Mode::kAdaptive: return "adaptive";
    case Mode::kTree: return "tree";
    case Mode::kBinary: return "binary";
    case Mode::kPeriodic: return "periodic";
    case Mode::kOptimal: return "optimal";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (auto m : {Mode::kStatic, Mode::kAdaptive, Mode::kTree, Mode::kBinary, Mode::kPeriodic,
                 Mode::kOptimal})
    if (name == to_string(m)) return m;
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

// ---- compress

std::vector<std::uint8_t> compress_symbols(std::span<const Symbol> symbols, std::size_t M,
                                           const CompressOptions& opt) {
  check_alphabet(M);
  const CoderConfig cfg = CoderConfig::make(opt.radix, opt.precision);
  for (Symbol s : symbols)
    if (s >= M) throw std::out_of_range("symbol " + std::to_string(s) + " outside the alphabet");

  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  out.push_back(kFormatVersion);
  out.push_back(pack_config(cfg));
  out.push_back(static_cast<std::uint8_t>(opt.mode));
  put_u32(out, static_cast<std::uint32_t>(M));
  put_u64(out, symbols.size());
  if (symbols.empty()) return out;

  const std::uint64_t limit = adaptive_limit(cfg);
  Encoder enc(cfg, {opt.carry, LengthMode::kPlain, Termination::kTwoDigit});
  switch (opt.mode) {
    case Mode::kStatic: {
      auto dist = rebuild_periodic(occurrences(symbols, M), cfg).dist;
      put_u32(out, static_cast<std::uint32_t>(M));
      for (auto f : dist.frequencies()) put_u32(out, f);
      for (Symbol s : symbols) enc.encode(s, dist);
      break;
    }
    case Mode::kAdaptive: {
      FrequencyModel model(M, limit);
      for (Symbol s : symbols) enc.encode(s, model);
      break;
    }
    case Mode::kTree: {
      auto model = TreeModel::bisection(M, limit);
      for (Symbol s : symbols) enc.encode(s, model);
      break;
    }
    case Mode::kBinary: {
      auto model = TreeModel::bisection(M, limit);
      for (Symbol s : symbols) encode_symbol_bisection(enc, s, model);
      break;
    }
    case Mode::kPeriodic: {
      PeriodicModel model(M, cfg, opt.period);
      put_u32(out, static_cast<std::uint32_t>(model.period()));
      for (Symbol s : symbols) {
        enc.encode(s, model.distribution());
        model.observe(s);
      }
      break;
    }
    case Mode::kOptimal: {
      auto tree = DecisionTree::optimal(occurrences(symbols, M));
      tree.reset_frequencies(limit);
      auto bytes = tree.serialize();
      out.insert(out.end(), bytes.begin(), bytes.end());
      for (Symbol s : symbols) encode_symbol_tree(enc, s, tree);
      break;
    }
    default:
      throw std::invalid_argument("unknown mode");
  }
  auto digits = enc.finish();
  auto packed = pack_digits(digits, cfg.radix_bits);
  out.insert(out.end(), packed.begin(), packed.end());
  return out;
}

std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input, const CompressOptions& opt) {
  std::vector<Symbol> symbols(input.begin(), input.end());
  return compress_symbols(symbols, 256, opt);
}

// ---- header

Header read_header(std::span<const std::uint8_t> container) {
  Reader r{container};
  r.need(4);
  if (std::memcmp(container.data(), kMagic, 4) != 0) throw FormatError("not a container (bad magic)");
  r.pos = 4;
  Header h;
  h.version = r.u8();
  if (h.version != kFormatVersion)
    throw FormatError("unsupported container version " + std::to_string(h.version));
  h.config = unpack_config(r.u8());
  std::uint8_t mode = r.u8();
  if (mode > static_cast<std::uint8_t>(Mode::kOptimal))
    throw FormatError("unknown model mode " + std::to_string(mode));
  h.mode = static_cast<Mode>(mode);
  h.M = r.u32();
  if (h.M < 2) throw FormatError("alphabet size below two");
  h.N = r.u64();
  if (h.N > 0) {
    switch (h.mode) {
      case Mode::kStatic: {
        if (r.u32() != h.M) throw FormatError("model size does not match the alphabet");
        r.need(std::size_t{4} * h.M);
        for (std::uint32_t i = 0; i < h.M; ++i) h.frequencies.push_back(r.u32());
        break;
      }
      case Mode::kPeriodic:
        h.period = r.u32();
        if (h.period == 0) throw FormatError("zero update period");
        break;
      case Mode::kOptimal: {
        std::size_t used = 0;
        try {
          auto tree = DecisionTree::deserialize(container.subspan(r.pos), &used);
          if (tree.size() != h.M) throw FormatError("tree does not match the alphabet");
        } catch (const std::invalid_argument& e) {
          throw FormatError(std::string("bad tree: ") + e.what());
        }
        h.tree.assign(container.begin() + r.pos, container.begin() + r.pos + used);
        r.pos += used;
        break;
      }
      default:
        break;
    }
  }
  h.size = r.pos;
  return h;
}

// ---- decompress

DecodedSymbols decompress_symbols(std::span<const std::uint8_t> container, const DecompressOptions& opt) {
  Header h = read_header(container);
  DecodedSymbols out;
  out.M = h.M;
  auto payload = container.subspan(h.size);
  if (h.N == 0) {
    if (!payload.empty()) throw FormatError("payload present for an empty stream");
    return out;
  }
  const CoderConfig cfg = h.config;
  auto digits = unpack_digits(payload, cfg.radix_bits);
  DecoderOptions dopt;
  dopt.overrun_allowance = cfg.precision - 2;
  Decoder dec(cfg, digits, dopt);
  const std::uint64_t limit = adaptive_limit(cfg);
  const std::size_t M = h.M;
  auto& sym = out.symbols;
  sym.reserve(h.N);

  try {
    switch (h.mode) {
      case Mode::kStatic: {
        ScaledDistribution dist = ScaledDistribution::from_frequencies(h.frequencies, cfg);
        if (opt.search == SearchStrategy::kBisection) {
          for (std::uint64_t k = 0; k < h.N; ++k) sym.push_back(dec.decode(dist));
        } else {
          SymbolSearch search(opt.search, dist, opt.table_size);
          for (std::uint64_t k = 0; k < h.N; ++k) sym.push_back(dec.decode(dist, search));
        }
        break;
      }
      case Mode::kAdaptive: {
        FrequencyModel model(M, limit);
        bool sequential = opt.search == SearchStrategy::kSequential;
        for (std::uint64_t k = 0; k < h.N; ++k) sym.push_back(dec.decode(model, sequential));
        break;
      }
      case Mode::kTree: {
        auto model = TreeModel::bisection(M, limit);
        for (std::uint64_t k = 0; k < h.N; ++k) sym.push_back(dec.decode(model));
        break;
      }
      case Mode::kBinary: {
        auto model = TreeModel::bisection(M, limit);
        for (std::uint64_t k = 0; k < h.N; ++k) sym.push_back(decode_symbol_bisection(dec, model));
        break;
      }
      case Mode::kPeriodic: {
        PeriodicModel model(M, cfg, h.period);
        auto search = std::make_optional<SymbolSearch>(opt.search, model.distribution(), opt.table_size);
        for (std::uint64_t k = 0; k < h.N; ++k) {
          Symbol s = dec.decode(model.distribution(), *search);
          sym.push_back(s);
          if (model.observe(s)) search.emplace(opt.search, model.distribution(), opt.table_size);
        }
        break;
      }
      case Mode::kOptimal: {
        auto tree = DecisionTree::deserialize(h.tree);
        tree.reset_frequencies(limit);
        for (std::uint64_t k = 0; k < h.N; ++k) sym.push_back(decode_symbol_tree(dec, tree));
        break;
      }
    }
  } catch (const PrecisionError& e) {
    throw FormatError(std::string("model does not fit the coder: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad model: ") + e.what());
  } catch (const std::logic_error& e) {
    throw FormatError(std::string("corrupt payload: ") + e.what());
  }

  if (dec.overrun()) throw FormatError("payload is truncated");
  // digits the encoder emitted: P initial reads stand for two final digits
  const std::size_t emitted = dec.digits_read() - (cfg.precision - 2);
  const std::size_t per_byte = 8 / cfg.radix_bits;
  if (digits.size() >= emitted + per_byte) throw FormatError("trailing data after the payload");
  return out;
}

std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> container, const DecompressOptions& opt) {
  auto d = decompress_symbols(container, opt);
  if (d.M > 256) throw FormatError("alphabet does not fit in bytes");
  return {d.symbols.begin(), d.symbols.end()};
}

// ---- info

ContainerInfo info(std::span<const std::uint8_t> container) {
  ContainerInfo i;
  i.header = read_header(container);
  i.total_bytes = container.size();
  i.payload_bytes = container.size() - i.header.size;
  if (i.header.N) {
    i.bits_per_symbol = 8.0 * i.total_bytes / double(i.header.N);
    i.payload_bits_per_symbol = 8.0 * i.payload_bytes / double(i.header.N);
  }
  return i;
}

std::string format_info(const ContainerInfo& i) {
  std::ostringstream os;
  const auto& h = i.header;
  os << "version      " << int(h.version) << "\n"
     << "mode         " << to_string(h.mode) << "\n"
     << "radix D      " << h.config.radix() << "\n"
     << "precision P  " << h.config.precision << " digits (" << h.config.bits() << " bits)\n"
     << "alphabet M   " << h.M << "\n"
     << "symbols N    " << h.N << "\n";
  if (h.mode == Mode::kPeriodic && h.N) os << "period R     " << h.period << "\n";
  os << "overhead     " << h.size << " bytes\n"
     << "payload      " << i.payload_bytes << " bytes\n"
     << "bits/symbol  " << i.bits_per_symbol << " (payload " << i.payload_bits_per_symbol << ")\n";
  return os.str();
}

}  // namespace acs
