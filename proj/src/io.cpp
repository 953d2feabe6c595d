#include "pom/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace pom {

namespace {

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::invalid_argument("expected CSV header '" + std::string(header) + "'");
  }
}

template <class T>
void write_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host assumed");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw std::invalid_argument("truncated binary configuration");
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

long long parse_integer(std::string_view text) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void write_config_csv(std::ostream& out, const TorusLattice& lattice, const SpinConfig& config) {
  if (config.size() != lattice.site_count()) {
    throw std::invalid_argument("configuration does not match lattice");
  }
  out << "x,y,angle\n";
  for (int i = 0; i < config.size(); ++i) {
    const Site s = lattice.site(i);
    out << s.x << ',' << s.y << ',' << format_double(config.angle(i)) << '\n';
  }
}

SpinConfig read_config_csv(std::istream& in, const TorusLattice& lattice) {
  expect_header(in, "x,y,angle");
  SpinConfig config(lattice.site_count());
  std::vector<char> seen(lattice.site_count(), 0);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 3) throw std::invalid_argument("config row needs 3 fields: '" + line + "'");
    const Site s{static_cast<int>(parse_integer(f[0])), static_cast<int>(parse_integer(f[1]))};
    if (!lattice.contains(s)) throw std::invalid_argument("site outside lattice: '" + line + "'");
    const int i = lattice.index(s);
    if (seen[i]) throw std::invalid_argument("duplicate site: '" + line + "'");
    seen[i] = 1;
    config.set_angle(i, parse_double(f[2]));
    ++rows;
  }
  if (rows != lattice.site_count()) {
    throw std::invalid_argument("config has " + std::to_string(rows) + " rows, expected " +
                                std::to_string(lattice.site_count()));
  }
  return config;
}

void write_config_binary(std::ostream& out, const TorusLattice& lattice, const SpinConfig& config) {
  if (config.size() != lattice.site_count()) {
    throw std::invalid_argument("configuration does not match lattice");
  }
  out.write("POMC", 4);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(lattice.size()));
  for (int i = 0; i < config.size(); ++i) write_le<double>(out, config.angle(i));
}

SpinConfig read_config_binary(std::istream& in, const TorusLattice& lattice) {
  char magic[4] = {};
  if (!in.read(magic, 4) || std::memcmp(magic, "POMC", 4) != 0) {
    throw std::invalid_argument("not a binary configuration (bad magic)");
  }
  const auto n = read_le<std::uint32_t>(in);
  if (static_cast<int>(n) != lattice.size()) {
    throw std::invalid_argument("binary configuration is for N = " + std::to_string(n));
  }
  SpinConfig config(lattice.site_count());
  for (int i = 0; i < lattice.site_count(); ++i) config.set_angle(i, read_le<double>(in));
  return config;
}

void write_record_header(std::ostream& out) { out << kRecordHeader << '\n'; }

void write_record(std::ostream& out, const ObservableRecord& r) {
  out << r.sweep << ',' << format_double(r.q_x) << ',' << format_double(r.q_z) << ','
      << format_double(r.m_x) << ',' << format_double(r.m_z) << ',' << format_double(r.e_pure_x)
      << ',' << format_double(r.e_pure_z) << ',' << format_double(r.e_mixed) << ','
      << format_double(r.staggered) << ',' << r.n_up << ',' << format_double(r.en_pure_x) << ','
      << format_double(r.en_pure_z) << ',' << format_double(r.en_mixed) << ','
      << format_double(r.energy) << ',' << r.z_orientation << '\n';
}

void write_records_csv(std::ostream& out, const std::vector<ObservableRecord>& records) {
  write_record_header(out);
  for (const auto& r : records) write_record(out, r);
}

std::vector<ObservableRecord> read_records_csv(std::istream& in) {
  expect_header(in, kRecordHeader);
  std::vector<ObservableRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 15) throw std::invalid_argument("record row needs 15 fields: '" + line + "'");
    ObservableRecord r;
    r.sweep = parse_integer(f[0]);
    r.q_x = parse_double(f[1]);
    r.q_z = parse_double(f[2]);
    r.m_x = parse_double(f[3]);
    r.m_z = parse_double(f[4]);
    r.e_pure_x = parse_double(f[5]);
    r.e_pure_z = parse_double(f[6]);
    r.e_mixed = parse_double(f[7]);
    r.staggered = parse_double(f[8]);
    r.n_up = static_cast<int>(parse_integer(f[9]));
    r.en_pure_x = parse_double(f[10]);
    r.en_pure_z = parse_double(f[11]);
    r.en_mixed = parse_double(f[12]);
    r.energy = parse_double(f[13]);
    r.z_orientation = std::string(f[14]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace pom
