#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pom/lattice.hpp"
#include "pom/observables.hpp"
#include "pom/spin_config.hpp"

namespace pom {

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_double(double v);
/// Strict parse of a full field; throws std::invalid_argument.
[[nodiscard]] double parse_double(std::string_view text);
[[nodiscard]] long long parse_integer(std::string_view text);

/// Splits one CSV line on ',' (no quoting; the toolkit never writes any).
[[nodiscard]] std::vector<std::string_view> split_csv(std::string_view line);

/// "x,y,angle" with one row per site in index order.
void write_config_csv(std::ostream& out, const TorusLattice& lattice, const SpinConfig& config);
/// Rows may come in any order but every site must appear exactly once.
[[nodiscard]] SpinConfig read_config_csv(std::istream& in, const TorusLattice& lattice);

/// Flat binary: "POMC", uint32 N, then N^2 little-endian float64 angles.
void write_config_binary(std::ostream& out, const TorusLattice& lattice, const SpinConfig& config);
[[nodiscard]] SpinConfig read_config_binary(std::istream& in, const TorusLattice& lattice);

inline constexpr std::string_view kRecordHeader =
    "sweep,q_x,q_z,m_x,m_z,e_pure_x,e_pure_z,e_mixed,staggered,n_up_plaquettes,"
    "en_pure_x,en_pure_z,en_mixed,energy,z_orientation";

void write_record_header(std::ostream& out);
void write_record(std::ostream& out, const ObservableRecord& record);
void write_records_csv(std::ostream& out, const std::vector<ObservableRecord>& records);
/// Throws std::invalid_argument on a malformed header or row.
[[nodiscard]] std::vector<ObservableRecord> read_records_csv(std::istream& in);

}  // namespace pom
