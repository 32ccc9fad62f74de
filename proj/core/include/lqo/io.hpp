#pragma once

// System files are JSON:
//
//   {
//     "schema_version": 1,
//     "n_states": N, "n_inputs": m, "n_outputs": p,
//     "A": [[...], ...],  "B": [[...], ...],  "C": [[...], ...],
//     "M": [ [[...], ...], ... ]              one N x N matrix per output
//   }
//
// Any matrix may instead be {"matrix_market": "relative/or/absolute.mtx"},
// resolved against the directory of the system file.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "lqo/optimality.hpp"
#include "lqo/reductors.hpp"
#include "lqo/system.hpp"

namespace lqo {

inline constexpr int kSchemaVersion = 1;

struct ParseOptions {
  bool require_hurwitz = true;
  std::filesystem::path base_dir;
};

/// Schema violations raise ValidationError whose context is the JSON path of
/// the offending field (e.g. "/A/2").
LqoSystem parse_system(std::string_view text, const ParseOptions& options = {});

LqoSystem load_system(const std::filesystem::path& path, bool require_hurwitz = true);

/// Doubles are written in shortest round-trip form, so parse_system on the
/// output reproduces every entry bit for bit.
std::string serialize_system(const LqoSystem& system);

void save_system(const std::filesystem::path& path, const LqoSystem& system);

/// Real Matrix Market, "array" or "coordinate" layout, general or symmetric.
Matrix read_matrix_market(std::istream& in);

std::string serialize_report(const ReductionReport& report);
std::string serialize_residuals(const OptimalityReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace lqo
