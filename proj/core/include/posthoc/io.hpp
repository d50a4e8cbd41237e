#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "posthoc/calibration.hpp"
#include "posthoc/family.hpp"

namespace posthoc {

/// Whole file as bytes. Throws Io.
std::string read_file(const std::filesystem::path& path);
/// Throws Io.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// {"m": int, "members": [{"indices": [int...], "zeta": int|null}...]},
/// 1-based indices. Malformed or inconsistent content throws Parse.
ReferenceFamily parse_family(std::string_view json_text);
/// Same layout, two-space indentation, trailing newline.
std::string family_to_json(const ReferenceFamily& family);

/// One decimal per line; blank lines are skipped. Throws Parse.
PValueVector parse_pvalues(std::string_view text);
/// One 1-based index per line. Throws Parse.
std::vector<Index> parse_indices(std::string_view text);
/// One flag per line, 1 for a true null and 0 otherwise. Throws Parse.
NullMask parse_null_mask(std::string_view text);

/// 17 significant digits, so that the text round-trips the double.
std::string format_double(double x);

}  // namespace posthoc
