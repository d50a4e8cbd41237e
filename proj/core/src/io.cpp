#include "posthoc/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>

#include "posthoc/error.hpp"

namespace posthoc {
namespace {

using nlohmann::json;

// Non-blank lines with surrounding whitespace removed, paired with their
// 1-based line number.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.emplace_back(number, line.substr(first, last - first + 1));
  }
  return out;
}

[[noreturn]] void bad_line(std::size_t number, std::string_view line, const char* what) {
  throw Error(ErrorCode::Parse,
              "line " + std::to_string(number) + " ('" + std::string(line) + "'): " + what);
}

template <typename T>
T parse_number(std::size_t number, std::string_view line) {
  T value{};
  const char* end = line.data() + line.size();
  const auto [ptr, ec] = std::from_chars(line.data(), end, value);
  if (ec != std::errc{} || ptr != end) bad_line(number, line, "not a number");
  return value;
}

Index json_index(const json& value) {
  if (!value.is_number_integer()) throw Error(ErrorCode::Parse, "index is not an integer");
  const auto i = value.get<std::int64_t>();
  if (i < 1 || i > std::numeric_limits<Index>::max()) {
    throw Error(ErrorCode::Parse, "index " + std::to_string(i) + " out of range");
  }
  return static_cast<Index>(i);
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return text;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

ReferenceFamily parse_family(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "family must be a JSON object");
  if (!doc.contains("m") || !doc["m"].is_number_integer()) {
    throw Error(ErrorCode::Parse, "missing integer field 'm'");
  }
  const auto m = doc["m"].get<std::int64_t>();
  if (m < 1 || m > std::numeric_limits<Index>::max()) {
    throw Error(ErrorCode::Parse, "'m' must be a positive 32-bit integer");
  }
  if (!doc.contains("members") || !doc["members"].is_array()) {
    throw Error(ErrorCode::Parse, "missing array field 'members'");
  }
  std::vector<Member> members;
  for (const json& entry : doc["members"]) {
    if (!entry.is_object() || !entry.contains("indices") || !entry["indices"].is_array()) {
      throw Error(ErrorCode::Parse, "member needs an 'indices' array");
    }
    std::vector<Index> indices;
    indices.reserve(entry["indices"].size());
    for (const json& i : entry["indices"]) indices.push_back(json_index(i));
    std::optional<Count> zeta;
    if (entry.contains("zeta") && !entry["zeta"].is_null()) {
      if (!entry["zeta"].is_number_integer()) throw Error(ErrorCode::Parse, "zeta must be an integer or null");
      zeta = entry["zeta"].get<std::int64_t>();
    }
    try {
      members.push_back(Member{Region(normalize_indices(std::move(indices), static_cast<Index>(m))), zeta});
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, e.what());
    }
  }
  try {
    return ReferenceFamily(static_cast<Index>(m), std::move(members));
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

std::string family_to_json(const ReferenceFamily& family) {
  json members = json::array();
  for (const Member& member : family.members()) {
    json entry = json::object();
    entry["indices"] = std::vector<Index>(member.region.begin(), member.region.end());
    entry["zeta"] = member.zeta ? json(*member.zeta) : json(nullptr);
    members.push_back(std::move(entry));
  }
  json doc = json::object();
  doc["m"] = family.m();
  doc["members"] = std::move(members);
  return doc.dump(2) + "\n";
}

PValueVector parse_pvalues(std::string_view text) {
  std::vector<double> values;
  for (const auto& [number, line] : lines_of(text)) {
    const auto p = parse_number<double>(number, line);
    if (!(p >= 0.0 && p <= 1.0)) bad_line(number, line, "p-value outside [0, 1]");
    values.push_back(p);
  }
  if (values.empty()) throw Error(ErrorCode::Parse, "no p-values");
  return PValueVector(std::move(values));
}

std::vector<Index> parse_indices(std::string_view text) {
  std::vector<Index> out;
  for (const auto& [number, line] : lines_of(text)) {
    const auto i = parse_number<std::int64_t>(number, line);
    if (i < 1 || i > std::numeric_limits<Index>::max()) bad_line(number, line, "index out of range");
    out.push_back(static_cast<Index>(i));
  }
  return out;
}

NullMask parse_null_mask(std::string_view text) {
  std::vector<bool> flags;
  for (const auto& [number, line] : lines_of(text)) {
    if (line == "1") {
      flags.push_back(true);
    } else if (line == "0") {
      flags.push_back(false);
    } else {
      bad_line(number, line, "expected 0 or 1");
    }
  }
  return NullMask(std::move(flags));
}

std::string format_double(double x) {
  char buffer[64];
  const int n = std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return std::string(buffer, static_cast<std::size_t>(n));
}

}  // namespace posthoc
