#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/curve_io.hpp"
#include "frechet/range_index.hpp"

// Index snapshot, text, one record per line:
//   frechet-index v1
//   mode <float|rational>
//   metric <strong|weak>
//   k <query size>
//   d <dimension>
//   curves <n>
//   checksum <FNV-1a 64 of the curve and labels lines, hex>
//   curve <vertex count> <coordinates ...>        (n lines)
//   labels <JSON array of names, or ->
//   cache <entries>
//   entry <key hex> <comma-separated subset or ->  (one per entry)

namespace frechet {

inline constexpr const char* snapshot_magic = "frechet-index v1";

inline std::uint64_t fnv1a(const std::string& text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace detail {

inline std::string to_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

inline std::string from_hex(const std::string& hex) {
  if (hex.size() % 2) throw input_error("snapshot: odd-length key");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw input_error("snapshot: bad hex digit");
  };
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2) out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  return out;
}

template <scalar T>
std::string curve_line(const polygonal_curve<T>& c) {
  std::string line = "curve " + std::to_string(c.size());
  for (const auto& v : c.vertices())
    for (const auto& x : v.coords()) line += ' ' + format_number(x);
  return line;
}

inline std::string expect_field(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw input_error("snapshot: missing '" + name + "' record");
  std::istringstream ss(line);
  std::string tag, value;
  ss >> tag >> value;
  if (tag != name) throw input_error("snapshot: expected '" + name + "', found '" + tag + "'");
  return value;
}

inline std::size_t to_size(const std::string& s) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used != s.size()) throw input_error("snapshot: bad count '" + s + "'");
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw input_error("snapshot: bad count '" + s + "'");
  }
}

}  // namespace detail

template <scalar T>
void save_index(std::ostream& out, const range_index<T>& index) {
  std::vector<std::string> lines;
  std::uint64_t sum = 0xcbf29ce484222325ULL;
  for (const auto& c : index.curves()) {
    lines.push_back(detail::curve_line(c));
    sum = fnv1a(lines.back() + "\n", sum);
  }
  lines.push_back("labels " + (index.labels().empty() ? std::string("-") : nlohmann::json(index.labels()).dump()));
  sum = fnv1a(lines.back() + "\n", sum);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(sum));
  out << snapshot_magic << '\n'
      << "mode " << scalar_traits<T>::name << '\n'
      << "metric " << metric_name(index.which()) << '\n'
      << "k " << index.k() << '\n'
      << "d " << index.dim() << '\n'
      << "curves " << index.size() << '\n'
      << "checksum " << hex << '\n';
  for (const auto& l : lines) out << l << '\n';
  auto entries = index.cache_entries();
  out << "cache " << entries.size() << '\n';
  for (const auto& [key, subset] : entries) {
    out << "entry " << detail::to_hex(key) << ' ';
    if (subset.empty()) out << '-';
    for (std::size_t i = 0; i < subset.size(); ++i) out << (i ? "," : "") << subset[i];
    out << '\n';
  }
}

template <scalar T>
range_index<T> load_index(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != snapshot_magic) throw input_error("snapshot: unsupported or missing version header");
  auto mode = detail::expect_field(in, "mode");
  if (mode != scalar_traits<T>::name) throw input_error("snapshot: stored in " + mode + " mode");
  auto which_text = detail::expect_field(in, "metric");
  if (which_text != "strong" && which_text != "weak") throw input_error("snapshot: bad metric");
  metric which = which_text == "strong" ? metric::strong : metric::weak;
  std::size_t k = detail::to_size(detail::expect_field(in, "k"));
  std::size_t d = detail::to_size(detail::expect_field(in, "d"));
  std::size_t n = detail::to_size(detail::expect_field(in, "curves"));
  std::string checksum = detail::expect_field(in, "checksum");
  std::uint64_t sum = 0xcbf29ce484222325ULL;
  std::vector<polygonal_curve<T>> curves;
  for (std::size_t a = 0; a < n; ++a) {
    if (!std::getline(in, line)) throw input_error("snapshot: truncated curve list");
    sum = fnv1a(line + "\n", sum);
    std::istringstream ss(line);
    std::string tag, count_text;
    ss >> tag >> count_text;
    if (tag != "curve") throw input_error("snapshot: expected curve record");
    std::size_t count = detail::to_size(count_text);
    std::vector<point<T>> pts;
    for (std::size_t v = 0; v < count; ++v) {
      std::vector<T> coords;
      for (std::size_t l = 0; l < d; ++l) {
        std::string x;
        if (!(ss >> x)) throw input_error("snapshot: truncated curve record");
        coords.push_back(parse_number<T>(x));
      }
      pts.emplace_back(std::move(coords));
    }
    curves.emplace_back(std::move(pts));
  }
  if (!std::getline(in, line) || line.rfind("labels ", 0) != 0) throw input_error("snapshot: missing 'labels' record");
  sum = fnv1a(line + "\n", sum);
  std::vector<std::string> labels;
  if (line != "labels -") {
    try {
      labels = nlohmann::json::parse(line.substr(7)).get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception&) {
      throw input_error("snapshot: bad labels record");
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(sum));
  if (checksum != hex) throw input_error("snapshot: curve checksum mismatch");
  range_index<T> index(std::move(curves), k, which);
  index.set_labels(std::move(labels));
  std::size_t entries = detail::to_size(detail::expect_field(in, "cache"));
  for (std::size_t e = 0; e < entries; ++e) {
    if (!std::getline(in, line)) throw input_error("snapshot: truncated cache");
    std::istringstream ss(line);
    std::string tag, key, subset_text;
    ss >> tag >> key >> subset_text;
    if (tag != "entry") throw input_error("snapshot: expected cache entry");
    std::vector<std::size_t> subset;
    if (subset_text != "-") {
      std::stringstream parts(subset_text);
      std::string p;
      while (std::getline(parts, p, ',')) subset.push_back(detail::to_size(p));
    }
    index.restore_entry(detail::from_hex(key), std::move(subset));
  }
  return index;
}

}  // namespace frechet
