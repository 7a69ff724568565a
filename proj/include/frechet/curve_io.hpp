#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/geometry.hpp"
#include "frechet/scalar.hpp"

// Curve files.
//   csv:   "# d=<dim>" header, then lines "id,x1,...,xd"; a blank line or a
//          change of id starts the next curve.
//   jsonl: header {"d": <dim>}, then one {"id": ..., "points": [[...], ...]}
//          per line. Rational coordinates are strings "p/q".

namespace frechet {

enum class curve_format { csv, jsonl };

inline curve_format format_for_path(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "csv") return curve_format::csv;
  if (ext == "jsonl" || ext == "json") return curve_format::jsonl;
  throw input_error("cannot infer curve format from '" + path + "' (use .csv or .jsonl)");
}

/// Exact parse of an integer, decimal (optional exponent) or "p/q" literal.
inline rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw input_error("empty number");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    rational num = parse_rational(text.substr(0, slash));
    rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw input_error("zero denominator in '" + raw + "'");
    return rational(num / den);
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  std::string digits;
  long exp10 = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exp10;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw input_error("malformed number '" + raw + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw input_error("malformed number '" + raw + "'");
    long e = 0;
    const char* first = text.data() + pos + 1;
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc() || ptr != last || e > 100000 || e < -100000)
      throw input_error("malformed exponent in '" + raw + "'");
    exp10 += e;
  }
  mpz_class mant(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  rational out = exp10 < 0 ? rational(mant, scale) : rational(mant * scale);
  out.canonicalize();
  return negative ? rational(-out) : out;
}

template <scalar T>
T parse_number(const std::string& text) {
  if constexpr (is_exact_v<T>) {
    return parse_rational(text);
  } else {
    std::string t;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.find('/') != std::string::npos) return parse_rational(t).get_d();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) throw input_error("malformed number '" + text + "'");
    if (!std::isfinite(v)) throw input_error("non-finite number '" + text + "'");
    return v;
  }
}

/// Round-trip formatting by default (17 significant digits for doubles,
/// p/q for rationals); `digits` > 0 truncates for display.
inline std::string format_number(double v, int digits = 0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits > 0 ? digits : 17, v);
  return buf;
}

inline std::string format_number(const rational& v, int digits = 0) {
  if (digits > 0) return format_number(v.get_d(), digits);
  return v.get_str();
}

template <scalar T>
struct curve_file {
  std::size_t dim = 0;
  std::vector<std::string> ids;
  std::vector<polygonal_curve<T>> curves;

  const polygonal_curve<T>& find(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return curves[i];
    throw input_error("no curve with id '" + id + "'");
  }

  void add(std::string id, polygonal_curve<T> c) {
    for (const auto& existing : ids)
      if (existing == id) throw input_error("duplicate curve id '" + id + "'");
    if (c.dim() != dim) throw input_error("curve '" + id + "' does not match the declared dimension");
    ids.push_back(std::move(id));
    curves.push_back(std::move(c));
  }
};

namespace detail {

inline std::string trim_copy(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::size_t parse_dim(const std::string& text) {
  std::size_t d = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec != std::errc() || ptr != text.data() + text.size() || d == 0) throw input_error("bad dimension '" + text + "'");
  return d;
}

template <scalar T>
curve_file<T> read_csv(std::istream& in, duplicate_policy policy) {
  curve_file<T> out;
  std::string line;
  bool have_header = false;
  std::string current;
  std::vector<point<T>> pts;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (pts.empty()) return;
    out.add(current, polygonal_curve<T>(std::move(pts), policy));
    pts.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim_copy(line);
    if (!have_header) {
      if (t.empty()) continue;
      if (t.rfind("#", 0) != 0) throw input_error("csv: missing '# d=<dim>' header");
      auto eq = t.find("d=");
      if (eq == std::string::npos) throw input_error("csv: missing '# d=<dim>' header");
      out.dim = parse_dim(trim_copy(t.substr(eq + 2)));
      have_header = true;
      continue;
    }
    if (t.empty()) {
      flush();
      continue;
    }
    if (t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim_copy(f));
    if (fields.size() != out.dim + 1)
      throw input_error("csv line " + std::to_string(line_no) + ": expected id and " + std::to_string(out.dim) +
                        " coordinates");
    if (!pts.empty() && fields[0] != current) flush();
    current = fields[0];
    std::vector<T> coords;
    for (std::size_t l = 1; l < fields.size(); ++l) coords.push_back(parse_number<T>(fields[l]));
    pts.emplace_back(std::move(coords));
  }
  if (!have_header) throw input_error("csv: empty input");
  flush();
  return out;
}

template <scalar T>
T json_number(const nlohmann::json& v) {
  if (v.is_string()) return parse_number<T>(v.get<std::string>());
  if (v.is_number_integer()) return T(v.get<long>());
  if (v.is_number()) {
    if constexpr (is_exact_v<T>)
      return parse_rational(v.dump());
    else
      return v.get<double>();
  }
  throw input_error("jsonl: coordinate is not a number");
}

template <scalar T>
curve_file<T> read_jsonl(std::istream& in, duplicate_policy policy) {
  curve_file<T> out;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim_copy(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw input_error(std::string("jsonl: ") + e.what());
    }
    if (!have_header) {
      if (!rec.is_object() || !rec.contains("d") || !rec["d"].is_number_integer() || rec["d"].get<long>() < 1)
        throw input_error("jsonl: first record must be {\"d\": <dim>}");
      out.dim = rec["d"].get<std::size_t>();
      have_header = true;
      continue;
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("points") || !rec["points"].is_array())
      throw input_error("jsonl: curve records need \"id\" and \"points\"");
    std::string id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
    std::vector<point<T>> pts;
    for (const auto& p : rec["points"]) {
      if (!p.is_array() || p.size() != out.dim) throw input_error("jsonl: point of wrong dimension in '" + id + "'");
      std::vector<T> coords;
      for (const auto& x : p) coords.push_back(json_number<T>(x));
      pts.emplace_back(std::move(coords));
    }
    out.add(std::move(id), polygonal_curve<T>(std::move(pts), policy));
  }
  if (!have_header) throw input_error("jsonl: empty input");
  return out;
}

}  // namespace detail

template <scalar T>
curve_file<T> read_curves(std::istream& in, curve_format fmt, duplicate_policy policy = duplicate_policy::reject) {
  return fmt == curve_format::csv ? detail::read_csv<T>(in, policy) : detail::read_jsonl<T>(in, policy);
}

template <scalar T>
void write_curve_record(std::ostream& out, const std::string& id, const polygonal_curve<T>& c, curve_format fmt,
                        int digits = 0) {
  if (fmt == curve_format::csv) {
    for (const auto& v : c.vertices()) {
      out << id;
      for (const auto& x : v.coords()) out << ',' << format_number(x, digits);
      out << '\n';
    }
    return;
  }
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& v : c.vertices()) {
    nlohmann::json p = nlohmann::json::array();
    for (const auto& x : v.coords()) {
      if constexpr (is_exact_v<T>)
        p.push_back(format_number(x, digits));
      else
        p.push_back(digits > 0 ? std::stod(format_number(x, digits)) : x);
    }
    pts.push_back(std::move(p));
  }
  out << nlohmann::json{{"id", id}, {"points", std::move(pts)}}.dump() << '\n';
}

template <scalar T>
void write_curves(std::ostream& out, const curve_file<T>& file, curve_format fmt) {
  if (fmt == curve_format::csv)
    out << "# d=" << file.dim << '\n';
  else
    out << nlohmann::json{{"d", file.dim}}.dump() << '\n';
  for (std::size_t i = 0; i < file.curves.size(); ++i) {
    if (fmt == curve_format::csv && i > 0) out << '\n';
    write_curve_record(out, file.ids[i], file.curves[i], fmt);
  }
}

}  // namespace frechet
