#include "surfimp/keyvalue.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "surfimp/errors.hpp"

namespace surfimp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(std::string_view text) {
  const auto t = trim(text);
  if (t == "nan" || t == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (begin != end && *begin == '+') ++begin;
  double v = 0.0;
  const auto res = std::from_chars(begin, end, v);
  if (t.empty() || res.ec != std::errc() || res.ptr != end) {
    throw InvalidArgument("not a number: '" + std::string(t) + "'");
  }
  return v;
}

KeyValueDoc KeyValueDoc::parse(std::istream& is) {
  KeyValueDoc doc;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line);
    const std::string key(trim(s.substr(0, eq)));
    if (key.empty()) throw ParseError("missing key before '='", line);
    if (doc.entries_.count(key)) throw ParseError("duplicate key '" + key + "'", line, key);
    doc.order_.push_back(key);
    doc.entries_[key] = Entry{std::string(trim(s.substr(eq + 1))), line};
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return parse(in);
}

void KeyValueDoc::write(std::ostream& os) const {
  for (const auto& key : order_) os << key << " = " << entries_.find(key)->second.value << '\n';
}

void KeyValueDoc::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write(out);
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

bool KeyValueDoc::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::size_t KeyValueDoc::line_of(std::string_view key) const { return has(key) ? entry(key).line : 0; }

std::vector<std::string> KeyValueDoc::keys() const { return order_; }

const KeyValueDoc::Entry& KeyValueDoc::entry(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ParseError("missing key '" + std::string(key) + "'", 0, std::string(key));
  return it->second;
}

const std::string& KeyValueDoc::text(std::string_view key) const { return entry(key).value; }

double KeyValueDoc::number(std::string_view key) const {
  const auto& e = entry(key);
  try {
    return parse_number(e.value);
  } catch (const InvalidArgument& err) {
    throw ParseError("key '" + std::string(key) + "': " + err.what(), e.line, std::string(key));
  }
}

std::size_t KeyValueDoc::count(std::string_view key) const {
  const auto& e = entry(key);
  std::size_t v = 0;
  const char* end = e.value.data() + e.value.size();
  const auto res = std::from_chars(e.value.data(), end, v);
  if (e.value.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ParseError("key '" + std::string(key) + "' needs a non-negative integer", e.line, std::string(key));
  }
  return v;
}

std::vector<double> KeyValueDoc::numbers(std::string_view key) const {
  const auto& e = entry(key);
  std::vector<double> out;
  std::string_view rest = e.value;
  if (trim(rest).empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    try {
      out.push_back(parse_number(rest.substr(0, comma)));
    } catch (const InvalidArgument& err) {
      throw ParseError("key '" + std::string(key) + "': " + err.what(), e.line, std::string(key));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

double KeyValueDoc::number_or(std::string_view key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::size_t KeyValueDoc::count_or(std::string_view key, std::size_t fallback) const {
  return has(key) ? count(key) : fallback;
}

void KeyValueDoc::set(std::string key, std::string value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    order_.push_back(key);
    entries_.emplace(std::move(key), Entry{std::move(value), 0});
  } else {
    it->second.value = std::move(value);
  }
}

void KeyValueDoc::set(std::string key, double value) { set(std::move(key), format_number(value)); }

void KeyValueDoc::set(std::string key, const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_number(values[i]);
  }
  set(std::move(key), std::move(s));
}

void KeyValueDoc::require_known(const std::vector<std::string_view>& allowed) const {
  for (const auto& key : order_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError("unknown key '" + key + "'", entries_.find(key)->second.line, key);
    }
  }
}

}  // namespace surfimp
