#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace surfimp {

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// skipped. Numbers are written with 17 significant digits so values survive a
/// round trip exactly; vectors are comma separated.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(std::istream& is);
  static KeyValueDoc load(const std::string& path);

  void write(std::ostream& os) const;
  void save(const std::string& path) const;

  bool has(std::string_view key) const;
  std::size_t line_of(std::string_view key) const;  // 0 for keys added with set()
  std::vector<std::string> keys() const;

  const std::string& text(std::string_view key) const;
  double number(std::string_view key) const;
  std::size_t count(std::string_view key) const;  // non-negative integer
  std::vector<double> numbers(std::string_view key) const;

  double number_or(std::string_view key, double fallback) const;
  std::size_t count_or(std::string_view key, std::size_t fallback) const;

  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, const std::vector<double>& values);

  /// Throws ParseError naming the first key not in `allowed`.
  void require_known(const std::vector<std::string_view>& allowed) const;

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };
  const Entry& entry(std::string_view key) const;

  std::vector<std::string> order_;
  std::map<std::string, Entry, std::less<>> entries_;
};

std::string format_number(double v);
double parse_number(std::string_view text);  // throws InvalidArgument

}  // namespace surfimp
