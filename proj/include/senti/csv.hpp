#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace senti::csv {

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and
/// newlines. Tracks the physical line on which each record starts.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record. Returns false at end of input. Throws
  /// senti::Error on an unterminated quoted field.
  bool next(std::vector<std::string>& fields);

  /// 1-based line number where the most recently returned record began.
  std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::string escape(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

/// Maps header names to column positions; missing names yield npos.
class Header {
 public:
  explicit Header(std::vector<std::string> names);
  std::size_t index(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

}  // namespace senti::csv
