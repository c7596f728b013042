#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace trollscope::csv {

// RFC 4180 reader: comma separated, double-quote escaping, quoted fields may
// span lines. CRLF and LF line endings are both accepted.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool next(std::vector<std::string>& fields);

  std::size_t records_read() const { return records_; }

 private:
  std::istream& in_;
  std::size_t records_ = 0;
};

std::string quote(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace trollscope::csv
