#include "trollscope/util/csv.hpp"

namespace trollscope::csv {

bool Reader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  std::streambuf* buf = in_.rdbuf();

  for (;;) {
    const int c = buf->sbumpc();
    if (c == std::char_traits<char>::eof()) {
      if (!any) return false;
      fields.push_back(std::move(field));
      ++records_;
      return true;
    }
    any = true;
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (buf->sgetc() == '"') {
          buf->sbumpc();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        if (buf->sgetc() == '\n') buf->sbumpc();
        [[fallthrough]];
      case '\n':
        fields.push_back(std::move(field));
        ++records_;
        return true;
      default:
        field.push_back(ch);
    }
  }
}

std::string quote(std::string_view field) {
  bool needs = field.empty() ? false : (field.front() == ' ' || field.back() == ' ');
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs = true;
      break;
    }
  }
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

}  // namespace trollscope::csv
