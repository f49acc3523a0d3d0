#include "stratum/ordinal.hpp"

#include <cctype>
#include <charconv>

#include "stratum/error.hpp"

namespace stratum {

std::strong_ordering ord_compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

namespace {

class OrdinalReader {
 public:
  explicit OrdinalReader(std::string_view text) : text_(text) {}

  Ordinal read() {
    skip_space();
    Ordinal result;
    if (peek() == 'w') {
      ++pos_;
      result.limit = 1;
      skip_space();
      if (peek() == '*') {
        ++pos_;
        result.limit = natural();
        skip_space();
      }
      if (peek() == '+') {
        ++pos_;
        result.offset = natural();
      }
    } else {
      result.offset = natural();
    }
    skip_space();
    if (pos_ != text_.size()) throw ParseError("trailing characters in ordinal '" + std::string(text_) + "'", pos_);
    return result;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Natural natural() {
    skip_space();
    Natural value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) throw ParseError("expected a natural number in ordinal", pos_);
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal parse_ordinal(std::string_view text) { return OrdinalReader(text).read(); }

std::string to_string(const Ordinal& o) {
  if (o.limit == 0) return std::to_string(o.offset);
  std::string out = "w";
  if (o.limit != 1) out += "*" + std::to_string(o.limit);
  if (o.offset != 0) out += "+" + std::to_string(o.offset);
  return out;
}

}  // namespace stratum
