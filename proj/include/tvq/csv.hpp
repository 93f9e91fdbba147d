#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tvq {

/// Minimal CSV row writer: header first, '.' decimals, "nan" for missing.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) {
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
  }

  CsvWriter& cell(double v) {
    sep();
    if (std::isnan(v)) {
      os_ << "nan";
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v);
      os_ << buf;
    }
    return *this;
  }

  CsvWriter& cell(std::string_view s) {
    sep();
    os_ << s;
    return *this;
  }

  void end_row() {
    os_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }

  std::ostream& os_;
  bool first_ = true;
};

}  // namespace tvq
