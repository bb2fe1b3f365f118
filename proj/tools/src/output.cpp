#include "output.hpp"

#include <cmath>
#include <fstream>

#include "qtoa/errors.hpp"

namespace qtoa::cli {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::optional<double>>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (row[i]) out += format_real(*row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json json_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw InvalidParameter("cannot write output file '" + path + "'");
}

}  // namespace qtoa::cli
