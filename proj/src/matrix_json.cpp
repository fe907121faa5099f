#include "qmplab/matrix_json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qmplab/errors.hpp"

namespace qmplab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

std::string matrix_to_json(const ComplexMatrix& m) {
  if (!all_finite(m)) {
    throw ValidationError("matrix_to_json: finiteness check failed");
  }
  std::string out;
  out.reserve(32 + 40 * m.data().size());
  out += "{\"rows\":";
  out += std::to_string(m.rows());
  out += ",\"cols\":";
  out += std::to_string(m.cols());
  out += ",\"re\":[";
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += format_double(m.data()[i].real());
  }
  out += "],\"im\":[";
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += format_double(m.data()[i].imag());
  }
  out += "]}";
  return out;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ValidationError("matrix_from_json: expected a JSON object");
  }
  for (const char* key : {"rows", "cols", "re", "im"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string("matrix_from_json: missing field \"") + key + "\"");
    }
  }
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned()) {
    throw ValidationError("matrix_from_json: rows and cols must be nonnegative integers");
  }
  const std::size_t rows = j["rows"].get<std::size_t>();
  const std::size_t cols = j["cols"].get<std::size_t>();
  if (rows == 0 || cols == 0) {
    throw ValidationError("matrix_from_json: rows and cols must be positive");
  }
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (!re.is_array() || !im.is_array()) {
    throw ValidationError("matrix_from_json: re and im must be arrays");
  }
  const std::size_t n = rows * cols;
  if (re.size() != n || im.size() != n) {
    throw ValidationError("matrix_from_json: coefficient arrays must have rows*cols = " +
                          std::to_string(n) + " entries");
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < n; ++i) {
    if (!re[i].is_number() || !im[i].is_number()) {
      throw ValidationError("matrix_from_json: coefficient entries must be numbers");
    }
    m.data()[i] = Complex(re[i].get<double>(), im[i].get<double>());
  }
  if (!all_finite(m)) {
    throw ValidationError("matrix_from_json: finiteness check failed");
  }
  return m;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("read_text_file: cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw ValidationError("read_text_file: read error on " + path);
  }
  return ss.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ValidationError("write_text_file_atomic: cannot open " + tmp);
    }
    out << content;
    out.flush();
    if (!out.good()) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ValidationError("write_text_file_atomic: write error on " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ValidationError("write_text_file_atomic: cannot rename into " + path);
  }
}

} // namespace qmplab
