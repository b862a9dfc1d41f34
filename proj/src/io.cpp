#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "persist/errors.hpp"
#include "persist/report.hpp"

namespace persist {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_failure(const std::string& what) {
  throw InputError(ErrorKind::ParseError, what);
}

}  // namespace

InputFormat infer_format(std::string_view path) {
  constexpr std::string_view ext = ".json";
  if (path.size() >= ext.size() && path.substr(path.size() - ext.size()) == ext) {
    return InputFormat::json;
  }
  return InputFormat::csv;
}

std::vector<std::vector<double>> parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty()) continue;

    std::vector<double> row;
    while (true) {
      const std::size_t comma = line.find(',');
      const std::string_view field = trim(line.substr(0, comma));
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        std::ostringstream os;
        os << "line " << line_no << ": '" << field << "' is not a decimal literal";
        parse_failure(os.str());
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "line " << line_no << ": " << row.size() << " entries, expected "
         << rows.front().size();
      parse_failure(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_failure("no matrix rows found");
  return rows;
}

MatrixInput parse_json_matrix(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    parse_failure(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array()) {
    parse_failure("expected an object with a \"matrix\" array");
  }
  MatrixInput out;
  for (const auto& row : doc["matrix"]) {
    if (!row.is_array()) parse_failure("every matrix row must be an array");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) parse_failure("matrix entries must be numbers");
      r.push_back(v.get<double>());
    }
    if (!out.rows.empty() && r.size() != out.rows.front().size()) {
      parse_failure("matrix rows have different lengths");
    }
    out.rows.push_back(std::move(r));
  }
  if (out.rows.empty()) parse_failure("no matrix rows found");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) parse_failure("\"name\" must be a string");
    out.name = doc["name"].get<std::string>();
  }
  return out;
}

std::string fnv1a_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MatrixInput read_matrix_file(const std::string& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(ErrorKind::IoError, "cannot open '" + path + "'");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw InputError(ErrorKind::IoError, "failed reading '" + path + "'");

  MatrixInput out;
  if (format == InputFormat::json) {
    out = parse_json_matrix(text);
  } else {
    out.rows = parse_csv(text);
  }
  out.digest = fnv1a_digest(text);
  return out;
}

StochasticMatrix parse_matrix(const std::string& path, InputFormat format,
                              double validation_tol) {
  return make_stochastic(read_matrix_file(path, format).rows, validation_tol);
}

}  // namespace persist
