#include "levytrans/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "levytrans/errors.hpp"

namespace levytrans {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto a = field.find_first_not_of(" \t\r");
    const auto b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? std::string() : field.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return x;
}

}  // namespace

SeriesData read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");

  SeriesData data;
  std::string line;
  std::size_t row = 0;
  std::size_t ncols = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() > 2) {
      throw ValidationError("row " + std::to_string(row) + " of \"" + path +
                            "\": expected 1 or 2 columns, got " +
                            std::to_string(fields.size()));
    }
    if (first_data_row) {
      bool numeric = true;
      for (const auto& f : fields) numeric = numeric && parse_double(f).has_value();
      if (!numeric) {
        data.had_header = true;
        continue;  // header row
      }
      first_data_row = false;
      ncols = fields.size();
      data.had_time_column = (ncols == 2);
    }
    if (fields.size() != ncols) {
      throw ValidationError("row " + std::to_string(row) + " of \"" + path +
                            "\": ragged row (expected " + std::to_string(ncols) +
                            " columns)");
    }
    double t = static_cast<double>(data.value.size());
    double v;
    if (ncols == 2) {
      const auto pt = parse_double(fields[0]);
      const auto pv = parse_double(fields[1]);
      if (!pt || !pv) {
        throw ValidationError("row " + std::to_string(row) + " of \"" + path +
                              "\": non-numeric entry");
      }
      t = *pt;
      v = *pv;
    } else {
      const auto pv = parse_double(fields[0]);
      if (!pv) {
        throw ValidationError("row " + std::to_string(row) + " of \"" + path +
                              "\": non-numeric entry");
      }
      v = *pv;
    }
    if (!std::isfinite(t) || !std::isfinite(v)) {
      throw ValidationError("row " + std::to_string(row) + " of \"" + path +
                            "\": non-finite entry");
    }
    data.time.push_back(t);
    data.value.push_back(v);
  }
  if (data.value.empty()) {
    throw ValidationError("\"" + path + "\" contains no data rows");
  }
  return data;
}

std::vector<double> read_value_column(const std::string& path) {
  return read_series_csv(path).value;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << contents;
  if (!out) throw IoError("failed while writing \"" + path + "\"");
}

}  // namespace levytrans
