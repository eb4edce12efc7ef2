#pragma once

#include <optional>
#include <string>
#include <vector>

namespace levytrans {

// Numeric series loaded from a one- or two-column CSV. With two columns the
// first is time and the second the value; with one column the values are
// indexed 0, 1, 2, ... A leading header row is detected and skipped.
struct SeriesData {
  std::vector<double> time;
  std::vector<double> value;
  bool had_header = false;
  bool had_time_column = false;
};

// Throws IoError when the file cannot be read, ValidationError (with the
// 1-based row number) on ragged rows or non-finite entries.
SeriesData read_series_csv(const std::string& path);

// Single-column convenience reader: the value column of read_series_csv.
std::vector<double> read_value_column(const std::string& path);

// Fixed-format double rendering so repeated runs emit byte-identical files.
std::string format_double(double x);

// Creates/truncates the file or throws IoError.
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace levytrans
