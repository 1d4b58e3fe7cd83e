#pragma once

// Deterministic text output: CSV (comma, header row, LF) and JSON with every
// floating-point value in "%.16e" scientific notation.

#include "pmpy/cli/config.hpp"
#include "pmpy/sim.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pmpy::cli {

/// "%.16e"; non-finite values print as inf, -inf or nan.
std::string format_number(double x);

/// Two-space indented JSON with insertion-ordered keys and a trailing
/// newline. Non-finite numbers are written as null.
std::string dump_json(const Json &j);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(const std::string &s);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    /// Throws std::logic_error when the row width differs from the header.
    void row(const std::vector<std::string> &fields);
    const std::string &str() const { return text_; }
    std::size_t rows() const { return rows_; }

  private:
    void line(const std::vector<std::string> &fields);
    std::size_t width_;
    std::size_t rows_ = 0;
    std::string text_;
};

std::string trajectory_csv(const std::vector<TrajectorySample> &samples);

/// Writes bytes verbatim, creating parent directories; throws
/// std::runtime_error on failure.
void write_file(const std::filesystem::path &path, const std::string &contents);

} // namespace pmpy::cli
