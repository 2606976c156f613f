#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace deadleaves {

using CsvField = std::variant<std::string, double, std::int64_t>;

/// Minimal CSV emitter: header on construction, one row per call. Doubles
/// are printed with 15 significant digits so output is byte-stable.
class CsvWriter
{
  public:
    CsvWriter(std::ostream& os, std::vector<std::string> header);

    void row(const std::vector<CsvField>& fields);
    void row(std::initializer_list<double> values);

    std::size_t columns() const noexcept { return columns_; }

  private:
    std::ostream& os_;
    std::size_t columns_;
};

std::string format_double(double v);

}  // namespace deadleaves
