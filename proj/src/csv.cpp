#include "deadleaves/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace deadleaves {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

namespace {

// Fields holding a separator, quote or newline are quoted, quotes doubled.
std::string quoted(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), columns_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i)
        os_ << (i ? "," : "") << quoted(header[i]);
    os_ << '\n';
}

void CsvWriter::row(const std::vector<CsvField>& fields)
{
    if (fields.size() != columns_)
        throw std::logic_error("CSV row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i)
            os_ << ',';
        std::visit(
            [this](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>)
                    os_ << format_double(v);
                else if constexpr (std::is_same_v<T, std::string>)
                    os_ << quoted(v);
                else
                    os_ << v;
            },
            fields[i]);
    }
    os_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values)
{
    std::vector<CsvField> fields(values.begin(), values.end());
    row(fields);
}

}  // namespace deadleaves
