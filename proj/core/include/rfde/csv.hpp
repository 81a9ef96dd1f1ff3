#pragma once

#include <string>
#include <vector>

namespace rfde {

// Shortest round-trip decimal form of x ('.' decimal point, no locale).
std::string format_double(double x);

// Deterministic CSV assembly: header row then data rows, '\n' line ends.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(const std::vector<std::string>& cells); // must match header width
    const std::string& text() const { return buf_; }
    void write_file(const std::string& path) const;

private:
    std::size_t width_;
    std::string buf_;
};

std::string cell(double x);
std::string cell(int x);
std::string cell(long long x);
std::string cell(unsigned long long x);

} // namespace rfde
