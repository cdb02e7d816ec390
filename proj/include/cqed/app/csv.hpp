#ifndef CQED_APP_CSV_HPP
#define CQED_APP_CSV_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqed::app {

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; "nan" for non-finite values.
std::string format_number(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    // Throws IoError when the column is missing.
    const std::vector<double>& column(const std::string& name) const;
};

// Writes to a sibling temporary file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

void write_csv(const std::filesystem::path& path, const Table& table);
Table read_csv(const std::filesystem::path& path);

} // namespace cqed::app

#endif
