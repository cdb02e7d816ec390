#include <cqed/app/csv.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cqed::app {

std::string format_number(double v)
{
    if (!std::isfinite(v))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const std::vector<double>& Table::column(const std::string& name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw IoError("csv: missing column '" + name + "'");
    return columns[static_cast<std::size_t>(it - header.begin())];
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out << content;
        if (!out.flush())
            throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void write_csv(const std::filesystem::path& path, const Table& table)
{
    std::string s;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c)
            s += ',';
        s += table.header[c];
    }
    s += '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c)
                s += ',';
            s += format_number(table.columns[c][r]);
        }
        s += '\n';
    }
    write_text_atomic(path, s);
}

Table read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    Table t;
    std::string line;
    if (!std::getline(in, line))
        throw IoError(path.string() + " is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ','))
            t.header.push_back(cell);
    }
    t.columns.resize(t.header.size());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream rs(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(rs, cell, ',')) {
            if (c >= t.header.size())
                throw IoError(path.string() + ": too many fields on line " + std::to_string(lineno));
            double v = 0.0;
            if (cell == "nan" || cell == "NaN") {
                v = std::nan("");
            } else {
                const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
                    throw IoError(path.string() + ": bad number '" + cell + "' on line "
                                  + std::to_string(lineno));
            }
            t.columns[c++].push_back(v);
        }
        if (c != t.header.size())
            throw IoError(path.string() + ": too few fields on line " + std::to_string(lineno));
    }
    if (t.rows() == 0)
        throw IoError(path.string() + " has no data rows");
    return t;
}

} // namespace cqed::app
