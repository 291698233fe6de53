#include "output.h"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace siwr::cli
{

namespace fs = std::filesystem;

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void CsvTable::meta(std::string_view key, std::string_view value)
{
    m_meta.push_back("# " + std::string(key) + ": " + std::string(value));
}

void CsvTable::row(const std::vector<std::string>& cells)
{
    if (cells.size() != m_header.size()) {
        throw std::logic_error("CSV row width does not match the header");
    }
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c > 0) {
            line += ',';
        }
        line += cells[c];
    }
    m_rows.push_back(std::move(line));
}

void CsvTable::row(const std::vector<double>& cells)
{
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (double v : cells) {
        text.push_back(format_number(v));
    }
    row(text);
}

std::string CsvTable::str() const
{
    std::string out;
    for (const auto& m : m_meta) {
        out += m;
        out += '\n';
    }
    for (std::size_t c = 0; c < m_header.size(); ++c) {
        if (c > 0) {
            out += ',';
        }
        out += m_header[c];
    }
    out += '\n';
    for (const auto& r : m_rows) {
        out += r;
        out += '\n';
    }
    return out;
}

fs::path OutputSet::write(const std::string& name, const std::string& content)
{
    fs::create_directories(m_dir);
    const fs::path target = m_dir / name;
    const fs::path tmp    = m_dir / ("." + name + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, target);
    m_written.push_back(target);
    return target;
}

void OutputSet::rollback() noexcept
{
    for (const auto& path : m_written) {
        std::error_code ec;
        fs::remove(path, ec);
    }
    m_written.clear();
}

} // namespace siwr::cli
