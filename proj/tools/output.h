#ifndef SIWR_TOOLS_OUTPUT_H
#define SIWR_TOOLS_OUTPUT_H

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace siwr::cli
{

/// Shortest form with 17 significant digits, enough to round-trip any double.
std::string format_number(double v);

/// CSV document: `# key: value` metadata lines, one header row, comma-separated data rows.
class CsvTable
{
public:
    explicit CsvTable(std::vector<std::string> header)
        : m_header(std::move(header))
    {
    }

    void meta(std::string_view key, std::string_view value);
    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& cells);
    std::string str() const;

private:
    std::vector<std::string> m_meta;
    std::vector<std::string> m_header;
    std::vector<std::string> m_rows;
};

/**
 * @brief Files of one invocation, each written to a temporary sibling and renamed
 * into place. rollback() removes every file this set has produced.
 */
class OutputSet
{
public:
    explicit OutputSet(std::filesystem::path dir)
        : m_dir(std::move(dir))
    {
    }

    std::filesystem::path write(const std::string& name, const std::string& content);
    void rollback() noexcept;

    const std::vector<std::filesystem::path>& written() const
    {
        return m_written;
    }

private:
    std::filesystem::path m_dir;
    std::vector<std::filesystem::path> m_written;
};

} // namespace siwr::cli

#endif // SIWR_TOOLS_OUTPUT_H
