#include "qpf/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace qpf {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (begin <= line.size()) {
        const std::size_t end = line.find(delimiter, begin);
        if (end == std::string::npos) {
            cells.push_back(line.substr(begin));
            break;
        }
        cells.push_back(line.substr(begin, end - begin));
        begin = end + 1;
    }
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

bool parse_index(const std::string& s, std::size_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

} // namespace

Series load_csv(const DatasetSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) {
        raise(errc::io, "cannot open '" + spec.path.string() + "'");
    }

    std::size_t column = 0;
    const bool column_is_index = parse_index(spec.value_column, column);
    const bool has_header = spec.has_header || !column_is_index;

    std::string line;
    std::size_t row = 0;

    if (has_header) {
        if (!std::getline(in, line)) {
            raise(errc::parse, "'" + spec.path.string() + "' has no header row");
        }
        ++row;
        if (!column_is_index) {
            const auto names = split_line(line, spec.delimiter);
            bool found = false;
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (trim(names[i]) == spec.value_column) {
                    column = i;
                    found = true;
                    break;
                }
            }
            if (!found) {
                raise(errc::parse, "column '" + spec.value_column + "' not found in header of '" +
                                       spec.path.string() + "'");
            }
        }
    }

    std::vector<double> values;
    std::vector<std::string> labels;
    bool any_labels = false;

    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line, spec.delimiter);
        if (column >= cells.size()) {
            raise(errc::parse, "row " + std::to_string(row) + ": only " +
                                   std::to_string(cells.size()) + " cells, need column " +
                                   std::to_string(column + 1));
        }
        const std::string cell = trim(cells[column]);
        double v = 0.0;
        const char* first = cell.data();
        const char* last = cell.data() + cell.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
            raise(errc::parse, "row " + std::to_string(row) + ": cell '" + cell +
                                   "' is not a finite number");
        }
        values.push_back(v);
        if (cells.size() > 1 && column != 0) {
            labels.push_back(trim(cells[0]));
            any_labels = true;
        } else {
            labels.emplace_back();
        }
    }
    if (values.empty()) {
        raise(errc::parse, "'" + spec.path.string() + "' contains no data rows");
    }
    if (!any_labels) labels.clear();
    return Series(std::move(values), 0, std::move(labels));
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(errc::io, "cannot open '" + path.string() + "'");
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return hash;
}

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        raise(errc::io, "failed to format a number");
    }
    return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            raise(errc::io, "cannot write '" + tmp.string() + "'");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            raise(errc::io, "short write to '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        raise(errc::io, "cannot rename '" + tmp.string() + "' to '" + path.string() + "': " +
                            ec.message());
    }
}

} // namespace qpf
