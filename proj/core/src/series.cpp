#include "firmscale/series.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "firmscale/numeric.hpp"

namespace firmscale {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    cells.push_back(cell);
    for (auto& c : cells) {
        while (!c.empty() && std::isspace(static_cast<unsigned char>(c.front()))) c.erase(c.begin());
        while (!c.empty() && std::isspace(static_cast<unsigned char>(c.back()))) c.pop_back();
    }
    return cells;
}

double parse_cell(const std::string& cell, const std::string& origin, long line) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw parse_error("cannot parse numeric cell '" + cell + "'", origin, line);
    return v;
}

}  // namespace

std::vector<SeriesRow> ingest_series_text(const std::string& text, const std::string& origin) {
    std::istringstream stream(text);
    std::string line;
    long line_no = 0;

    if (!std::getline(stream, line))
        throw parse_error("empty series file; a header row is required", origin, 0);
    ++line_no;
    const auto header = split_csv_line(line);
    enum Col { kYear, kNu, kMu, kNl, kShare, kIndex, kUnknown };
    std::vector<Col> layout;
    bool has_year = false;
    for (const auto& name : header) {
        if (name == "year") { layout.push_back(kYear); has_year = true; }
        else if (name == "nu") layout.push_back(kNu);
        else if (name == "mu") layout.push_back(kMu);
        else if (name == "n_over_l") layout.push_back(kNl);
        else if (name == "overhead_share") layout.push_back(kShare);
        else if (name == "tfp_data_index") layout.push_back(kIndex);
        else throw parse_error("unknown series column '" + name + "'", origin, line_no);
    }
    if (!has_year) throw parse_error("series header must include a 'year' column", origin, line_no);

    std::vector<SeriesRow> rows;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != layout.size())
            throw parse_error("row has " + std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(layout.size()),
                              origin, line_no);
        SeriesRow row{};
        bool year_set = false;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].empty()) {
                if (layout[i] == kYear)
                    throw parse_error("year cell may not be empty", origin, line_no);
                continue;
            }
            const double v = parse_cell(cells[i], origin, line_no);
            switch (layout[i]) {
                case kYear: {
                    const int y = static_cast<int>(v);
                    if (static_cast<double>(y) != v)
                        throw parse_error("year must be an integer, got '" + cells[i] + "'", origin,
                                          line_no);
                    row.year = y;
                    year_set = true;
                    break;
                }
                case kNu:
                    if (!(v > 0.0))
                        throw parse_error("nu must be positive, got " + format_full(v), origin, line_no);
                    row.nu = v;
                    break;
                case kMu:
                    if (!(v >= 1.0))
                        throw parse_error("mu must be >= 1, got " + format_full(v), origin, line_no);
                    row.mu = v;
                    break;
                case kNl:
                    if (!(v > 0.0))
                        throw parse_error("n_over_l must be positive, got " + format_full(v), origin,
                                          line_no);
                    row.n_over_l = v;
                    break;
                case kShare:
                    if (!(v > 0.0 && v < 1.0))
                        throw parse_error("overhead_share must lie in (0,1), got " + format_full(v),
                                          origin, line_no);
                    row.overhead_share = v;
                    break;
                case kIndex:
                    if (!(v > 0.0))
                        throw parse_error("tfp_data_index must be positive, got " + format_full(v),
                                          origin, line_no);
                    row.tfp_data_index = v;
                    break;
                case kUnknown: break;
            }
        }
        if (!year_set) throw parse_error("row is missing its year", origin, line_no);
        if (!rows.empty()) {
            if (row.year == rows.back().year)
                throw parse_error("duplicate year " + std::to_string(row.year), origin, line_no);
            if (row.year < rows.back().year)
                throw parse_error("years must be strictly increasing; year " +
                                      std::to_string(row.year) + " follows " +
                                      std::to_string(rows.back().year),
                                  origin, line_no);
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw parse_error("series has a header but no data rows", origin, line_no);
    return rows;
}

std::vector<SeriesRow> ingest_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open series file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_series_text(buf.str(), path);
}

}  // namespace firmscale
