#pragma once

#include <optional>
#include <string>
#include <vector>

#include "firmscale/errors.hpp"

namespace firmscale {

/// One annual row of the external input series. Only the year is mandatory;
/// every other column is optional and marked absent when missing.
struct SeriesRow {
    int year;
    std::optional<double> nu;
    std::optional<double> mu;
    std::optional<double> n_over_l;
    std::optional<double> overhead_share;
    std::optional<double> tfp_data_index;
};

/// Parses and validates an annual CSV. Header is required; recognised
/// columns are year, nu, mu, n_over_l, overhead_share, tfp_data_index in any
/// order. Years must be strictly increasing integers. Range checks: nu > 0,
/// mu >= 1, shares in (0,1), n_over_l > 0, index > 0. Empty cells mark a
/// value as absent. Malformed rows raise parse_error with the line number.
std::vector<SeriesRow> ingest_series(const std::string& path);
std::vector<SeriesRow> ingest_series_text(const std::string& text, const std::string& origin);

}  // namespace firmscale
