#pragma once

#include <span>
#include <string>
#include <vector>

#include "ipd/distances.hpp"
#include "ipd/empirics.hpp"
#include "ipd/errors.hpp"

namespace ipd::io {

// Shortest decimal string that round-trips the double.
std::string format_double(double v);

// Writes content to path via a temp file in the same directory plus an
// atomic rename, so readers never observe a partial file.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// Comma-separated numeric CSV with '.' decimals. A single leading header
// row is detected (any field that does not parse as a number) and skipped.
// Ragged rows or non-numeric data rows raise io_failure.
std::vector<std::vector<double>> read_csv(const std::string& path);

// Reads a CSV of points (one row each) and tags it with the declared
// domain. Positive-orthant data must be strictly positive, sphere data
// must be unit vectors in dimension >= 2; violations raise
// domain_violation.
empirics::Sample read_sample(const std::string& path, distances::Domain declared);

// One value per line under a single header cell.
void write_value_csv(const std::string& path, const std::string& header,
                     std::span<const double> values);

distances::Domain parse_domain(const std::string& name);
std::string domain_name(distances::Domain d);

}  // namespace ipd::io
