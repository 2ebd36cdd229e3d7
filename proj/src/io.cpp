#include "ipd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace ipd::io {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_field(const std::string& field, double* out) {
    const std::string f = trim(field);
    if (f.empty()) return false;
    const char* first = f.data();
    const char* last = f.data() + f.size();
    auto res = std::from_chars(first, last, *out);
    return res.ec == std::errc{} && res.ptr == last;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_failure("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw io_failure("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw io_failure("rename failed for " + path);
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_failure("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_failure("cannot open: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_commas(line);
        std::vector<double> row(fields.size());
        bool ok = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!parse_field(fields[i], &row[i])) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            if (first) {
                first = false;  // header row
                continue;
            }
            throw io_failure(path + ":" + std::to_string(lineno) + ": non-numeric field");
        }
        first = false;
        if (!rows.empty() && row.size() != rows.front().size())
            throw io_failure(path + ":" + std::to_string(lineno) + ": ragged row");
        rows.push_back(std::move(row));
    }
    return rows;
}

empirics::Sample read_sample(const std::string& path, distances::Domain declared) {
    auto rows = read_csv(path);
    if (rows.empty()) throw io_failure(path + ": no data rows");

    empirics::Sample s;
    s.n = static_cast<int>(rows.size());
    s.k = static_cast<int>(rows.front().size());
    s.domain = declared;
    s.label = std::filesystem::path(path).stem().string();
    s.data.reserve(static_cast<std::size_t>(s.n) * static_cast<std::size_t>(s.k));
    for (const auto& row : rows)
        s.data.insert(s.data.end(), row.begin(), row.end());

    if (declared == distances::Domain::PositiveOrthant) {
        for (double v : s.data)
            if (!(v > 0.0))
                throw domain_violation(path + ": positive-orthant data must be > 0");
    } else if (declared == distances::Domain::UnitSphere) {
        if (s.k < 2) throw domain_violation(path + ": sphere data needs dimension >= 2");
        for (int i = 0; i < s.n; ++i) {
            double norm2 = 0.0;
            for (double v : s.row(i)) norm2 += v * v;
            if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9)
                throw domain_violation(path + ": row " + std::to_string(i) +
                                       " is not a unit vector");
        }
    }
    return s;
}

void write_value_csv(const std::string& path, const std::string& header,
                     std::span<const double> values) {
    std::string out = header;
    out += '\n';
    for (double v : values) {
        out += format_double(v);
        out += '\n';
    }
    atomic_write_text(path, out);
}

distances::Domain parse_domain(const std::string& name) {
    if (name == "euclidean") return distances::Domain::Euclidean;
    if (name == "positive") return distances::Domain::PositiveOrthant;
    if (name == "sphere") return distances::Domain::UnitSphere;
    throw invalid_parameter("unknown domain: " + name);
}

std::string domain_name(distances::Domain d) {
    switch (d) {
        case distances::Domain::Euclidean: return "euclidean";
        case distances::Domain::PositiveOrthant: return "positive";
        case distances::Domain::UnitSphere: return "sphere";
    }
    return "euclidean";
}

}  // namespace ipd::io
