#include <gicselect/dataio.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace gicselect {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(sep, start);
        fields.push_back(trim(line.substr(start, end == std::string_view::npos ? end : end - start)));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return fields;
}

}  // namespace

RawTable parse_table(const std::string& text, TableFormat format, bool has_header)
{
    const char sep = format == TableFormat::Csv ? ',' : '\t';
    RawTable table;
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    bool header_pending = has_header;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, sep);
        if (header_pending) {
            for (auto f : fields) table.column_names.emplace_back(f);
            width = fields.size();
            header_pending = false;
            continue;
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width) {
            throw ParseError("ragged row at line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(width) + " fields, found " + std::to_string(fields.size()),
                             line_no, std::min(fields.size(), width) + 1);
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            const std::string_view f = fields[c];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
                throw ParseError("non-numeric cell '" + std::string(f) + "' at line " + std::to_string(line_no) +
                                     ", column " + std::to_string(c + 1),
                                 line_no, c + 1);
            }
            row[c] = v;
        }
        rows.push_back(std::move(row));
    }

    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return table;
}

RawTable load_matrix(const std::filesystem::path& path, TableFormat format, bool has_header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_table(buf.str(), format, has_header);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
    }
}

TableFormat format_for(const std::filesystem::path& path)
{
    const std::string ext = path.extension().string();
    return (ext == ".tsv" || ext == ".tab") ? TableFormat::Tsv : TableFormat::Csv;
}

Standardized standardize(const Matrix& raw)
{
    Standardized out{raw, Vector::Ones(raw.cols()), {}};
    const double root_n = std::sqrt(static_cast<double>(raw.rows()));
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
        const double norm = raw.col(j).norm();
        if (norm == 0.0) {
            out.zero_columns.push_back(static_cast<int>(j));
            continue;
        }
        out.column_scales[j] = norm / root_n;
        out.x.col(j) /= out.column_scales[j];
    }
    return out;
}

Vector destandardize(const Vector& beta_std, const Vector& column_scales)
{
    if (beta_std.size() != column_scales.size()) throw std::invalid_argument("destandardize: dimension mismatch");
    return beta_std.cwiseQuotient(column_scales);
}

namespace {

AccuracyProfile profile_from_order(const Vector& labels, const std::vector<Eigen::Index>& order, bool precision)
{
    const double positives = labels.sum();
    const double n = static_cast<double>(labels.size());
    AccuracyProfile profile;
    profile.prevalence = positives / n;
    profile.points.reserve(order.size());
    double captured = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        captured += labels[order[k]];
        const double inspected = static_cast<double>(k + 1);
        profile.points.push_back(
            {inspected / n, precision ? captured / inspected : captured / positives});
    }
    return profile;
}

void check_labels(const Vector& labels)
{
    double positives = 0.0;
    for (double v : labels) {
        if (v != 0.0 && v != 1.0) throw std::invalid_argument("accuracy profile labels must be 0 or 1");
        positives += v;
    }
    if (positives == 0.0) throw std::invalid_argument("accuracy profile needs at least one positive label");
}

}  // namespace

AccuracyProfile accuracy_profile(const Vector& scores, const Vector& labels, bool precision)
{
    if (scores.size() != labels.size()) throw std::invalid_argument("accuracy_profile: dimension mismatch");
    check_labels(labels);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(scores.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return scores[a] > scores[b]; });
    return profile_from_order(labels, order, precision);
}

AccuracyProfile oracle_profile(const Vector& labels, bool precision)
{
    return accuracy_profile(labels, labels, precision);
}

}  // namespace gicselect
