#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <gicselect/family.hpp>

namespace gicselect {

enum class TableFormat { Csv, Tsv };

struct RawTable
{
    Matrix values;
    std::vector<std::string> column_names;  // empty without a header row

    Eigen::Index row_count() const { return values.rows(); }
    Eigen::Index col_count() const { return values.cols(); }
};

class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what), line_(line), column_(column)
    {
    }

    // 1-based line of the file and 1-based field within the line.
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

RawTable parse_table(const std::string& text, TableFormat format, bool has_header);
RawTable load_matrix(const std::filesystem::path& path, TableFormat format, bool has_header);

// Format from the file extension: .tsv/.tab -> Tsv, anything else Csv.
TableFormat format_for(const std::filesystem::path& path);

struct Standardized
{
    Matrix x;
    Vector column_scales;             // ||raw col|| / sqrt(n), 1 for zero columns
    std::vector<int> zero_columns;    // left untouched
};

Standardized standardize(const Matrix& raw);

// beta_raw_j = beta_std_j / column_scales_j.
Vector destandardize(const Vector& beta_std, const Vector& column_scales);

struct ProfilePoint
{
    double fraction_inspected;
    double fraction_captured;
};

struct AccuracyProfile
{
    std::vector<ProfilePoint> points;
    double prevalence = 0.0;
};

// Cumulative capture of positives when inspecting cases in decreasing score
// order (stable for ties). With precision = true the y value is the share of
// positives among the inspected cases instead.
AccuracyProfile accuracy_profile(const Vector& scores, const Vector& labels, bool precision = false);

// Profile of a ranking that places every positive first.
AccuracyProfile oracle_profile(const Vector& labels, bool precision = false);

}  // namespace gicselect
