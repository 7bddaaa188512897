#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include <gicselect/dataio.hpp>
#include <gicselect/path.hpp>
#include <gicselect/simulation.hpp>

namespace gicselect {

using json = nlohmann::json;

// Fixed CSV headers.
inline constexpr const char* kPathCsvHeader = "lambda,support_size,deviance,converged";
inline constexpr const char* kGicCsvHeader = "lambda,support_size,deviance,gic";
inline constexpr const char* kProfileCsvHeader = "fraction_inspected,fraction_captured";
inline constexpr const char* kSimCsvHeader =
    "model,n,p,s,penalty,criterion,replications,failures,percent_correct,overfit_rate,underfit_rate,"
    "mean_false_positives,mean_false_negatives,median_relative_model_error,median_chosen_lambda";

// %.<digits>g, with "nan"/"inf" spelled out.
std::string format_number(double value, int digits = 10);

json to_json(const Fit& fit);
json to_json(const SelectionReport& report);
json to_json(const SimReport& report);

std::string path_csv(const PathFit& path);
std::string gic_csv(const PathFit& path, const SelectionReport& report);
std::string sim_csv(const SimReport& report);
std::string profile_csv(const AccuracyProfile& profile);

struct Series
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Static SVG line chart, one <polyline> per series. Each polyline carries the
// plotted values in data-x / data-y attributes at 6 significant digits.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series);

enum class SimPanel { PercentCorrect, FalsePositives, RelativeModelError, ChosenLambda };

std::string panel_name(SimPanel panel);
// One series per (penalty, criterion) across n.
std::vector<Series> sim_panel_series(const SimReport& report, SimPanel panel);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace gicselect
