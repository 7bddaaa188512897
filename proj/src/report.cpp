#include <gicselect/report.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace gicselect {

std::string format_number(double value, int digits)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

json to_json(const Fit& fit)
{
    json j;
    j["lambda"] = fit.lambda;
    j["beta"] = std::vector<double>(fit.beta.data(), fit.beta.data() + fit.beta.size());
    j["intercept"] = fit.intercept;
    j["support"] = fit.support;
    j["support_size"] = fit.support.size();
    j["deviance"] = fit.deviance;
    j["objective"] = fit.objective;
    j["outer_iters"] = fit.outer_iters;
    j["inner_iters"] = fit.inner_iters;
    j["converged"] = fit.converged;
    j["separated"] = fit.separated;
    return j;
}

json to_json(const SelectionReport& report)
{
    json j;
    j["criterion"] = report.criterion;
    j["a_n"] = report.a_n;
    j["chosen_index"] = report.chosen_index;
    j["chosen_lambda"] = report.chosen_lambda;
    j["chosen_support"] = report.chosen_support;
    j["gic_values"] = report.gic_values;
    return j;
}

json to_json(const SimReport& report)
{
    json j;
    j["model"] = to_string(report.model);
    j["base_seed"] = report.base_seed;
    j["reps"] = report.reps;
    j["phi_mode"] = report.phi_mode;
    j["signal_placement"] = "extra nonzero coefficients appended at coordinates 6, 7, ...";
    json results = json::object();
    for (const SimCell& c : report.cells) {
        json cell;
        cell["p"] = c.p;
        cell["s"] = c.s;
        cell["replications"] = c.replications;
        cell["failures"] = c.failures;
        cell["percent_correct"] = c.percent_correct;
        cell["overfit_rate"] = c.overfit_rate;
        cell["underfit_rate"] = c.underfit_rate;
        cell["mean_false_positives"] = c.mean_false_positives;
        cell["mean_false_negatives"] = c.mean_false_negatives;
        cell["median_relative_model_error"] = c.median_relative_model_error;
        cell["median_chosen_lambda"] = c.median_chosen_lambda;
        results[std::to_string(c.n)][c.penalty][c.criterion] = std::move(cell);
    }
    j["results"] = std::move(results);
    return j;
}

std::string path_csv(const PathFit& path)
{
    std::ostringstream out;
    out << kPathCsvHeader << '\n';
    for (std::size_t i = 0; i < path.fits.size(); ++i) {
        const Fit& f = path.fits[i];
        out << format_number(path.lambdas[i]) << ',' << f.support.size() << ','
            << format_number(f.deviance) << ',' << (f.converged ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string gic_csv(const PathFit& path, const SelectionReport& report)
{
    std::ostringstream out;
    out << kGicCsvHeader << '\n';
    for (std::size_t i = 0; i < path.fits.size(); ++i) {
        out << format_number(path.lambdas[i]) << ',' << path.fits[i].support.size() << ','
            << format_number(path.fits[i].deviance) << ',' << format_number(report.gic_values[i]) << '\n';
    }
    return out.str();
}

std::string sim_csv(const SimReport& report)
{
    std::ostringstream out;
    out << kSimCsvHeader << '\n';
    for (const SimCell& c : report.cells) {
        out << to_string(report.model) << ',' << c.n << ',' << c.p << ',' << c.s << ',' << c.penalty << ','
            << c.criterion << ',' << c.replications << ',' << c.failures << ','
            << format_number(c.percent_correct) << ',' << format_number(c.overfit_rate) << ','
            << format_number(c.underfit_rate) << ',' << format_number(c.mean_false_positives) << ','
            << format_number(c.mean_false_negatives) << ',' << format_number(c.median_relative_model_error)
            << ',' << format_number(c.median_chosen_lambda) << '\n';
    }
    return out.str();
}

std::string profile_csv(const AccuracyProfile& profile)
{
    std::ostringstream out;
    out << kProfileCsvHeader << '\n';
    for (const ProfilePoint& pt : profile.points) {
        out << format_number(pt.fraction_inspected) << ',' << format_number(pt.fraction_captured) << '\n';
    }
    return out.str();
}

namespace {

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series)
{
    constexpr double width = 640, height = 420;
    constexpr double left = 70, right = 170, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const Series& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!std::isfinite(x_lo)) {
        x_lo = 0;
        x_hi = 1;
        y_lo = 0;
        y_hi = 1;
    }
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (y_hi == y_lo) {
        y_hi = y_lo + 0.5;
        y_lo -= 0.5;
    }
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
        << "</text>\n"
        << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int t = 0; t <= 4; ++t) {
        const double fx = x_lo + (x_hi - x_lo) * t / 4.0;
        const double fy = y_lo + (y_hi - y_lo) * t / 4.0;
        out << "<text x=\"" << format_number(px(fx), 6) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << format_number(fx, 4) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << format_number(py(fy) + 4, 6)
            << "\" text-anchor=\"end\" font-size=\"11\">" << format_number(fy, 4) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << top + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kPalette[k % kPalette.size()];
        std::ostringstream pts, xs, ys;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (i > 0) {
                xs << ' ';
                ys << ' ';
            }
            xs << format_number(s.x[i], 6);
            ys << format_number(s.y[i], 6);
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            pts << format_number(px(s.x[i]), 6) << ',' << format_number(py(s.y[i]), 6) << ' ';
        }
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" data-label=\""
            << xml_escape(s.label) << "\" data-x=\"" << xs.str() << "\" data-y=\"" << ys.str() << "\" points=\""
            << pts.str() << "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << width - right + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right + 32
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << width - right + 38 << "\" y=\"" << ly << "\" font-size=\"11\">" << xml_escape(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string panel_name(SimPanel panel)
{
    switch (panel) {
        case SimPanel::PercentCorrect: return "percent_correct";
        case SimPanel::FalsePositives: return "false_positives";
        case SimPanel::RelativeModelError: return "relative_model_error";
        case SimPanel::ChosenLambda: return "chosen_lambda";
    }
    return "unknown";
}

std::vector<Series> sim_panel_series(const SimReport& report, SimPanel panel)
{
    std::vector<Series> out;
    std::map<std::string, std::size_t> index;
    for (const SimCell& c : report.cells) {
        const std::string label = c.penalty + "/" + c.criterion;
        auto [it, inserted] = index.try_emplace(label, out.size());
        if (inserted) out.push_back({label, {}, {}});
        Series& s = out[it->second];
        s.x.push_back(c.n);
        switch (panel) {
            case SimPanel::PercentCorrect: s.y.push_back(c.percent_correct); break;
            case SimPanel::FalsePositives: s.y.push_back(c.mean_false_positives); break;
            case SimPanel::RelativeModelError: s.y.push_back(c.median_relative_model_error); break;
            case SimPanel::ChosenLambda: s.y.push_back(c.median_chosen_lambda); break;
        }
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace gicselect
