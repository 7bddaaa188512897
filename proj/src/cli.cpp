#include <gicselect/cli.hpp>

#include <gicselect/dataio.hpp>
#include <gicselect/report.hpp>
#include <gicselect/selfcheck.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

namespace gicselect {

namespace {

const std::vector<std::string> kCommands{"fit", "path", "select", "simulate", "diagnose", "profile"};

struct PhiSetting
{
    bool plugin = false;
    std::optional<double> value;  // empty with "known" alone: simulate uses sigma^2
};

PhiSetting parse_phi(const std::string& text)
{
    if (text == "plugin") return {true, std::nullopt};
    if (text == "known") return {false, std::nullopt};
    if (text.rfind("known:", 0) == 0) {
        const std::string rest = text.substr(6);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != rest.size() || rest.empty() || !(v > 0.0) || !std::isfinite(v)) {
            throw UsageError("--phi known:<value> needs a positive number, got '" + rest + "'");
        }
        return {false, v};
    }
    throw UsageError("--phi must be known:<value>, known or plugin (got '" + text + "')");
}

template <class Fn>
void as_usage(Fn&& fn)
{
    try {
        fn();
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

bool needs_data(const std::string& cmd)
{
    return cmd == "fit" || cmd == "path" || cmd == "select";
}

int resolve_threads(int requested)
{
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GICSELECT_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

TableFormat table_format(const RunConfig& cfg, const std::filesystem::path& file)
{
    if (cfg.format == "csv") return TableFormat::Csv;
    if (cfg.format == "tsv") return TableFormat::Tsv;
    return format_for(file);
}

// Single-column inputs carry a header or not independently of the design;
// a non-numeric first line is taken as one.
Vector load_vector(const RunConfig& cfg, const std::filesystem::path& file)
{
    RawTable t;
    try {
        t = load_matrix(file, table_format(cfg, file), false);
    } catch (const ParseError& e) {
        if (e.line() != 1) throw;
        t = load_matrix(file, table_format(cfg, file), true);
    }
    if (t.col_count() == 1) return t.values.col(0);
    if (t.row_count() == 1) return t.values.row(0).transpose();
    throw UsageError("'" + file.string() + "' must hold a single column of values");
}

struct LoadedData
{
    Family family;
    Dataset data;
    std::vector<std::string> names;
    PhiSetting phi;
};

LoadedData load_data(const RunConfig& cfg)
{
    const PhiSetting phi = parse_phi(cfg.phi);
    const double phi_value = phi.value.value_or(1.0);
    Family family = parse_family(cfg.family, phi_value);
    const RawTable x = load_matrix(cfg.data, table_format(cfg, cfg.data), cfg.header);
    const Vector y = load_vector(cfg, cfg.response);
    if (x.row_count() != y.size()) {
        throw std::invalid_argument("design has " + std::to_string(x.row_count()) + " rows but response has " +
                                    std::to_string(y.size()));
    }
    return {family, make_dataset(family, x.values, y), x.column_names, phi};
}

PenaltySpec penalty_from(const RunConfig& cfg, const std::string& name)
{
    return parse_penalty(name, cfg.scad_a, cfg.mcp_gamma);
}

PathOptions path_options(const RunConfig& cfg)
{
    PathOptions opt;
    opt.grid_count = cfg.grid;
    opt.solver.intercept = cfg.intercept;
    return opt;
}

json support_names(const Support& s, const std::vector<std::string>& names)
{
    json arr = json::array();
    for (int j : s) arr.push_back(names.empty() ? "x" + std::to_string(j + 1) : names[static_cast<std::size_t>(j)]);
    return arr;
}

void announce(std::ostream& out, const std::filesystem::path& p)
{
    out << "wrote " << p.string() << '\n';
}

ExitCode run_fit(const RunConfig& cfg, std::ostream& out)
{
    const LoadedData in = load_data(cfg);
    const PenaltySpec spec = penalty_from(cfg, cfg.penalty);
    SolverOptions opt;
    opt.intercept = cfg.intercept;
    const Fit fit = spec.kind == PenaltyKind::AdaptiveLasso
                        ? fit_adaptive_lasso_stages(in.family, in.data, *cfg.lambda, opt, nullptr, cfg.scad_a).adaptive
                        : fit_penalized(in.family, in.data, spec, *cfg.lambda, std::nullopt, opt);
    json j = to_json(fit);
    j["family"] = to_string(in.family.kind);
    j["phi"] = in.family.phi_eff();
    j["penalty"] = to_string(spec.kind);
    j["n"] = in.data.n();
    j["p"] = in.data.p();
    const Vector raw = destandardize(fit.beta, in.data.column_scales);
    j["beta_raw"] = std::vector<double>(raw.data(), raw.data() + raw.size());
    j["support_names"] = support_names(fit.support, in.names);
    const auto file = cfg.out_dir / "fit.json";
    write_text(file, j.dump(2) + "\n");
    announce(out, file);
    return ExitCode::Ok;
}

ExitCode run_path(const RunConfig& cfg, std::ostream& out)
{
    const LoadedData in = load_data(cfg);
    const PathFit path = fit_path(in.family, in.data, penalty_from(cfg, cfg.penalty), path_options(cfg));
    const auto file = cfg.out_dir / "path.csv";
    write_text(file, path_csv(path));
    announce(out, file);
    return ExitCode::Ok;
}

ExitCode run_select(const RunConfig& cfg, std::ostream& out)
{
    const LoadedData in = load_data(cfg);
    const PenaltySpec spec = penalty_from(cfg, cfg.penalty);
    const std::vector<CriterionKind> criteria = parse_criteria(cfg.criteria);
    const PathFit path = fit_path(in.family, in.data, spec, path_options(cfg));

    double deviance_scale = 1.0;
    double phi_used = in.family.phi_eff();
    if (in.phi.plugin && in.family.kind == FamilyKind::Gaussian) {
        phi_used = plugin_dispersion(path, in.family, in.data.n());
        deviance_scale = in.family.scale_phi / phi_used;
    }

    json j;
    j["family"] = to_string(in.family.kind);
    j["penalty"] = to_string(spec.kind);
    j["n"] = in.data.n();
    j["p"] = in.data.p();
    j["phi_mode"] = in.phi.plugin ? "plugin" : "known";
    j["phi"] = phi_used;
    j["lambda_max"] = path.lambda_max;
    j["lambda_min"] = path.lambda_min;
    j["path_length"] = path.fits.size();
    j["selections"] = json::array();
    for (CriterionKind kind : criteria) {
        const SelectionReport rep = select_model(path, kind, in.data.n(), in.data.p(), deviance_scale);
        json r = to_json(rep);
        r["chosen_support_names"] = support_names(rep.chosen_support, in.names);
        j["selections"].push_back(std::move(r));
        const auto csv = cfg.out_dir / ("gic_" + rep.criterion + ".csv");
        write_text(csv, gic_csv(path, rep));
        announce(out, csv);
    }
    const auto file = cfg.out_dir / "selection.json";
    write_text(file, j.dump(2) + "\n");
    announce(out, file);
    return ExitCode::Ok;
}

ExitCode run_simulate(const RunConfig& cfg, std::ostream& out)
{
    const PhiSetting phi = parse_phi(cfg.phi);
    StudyOptions opt;
    opt.model = parse_model(cfg.model);
    opt.n_grid = cfg.n_grid;
    opt.penalties.clear();
    for (const std::string& name : cfg.penalties) opt.penalties.push_back(penalty_from(cfg, name));
    for (CriterionKind kind : parse_criteria(cfg.criteria)) opt.criteria.push_back(StudyCriterion::standard(kind));
    opt.reps = cfg.reps;
    opt.base_seed = cfg.seed;
    opt.threads = resolve_threads(cfg.threads);
    opt.phi_mode = phi.plugin ? PhiMode::Plugin : PhiMode::Known;
    opt.path.grid_count = cfg.grid;

    const SimReport report = run_study(opt);
    const auto csv = cfg.out_dir / "simulation.csv";
    write_text(csv, sim_csv(report));
    announce(out, csv);
    const auto js = cfg.out_dir / "simulation.json";
    write_text(js, to_json(report).dump(2) + "\n");
    announce(out, js);

    const std::vector<std::pair<SimPanel, std::string>> panels{
        {SimPanel::PercentCorrect, "fraction of exactly recovered models"},
        {SimPanel::FalsePositives, "mean false positives"},
        {SimPanel::RelativeModelError, "median relative model error"},
        {SimPanel::ChosenLambda, "median chosen lambda"},
    };
    const char letters[] = {'a', 'b', 'c', 'd'};
    for (std::size_t k = 0; k < panels.size(); ++k) {
        const auto& [panel, ylabel] = panels[k];
        const std::string title = "(" + std::string(1, letters[k]) + ") " + to_string(report.model) + " model";
        const auto svg = cfg.out_dir / ("panel_" + std::string(1, letters[k]) + "_" + panel_name(panel) + ".svg");
        write_text(svg, svg_line_chart(title, "n", ylabel, sim_panel_series(report, panel)));
        announce(out, svg);
    }
    return ExitCode::Ok;
}

ExitCode run_diagnose(const RunConfig& cfg, std::ostream& out)
{
    const std::vector<CheckResult> checks = run_diagnostic_suite(cfg.seed);
    json j;
    j["seed"] = cfg.seed;
    j["checks"] = json::array();
    bool all = true;
    for (const CheckResult& c : checks) {
        all = all && c.passed;
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"expected", c.expected},
                               {"tolerance", c.tolerance},
                               {"detail", c.detail}});
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_number(c.value) << '\n';
    }
    j["all_passed"] = all;
    const auto file = cfg.out_dir / "diagnose.json";
    write_text(file, j.dump(2) + "\n");
    announce(out, file);
    return all ? ExitCode::Ok : ExitCode::Computation;
}

ExitCode run_profile(const RunConfig& cfg, std::ostream& out)
{
    const Vector scores = load_vector(cfg, cfg.scores);
    const Vector labels = load_vector(cfg, cfg.labels);
    const AccuracyProfile profile = accuracy_profile(scores, labels, cfg.precision);
    const AccuracyProfile oracle = oracle_profile(labels, cfg.precision);

    const auto csv = cfg.out_dir / "profile.csv";
    write_text(csv, profile_csv(profile));
    announce(out, csv);
    const auto oracle_csv = cfg.out_dir / "profile_oracle.csv";
    write_text(oracle_csv, profile_csv(oracle));
    announce(out, oracle_csv);

    auto to_series = [](const std::string& label, const AccuracyProfile& p) {
        Series s{label, {0.0}, {0.0}};
        for (const ProfilePoint& pt : p.points) {
            s.x.push_back(pt.fraction_inspected);
            s.y.push_back(pt.fraction_captured);
        }
        return s;
    };
    const auto svg = cfg.out_dir / "profile.svg";
    write_text(svg, svg_line_chart("accuracy profile", "fraction inspected",
                                   cfg.precision ? "fraction positive among inspected" : "fraction of positives captured",
                                   {to_series("ranking", profile), to_series("oracle", oracle)}));
    announce(out, svg);
    return ExitCode::Ok;
}

}  // namespace

void validate(const RunConfig& cfg)
{
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end()) {
        throw UsageError("unknown command '" + cfg.command + "'");
    }
    as_usage([&] {
        const PhiSetting phi = parse_phi(cfg.phi);
        parse_family(cfg.family, phi.value.value_or(1.0));
        parse_criteria(cfg.criteria);
        PenaltySpec::scad(cfg.scad_a);
        PenaltySpec::mcp(cfg.mcp_gamma);
        parse_penalty(cfg.penalty, cfg.scad_a, cfg.mcp_gamma);
        for (const auto& p : cfg.penalties) parse_penalty(p, cfg.scad_a, cfg.mcp_gamma);
        parse_model(cfg.model);
    });
    if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "tsv") {
        throw UsageError("--format must be csv or tsv");
    }
    if (cfg.grid < 2) throw UsageError("--grid must be at least 2");
    if (cfg.threads < 0) throw UsageError("--threads must be nonnegative");
    if (needs_data(cfg.command)) {
        if (cfg.data.empty() || cfg.response.empty()) {
            throw UsageError(cfg.command + " needs --data and --response");
        }
        for (const auto& f : {cfg.data, cfg.response}) {
            if (!std::filesystem::exists(f)) throw UsageError("input file '" + f.string() + "' does not exist");
        }
    }
    if (cfg.command == "fit") {
        if (!cfg.lambda) throw UsageError("fit needs --lambda");
        if (!(*cfg.lambda >= 0.0)) throw UsageError("--lambda must be nonnegative");
        if (cfg.penalty == "adaptive_lasso" && !(*cfg.lambda > 0.0)) {
            throw UsageError("adaptive lasso needs --lambda > 0");
        }
    }
    if (cfg.command == "simulate") {
        if (cfg.reps < 1) throw UsageError("--reps must be at least 1");
        if (cfg.n_grid.empty()) throw UsageError("--n needs at least one sample size");
        for (int n : cfg.n_grid) {
            if (n < 100) throw UsageError("--n values must be at least 100");
        }
    }
    if (cfg.command == "profile") {
        if (cfg.scores.empty() || cfg.labels.empty()) throw UsageError("profile needs --scores and --labels");
        for (const auto& f : {cfg.scores, cfg.labels}) {
            if (!std::filesystem::exists(f)) throw UsageError("input file '" + f.string() + "' does not exist");
        }
    }
}

ExitCode run(const RunConfig& cfg, std::ostream& out)
{
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.command == "fit") return run_fit(cfg, out);
    if (cfg.command == "path") return run_path(cfg, out);
    if (cfg.command == "select") return run_select(cfg, out);
    if (cfg.command == "simulate") return run_simulate(cfg, out);
    if (cfg.command == "diagnose") return run_diagnose(cfg, out);
    return run_profile(cfg, out);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Penalized GLM paths with GIC tuning-parameter selection"};
    app.require_subcommand(1);
    RunConfig cfg;
    double lambda = -1.0;
    std::string penalties = "scad";

    auto add_data = [&](CLI::App* sub) {
        sub->add_option("--data", cfg.data, "design matrix (CSV/TSV)");
        sub->add_option("--response", cfg.response, "response vector (one column)");
        sub->add_flag("--header", cfg.header, "input files have a header row");
        sub->add_option("--format", cfg.format, "csv or tsv (default: from extension)");
    };
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--family", cfg.family, "gaussian, binomial or poisson")->capture_default_str();
        sub->add_option("--penalty", cfg.penalty, "lasso, scad, mcp or adaptive_lasso")->capture_default_str();
        sub->add_option("--phi", cfg.phi, "known:<value> or plugin (Gaussian dispersion)")->capture_default_str();
        sub->add_flag("--intercept", cfg.intercept, "fit an unpenalized intercept");
        sub->add_option("--scad-a", cfg.scad_a, "SCAD shape parameter")->capture_default_str();
        sub->add_option("--mcp-gamma", cfg.mcp_gamma, "MCP shape parameter")->capture_default_str();
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    };

    CLI::App* fit = app.add_subcommand("fit", "fit one penalized model at a given lambda");
    add_data(fit);
    add_model(fit);
    add_out(fit);
    fit->add_option("--lambda", lambda, "tuning parameter")->required();

    CLI::App* path = app.add_subcommand("path", "fit the regularization path");
    add_data(path);
    add_model(path);
    add_out(path);
    path->add_option("--grid", cfg.grid, "number of lambda values")->capture_default_str();

    CLI::App* select = app.add_subcommand("select", "fit the path and select lambda by GIC");
    add_data(select);
    add_model(select);
    add_out(select);
    select->add_option("--grid", cfg.grid, "number of lambda values")->capture_default_str();
    select->add_option("--criteria", cfg.criteria, "comma list of aic,bic,mbic,logp,gic_lll")->capture_default_str();

    CLI::App* simulate = app.add_subcommand("simulate", "replicated selection study on simulated designs");
    simulate->add_option("--model", cfg.model, "linear or logistic")->capture_default_str();
    simulate->add_option("--n", cfg.n_grid, "sample sizes")->delimiter(',');
    simulate->add_option("--reps", cfg.reps, "replications per sample size")->capture_default_str();
    simulate->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    simulate->add_option("--penalties", penalties, "comma list of penalties")->capture_default_str();
    simulate->add_option("--criteria", cfg.criteria, "comma list of criteria")->capture_default_str();
    simulate->add_option("--threads", cfg.threads, "worker threads (0: GICSELECT_THREADS or all cores)");
    simulate->add_option("--grid", cfg.grid, "number of lambda values")->capture_default_str();
    simulate->add_option("--phi", cfg.phi, "known (true sigma^2), known:<value> or plugin");
    simulate->add_option("--scad-a", cfg.scad_a, "SCAD shape parameter")->capture_default_str();
    simulate->add_option("--mcp-gamma", cfg.mcp_gamma, "MCP shape parameter")->capture_default_str();
    add_out(simulate);

    CLI::App* diagnose = app.add_subcommand("diagnose", "toy-scale KL, delta_n and Z_alpha checks");
    diagnose->add_option("--seed", cfg.seed, "seed")->capture_default_str();
    add_out(diagnose);

    CLI::App* profile = app.add_subcommand("profile", "accuracy profile of a ranking score");
    profile->add_option("--scores", cfg.scores, "score per case (one column)");
    profile->add_option("--labels", cfg.labels, "0/1 label per case (one column)");
    profile->add_flag("--precision", cfg.precision, "plot precision among inspected instead of capture");
    profile->add_flag("--header", cfg.header, "input files have a header row");
    profile->add_option("--format", cfg.format, "csv or tsv (default: from extension)");
    add_out(profile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    }
    // CLI11 prints subcommand help through CallForHelp as well.
    for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (cfg.command == "fit") cfg.lambda = lambda;
    if (cfg.command == "simulate") {
        if (simulate->count("--phi") == 0) cfg.phi = "known";
        cfg.penalties.clear();
        std::size_t start = 0;
        while (start <= penalties.size()) {
            const std::size_t end = std::min(penalties.find(',', start), penalties.size());
            cfg.penalties.push_back(penalties.substr(start, end - start));
            start = end + 1;
        }
    }

    try {
        validate(cfg);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    }
    try {
        return static_cast<int>(run(cfg, out));
    } catch (const std::exception& e) {
        err << "error: " << cfg.command << ": " << e.what() << '\n';
        return static_cast<int>(ExitCode::Computation);
    }
}

}  // namespace gicselect
