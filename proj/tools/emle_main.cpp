#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "emle/datasets.hpp"
#include "emle/design.hpp"
#include "emle/error.hpp"
#include "emle/facial_set.hpp"
#include "emle/fit.hpp"
#include "emle/formula.hpp"
#include "emle/report.hpp"
#include "emle/table.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kIo = 3,
    kParse = 4,
    kData = 5,
    kNumerical = 6,
    kOracleMismatch = 7,
};

struct RunConfig {
    std::string data_path;
    std::string dataset;
    std::string formula;
    std::string freq_column = "freq";
    std::string format = "text";
    bool facial_only = false;
    bool oracle_check = false;
    bool dump_design = false;
    bool parallel = false;
    std::optional<double> tol_lp;
    std::optional<double> tol_rank;
};

void emit(const nlohmann::json& report, const std::string& format) {
    if (format == "json")
        std::cout << report.dump(2) << '\n';
    else
        emle::write_text_report(std::cout, report);
}

int run(const RunConfig& cfg) {
    const auto table = cfg.dataset.empty() ? emle::read_table_file(cfg.data_path, cfg.freq_column)
                                           : emle::load_dataset(cfg.dataset);
    const auto model = emle::parse_model(cfg.formula, cfg.freq_column);

    emle::FacialSetOptions fopts;
    if (cfg.tol_lp) fopts.lp.support = *cfg.tol_lp;
    if (cfg.tol_rank) fopts.rank.relative = *cfg.tol_rank;
    fopts.parallel = cfg.parallel;
    emle::FitOptions fit_opts;
    fit_opts.rank = fopts.rank;

    const auto design = emle::build_design(table, model, fopts.rank);
    if (cfg.dump_design) {
        emle::write_design(std::cout, table, design);
        return kOk;
    }

    const auto fs = emle::find_facial_set(table, design, fopts);
    if (cfg.oracle_check) {
        const auto oracle = emle::per_cell_oracle(table, design, fopts);
        const auto report = emle::make_oracle_report(table, model, fs, oracle);
        emit(report, cfg.format);
        return report["oracle_check"]["agree"].get<bool>() ? kOk : kOracleMismatch;
    }

    std::optional<emle::FitResult> result;
    if (!cfg.facial_only) result = emle::fit(table, design, fs, fit_opts);
    emit(emle::make_report(table, model, design, fs, result), cfg.format);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Facial-set detection and extended maximum likelihood for log-linear models"};
    RunConfig cfg;
    auto* data = app.add_option("--data", cfg.data_path, "Delimited table with a header row");
    auto* dataset = app.add_option("--dataset", cfg.dataset, "Built-in table")
                        ->check(CLI::IsMember({"haberman", "example3x3x3", "rochdale"}));
    data->excludes(dataset);
    dataset->excludes(data);
    app.add_option("--formula", cfg.formula, "Model, e.g. \"freq ~ a*b + b*c\" or \"[ab][bc]\"")->required();
    app.add_option("--freq-column", cfg.freq_column, "Name of the count column")->capture_default_str();
    app.add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_flag("--facial-only", cfg.facial_only, "Stop after finding the facial set");
    app.add_flag("--oracle-check", cfg.oracle_check, "Compare against one LP per zero cell");
    app.add_flag("--dump-design", cfg.dump_design, "Print the design matrix and exit");
    app.add_flag("--parallel", cfg.parallel, "Solve oracle LPs on worker threads");
    app.add_option("--tol-lp", cfg.tol_lp, "Positivity threshold for LP solutions")->check(CLI::PositiveNumber);
    app.add_option("--tol-rank", cfg.tol_rank, "Relative singular-value threshold for rank")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    if (cfg.data_path.empty() && cfg.dataset.empty()) {
        std::cerr << "error: exactly one of --data or --dataset is required\n";
        return static_cast<int>(CLI::ExitCodes::RequiredError);
    }

    try {
        return run(cfg);
    } catch (const emle::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const emle::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const emle::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const emle::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    }
}
