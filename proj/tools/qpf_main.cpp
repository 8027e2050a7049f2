#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpf/csv.hpp"
#include "qpf/forecast.hpp"
#include "qpf/manifest.hpp"
#include "qpf/period.hpp"
#include "qpf/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;

qpf::Series load_input(const std::string& file, const std::string& column, bool header,
                       char delimiter) {
    qpf::DatasetSpec spec;
    spec.path = file;
    spec.value_column = column;
    spec.has_header = header;
    spec.delimiter = delimiter;
    return qpf::load_csv(spec);
}

std::string metric_text(double v) {
    return qpf::metric_undefined(v) ? "undefined" : qpf::format_double(v);
}

void print_fit_summary(const qpf::Model& model) {
    std::cout << "iterations: " << model.iterations.size() << "\n";
    for (std::size_t k = 0; k < model.iterations.size(); ++k) {
        const auto& it = model.iterations[k];
        std::cout << "  " << (k + 1) << ": ratio " << qpf::format_double(it.config.validation_ratio)
                  << ", " << qpf::period_method_name(it.config.period_method) << ", "
                  << it.config.weighting.name() << ", " << it.config.trend_name()
                  << ", T* = " << it.semi_period
                  << ", validation SMAPE = " << qpf::format_double(it.validation_smape) << "\n";
    }
    std::cout << "Train NMSE\tTrain SMAPE\tTest NMSE\tTest SMAPE\n";
    const auto& tr = model.final_train;
    if (model.final_test.n > 0) {
        const auto& te = model.final_test;
        std::cout << metric_text(tr.nmse) << "\t" << metric_text(tr.smape) << "\t"
                  << metric_text(te.nmse) << "\t" << metric_text(te.smape) << "\n";
    } else {
        std::cout << metric_text(tr.nmse) << "\t" << metric_text(tr.smape)
                  << "\t(no test)\t(no test)\n";
    }
    if (model.guarantee_unreachable) {
        std::cout << "warning: 50% residual reduction unreachable; partial model\n";
    }
    for (std::size_t k = 0; k < model.test_trend_fallback.size(); ++k) {
        if (model.test_trend_fallback[k]) {
            std::cout << "note: iteration " << (k + 1)
                      << " used its integer-degree fallback on the test horizon\n";
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-periodic decomposition forecasting"};
    app.require_subcommand(1);

    // period
    auto* period_cmd = app.add_subcommand("period", "Scan the LSG curve and report the semi-period");
    std::string period_file;
    std::string period_col = "0";
    bool period_header = false;
    std::string period_delim = ",";
    int t_min = 2;
    int t_max = 0;
    period_cmd->add_option("file", period_file, "input CSV")->required();
    period_cmd->add_option("--col", period_col, "value column (index or name)");
    period_cmd->add_flag("--header", period_header, "first row is a header");
    period_cmd->add_option("--delim", period_delim, "cell delimiter");
    period_cmd->add_option("--tmin", t_min, "smallest candidate period");
    period_cmd->add_option("--tmax", t_max, "largest candidate period (0 = half the length)");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Run the full decomposition fit");
    std::string fit_file;
    std::string fit_col = "0";
    bool fit_header = false;
    std::string fit_delim = ",";
    qpf::FitOptions options;
    std::vector<double> ratios;
    bool guaranteed = false;
    std::string out_dir = "qpf-out";
    fit_cmd->add_option("file", fit_file, "input CSV")->required();
    fit_cmd->add_option("--col", fit_col, "value column (index or name)");
    fit_cmd->add_flag("--header", fit_header, "first row is a header");
    fit_cmd->add_option("--delim", fit_delim, "cell delimiter");
    fit_cmd->add_option("--test", options.test_length, "held-out test samples at the end");
    fit_cmd->add_option("--ratios", ratios, "validation ratios")->delimiter(',');
    fit_cmd->add_option("--max-degree", options.max_degree, "largest trend degree");
    fit_cmd->add_option("--frac-n", options.fractional_n, "fractional subdivision count");
    fit_cmd->add_option("--max-iter", options.max_iterations, "iteration cap");
    fit_cmd->add_option("--alpha", options.alpha, "exponential weighting decay");
    fit_cmd->add_flag("--guaranteed", guaranteed, "require >50% residual reduction per iteration");
    fit_cmd->add_option("--out", out_dir, "output directory");

    // forecast
    auto* forecast_cmd = app.add_subcommand("forecast", "Extend a fitted model from its manifest");
    std::string manifest_file;
    std::size_t horizon = 0;
    std::string forecast_out;
    forecast_cmd->add_option("manifest", manifest_file, "manifest written by fit")->required();
    forecast_cmd->add_option("--horizon", horizon, "samples to forecast")->required();
    forecast_cmd->add_option("--out", forecast_out, "output CSV (default: stdout)");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a deterministic test signal");
    std::string recipe_text;
    std::size_t synth_len = 0;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth_cmd->add_option("--recipe", recipe_text, "trend/sin/saw/noise recipe")->required();
    synth_cmd->add_option("--len", synth_len, "sample count")->required();
    synth_cmd->add_option("--seed", synth_seed, "noise seed");
    synth_cmd->add_option("--out", synth_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (period_cmd->parsed()) {
            if (period_delim.size() != 1) {
                std::cerr << "error: --delim must be a single character\n";
                return kExitInputError;
            }
            const qpf::Series series =
                load_input(period_file, period_col, period_header, period_delim[0]);
            const int upper =
                (t_max > 0) ? t_max : static_cast<int>(series.size() / 2);
            const qpf::PeriodScan scan = qpf::scan_semi_period(series, t_min, upper);
            for (int t = scan.t_min; t <= scan.t_max; ++t) {
                std::cout << t << ',' << qpf::format_double(scan.score_at(t)) << "\n";
            }
            std::cout << "T*," << scan.best_period << "\n";
            return kExitOk;
        }

        if (fit_cmd->parsed()) {
            if (fit_delim.size() != 1) {
                std::cerr << "error: --delim must be a single character\n";
                return kExitInputError;
            }
            if (!ratios.empty()) options.validation_ratios = ratios;
            const qpf::Series series = load_input(fit_file, fit_col, fit_header, fit_delim[0]);

            const qpf::Model model =
                guaranteed ? qpf::fit_guaranteed(series, options) : qpf::fit(series, options);

            qpf::DatasetInfo dataset;
            dataset.path = fit_file;
            dataset.checksum = qpf::fnv1a64_file(fit_file);
            dataset.value_column = fit_col;
            const qpf::EmitResult files = qpf::emit(model, dataset, out_dir);

            print_fit_summary(model);
            std::cout << "wrote " << files.manifest.string() << ", " << files.forecast_csv.string()
                      << ", " << files.plot_actual.string() << ", "
                      << files.plot_predicted.string() << "\n";
            if (model.guarantee_unreachable || model.iterations.empty()) {
                return kExitInfeasible;
            }
            return kExitOk;
        }

        if (forecast_cmd->parsed()) {
            const qpf::LoadedManifest loaded = qpf::read_manifest(manifest_file);
            const std::string csv = qpf::render_forecast_csv(loaded.model, horizon);
            if (forecast_out.empty()) {
                std::cout << csv;
            } else {
                qpf::write_file_atomic(forecast_out, csv);
                std::cout << "wrote " << forecast_out << "\n";
            }
            const qpf::PredictionDetail detail = qpf::predict_components(loaded.model, horizon);
            for (std::size_t k = 0; k < detail.fallback_used.size(); ++k) {
                if (detail.fallback_used[k]) {
                    std::cerr << "note: iteration " << (k + 1)
                              << " used its integer-degree fallback on the horizon\n";
                }
            }
            return kExitOk;
        }

        if (synth_cmd->parsed()) {
            const qpf::SynthRecipe recipe = qpf::parse_recipe(recipe_text);
            const qpf::Series series = qpf::synth(recipe, synth_len, synth_seed);
            std::string csv = "t,value\n";
            for (std::size_t t = 0; t < series.size(); ++t) {
                csv += std::to_string(t) + "," + qpf::format_double(series[t]) + "\n";
            }
            qpf::write_file_atomic(synth_out, csv);
            std::cout << "wrote " << synth_out << " (" << series.size() << " samples)\n";
            return kExitOk;
        }
    } catch (const qpf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == qpf::errc::infeasible ? kExitInfeasible : kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
