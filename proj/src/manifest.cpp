#include "qpf/manifest.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "qpf/csv.hpp"

namespace qpf {

namespace {

constexpr const char* kFormatTag = "qpf-manifest/1";

std::string join_doubles(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::string join_ints(std::span<const int> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::string checksum_hex(std::uint64_t v) {
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[v & 0xF];
        v >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

void render_metrics(std::ostringstream& out, const std::string& section,
                    const MetricReport& r) {
    out << "[" << section << "]\n";
    out << "smape = " << format_double(r.smape) << "\n";
    out << "nmse = " << format_double(r.nmse) << "\n";
    out << "mse = " << format_double(r.mse) << "\n";
    out << "mae = " << format_double(r.mae) << "\n";
    out << "mape = " << format_double(r.mape) << "\n";
    out << "n = " << r.n << "\n";
}

void render_polyfit(std::ostringstream& out, const std::string& prefix, const PolyFit& fit) {
    out << prefix << "_coefficients = " << join_doubles(fit.coefficients) << "\n";
    out << prefix << "_center = " << format_double(fit.center) << "\n";
    out << prefix << "_half_width = " << format_double(fit.half_width) << "\n";
    out << prefix << "_domain_offset = " << fit.domain_offset << "\n";
}

std::string range_text(std::size_t begin, std::size_t end, std::int64_t base) {
    if (begin == end) return "(none)";
    return std::to_string(base + static_cast<std::int64_t>(begin)) + ".." +
           std::to_string(base + static_cast<std::int64_t>(end) - 1);
}

} // namespace

std::string render_manifest(const Model& model, const DatasetInfo& dataset) {
    std::ostringstream out;
    const std::size_t m = model.pretest_length;
    const std::size_t w = model.common_window;
    const std::int64_t s0 = model.input.start_index();

    out << "format = " << kFormatTag << "\n\n";

    out << "[dataset]\n";
    out << "path = " << dataset.path << "\n";
    out << "rows = " << model.input.size() << "\n";
    out << "checksum_fnv1a64 = " << checksum_hex(dataset.checksum) << "\n";
    out << "value_column = " << dataset.value_column << "\n\n";

    const FitOptions& opt = model.options;
    out << "[options]\n";
    out << "test_length = " << opt.test_length << "\n";
    out << "validation_ratios = " << join_doubles(opt.validation_ratios) << "\n";
    out << "max_degree = " << opt.max_degree << "\n";
    out << "fractional_n = " << opt.fractional_n << "\n";
    out << "max_iterations = " << opt.max_iterations << "\n";
    out << "alpha = " << format_double(opt.alpha) << "\n";
    out << "guaranteed = " << (model.guaranteed_mode ? "true" : "false") << "\n";
    out << "random_seed = " << opt.random_seed << "\n\n";

    out << "[series]\n";
    out << "length = " << model.input.size() << "\n";
    out << "start_index = " << s0 << "\n";
    out << "pretest_length = " << m << "\n";
    out << "common_window = " << w << "\n\n";

    out << "[windows]\n";
    out << "train = " << range_text(0, m - w, s0) << "\n";
    out << "common_validation = " << range_text(m - w, m, s0) << "\n";
    out << "test = " << range_text(m, m + opt.test_length, s0) << "\n\n";

    out << "[result]\n";
    out << "iterations = " << model.iterations.size() << "\n";
    out << "guarantee_unreachable = " << (model.guarantee_unreachable ? "true" : "false")
        << "\n";
    if (!model.residual_norms.empty()) {
        out << "residual_norms = " << join_doubles(model.residual_norms) << "\n";
    }
    if (!model.test_trend_fallback.empty()) {
        std::string flags;
        for (std::size_t k = 0; k < model.test_trend_fallback.size(); ++k) {
            if (k) flags += ',';
            flags += model.test_trend_fallback[k] ? '1' : '0';
        }
        out << "test_trend_fallback = " << flags << "\n";
    }
    out << "\n";

    for (std::size_t k = 0; k < model.iterations.size(); ++k) {
        const IterationResult& it = model.iterations[k];
        const std::string idx = std::to_string(k + 1);
        out << "[iteration " << idx << "]\n";
        out << "validation_ratio = " << format_double(it.config.validation_ratio) << "\n";
        out << "period_method = " << period_method_name(it.config.period_method) << "\n";
        out << "weighting = " << it.config.weighting.name() << "\n";
        out << "alpha = " << format_double(it.config.weighting.alpha) << "\n";
        out << "trend = " << it.config.trend_name() << "\n";
        out << "semi_period = " << it.semi_period << "\n";
        out << "train_length = " << it.train_length << "\n";
        out << "validation_smape = " << format_double(it.validation_smape) << "\n";
        out << "common_smape = " << format_double(it.common_smape) << "\n";
        render_metrics(out, "iteration " + idx + " metrics train",
                       model.iteration_metrics[k].train);
        render_metrics(out, "iteration " + idx + " metrics validation",
                       model.iteration_metrics[k].validation);

        out << "[model " << idx << "]\n";
        out << "trend_kind = " << (it.trend.is_fractional() ? "fractional" : "integer") << "\n";
        if (it.trend.is_fractional()) {
            out << "blend_index = " << it.trend.blend_index << "\n";
            out << "blend_count = " << it.trend.blend_count << "\n";
        }
        render_polyfit(out, "lower", it.trend.lower);
        if (it.trend.is_fractional()) {
            render_polyfit(out, "upper", it.trend.upper);
        }
        out << "element_period = " << it.element.period << "\n";
        out << "element_values = " << join_doubles(it.element.values) << "\n";
        out << "element_counts = " << join_ints(it.element.contributing_counts) << "\n\n";
    }

    render_metrics(out, "final train", model.final_train);
    render_metrics(out, "final validation", model.final_validation);
    if (model.final_test.n > 0) {
        render_metrics(out, "final test", model.final_test);
    }
    return out.str();
}

std::string render_forecast_csv(const Model& model, std::size_t horizon) {
    const std::size_t m = model.pretest_length;
    const std::int64_t s0 = model.input.start_index();
    const PredictionDetail detail = predict_components(model, horizon);

    const bool with_labels = model.input.has_labels();
    const bool with_actual = model.input.size() > m;

    std::ostringstream out;
    out << "index";
    if (with_labels) out << ",label";
    if (with_actual) out << ",actual";
    out << ",predicted";
    for (std::size_t k = 0; k < model.iterations.size(); ++k) {
        out << ",trend_" << (k + 1) << ",periodic_" << (k + 1);
    }
    out << "\n";

    for (std::size_t h = 0; h < horizon; ++h) {
        const std::size_t pos = m + h;
        out << (s0 + static_cast<std::int64_t>(pos));
        if (with_labels) {
            out << ',' << (pos < model.input.size() ? model.input.labels()[pos] : "");
        }
        if (with_actual) {
            out << ',';
            if (pos < model.input.size()) out << format_double(model.input[pos]);
        }
        out << ',' << format_double(detail.total[h]);
        for (std::size_t k = 0; k < model.iterations.size(); ++k) {
            out << ',' << format_double(detail.trend_components[k][h]);
            out << ',' << format_double(detail.periodic_components[k][h]);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_plot_actual(const Model& model) {
    std::ostringstream out;
    out << "index,actual\n";
    const std::int64_t s0 = model.input.start_index();
    for (std::size_t i = 0; i < model.input.size(); ++i) {
        out << (s0 + static_cast<std::int64_t>(i)) << ',' << format_double(model.input[i])
            << "\n";
    }
    return out.str();
}

std::string render_plot_predicted(const Model& model, std::size_t horizon) {
    std::ostringstream out;
    out << "index,predicted\n";
    const std::int64_t s0 = model.input.start_index();
    for (std::size_t i = 0; i < model.final_prediction.size(); ++i) {
        out << (s0 + static_cast<std::int64_t>(i)) << ','
            << format_double(model.final_prediction[i]) << "\n";
    }
    const Series extension = predict(model, horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        out << (extension.start_index() + static_cast<std::int64_t>(h)) << ','
            << format_double(extension[h]) << "\n";
    }
    return out.str();
}

EmitResult emit(const Model& model, const DatasetInfo& dataset,
                const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        raise(errc::io, "cannot create '" + out_dir.string() + "': " + ec.message());
    }
    EmitResult files;
    files.manifest = out_dir / "manifest.txt";
    files.forecast_csv = out_dir / "forecast.csv";
    files.plot_actual = out_dir / "plot_actual.csv";
    files.plot_predicted = out_dir / "plot_predicted.csv";

    const std::size_t horizon = model.options.test_length;
    write_file_atomic(files.manifest, render_manifest(model, dataset));
    write_file_atomic(files.forecast_csv, render_forecast_csv(model, horizon));
    write_file_atomic(files.plot_actual, render_plot_actual(model));
    write_file_atomic(files.plot_predicted, render_plot_predicted(model, horizon));
    return files;
}

namespace {

struct ManifestData {
    // section -> ordered key/value pairs
    std::map<std::string, std::map<std::string, std::string>> sections;

    const std::string& get(const std::string& section, const std::string& key) const {
        const auto s = sections.find(section);
        if (s == sections.end()) {
            raise(errc::parse, "manifest is missing section [" + section + "]");
        }
        const auto k = s->second.find(key);
        if (k == s->second.end()) {
            raise(errc::parse, "manifest section [" + section + "] is missing '" + key + "'");
        }
        return k->second;
    }

    bool has(const std::string& section) const { return sections.count(section) > 0; }
};

double to_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        raise(errc::parse, "bad number '" + s + "' in manifest");
    }
    return v;
}

std::int64_t to_int(const std::string& s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        raise(errc::parse, "bad integer '" + s + "' in manifest");
    }
    return v;
}

std::vector<double> to_doubles(const std::string& s) {
    std::vector<double> out;
    std::size_t begin = 0;
    while (begin <= s.size()) {
        std::size_t end = s.find(',', begin);
        if (end == std::string::npos) end = s.size();
        out.push_back(to_double(s.substr(begin, end - begin)));
        begin = end + 1;
        if (end == s.size()) break;
    }
    return out;
}

PolyFit parse_polyfit(const ManifestData& data, const std::string& section,
                      const std::string& prefix) {
    PolyFit fit;
    fit.coefficients = to_doubles(data.get(section, prefix + "_coefficients"));
    fit.center = to_double(data.get(section, prefix + "_center"));
    fit.half_width = to_double(data.get(section, prefix + "_half_width"));
    fit.domain_offset = to_int(data.get(section, prefix + "_domain_offset"));
    return fit;
}

} // namespace

LoadedManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(errc::io, "cannot open '" + path.string() + "'");
    }

    ManifestData data;
    std::string section; // empty = top level
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            raise(errc::parse, "manifest line without '=': " + line);
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        data.sections[section][key] = value;
    }

    if (data.get("", "format") != kFormatTag) {
        raise(errc::parse, "unsupported manifest format '" + data.get("", "format") + "'");
    }

    LoadedManifest loaded;
    loaded.dataset.path = data.get("dataset", "path");
    loaded.dataset.value_column = data.get("dataset", "value_column");

    Model& model = loaded.model;
    model.options.test_length = static_cast<std::size_t>(to_int(data.get("options", "test_length")));
    model.options.validation_ratios = to_doubles(data.get("options", "validation_ratios"));
    model.options.max_degree = static_cast<int>(to_int(data.get("options", "max_degree")));
    model.options.fractional_n = static_cast<int>(to_int(data.get("options", "fractional_n")));
    model.options.max_iterations =
        static_cast<std::size_t>(to_int(data.get("options", "max_iterations")));
    model.options.alpha = to_double(data.get("options", "alpha"));
    model.options.random_seed =
        static_cast<std::uint64_t>(to_int(data.get("options", "random_seed")));
    model.guaranteed_mode = data.get("options", "guaranteed") == "true";
    model.guarantee_unreachable = data.get("result", "guarantee_unreachable") == "true";

    const std::int64_t start_index = to_int(data.get("series", "start_index"));
    model.pretest_length = static_cast<std::size_t>(to_int(data.get("series", "pretest_length")));
    model.common_window = static_cast<std::size_t>(to_int(data.get("series", "common_window")));
    model.input = Series(std::vector<double>{}, start_index);

    const auto iteration_count = static_cast<std::size_t>(to_int(data.get("result", "iterations")));
    for (std::size_t k = 1; k <= iteration_count; ++k) {
        const std::string isec = "iteration " + std::to_string(k);
        const std::string msec = "model " + std::to_string(k);
        IterationResult it;
        it.config.validation_ratio = to_double(data.get(isec, "validation_ratio"));
        it.config.period_method = data.get(isec, "period_method") == "lsg-smoothed"
                                      ? PeriodMethod::lsg_smoothed
                                      : PeriodMethod::lsg_raw;
        const std::string wname = data.get(isec, "weighting");
        if (wname == "uniform") {
            it.config.weighting = WeightingStrategy::uniform();
        } else if (wname == "linear") {
            it.config.weighting = WeightingStrategy::linear();
        } else {
            it.config.weighting = WeightingStrategy::exponential(to_double(data.get(isec, "alpha")));
        }
        it.semi_period = static_cast<int>(to_int(data.get(isec, "semi_period")));
        it.train_length = static_cast<std::size_t>(to_int(data.get(isec, "train_length")));
        it.validation_smape = to_double(data.get(isec, "validation_smape"));
        it.common_smape = to_double(data.get(isec, "common_smape"));

        const bool fractional = data.get(msec, "trend_kind") == "fractional";
        it.trend.kind = fractional ? TrendModel::Kind::fractional_blend
                                   : TrendModel::Kind::integer_degree;
        it.trend.lower = parse_polyfit(data, msec, "lower");
        if (fractional) {
            it.trend.upper = parse_polyfit(data, msec, "upper");
            it.trend.blend_index = static_cast<int>(to_int(data.get(msec, "blend_index")));
            it.trend.blend_count = static_cast<int>(to_int(data.get(msec, "blend_count")));
            it.config.fractional = true;
            it.config.blend_index = it.trend.blend_index;
            it.config.blend_count = it.trend.blend_count;
            it.config.degree = it.trend.lower.degree();
        } else {
            it.config.degree = it.trend.lower.degree();
        }

        it.element.period = static_cast<int>(to_int(data.get(msec, "element_period")));
        it.element.values = to_doubles(data.get(msec, "element_values"));
        for (double c : to_doubles(data.get(msec, "element_counts"))) {
            it.element.contributing_counts.push_back(static_cast<int>(c));
        }
        if (it.element.values.size() != static_cast<std::size_t>(it.element.period)) {
            raise(errc::parse, "element of iteration " + std::to_string(k) +
                                   " does not match its period");
        }
        model.iterations.push_back(std::move(it));
    }
    return loaded;
}

} // namespace qpf
