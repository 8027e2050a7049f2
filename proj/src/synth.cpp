#include "qpf/synth.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

namespace qpf {

namespace {

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t end = text.find(sep, begin);
        if (end == std::string::npos) {
            out.push_back(text.substr(begin));
            break;
        }
        out.push_back(text.substr(begin, end - begin));
        begin = end + 1;
    }
    return out;
}

double parse_number(const std::string& token, const std::string& what) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        raise(errc::parse, "bad " + what + " '" + token + "' in recipe");
    }
    return value;
}

std::string format_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

SynthRecipe parse_recipe(const std::string& text) {
    SynthRecipe recipe;
    bool saw_trend = false;
    bool saw_noise = false;
    for (const std::string& part : split_on(text, ';')) {
        if (part.empty()) continue;
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos) {
            raise(errc::parse, "recipe component '" + part + "' is missing '='");
        }
        const std::string name = part.substr(0, eq);
        const auto args = split_on(part.substr(eq + 1), ',');
        if (name == "trend") {
            if (saw_trend) raise(errc::parse, "recipe has more than one trend");
            saw_trend = true;
            for (const auto& a : args) recipe.trend.push_back(parse_number(a, "trend coefficient"));
        } else if (name == "noise") {
            if (saw_noise) raise(errc::parse, "recipe has more than one noise term");
            saw_noise = true;
            if (args.size() != 1) raise(errc::parse, "noise takes a single sigma");
            recipe.noise_sigma = parse_number(args[0], "noise sigma");
            if (recipe.noise_sigma < 0.0) raise(errc::parse, "noise sigma must be nonnegative");
        } else if (name == "sin" || name == "saw") {
            if (args.size() < 2 || args.size() > 3) {
                raise(errc::parse, name + " takes period,amplitude[,phase]");
            }
            Wave w;
            w.shape = (name == "sin") ? Wave::Shape::sine : Wave::Shape::sawtooth;
            w.period = parse_number(args[0], "period");
            w.amplitude = parse_number(args[1], "amplitude");
            if (args.size() == 3) w.phase = parse_number(args[2], "phase");
            if (!(w.period > 0.0)) raise(errc::parse, "wave period must be positive");
            recipe.waves.push_back(w);
        } else {
            raise(errc::parse, "unknown recipe component '" + name + "'");
        }
    }
    return recipe;
}

std::string recipe_to_string(const SynthRecipe& recipe) {
    std::string out;
    auto append = [&](const std::string& s) {
        if (!out.empty()) out += ';';
        out += s;
    };
    if (!recipe.trend.empty()) {
        std::string s = "trend=";
        for (std::size_t i = 0; i < recipe.trend.size(); ++i) {
            if (i) s += ',';
            s += format_number(recipe.trend[i]);
        }
        append(s);
    }
    for (const Wave& w : recipe.waves) {
        std::string s = (w.shape == Wave::Shape::sine) ? "sin=" : "saw=";
        s += format_number(w.period) + "," + format_number(w.amplitude);
        if (w.phase != 0.0) s += "," + format_number(w.phase);
        append(s);
    }
    if (recipe.noise_sigma > 0.0) append("noise=" + format_number(recipe.noise_sigma));
    return out;
}

Series synth(const SynthRecipe& recipe, std::size_t length, std::uint64_t seed) {
    std::vector<double> values(length, 0.0);

    for (std::size_t t = 0; t < length; ++t) {
        const double x = static_cast<double>(t);
        double acc = 0.0;
        for (std::size_t k = recipe.trend.size(); k-- > 0;) {
            acc = acc * x + recipe.trend[k];
        }
        values[t] = acc;
    }

    for (const Wave& w : recipe.waves) {
        for (std::size_t t = 0; t < length; ++t) {
            // Fold into one period first so integer-period waves repeat
            // bit-exactly sample to sample.
            double u = std::fmod(static_cast<double>(t) + w.phase, w.period);
            if (u < 0.0) u += w.period;
            if (w.shape == Wave::Shape::sine) {
                values[t] += w.amplitude * std::sin(2.0 * std::numbers::pi * u / w.period);
            } else {
                values[t] += w.amplitude * (2.0 * u / w.period - 1.0);
            }
        }
    }

    if (recipe.noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, recipe.noise_sigma);
        for (std::size_t t = 0; t < length; ++t) values[t] += gauss(rng);
    }

    return Series(std::move(values));
}

} // namespace qpf
