#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <numbers>

#include "qpf/csv.hpp"
#include "qpf/forecast.hpp"
#include "qpf/manifest.hpp"
#include "qpf/synth.hpp"

namespace fs = std::filesystem;
using qpf::DatasetSpec;
using qpf::Series;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qpf_test_" + std::to_string(static_cast<unsigned>(::getpid())) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static inline int counter = 0;
};

void write_text(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("csv loading") {
    TempDir dir;
    SUBCASE("bare value column") {
        write_text(dir.path / "a.csv", "1\n2\n3\n");
        const Series s = qpf::load_csv({dir.path / "a.csv", "0", false, ','});
        CHECK(s.values() == std::vector<double>{1, 2, 3});
        CHECK(!s.has_labels());
    }
    SUBCASE("header with named column") {
        write_text(dir.path / "b.csv", "ts,demand\n08:00,10.5\n09:00,11\n");
        const Series s = qpf::load_csv({dir.path / "b.csv", "demand", true, ','});
        CHECK(s.values() == std::vector<double>{10.5, 11.0});
        REQUIRE(s.has_labels());
        CHECK(s.labels()[0] == "08:00");
    }
    SUBCASE("named column implies a header") {
        write_text(dir.path / "c.csv", "ts,price\nmon,3\ntue,4\n");
        const Series s = qpf::load_csv({dir.path / "c.csv", "price", false, ','});
        CHECK(s.values() == std::vector<double>{3, 4});
    }
    SUBCASE("bad cell names the row") {
        write_text(dir.path / "d.csv", "1\nabc\n3\n");
        try {
            qpf::load_csv({dir.path / "d.csv", "0", false, ','});
            FAIL("expected a parse error");
        } catch (const qpf::Error& e) {
            CHECK(e.code() == qpf::errc::parse);
            CHECK(std::string(e.what()).find("row 2") != std::string::npos);
            CHECK(std::string(e.what()).find("abc") != std::string::npos);
        }
    }
    SUBCASE("empty file fails") {
        write_text(dir.path / "e.csv", "");
        CHECK_THROWS_AS(qpf::load_csv({dir.path / "e.csv", "0", false, ','}), qpf::Error);
    }
    SUBCASE("missing column in header fails") {
        write_text(dir.path / "f.csv", "a,b\n1,2\n");
        CHECK_THROWS_AS(qpf::load_csv({dir.path / "f.csv", "zz", true, ','}), qpf::Error);
    }
}

TEST_CASE("synth recipes") {
    SUBCASE("pure sinusoid") {
        const Series s = qpf::synth(qpf::parse_recipe("sin=24,1"), 48, 0);
        for (std::size_t t = 0; t < 48; ++t) {
            const double want = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 24.0);
            CHECK(s[t] == doctest::Approx(want).epsilon(1e-12));
        }
        // bit-exact repetition at the period
        for (std::size_t t = 0; t + 24 < 48; ++t) CHECK(s[t] == s[t + 24]);
    }
    SUBCASE("pure line") {
        const Series s = qpf::synth(qpf::parse_recipe("trend=1,2"), 5, 0);
        CHECK(s.values() == std::vector<double>{1, 3, 5, 7, 9});
    }
    SUBCASE("same seed, same signal") {
        const auto recipe = qpf::parse_recipe("trend=0,0.1;sin=12,1;noise=0.5");
        const Series a = qpf::synth(recipe, 100, 42);
        const Series b = qpf::synth(recipe, 100, 42);
        CHECK(a.values() == b.values());
        const Series c = qpf::synth(recipe, 100, 43);
        CHECK(a.values() != c.values());
    }
    SUBCASE("recipe round-trips through its text form") {
        const auto recipe = qpf::parse_recipe("trend=1,0.5;sin=24,1,3;saw=7,0.25;noise=0.1");
        const auto again = qpf::parse_recipe(qpf::recipe_to_string(recipe));
        CHECK(qpf::synth(recipe, 64, 9).values() == qpf::synth(again, 64, 9).values());
    }
    SUBCASE("bad recipes") {
        CHECK_THROWS_AS(qpf::parse_recipe("sin=24"), qpf::Error);
        CHECK_THROWS_AS(qpf::parse_recipe("wobble=3"), qpf::Error);
        CHECK_THROWS_AS(qpf::parse_recipe("noise=-1"), qpf::Error);
        CHECK_THROWS_AS(qpf::parse_recipe("sin=0,1"), qpf::Error);
    }
}

TEST_CASE("emit, re-emit and round-trip") {
    TempDir dir;
    const Series series = qpf::synth(qpf::parse_recipe("trend=10,0.05;sin=24,2;noise=0.1"), 360, 5);
    qpf::FitOptions options;
    options.test_length = 48;
    const qpf::Model model = qpf::fit(series, options);

    qpf::DatasetInfo info;
    info.path = "synthetic.csv";
    info.value_column = "value";

    const auto out1 = qpf::emit(model, info, dir.path / "run1");
    const auto out2 = qpf::emit(model, info, dir.path / "run2");

    SUBCASE("re-emitting is byte-identical") {
        CHECK(read_text(out1.manifest) == read_text(out2.manifest));
        CHECK(read_text(out1.forecast_csv) == read_text(out2.forecast_csv));
        CHECK(read_text(out1.plot_actual) == read_text(out2.plot_actual));
        CHECK(read_text(out1.plot_predicted) == read_text(out2.plot_predicted));
    }

    SUBCASE("the predicted column loads back exactly") {
        const Series back = qpf::load_csv({out1.forecast_csv, "predicted", true, ','});
        const Series direct = qpf::predict(model, options.test_length);
        REQUIRE(back.size() == direct.size());
        for (std::size_t i = 0; i < back.size(); ++i) {
            CHECK(back[i] == direct[i]); // bit-exact round-trip
        }
    }

    SUBCASE("manifest reconstructs a forecast-ready model") {
        const auto loaded = qpf::read_manifest(out1.manifest);
        REQUIRE(loaded.model.iterations.size() == model.iterations.size());
        const Series a = qpf::predict(model, 100);
        const Series b = qpf::predict(loaded.model, 100);
        REQUIRE(a.size() == b.size());
        CHECK(a.start_index() == b.start_index());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i] == b[i]); // serialized state is exact
        }
    }

    SUBCASE("manifest carries the summary metric table") {
        const std::string manifest = read_text(out1.manifest);
        for (const char* needle :
             {"[final train]", "[final validation]", "[final test]", "nmse = ", "smape = "}) {
            CHECK(manifest.find(needle) != std::string::npos);
        }
    }

    SUBCASE("forecast csv has the documented columns") {
        const std::string csv = read_text(out1.forecast_csv);
        const std::string header = csv.substr(0, csv.find('\n'));
        CHECK(header.find("index") == 0);
        CHECK(header.find("actual") != std::string::npos);
        CHECK(header.find("predicted") != std::string::npos);
        CHECK(header.find("trend_1") != std::string::npos);
        CHECK(header.find("periodic_1") != std::string::npos);
        // one data row per horizon sample
        const auto rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) - 1;
        CHECK(rows == options.test_length);
    }
}

TEST_CASE("labels flow into the forecast csv") {
    TempDir dir;
    // header + label column so the loaded series carries labels
    std::string csv = "hour,load\n";
    const qpf::Series base = qpf::synth(qpf::parse_recipe("trend=40;sin=12,4;noise=0.2"), 200, 1);
    for (std::size_t t = 0; t < base.size(); ++t) {
        csv += "h" + std::to_string(t) + "," + qpf::format_double(base[t]) + "\n";
    }
    write_text(dir.path / "labeled.csv", csv);
    const qpf::Series series = qpf::load_csv({dir.path / "labeled.csv", "load", true, ','});
    REQUIRE(series.has_labels());

    qpf::FitOptions options;
    options.test_length = 24;
    const qpf::Model model = qpf::fit(series, options);
    const std::string forecast = qpf::render_forecast_csv(model, options.test_length);
    const std::string header = forecast.substr(0, forecast.find('\n'));
    CHECK(header.find(",label,") != std::string::npos);
    // first horizon row carries the test-window label
    const std::size_t m = model.pretest_length;
    CHECK(forecast.find("h" + std::to_string(m)) != std::string::npos);
}

TEST_CASE("fit without a test window emits a header-only forecast") {
    TempDir dir;
    const qpf::Series series = qpf::synth(qpf::parse_recipe("trend=10;sin=8,2"), 96, 0);
    const qpf::Model model = qpf::fit(series, qpf::FitOptions{});
    const auto files = qpf::emit(model, qpf::DatasetInfo{}, dir.path / "out");
    const std::string forecast = read_text(files.forecast_csv);
    CHECK(std::count(forecast.begin(), forecast.end(), '\n') == 1);
    CHECK(read_text(files.plot_actual).size() > forecast.size());
}

TEST_CASE("malformed manifests are rejected with parse errors") {
    TempDir dir;
    write_text(dir.path / "bad1.txt", "format = something-else/9\n");
    CHECK_THROWS_AS(qpf::read_manifest(dir.path / "bad1.txt"), qpf::Error);

    write_text(dir.path / "bad2.txt", "format = qpf-manifest/1\n[options]\nbroken line\n");
    CHECK_THROWS_AS(qpf::read_manifest(dir.path / "bad2.txt"), qpf::Error);

    CHECK_THROWS_AS(qpf::read_manifest(dir.path / "missing.txt"), qpf::Error);
}

TEST_CASE("atomic write and checksum") {
    TempDir dir;
    const fs::path p = dir.path / "x.txt";
    qpf::write_file_atomic(p, "hello");
    CHECK(read_text(p) == "hello");
    qpf::write_file_atomic(p, "rewritten");
    CHECK(read_text(p) == "rewritten");
    CHECK(!fs::exists(dir.path / "x.txt.tmp"));

    const auto sum1 = qpf::fnv1a64_file(p);
    qpf::write_file_atomic(p, "rewritten!");
    CHECK(qpf::fnv1a64_file(p) != sum1);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, -3.25, 0.1, 1e-17, 123456789.123456789}) {
        const std::string s = qpf::format_double(v);
        CHECK(std::stod(s) == v);
    }
}
