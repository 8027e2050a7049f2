#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qpf/period.hpp"
#include "qpf/synth.hpp"

using qpf::Error;
using qpf::Series;

TEST_CASE("lsg score on simple inputs") {
    CHECK(qpf::lsg_score(Series({5, 5, 5, 5, 5, 5}), 2) == 0.0);
    CHECK(qpf::lsg_score(Series({1, 2, 3, 1, 2, 3, 1, 2, 3}), 3) == 0.0);
    // segments [1,2],[3,4],[5,6]; per-pair sums 4 and 4; (4/2 + 4/2)/2 = 2
    CHECK(qpf::lsg_score(Series({1, 2, 3, 4, 5, 6}), 2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(qpf::lsg_score(Series({1, 2, 3}), 2), Error);
}

TEST_CASE("lsg matches the segment-based oracle") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> len_dist(10, 120);
    std::uniform_real_distribution<double> uni(-10.0, 10.0);
    for (int rep = 0; rep < 40; ++rep) {
        const int len = len_dist(rng);
        std::vector<double> v(static_cast<std::size_t>(len));
        for (auto& x : v) x = uni(rng);
        const Series s(v);
        for (int t = 1; t <= len / 2; ++t) {
            const double got = qpf::lsg_score(s, t);
            const double want = oracle::lsg(v, t);
            CHECK(oracle::rel_diff(got, want) < 1e-12);
        }
    }
}

TEST_CASE("lsg invariances") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    std::vector<double> v(64);
    for (auto& x : v) x = uni(rng);
    const Series s(v);

    SUBCASE("adding a constant changes nothing") {
        std::vector<double> shifted(v);
        for (auto& x : shifted) x += 7.25;
        const Series t(shifted);
        for (int period : {2, 5, 13, 32}) {
            CHECK(oracle::rel_diff(qpf::lsg_score(s, period), qpf::lsg_score(t, period)) < 1e-12);
        }
    }
    SUBCASE("positive scaling scales the score") {
        const double c = 3.5;
        std::vector<double> scaled(v);
        for (auto& x : scaled) x *= c;
        const Series t(scaled);
        for (int period : {2, 5, 13, 32}) {
            CHECK(oracle::rel_diff(qpf::lsg_score(t, period), c * qpf::lsg_score(s, period)) <
                  1e-12);
        }
    }
}

TEST_CASE("scan finds exact periods and breaks ties to the smallest") {
    SUBCASE("sinusoid of period 24 over ten cycles") {
        const auto recipe = qpf::parse_recipe("sin=24,1");
        const Series s = qpf::synth(recipe, 240, 0);
        const auto scan = qpf::scan_semi_period(s, 2, 120);
        CHECK(scan.best_period == 24);
        CHECK(scan.best_score == 0.0);
        CHECK(scan.score_at(48) == 0.0); // multiple also zero, tie-break took 24
        CHECK(scan.score_at(23) > 0.0);
    }
    SUBCASE("constant series picks t_min") {
        const Series s(std::vector<double>(40, 2.5));
        const auto scan = qpf::scan_semi_period(s, 2, 20);
        CHECK(scan.best_period == 2);
        CHECK(scan.best_score == 0.0);
    }
    SUBCASE("integer sawtooth") {
        std::vector<double> v;
        for (int i = 0; i < 70; ++i) v.push_back(static_cast<double>(i % 7));
        const auto scan = qpf::scan_semi_period(Series(v), 2, 35);
        CHECK(scan.best_period == 7);
    }
    SUBCASE("range validation") {
        const Series s(std::vector<double>(20, 1.0));
        CHECK_THROWS_AS(qpf::scan_semi_period(s, 5, 4), Error);
        CHECK_THROWS_AS(qpf::scan_semi_period(s, 2, 11), Error);
        CHECK_THROWS_AS(qpf::scan_semi_period(s, 1, 5), Error);
    }
}

TEST_CASE("parallel scan is bit-identical to the serial reference") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const auto base = qpf::synth(qpf::parse_recipe("trend=0,0.02;sin=12,1;noise=0.1"), 300, 5);
    std::vector<double> v = base.values();
    for (auto& x : v) x += uni(rng) * 0.01;
    const Series s(v);

    const auto parallel = qpf::scan_semi_period(s, 2, 150);
    const auto serial = qpf::scan_semi_period_serial(s, 2, 150);
    REQUIRE(parallel.scores.size() == serial.scores.size());
    for (std::size_t i = 0; i < parallel.scores.size(); ++i) {
        CHECK(parallel.scores[i] == serial.scores[i]);
    }
    CHECK(parallel.best_period == serial.best_period);
    CHECK(parallel.best_score == serial.best_score);
}

TEST_CASE("smooth3 shrinks at the edges") {
    const Series s({3, 6, 9, 12});
    const auto sm = qpf::smooth3(s);
    CHECK(sm[0] == doctest::Approx(4.5));
    CHECK(sm[1] == doctest::Approx(6.0));
    CHECK(sm[2] == doctest::Approx(9.0));
    CHECK(sm[3] == doctest::Approx(10.5));
}
