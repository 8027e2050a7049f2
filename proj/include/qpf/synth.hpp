#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpf/series.hpp"

namespace qpf {

/// Deterministic test-signal recipe: a polynomial trend, any number of
/// sinusoid/sawtooth components, and optional Gaussian noise.
///
/// Text form (see parse_recipe): components separated by ';', e.g.
///   "trend=1,0.01;sin=24,1;saw=7,0.5,3.5;noise=0.02"
/// sin/saw arguments are period,amplitude[,phase] with the phase in
/// samples. Periodic components are evaluated through the phase folded
/// into one period, so an integer-period component repeats bit-exactly.
struct Wave {
    enum class Shape { sine, sawtooth };
    Shape shape = Shape::sine;
    double period = 0.0;
    double amplitude = 0.0;
    double phase = 0.0; // samples
};

struct SynthRecipe {
    std::vector<double> trend; // ascending-power coefficients in t
    std::vector<Wave> waves;
    double noise_sigma = 0.0;
};

SynthRecipe parse_recipe(const std::string& text);

std::string recipe_to_string(const SynthRecipe& recipe);

/// Pure function of (recipe, length, seed).
Series synth(const SynthRecipe& recipe, std::size_t length, std::uint64_t seed);

} // namespace qpf
