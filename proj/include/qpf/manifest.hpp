#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qpf/forecast.hpp"

namespace qpf {

/// Provenance of the fitted data, recorded in the manifest so a run can be
/// reproduced from the report plus the input file.
struct DatasetInfo {
    std::string path = "(memory)";
    std::uint64_t checksum = 0; // FNV-1a 64 of the raw file, 0 for in-memory data
    std::string value_column;
};

struct EmitResult {
    std::filesystem::path manifest;
    std::filesystem::path forecast_csv;
    std::filesystem::path plot_actual;
    std::filesystem::path plot_predicted;
};

/// The run manifest: options echo, dataset fingerprint, explicit sample
/// windows, per-iteration summaries and metrics, serialized model state,
/// and the final metric table. Deterministic byte-for-byte for a given
/// model. The schema is documented in the README.
std::string render_manifest(const Model& model, const DatasetInfo& dataset);

/// Forecast rows over `horizon` samples past the pre-test range:
/// index,label?,actual?,predicted plus per-iteration trend_k/periodic_k
/// columns. Label and actual columns appear only where the input carries
/// them.
std::string render_forecast_csv(const Model& model, std::size_t horizon);

/// Two-column (index,value) file, one for the actuals and one for the
/// fitted-plus-forecast prediction, ready for overlay plots.
std::string render_plot_actual(const Model& model);
std::string render_plot_predicted(const Model& model, std::size_t horizon);

/// Writes manifest.txt, forecast.csv, plot_actual.csv and
/// plot_predicted.csv under `out_dir` (created if needed). All writes are
/// atomic; re-emitting the same model yields byte-identical files.
EmitResult emit(const Model& model, const DatasetInfo& dataset,
                const std::filesystem::path& out_dir);

struct LoadedManifest {
    Model model; // enough state to extend forecasts; input series is empty
    DatasetInfo dataset;
};

/// Parses a manifest back into a forecast-ready model.
LoadedManifest read_manifest(const std::filesystem::path& path);

} // namespace qpf
