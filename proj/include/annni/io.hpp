#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "annni/phasemap.hpp"
#include "annni/qcnn.hpp"
#include "annni/vqe.hpp"

namespace annni {

// Shortest exact decimal representation ("%.17g"), reused everywhere so that
// rerunning a manifest reproduces byte-identical files.
std::string fmt_double(double v);

std::uint64_t fnv1a_file(const std::string& path);
std::string file_hash_string(const std::string& path); // "fnv1a:<16 hex digits>"

// Long-format grid CSV: header "kappa,h,<value_name>", one row per grid
// point, kappa-major with h fastest.
void write_grid_csv(const std::string& path, const GridSpec& grid,
                    std::span<const double> values, const std::string& value_name);

// Square matrix CSV: first column carries the varying-axis coordinate, the
// header row repeats it for every column.
void write_matrix_csv(const std::string& path, const FidelityMatrix& m,
                      const std::string& axis_name);

// Minimal self-contained heatmap, one rect per grid cell.
void write_svg_heatmap(const std::string& path, const GridSpec& grid,
                       std::span<const double> values, const std::string& title);

struct RunManifest {
    std::string subcommand;
    nlohmann::json config; // full flag snapshot
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string dataset_hash; // empty when no dataset is consumed
    nlohmann::json extra;     // run summary values (scores, accuracy, ...)
};

// Writes <dir>/manifest.json. Content is a pure function of the run
// configuration and results; no timestamps.
void write_manifest(const std::string& dir, const RunManifest& m);

struct QcnnModelFile {
    int n_qubits = 0;
    std::vector<double> params;
    TrainConfig config;
    std::string dataset_hash;
    nlohmann::json extra;
};

void save_qcnn_model(const std::string& path, const QcnnModelFile& m);
QcnnModelFile load_qcnn_model(const std::string& path);

struct EncoderModelFile {
    int n_qubits = 0;
    std::vector<double> params;
    TrainConfig config;
    std::string dataset_hash;
    double final_score = 0.0;
    double reference_kappa = 0.0;
    double reference_h = 0.0;
};

void save_encoder_model(const std::string& path, const EncoderModelFile& m);
EncoderModelFile load_encoder_model(const std::string& path);

} // namespace annni
