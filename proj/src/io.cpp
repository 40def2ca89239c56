#include "annni/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "annni/errors.hpp"
#include "annni/version.hpp"

namespace annni {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

std::string file_hash_string(const std::string& path) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a_file(path)));
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: fixed "\n" endings
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

} // namespace

void write_grid_csv(const std::string& path, const GridSpec& grid,
                    std::span<const double> values, const std::string& value_name) {
    if (values.size() != grid.points())
        throw std::invalid_argument("write_grid_csv: value count != grid size");
    std::ofstream out = open_out(path);
    out << "kappa,h," << value_name << "\n";
    for (std::size_t ik = 0; ik < grid.kappa.size(); ++ik)
        for (std::size_t ih = 0; ih < grid.h.size(); ++ih)
            out << fmt_double(grid.kappa[ik]) << ',' << fmt_double(grid.h[ih]) << ','
                << fmt_double(values[grid.index(ik, ih)]) << "\n";
}

void write_matrix_csv(const std::string& path, const FidelityMatrix& m,
                      const std::string& axis_name) {
    std::ofstream out = open_out(path);
    out << axis_name;
    for (double v : m.axis_values) out << ',' << fmt_double(v);
    out << "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << fmt_double(m.axis_values[i]);
        for (std::size_t j = 0; j < m.size(); ++j) out << ',' << fmt_double(m.at(i, j));
        out << "\n";
    }
}

namespace {

// five-stop viridis-like ramp
void colormap(double t, int& r, int& g, int& b) {
    static constexpr double stops[5][3] = {{68, 1, 84},
                                           {59, 82, 139},
                                           {33, 145, 140},
                                           {94, 201, 98},
                                           {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int lo = std::min(3, static_cast<int>(t));
    const double f = t - lo;
    r = static_cast<int>(stops[lo][0] + f * (stops[lo + 1][0] - stops[lo][0]));
    g = static_cast<int>(stops[lo][1] + f * (stops[lo + 1][1] - stops[lo][1]));
    b = static_cast<int>(stops[lo][2] + f * (stops[lo + 1][2] - stops[lo][2]));
}

} // namespace

void write_svg_heatmap(const std::string& path, const GridSpec& grid,
                       std::span<const double> values, const std::string& title) {
    if (values.size() != grid.points())
        throw std::invalid_argument("write_svg_heatmap: value count != grid size");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    const int cell = 12;
    const int w = static_cast<int>(grid.kappa.size()) * cell;
    const int h = static_cast<int>(grid.h.size()) * cell;
    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << (h + 18) << "\">\n";
    out << "<title>" << title << "</title>\n";
    out << "<text x=\"2\" y=\"12\" font-size=\"10\">" << title << " [" << fmt_double(lo)
        << ", " << fmt_double(hi) << "]</text>\n";
    for (std::size_t ik = 0; ik < grid.kappa.size(); ++ik) {
        for (std::size_t ih = 0; ih < grid.h.size(); ++ih) {
            int r, g, b;
            colormap((values[grid.index(ik, ih)] - lo) / span, r, g, b);
            // kappa grows to the right, h grows upward
            out << "<rect x=\"" << ik * cell << "\" y=\""
                << 18 + (grid.h.size() - 1 - ih) * cell << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"rgb(" << r << ',' << g << ','
                << b << ")\"/>\n";
        }
    }
    out << "</svg>\n";
}

void write_manifest(const std::string& dir, const RunManifest& m) {
    nlohmann::json j{{"subcommand", m.subcommand},
                     {"config", m.config},
                     {"seeds", m.seeds},
                     {"inputs", m.inputs},
                     {"outputs", m.outputs},
                     {"dataset_hash", m.dataset_hash},
                     {"tool_version", kToolVersion}};
    if (!m.extra.is_null()) j["summary"] = m.extra;
    std::ofstream out = open_out((std::filesystem::path(dir) / "manifest.json").string());
    out << j.dump(2) << "\n";
}

namespace {

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
    return {{"epochs", cfg.epochs},
            {"lr", cfg.lr},
            {"adam_beta1", cfg.adam_beta1},
            {"adam_beta2", cfg.adam_beta2},
            {"adam_eps", cfg.adam_eps},
            {"seed", cfg.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig cfg;
    cfg.epochs = j.at("epochs").get<int>();
    cfg.lr = j.at("lr").get<double>();
    cfg.adam_beta1 = j.at("adam_beta1").get<double>();
    cfg.adam_beta2 = j.at("adam_beta2").get<double>();
    cfg.adam_eps = j.at("adam_eps").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

nlohmann::json load_model_json(const std::string& path, const std::string& format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || j.value("format", "") != format)
        throw validation_error(path + " is not a " + format + " file");
    return j;
}

} // namespace

void save_qcnn_model(const std::string& path, const QcnnModelFile& m) {
    const QcnnArchitecture arch = build_qcnn(m.n_qubits);
    if (m.params.size() != static_cast<std::size_t>(arch.n_params))
        throw std::invalid_argument("save_qcnn_model: parameter length mismatch");
    nlohmann::json j{{"format", "annni-qcnn"},
                     {"version", 1},
                     {"architecture",
                      {{"type", "qcnn"},
                       {"n_qubits", m.n_qubits},
                       {"n_params", arch.n_params},
                       {"n_blocks", arch.blocks.size()}}},
                     {"params", m.params},
                     {"training", train_config_to_json(m.config)},
                     {"dataset_hash", m.dataset_hash}};
    if (!m.extra.is_null()) j["extra"] = m.extra;
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

QcnnModelFile load_qcnn_model(const std::string& path) {
    const nlohmann::json j = load_model_json(path, "annni-qcnn");
    QcnnModelFile m;
    m.n_qubits = j.at("architecture").at("n_qubits").get<int>();
    m.params = j.at("params").get<std::vector<double>>();
    m.config = train_config_from_json(j.at("training"));
    m.dataset_hash = j.at("dataset_hash").get<std::string>();
    if (j.contains("extra")) m.extra = j.at("extra");
    return m;
}

void save_encoder_model(const std::string& path, const EncoderModelFile& m) {
    nlohmann::json j{{"format", "annni-encoder"},
                     {"version", 1},
                     {"architecture",
                      {{"type", "autoencoder"},
                       {"n_qubits", m.n_qubits},
                       {"n_params", 4 * m.n_qubits}}},
                     {"params", m.params},
                     {"training", train_config_to_json(m.config)},
                     {"dataset_hash", m.dataset_hash},
                     {"final_score", m.final_score},
                     {"reference", {{"kappa", m.reference_kappa}, {"h", m.reference_h}}}};
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

EncoderModelFile load_encoder_model(const std::string& path) {
    const nlohmann::json j = load_model_json(path, "annni-encoder");
    EncoderModelFile m;
    m.n_qubits = j.at("architecture").at("n_qubits").get<int>();
    m.params = j.at("params").get<std::vector<double>>();
    m.config = train_config_from_json(j.at("training"));
    m.dataset_hash = j.at("dataset_hash").get<std::string>();
    m.final_score = j.at("final_score").get<double>();
    m.reference_kappa = j.at("reference").at("kappa").get<double>();
    m.reference_h = j.at("reference").at("h").get<double>();
    return m;
}

} // namespace annni
