#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "annni/io.hpp"

using namespace annni;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "annni_io_test") {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("grid CSV layout: header plus one row per point, kappa-major") {
    TempDir tmp;
    const GridSpec grid = make_grid(3, 2);
    std::vector<double> values(6);
    for (std::size_t i = 0; i < 6; ++i) values[i] = 0.5 * static_cast<double>(i);
    const auto path = tmp.path / "grid.csv";
    write_grid_csv(path.string(), grid, values, "value");

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "kappa,h,value");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == grid.points());

    // rewriting produces identical bytes
    const std::string first = slurp(path);
    write_grid_csv(path.string(), grid, values, "value");
    CHECK(slurp(path) == first);
}

TEST_CASE("manifest writing is deterministic and timestamp-free") {
    TempDir tmp;
    RunManifest m;
    m.subcommand = "lines";
    m.config = {{"samples", 512}};
    m.outputs = {"lines.csv"};
    write_manifest(tmp.path.string(), m);
    const std::string first = slurp(tmp.path / "manifest.json");
    CHECK(first.find("lines") != std::string::npos);
    CHECK(first.find("tool_version") != std::string::npos);
    write_manifest(tmp.path.string(), m);
    CHECK(slurp(tmp.path / "manifest.json") == first);
}

TEST_CASE("qcnn model file round-trip") {
    TempDir tmp;
    QcnnModelFile m;
    m.n_qubits = 6;
    m.params.assign(37, 0.25);
    m.params[3] = -1.75;
    m.config.epochs = 42;
    m.config.lr = 0.05;
    m.config.seed = 9;
    m.dataset_hash = "fnv1a:0123456789abcdef";
    m.extra = {{"scheme", "g2"}};
    const auto path = tmp.path / "model.json";
    save_qcnn_model(path.string(), m);

    const QcnnModelFile back = load_qcnn_model(path.string());
    CHECK(back.n_qubits == 6);
    CHECK(back.params == m.params);
    CHECK(back.config.epochs == 42);
    CHECK(back.config.seed == 9);
    CHECK(back.dataset_hash == m.dataset_hash);
    CHECK(back.extra.at("scheme") == "g2");

    // wrong parameter count is rejected on save
    m.params.resize(10);
    CHECK_THROWS_AS(save_qcnn_model(path.string(), m), std::invalid_argument);
}

TEST_CASE("encoder model file round-trip") {
    TempDir tmp;
    EncoderModelFile m;
    m.n_qubits = 6;
    m.params.assign(24, 0.5);
    m.config.seed = 3;
    m.dataset_hash = "fnv1a:0";
    m.final_score = 0.01;
    m.reference_kappa = 0.1;
    m.reference_h = 0.1;
    const auto path = tmp.path / "encoder.json";
    save_encoder_model(path.string(), m);
    const EncoderModelFile back = load_encoder_model(path.string());
    CHECK(back.params == m.params);
    CHECK(back.final_score == m.final_score);
    CHECK(back.reference_kappa == m.reference_kappa);

    CHECK_THROWS(load_qcnn_model(path.string())); // wrong format tag
}

TEST_CASE("fnv1a file hash is stable and content-sensitive") {
    TempDir tmp;
    const auto path = tmp.path / "blob.bin";
    {
        std::ofstream out(path, std::ios::binary);
        out << "annni";
    }
    const std::uint64_t h1 = fnv1a_file(path.string());
    CHECK(h1 == fnv1a_file(path.string()));
    {
        std::ofstream out(path, std::ios::binary);
        out << "ANNNI";
    }
    CHECK(h1 != fnv1a_file(path.string()));
    CHECK(file_hash_string(path.string()).substr(0, 6) == "fnv1a:");
}

TEST_CASE("svg heatmap renders one rect per cell") {
    TempDir tmp;
    const GridSpec grid = make_grid(4, 3);
    std::vector<double> values(12, 0.0);
    values[5] = 1.0;
    const auto path = tmp.path / "map.svg";
    write_svg_heatmap(path.string(), grid, values, "test");
    const std::string svg = slurp(path);
    std::size_t rects = 0, pos = 0;
    while ((pos = svg.find("<rect", pos)) != std::string::npos) {
        ++rects;
        pos += 5;
    }
    CHECK(rects == 12);
}

TEST_CASE("fmt_double round-trips doubles exactly") {
    for (double v : {0.1, -1.0 / 3.0, 1e-17, 123456.789, 0.0}) {
        CHECK(std::stod(fmt_double(v)) == v);
    }
}
