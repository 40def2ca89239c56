// Batch front-end: builds VQE ground-state datasets over the (kappa, h)
// plane, trains/evaluates the QCNN phase classifier and the autoencoder
// baseline, and exports every figure-equivalent as CSV grids.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "annni/anomaly.hpp"
#include "annni/errors.hpp"
#include "annni/io.hpp"
#include "annni/phasemap.hpp"
#include "annni/qcnn.hpp"
#include "annni/version.hpp"
#include "annni/vqe.hpp"

namespace fs = std::filesystem;
using namespace annni;

namespace {

int default_jobs() {
    if (const char* env = std::getenv("ANNNI_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto sep = s.find('x');
    if (sep == std::string::npos)
        throw validation_error("--grid expects KxH, e.g. 32x32");
    const int nk = std::stoi(s.substr(0, sep));
    const int nh = std::stoi(s.substr(sep + 1));
    if (nk < 1 || nh < 1) throw validation_error("--grid sizes must be positive");
    return {nk, nh};
}

SamplerScheme parse_scheme(const std::string& s) {
    if (s == "gc") return SamplerScheme::GC;
    if (s == "g2") return SamplerScheme::G2;
    if (s == "u") return SamplerScheme::U;
    throw validation_error("unknown scheme '" + s + "' (expected gc, g2 or u)");
}

SliceSpec parse_slice(const std::string& s) {
    const auto sep = s.find('=');
    if (sep == std::string::npos)
        throw validation_error("--slice expects h=<value> or kappa=<value>");
    const std::string axis = s.substr(0, sep);
    const double value = std::stod(s.substr(sep + 1));
    if (axis == "h") return {SliceSpec::Axis::FixedH, value};
    if (axis == "kappa") return {SliceSpec::Axis::FixedKappa, value};
    throw validation_error("--slice axis must be h or kappa");
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

void write_loss_trace(const fs::path& path, std::span<const double> trace) {
    std::ofstream out(path, std::ios::binary);
    out << "epoch,loss\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << i << ',' << fmt_double(trace[i]) << "\n";
}

void write_training_points(const fs::path& path, const GroundStateDataset& ds,
                           const std::vector<TrainingPoint>& points) {
    std::ofstream out(path, std::ios::binary);
    out << "kappa,h,label,snapped_kappa,snapped_h\n";
    for (const TrainingPoint& tp : points) {
        const AnnniParams p = ds.params_at(tp.grid_index);
        out << fmt_double(tp.sample.kappa) << ',' << fmt_double(tp.sample.h) << ','
            << phase_name(tp.sample.label) << ',' << fmt_double(p.kappa) << ','
            << fmt_double(p.h) << "\n";
    }
}

// Midpoints of grid edges whose argmax labels differ; consumable as a
// scatter/polyline overlay.
void write_boundary_csv(const fs::path& path, const GroundStateDataset& ds,
                        const Evaluation& ev) {
    std::ofstream out(path, std::ios::binary);
    out << "kappa,h\n";
    const auto& grid = ds.grid;
    for (std::size_t ik = 0; ik < grid.kappa.size(); ++ik) {
        for (std::size_t ih = 0; ih < grid.h.size(); ++ih) {
            const PhaseLabel here = ev.grid[grid.index(ik, ih)].label();
            if (ik + 1 < grid.kappa.size() &&
                ev.grid[grid.index(ik + 1, ih)].label() != here)
                out << fmt_double(0.5 * (grid.kappa[ik] + grid.kappa[ik + 1])) << ','
                    << fmt_double(grid.h[ih]) << "\n";
            if (ih + 1 < grid.h.size() &&
                ev.grid[grid.index(ik, ih + 1)].label() != here)
                out << fmt_double(grid.kappa[ik]) << ','
                    << fmt_double(0.5 * (grid.h[ih] + grid.h[ih + 1])) << "\n";
        }
    }
}

struct DatasetArgs {
    int n_qubits = 6;
    std::string grid = "32x32";
    int depth = 0; // 0 = default for N
    int rounds = 5;
    int steps = 1000;
    std::string recycling = "sweep";
    std::uint64_t seed = 0;
    std::string out;
    bool validate = false;
    bool svg = false;
    int jobs = default_jobs();
    bool quiet = false;
};

int cmd_dataset(const DatasetArgs& a) {
    const auto [nk, nh] = parse_grid(a.grid);
    if (a.recycling != "sweep" && a.recycling != "none")
        throw validation_error("--recycling must be sweep or none");
    const int depth = a.depth > 0 ? a.depth : HeaAnsatz::default_depth(a.n_qubits);

    VqeConfig cfg;
    cfg.rounds = a.rounds;
    cfg.steps_per_round = a.steps;
    cfg.seed = a.seed;
    const Recycling rec = a.recycling == "sweep" ? Recycling::Sweep : Recycling::None;

    const fs::path dir = prepare_out_dir(a.out);
    ProgressFn progress;
    if (!a.quiet) {
        progress = [](std::size_t done, std::size_t total) {
            if (done % 16 == 0 || done == total)
                std::cerr << "\r[dataset] " << done << "/" << total << std::flush;
        };
    }
    GroundStateDataset ds =
        build_dataset(a.n_qubits, depth, make_grid(nk, nh), cfg, rec, a.jobs, progress);
    if (!a.quiet) std::cerr << "\n";

    RunManifest manifest;
    manifest.subcommand = "dataset";
    manifest.config = {{"n_qubits", a.n_qubits}, {"grid", a.grid},
                       {"depth", depth},         {"rounds", a.rounds},
                       {"steps", a.steps},       {"recycling", a.recycling},
                       {"seed", a.seed},         {"validate", a.validate},
                       {"svg", a.svg}};
    manifest.seeds = {a.seed};
    manifest.outputs = {"dataset.bin"};

    if (a.validate) {
        const ValidationReport report = validate_dataset(ds);
        write_grid_csv((dir / "delta_e.csv").string(), ds.grid, report.delta_e,
                       "delta_e");
        write_grid_csv((dir / "fidelity_exact.csv").string(), ds.grid,
                       report.fidelity_exact, "fidelity_exact");
        manifest.outputs.push_back("delta_e.csv");
        manifest.outputs.push_back("fidelity_exact.csv");
        manifest.extra = {{"max_delta_e", report.max_delta_e},
                          {"mean_delta_e", report.mean_delta_e},
                          {"frac_delta_e_below_1pc", report.frac_below_1pc}};
        if (a.svg) {
            write_svg_heatmap((dir / "delta_e.svg").string(), ds.grid, report.delta_e,
                              "delta_e");
            manifest.outputs.push_back("delta_e.svg");
        }
    }

    save_dataset(ds, (dir / "dataset.bin").string());
    manifest.dataset_hash = file_hash_string((dir / "dataset.bin").string());
    write_manifest(dir.string(), manifest);
    return 0;
}

struct TrainArgs {
    std::string dataset;
    std::string scheme = "g2";
    int n = 40;
    double sigma = 0.05;
    int epochs = TrainConfig{}.epochs;
    double lr = TrainConfig{}.lr;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_train_qcnn(const TrainArgs& a) {
    const GroundStateDataset ds = load_dataset(a.dataset);
    SamplerSpec spec{parse_scheme(a.scheme), a.n, a.sigma, a.seed};
    const std::vector<LabeledPoint> points = sample_training_set(spec);

    TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.lr = a.lr;
    cfg.seed = a.seed;
    const TrainedQcnn model = train_qcnn(ds, points, cfg);

    const fs::path dir = prepare_out_dir(a.out);
    QcnnModelFile file;
    file.n_qubits = ds.n_qubits;
    file.params = model.params;
    file.config = cfg;
    file.dataset_hash = file_hash_string(a.dataset);
    file.extra = {{"scheme", a.scheme},
                  {"n", a.n},
                  {"sigma", a.sigma},
                  {"final_loss", model.loss_trace.back()}};
    save_qcnn_model((dir / "model.json").string(), file);
    write_loss_trace(dir / "loss_trace.csv", model.loss_trace);
    write_training_points(dir / "training_points.csv", ds, model.points);

    RunManifest manifest;
    manifest.subcommand = "train-qcnn";
    manifest.config = {{"dataset", a.dataset}, {"scheme", a.scheme}, {"n", a.n},
                       {"sigma", a.sigma},     {"epochs", a.epochs}, {"lr", a.lr},
                       {"seed", a.seed}};
    manifest.seeds = {a.seed};
    manifest.inputs = {a.dataset};
    manifest.outputs = {"model.json", "loss_trace.csv", "training_points.csv"};
    manifest.dataset_hash = file.dataset_hash;
    manifest.extra = {{"final_loss", model.loss_trace.back()}};
    write_manifest(dir.string(), manifest);
    return 0;
}

struct EvalArgs {
    std::string dataset;
    std::string model;
    std::string out;
    int jobs = default_jobs();
    bool svg = false;
};

int cmd_eval(const EvalArgs& a) {
    const GroundStateDataset ds = load_dataset(a.dataset);
    const QcnnModelFile file = load_qcnn_model(a.model);
    if (file.n_qubits != ds.n_qubits)
        throw validation_error("model and dataset qubit counts differ");
    const QcnnArchitecture arch = build_qcnn(file.n_qubits);
    const Evaluation ev = evaluate(ds, arch, file.params, a.jobs);

    const fs::path dir = prepare_out_dir(a.out);
    const char* prob_names[4] = {"p_garbage", "p_ferromagnetic", "p_paramagnetic",
                                 "p_antiphase"};
    std::vector<std::string> outputs;
    for (int j = 0; j < 4; ++j) {
        std::vector<double> grid(ev.grid.size());
        for (std::size_t i = 0; i < ev.grid.size(); ++i) grid[i] = ev.grid[i].p[j];
        const std::string name = "p" + std::to_string(j) + ".csv";
        write_grid_csv((dir / name).string(), ds.grid, grid, prob_names[j]);
        outputs.push_back(name);
        if (a.svg) {
            const std::string svg_name = "p" + std::to_string(j) + ".svg";
            write_svg_heatmap((dir / svg_name).string(), ds.grid, grid, prob_names[j]);
            outputs.push_back(svg_name);
        }
    }
    std::vector<double> labels(ev.grid.size());
    for (std::size_t i = 0; i < ev.grid.size(); ++i)
        labels[i] = static_cast<double>(ev.grid[i].label());
    write_grid_csv((dir / "labels.csv").string(), ds.grid, labels,
                   "label(0=ferro,1=para,2=anti)");
    write_boundary_csv(dir / "boundary.csv", ds, ev);
    outputs.insert(outputs.end(), {"labels.csv", "boundary.csv", "summary.json"});

    {
        std::ofstream summary(dir / "summary.json", std::ios::binary);
        summary << nlohmann::json{{"accuracy", ev.accuracy},
                                  {"mean_garbage_prob", ev.mean_garbage}}
                       .dump(2)
                << "\n";
    }

    RunManifest manifest;
    manifest.subcommand = "eval";
    manifest.config = {{"dataset", a.dataset}, {"model", a.model}, {"svg", a.svg}};
    manifest.inputs = {a.dataset, a.model};
    manifest.outputs = outputs;
    manifest.dataset_hash = file_hash_string(a.dataset);
    manifest.extra = {{"accuracy", ev.accuracy}, {"mean_garbage_prob", ev.mean_garbage}};
    write_manifest(dir.string(), manifest);
    return 0;
}

struct SweepArgs {
    std::string dataset;
    std::string schemes = "gc,g2,u";
    std::string n_list = "4,8,20,40";
    int seeds = 5;
    std::uint64_t seed = 1;
    int epochs = TrainConfig{}.epochs;
    double lr = TrainConfig{}.lr;
    double sigma = 0.05;
    std::string out;
    int jobs = default_jobs();
};

int cmd_sweep_n(const SweepArgs& a) {
    const GroundStateDataset ds = load_dataset(a.dataset);
    if (a.seeds < 1) throw validation_error("--seeds must be >= 1");

    std::vector<std::string> schemes;
    for (std::size_t p = 0; p < a.schemes.size();) {
        const auto comma = a.schemes.find(',', p);
        schemes.push_back(a.schemes.substr(p, comma - p));
        if (comma == std::string::npos) break;
        p = comma + 1;
    }
    std::vector<int> ns;
    for (std::size_t p = 0; p < a.n_list.size();) {
        const auto comma = a.n_list.find(',', p);
        ns.push_back(std::stoi(a.n_list.substr(p, comma - p)));
        if (comma == std::string::npos) break;
        p = comma + 1;
    }

    const fs::path dir = prepare_out_dir(a.out);
    std::ofstream csv(dir / "sweep.csv", std::ios::binary);
    csv << "scheme,n,accuracy_mean,accuracy_std,seeds\n";

    std::vector<std::uint64_t> seeds_used;
    for (const std::string& scheme_str : schemes) {
        const SamplerScheme scheme = parse_scheme(scheme_str);
        for (int n : ns) {
            std::vector<double> accs(a.seeds);
            for (int s = 0; s < a.seeds; ++s) {
                const std::uint64_t run_seed = a.seed + static_cast<std::uint64_t>(s);
                if (seeds_used.size() < static_cast<std::size_t>(a.seeds))
                    seeds_used.push_back(run_seed);
                TrainConfig cfg;
                cfg.epochs = a.epochs;
                cfg.lr = a.lr;
                cfg.seed = run_seed;
                const auto points =
                    sample_training_set({scheme, n, a.sigma, run_seed});
                const TrainedQcnn model = train_qcnn(ds, points, cfg);
                accs[s] =
                    evaluate(ds, model.arch, model.params, a.jobs).accuracy;
            }
            double mean = 0.0;
            for (double v : accs) mean += v;
            mean /= accs.size();
            double var = 0.0;
            for (double v : accs) var += (v - mean) * (v - mean);
            const double stddev =
                accs.size() > 1 ? std::sqrt(var / (accs.size() - 1)) : 0.0;
            csv << scheme_str << ',' << n << ',' << fmt_double(mean) << ','
                << fmt_double(stddev) << ',' << a.seeds << "\n";
            std::cerr << "[sweep-n] " << scheme_str << " n=" << n
                      << " accuracy=" << mean << " +/- " << stddev << "\n";
        }
    }
    csv.close();

    RunManifest manifest;
    manifest.subcommand = "sweep-n";
    manifest.config = {{"dataset", a.dataset}, {"schemes", a.schemes},
                       {"n_list", a.n_list},   {"seeds", a.seeds},
                       {"seed", a.seed},       {"epochs", a.epochs},
                       {"lr", a.lr},           {"sigma", a.sigma}};
    manifest.seeds = seeds_used;
    manifest.inputs = {a.dataset};
    manifest.outputs = {"sweep.csv"};
    manifest.dataset_hash = file_hash_string(a.dataset);
    write_manifest(dir.string(), manifest);
    return 0;
}

struct AnomalyArgs {
    std::string dataset;
    std::string reference = "0.1,0.1";
    int epochs = 1500;
    double lr = 0.05;
    std::uint64_t seed = 0;
    std::string out;
    int jobs = default_jobs();
    bool svg = false;
};

int cmd_anomaly(const AnomalyArgs& a) {
    const GroundStateDataset ds = load_dataset(a.dataset);
    const auto comma = a.reference.find(',');
    if (comma == std::string::npos)
        throw validation_error("--reference expects kappa,h");
    const double ref_kappa = std::stod(a.reference.substr(0, comma));
    const double ref_h = std::stod(a.reference.substr(comma + 1));
    if (ref_kappa < 0.0 || ref_kappa > 1.0 || ref_h < 0.0 || ref_h > 2.0)
        throw std::domain_error("--reference outside the [0,1]x[0,2] window");
    const std::size_t ref_idx = ds.nearest_index(ref_kappa, ref_h);

    TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.lr = a.lr;
    cfg.seed = a.seed;
    const EncoderTrainResult enc = train_encoder(ds, ref_idx, cfg);
    if (enc.reference_near_critical)
        std::cerr << "[anomaly] warning: reference point lies near a critical "
                     "line; score maps may be unstable\n";
    if (!enc.converged)
        std::cerr << "[anomaly] warning: training score " << enc.final_score
                  << " did not reach the 0.05 gate; returning best parameters\n";

    const std::vector<double> scores = score_map(ds, enc.arch, enc.params, a.jobs);
    const fs::path dir = prepare_out_dir(a.out);
    write_grid_csv((dir / "score_map.csv").string(), ds.grid, scores, "anomaly_score");

    const AnnniParams ref = ds.params_at(ref_idx);
    EncoderModelFile file;
    file.n_qubits = ds.n_qubits;
    file.params = enc.params;
    file.config = cfg;
    file.dataset_hash = file_hash_string(a.dataset);
    file.final_score = enc.final_score;
    file.reference_kappa = ref.kappa;
    file.reference_h = ref.h;
    save_encoder_model((dir / "encoder.json").string(), file);

    RunManifest manifest;
    manifest.subcommand = "anomaly";
    manifest.config = {{"dataset", a.dataset}, {"reference", a.reference},
                       {"epochs", a.epochs},   {"lr", a.lr},
                       {"seed", a.seed},       {"svg", a.svg}};
    manifest.seeds = {a.seed};
    manifest.inputs = {a.dataset};
    manifest.outputs = {"encoder.json", "score_map.csv"};
    manifest.dataset_hash = file.dataset_hash;
    manifest.extra = {{"training_score", enc.final_score},
                      {"converged", enc.converged},
                      {"reference_kappa", ref.kappa},
                      {"reference_h", ref.h}};
    if (a.svg) {
        write_svg_heatmap((dir / "score_map.svg").string(), ds.grid, scores,
                          "anomaly_score");
        manifest.outputs.push_back("score_map.svg");
    }
    write_manifest(dir.string(), manifest);
    return 0;
}

struct FidelityArgs {
    std::string dataset;
    std::string slice = "h=0.3";
    std::string out;
};

int cmd_fidelity(const FidelityArgs& a) {
    const GroundStateDataset ds = load_dataset(a.dataset);
    const SliceSpec slice = parse_slice(a.slice);
    const FidelityMatrix m = fidelity_matrix(ds, slice);

    const fs::path dir = prepare_out_dir(a.out);
    const bool fixed_h = slice.axis == SliceSpec::Axis::FixedH;
    write_matrix_csv((dir / "fidelity.csv").string(), m, fixed_h ? "kappa" : "h");

    RunManifest manifest;
    manifest.subcommand = "fidelity";
    manifest.config = {{"dataset", a.dataset}, {"slice", a.slice}};
    manifest.inputs = {a.dataset};
    manifest.outputs = {"fidelity.csv"};
    manifest.dataset_hash = file_hash_string(a.dataset);
    manifest.extra = {{"snapped_value", m.snapped_value}};
    write_manifest(dir.string(), manifest);
    return 0;
}

int cmd_lines(const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    std::ofstream csv(dir / "lines.csv", std::ios::binary);
    csv << "kappa,h_ising,h_commensurate,h_bkt,h_pe\n";
    const int n = 512;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < n; ++i) {
        const double kappa = i * (1.0 / (n - 1));
        const double hi = kappa < 0.5 ? h_ising(kappa) : nan;
        const double hc = kappa > 0.5 ? h_commensurate(kappa) : nan;
        const double hp = kappa > 0.0 ? h_pe(kappa) : nan;
        csv << fmt_double(kappa) << ',' << fmt_double(hi) << ',' << fmt_double(hc)
            << ',' << fmt_double(h_bkt(kappa)) << ',' << fmt_double(hp) << "\n";
    }
    csv.close();

    RunManifest manifest;
    manifest.subcommand = "lines";
    manifest.config = {{"samples", n}};
    manifest.outputs = {"lines.csv"};
    write_manifest(dir.string(), manifest);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ANNNI phase-detection toolkit: VQE dataset generation, QCNN "
                 "phase classification and autoencoder anomaly baseline"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    DatasetArgs da;
    CLI::App* dataset = app.add_subcommand("dataset", "Build a VQE ground-state dataset");
    dataset->add_option("--n-qubits", da.n_qubits, "Chain length (even)");
    dataset->add_option("--grid", da.grid, "Grid size KxH over [0,1]x[0,2]");
    dataset->add_option("--depth", da.depth, "Ansatz depth (default N/2+3)");
    dataset->add_option("--rounds", da.rounds, "Optimization rounds");
    dataset->add_option("--steps", da.steps, "ADAM steps per round");
    dataset->add_option("--recycling", da.recycling, "sweep | none");
    dataset->add_option("--seed", da.seed, "RNG seed");
    dataset->add_option("--out", da.out, "Output directory")->required();
    dataset->add_flag("--validate", da.validate,
                      "Exact-diagonalization delta_e / fidelity grids");
    dataset->add_flag("--svg", da.svg, "Also render SVG heatmaps");
    dataset->add_option("--jobs", da.jobs, "Worker threads (recycling=none only)");
    dataset->add_flag("--quiet", da.quiet, "No progress output");

    TrainArgs ta;
    CLI::App* train = app.add_subcommand("train-qcnn", "Train the QCNN classifier");
    train->add_option("--dataset", ta.dataset, "Dataset file")->required();
    train->add_option("--scheme", ta.scheme, "Sampling scheme: gc | g2 | u");
    train->add_option("--n", ta.n, "Total number of training points");
    train->add_option("--sigma", ta.sigma, "Gaussian sampler std dev");
    train->add_option("--epochs", ta.epochs, "Training epochs");
    train->add_option("--lr", ta.lr, "ADAM learning rate");
    train->add_option("--seed", ta.seed, "RNG seed");
    train->add_option("--out", ta.out, "Output directory")->required();

    EvalArgs ea;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a model on the full grid");
    eval_cmd->add_option("--dataset", ea.dataset, "Dataset file")->required();
    eval_cmd->add_option("--model", ea.model, "Model JSON")->required();
    eval_cmd->add_option("--out", ea.out, "Output directory")->required();
    eval_cmd->add_option("--jobs", ea.jobs, "Worker threads");
    eval_cmd->add_flag("--svg", ea.svg, "Also render SVG heatmaps");

    SweepArgs sa;
    CLI::App* sweep = app.add_subcommand("sweep-n", "Accuracy vs training-set size");
    sweep->add_option("--dataset", sa.dataset, "Dataset file")->required();
    sweep->add_option("--schemes", sa.schemes, "Comma-separated schemes");
    sweep->add_option("--n-list", sa.n_list, "Comma-separated n values");
    sweep->add_option("--seeds", sa.seeds, "Seeds per (scheme, n)");
    sweep->add_option("--seed", sa.seed, "Base seed");
    sweep->add_option("--epochs", sa.epochs, "Training epochs");
    sweep->add_option("--lr", sa.lr, "ADAM learning rate");
    sweep->add_option("--sigma", sa.sigma, "Gaussian sampler std dev");
    sweep->add_option("--out", sa.out, "Output directory")->required();
    sweep->add_option("--jobs", sa.jobs, "Worker threads");

    AnomalyArgs aa;
    CLI::App* anomaly = app.add_subcommand("anomaly", "Autoencoder anomaly baseline");
    anomaly->add_option("--dataset", aa.dataset, "Dataset file")->required();
    anomaly->add_option("--reference", aa.reference, "Reference point kappa,h");
    anomaly->add_option("--epochs", aa.epochs, "Training epochs");
    anomaly->add_option("--lr", aa.lr, "ADAM learning rate");
    anomaly->add_option("--seed", aa.seed, "RNG seed");
    anomaly->add_option("--out", aa.out, "Output directory")->required();
    anomaly->add_option("--jobs", aa.jobs, "Worker threads");
    anomaly->add_flag("--svg", aa.svg, "Also render an SVG heatmap");

    FidelityArgs fa;
    CLI::App* fid = app.add_subcommand("fidelity", "Pairwise fidelities on a grid slice");
    fid->add_option("--dataset", fa.dataset, "Dataset file")->required();
    fid->add_option("--slice", fa.slice, "h=<value> or kappa=<value>");
    fid->add_option("--out", fa.out, "Output directory")->required();

    std::string lines_out;
    CLI::App* lines = app.add_subcommand("lines", "Analytical transition lines");
    lines->add_option("--out", lines_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (dataset->parsed()) return cmd_dataset(da);
        if (train->parsed()) return cmd_train_qcnn(ta);
        if (eval_cmd->parsed()) return cmd_eval(ea);
        if (sweep->parsed()) return cmd_sweep_n(sa);
        if (anomaly->parsed()) return cmd_anomaly(aa);
        if (fid->parsed()) return cmd_fidelity(fa);
        if (lines->parsed()) return cmd_lines(lines_out);
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
