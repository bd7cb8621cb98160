// spikegibbs: stochastic spiking-neuron Gibbs sampler toolkit.
//
// Subcommands: characterize, crossbar, train, classify, noise-sweep,
// kl-eval, replay. Every run writes its outputs plus a manifest JSON
// capturing the fully resolved parameters; `replay <manifest>` re-executes
// a run and reproduces the outputs byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spikegibbs/classify.hpp"
#include "spikegibbs/crossbar.hpp"
#include "spikegibbs/curve.hpp"
#include "spikegibbs/dataset.hpp"
#include "spikegibbs/rbm.hpp"
#include "spikegibbs/report.hpp"
#include "spikegibbs/sampler_spec.hpp"
#include "spikegibbs/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spikegibbs;

namespace {

constexpr const char* kVersion = "spikegibbs 0.1.0";

// ---- manifest ----

void write_manifest(const std::string& path, const std::string& subcommand,
                    std::uint64_t seed, const json& params,
                    const std::vector<std::string>& outputs)
{
    json manifest{{"version", kVersion},
                  {"subcommand", subcommand},
                  {"seed", seed},
                  {"params", params},
                  {"outputs", outputs}};
    save_json(manifest, path);
}

std::string out_dir_manifest(const std::string& out_dir)
{
    return (fs::path(out_dir) / "manifest.json").string();
}

void ensure_dir(const std::string& out_dir)
{
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir);
    }
}

LabeledDataset load_input_dataset(const json& params)
{
    LabeledDataset ds = load_dataset(params.at("images").get<std::string>(),
                                     params.at("labels").get<std::string>(),
                                     params.at("binarize_threshold").get<std::uint8_t>(),
                                     params.at("downsample").get<int>());
    const auto limit = params.at("limit").get<std::uint64_t>();
    if (limit > 0 && limit < ds.images.size()) {
        ds.images.resize(limit);
        ds.labels.resize(limit);
    }
    return ds;
}

QuantizedRbm load_quantized_model(const std::string& path, const SamplerSpec& sampler)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open model file " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed model JSON in " + path + ": " + e.what());
    }
    if (is_quantized_model(j)) {
        return quantized_rbm_from_json(j);
    }
    return quantize(rbm_from_json(j), sampler.scale).rbm;
}

// ---- subcommand payloads (shared by direct runs and replay) ----

void run_characterize(const json& params, const std::string& out_dir)
{
    ensure_dir(out_dir);
    SamplerParams p;
    p.window_steps = params.at("tw").get<int>();
    p.threshold = params.at("vt").get<std::int32_t>();
    p.noise_bits = params.at("tm").get<int>();
    p.leak = params.at("leak").get<std::int32_t>();
    p.scale = params.at("scale").get<double>();
    const auto v_min = params.at("vmin").get<std::int32_t>();
    const auto v_max = params.at("vmax").get<std::int32_t>();
    const auto v_step = params.at("step").get<std::int32_t>();
    const auto samples = params.at("samples").get<std::uint64_t>();
    const auto seed = params.at("seed").get<std::uint64_t>();
    const auto threads = params.at("threads").get<int>();
    const bool oracle = params.at("oracle").get<bool>();

    const ActivationCurve curve =
        oracle ? sweep_oracle(p, v_min, v_max, v_step)
               : sweep_empirical(p, v_min, v_max, v_step, samples, seed, threads);
    write_text_file((fs::path(out_dir) / "curve.csv").string(), curve_csv(curve));

    std::vector<std::string> outputs{"curve.csv", "manifest.json"};
    if (params.at("svg").get<bool>()) {
        const ActivationCurve ideal = sweep_ideal(p.scale, v_min, v_max, v_step);
        const ActivationCurve curves[] = {curve, ideal};
        const std::string names[] = {"digital", "ideal"};
        write_text_file((fs::path(out_dir) / "curve.svg").string(),
                        emit_svg(curves, names));
        outputs.insert(outputs.begin() + 1, "curve.svg");
    }
    write_manifest(out_dir_manifest(out_dir), "characterize", seed, params, outputs);
}

void run_crossbar(const json& params, const std::string& out_dir)
{
    ensure_dir(out_dir);
    const auto v_min = params.at("vmin").get<std::int32_t>();
    const auto v_max = params.at("vmax").get<std::int32_t>();
    if (v_min != -v_max || v_max < 1) {
        throw std::runtime_error("crossbar: weight range must be symmetric, -K..K");
    }
    if (params.at("step").get<std::int32_t>() != 1) {
        throw std::runtime_error("crossbar: weight step must be 1");
    }
    CrossbarHarnessConfig cfg;
    cfg.weight_half_range = v_max;
    cfg.window_steps = params.at("tw").get<int>();
    cfg.threshold = params.at("vt").get<std::int32_t>();
    cfg.noise_bits = params.at("tm").get<int>();
    cfg.leak_weight = params.at("leak").get<std::int32_t>();
    cfg.stimulus_period = cfg.window_steps + 2;
    cfg.n_windows = params.at("samples").get<std::uint64_t>();
    const auto seed = params.at("seed").get<std::uint64_t>();

    const auto result = crossbar_characterize(cfg, seed);
    write_text_file((fs::path(out_dir) / "curve.csv").string(), curve_csv(result.curve));
    write_text_file((fs::path(out_dir) / "raster.csv").string(),
                    raster_csv(result.raster));

    std::vector<std::string> outputs{"curve.csv", "raster.csv", "manifest.json"};
    if (params.at("svg").get<bool>()) {
        const ActivationCurve ideal =
            sweep_ideal(params.at("scale").get<double>(), v_min, v_max, 1);
        const ActivationCurve curves[] = {result.curve, ideal};
        const std::string names[] = {"digital", "ideal"};
        write_text_file((fs::path(out_dir) / "curve.svg").string(),
                        emit_svg(curves, names));
        outputs.insert(outputs.begin() + 2, "curve.svg");
    }
    write_manifest(out_dir_manifest(out_dir), "crossbar", seed, params, outputs);
}

void run_train(const json& params, const std::string& out_model)
{
    const LabeledDataset ds = load_input_dataset(params);
    TrainConfig cfg;
    cfg.n_hidden = params.at("hidden").get<int>();
    cfg.epochs = params.at("epochs").get<int>();
    cfg.learning_rate = params.at("lr").get<double>();
    cfg.minibatch = params.at("minibatch").get<int>();
    cfg.seed = params.at("seed").get<std::uint64_t>();
    cfg.weight_init_sigma = params.at("sigma").get<double>();

    const auto result = build_labeled_rbm(ds, params.at("classes").get<int>(), cfg);
    save_json(to_json(result.rbm), out_model);
    write_manifest(out_model + ".manifest.json", "train", cfg.seed, params,
                   {fs::path(out_model).filename().string()});
    std::printf("trained %d x %d rbm, final reconstruction error %s\n",
                result.rbm.n_visible, result.rbm.n_hidden,
                result.epoch_errors.empty()
                    ? "n/a"
                    : format_number(result.epoch_errors.back()).c_str());
}

ClassifyConfig classify_config(const json& params, const SamplerSpec& sampler)
{
    ClassifyConfig cfg;
    cfg.sampler = sampler.kind;
    cfg.n_gibbs = params.at("gibbs").get<int>();
    cfg.seed = derive_seed(params.at("seed").get<std::uint64_t>(), 0);
    return cfg;
}

void run_classify(const json& params, const std::string& out_csv)
{
    const SamplerSpec sampler = parse_sampler_spec(params.at("sampler").get<std::string>());
    const QuantizedRbm model =
        load_quantized_model(params.at("model").get<std::string>(), sampler);
    const LabeledDataset ds = load_input_dataset(params);
    const int n_classes = params.at("classes").get<int>();
    const auto cfg = classify_config(params, sampler);
    const auto result =
        evaluate(model, ds, n_classes, cfg, params.at("threads").get<int>());
    write_text_file(out_csv, confusion_csv(result));
    write_manifest(out_csv + ".manifest.json", "classify",
                   params.at("seed").get<std::uint64_t>(), params,
                   {fs::path(out_csv).filename().string()});
    std::printf("accuracy %s\n", format_number(result.accuracy).c_str());
}

void run_noise_sweep(const json& params, const std::string& out_csv)
{
    const SamplerSpec sampler = parse_sampler_spec(params.at("sampler").get<std::string>());
    const QuantizedRbm model =
        load_quantized_model(params.at("model").get<std::string>(), sampler);
    const LabeledDataset ds = load_input_dataset(params);
    const int n_classes = params.at("classes").get<int>();
    const auto cfg = classify_config(params, sampler);

    const std::string kind_text = params.at("kind").get<std::string>();
    if (kind_text != "salt" && kind_text != "salt_pepper") {
        throw std::runtime_error("noise kind must be salt or salt_pepper, got " + kind_text);
    }
    const auto kind = kind_text == "salt" ? NoiseProvenance::Kind::salt
                                          : NoiseProvenance::Kind::salt_pepper;
    const auto factors = params.at("factors").get<std::vector<double>>();
    const std::uint64_t noise_seed =
        derive_seed(params.at("seed").get<std::uint64_t>(), 1);
    const auto points = noise_sweep(model, ds, n_classes, cfg, kind, factors, noise_seed,
                                    params.at("threads").get<int>());
    write_text_file(out_csv, noise_csv(points));
    write_manifest(out_csv + ".manifest.json", "noise-sweep",
                   params.at("seed").get<std::uint64_t>(), params,
                   {fs::path(out_csv).filename().string()});
}

void run_kl_eval(const json& params, const std::string& out_csv)
{
    const SamplerSpec sampler = parse_sampler_spec(params.at("sampler").get<std::string>());
    const std::string model_path = params.at("model").get<std::string>();
    const Rbm model = load_rbm(model_path);
    if (model.n_visible + model.n_hidden > 20) {
        throw std::runtime_error("kl-eval: model too large for exact enumeration");
    }
    const QuantizedRbm q = quantize(model, sampler.scale).rbm;
    const auto exact = exact_joint_distribution(model);

    const auto sweeps = params.at("sweeps").get<std::uint64_t>();
    const auto trials = params.at("trials").get<std::uint64_t>();
    const auto seed = params.at("seed").get<std::uint64_t>();
    const double epsilon = params.at("epsilon").get<double>();

    std::vector<double> kls;
    kls.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto chain =
            gibbs_chain(q, std::vector<std::uint8_t>(static_cast<std::size_t>(q.n_visible), 0),
                        sweeps, sampler.kind, derive_seed(seed, t));
        kls.push_back(kl_divergence(exact, chain.histogram, epsilon));
    }
    write_text_file(out_csv, kl_csv(kls));
    write_manifest(out_csv + ".manifest.json", "kl-eval", seed, params,
                   {fs::path(out_csv).filename().string()});
    for (std::size_t t = 0; t < kls.size(); ++t) {
        std::printf("trial %zu kl %s\n", t + 1, format_number(kls[t]).c_str());
    }
}

void dispatch(const std::string& subcommand, const json& params, const std::string& out)
{
    if (subcommand == "characterize") {
        run_characterize(params, out);
    } else if (subcommand == "crossbar") {
        run_crossbar(params, out);
    } else if (subcommand == "train") {
        run_train(params, out);
    } else if (subcommand == "classify") {
        run_classify(params, out);
    } else if (subcommand == "noise-sweep") {
        run_noise_sweep(params, out);
    } else if (subcommand == "kl-eval") {
        run_kl_eval(params, out);
    } else {
        throw std::runtime_error("unknown subcommand in manifest: " + subcommand);
    }
}

void run_replay(const std::string& manifest_path, std::string out)
{
    std::ifstream in(manifest_path);
    if (!in) {
        throw std::runtime_error("cannot open manifest " + manifest_path);
    }
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed manifest JSON in " + manifest_path + ": " +
                                 e.what());
    }
    const std::string subcommand = manifest.at("subcommand").get<std::string>();
    json params = manifest.at("params");
    if (out.empty()) {
        out = params.at("out").get<std::string>();
    } else {
        params["out"] = out;
    }
    dispatch(subcommand, params, out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"stochastic spiking-neuron Gibbs sampler toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // characterize / crossbar
    struct SweepArgs {
        int tw = 16;
        std::int32_t vt = 0;
        int tm = 8;
        std::int32_t leak = 0;
        double scale = 1.0;
        std::int32_t vmin = -100;
        std::int32_t vmax = 100;
        std::int32_t step = 1;
        std::uint64_t samples = 1000;
        std::uint64_t seed = 0;
        std::string out = "out";
        bool svg = false;
        bool oracle = false;
        int threads = 1;
    } sweep;

    const auto add_sweep_flags = [&](CLI::App* cmd, bool oracle_flag) {
        cmd->add_option("--tw", sweep.tw, "sampling window length in steps");
        cmd->add_option("--vt", sweep.vt, "fixed threshold base");
        cmd->add_option("--tm", sweep.tm, "stochastic threshold bit width");
        cmd->add_option("--leak", sweep.leak, "stochastic leak magnitude");
        cmd->add_option("--scale", sweep.scale, "weight scale for the ideal overlay");
        cmd->add_option("--vmin", sweep.vmin, "sweep start");
        cmd->add_option("--vmax", sweep.vmax, "sweep end (inclusive)");
        cmd->add_option("--step", sweep.step, "sweep step");
        cmd->add_option("--samples", sweep.samples,
                        "samples per grid point (crossbar: windows)");
        cmd->add_option("--seed", sweep.seed, "master seed");
        cmd->add_option("--out", sweep.out, "output directory");
        cmd->add_flag("--svg", sweep.svg, "also emit curve.svg");
        if (oracle_flag) {
            cmd->add_flag("--oracle", sweep.oracle,
                          "emit the exact oracle curve instead of sampling");
        }
        cmd->add_option("--threads", sweep.threads, "worker threads");
    };

    auto* characterize = app.add_subcommand("characterize", "sweep an activation curve");
    add_sweep_flags(characterize, true);
    auto* crossbar =
        app.add_subcommand("crossbar", "simulate the crossbar characterization circuit");
    add_sweep_flags(crossbar, false);

    // dataset-consuming commands
    struct DataArgs {
        std::string images;
        std::string labels;
        int binarize_threshold = 128;
        int downsample = 1;
        std::uint64_t limit = 0;
    } data;

    const auto add_data_flags = [&](CLI::App* cmd) {
        cmd->add_option("--images", data.images, "IDX image file (.gz accepted)")
            ->required();
        cmd->add_option("--labels", data.labels, "IDX label file (.gz accepted)")
            ->required();
        cmd->add_option("--binarize-threshold", data.binarize_threshold,
                        "pixel threshold for binarization");
        cmd->add_option("--downsample", data.downsample, "block downsampling factor");
        cmd->add_option("--limit", data.limit, "use only the first N examples (0 = all)");
    };

    struct TrainArgs {
        int hidden = 100;
        int epochs = 30;
        double lr = 0.05;
        int minibatch = 20;
        double sigma = 0.01;
        int classes = 10;
        std::uint64_t seed = 0;
        std::string out = "model.json";
    } train;

    auto* train_cmd = app.add_subcommand("train", "train a labeled rbm with CD-1");
    add_data_flags(train_cmd);
    train_cmd->add_option("--hidden", train.hidden, "hidden units");
    train_cmd->add_option("--epochs", train.epochs, "training epochs");
    train_cmd->add_option("--lr", train.lr, "learning rate");
    train_cmd->add_option("--minibatch", train.minibatch, "minibatch size");
    train_cmd->add_option("--sigma", train.sigma, "weight init sigma");
    train_cmd->add_option("--classes", train.classes, "label classes");
    train_cmd->add_option("--seed", train.seed, "master seed");
    train_cmd->add_option("--out", train.out, "output model JSON");

    struct ClassifyArgs {
        std::string model;
        std::string sampler = "ideal:50";
        int gibbs = 10;
        int classes = 10;
        std::uint64_t seed = 0;
        int threads = 1;
        std::string out = "results.csv";
        std::string kind = "salt";
        std::vector<double> factors;
    } cls;

    auto* classify_cmd =
        app.add_subcommand("classify", "evaluate classification accuracy");
    add_data_flags(classify_cmd);
    classify_cmd->add_option("--model", cls.model, "model JSON")->required();
    classify_cmd->add_option("--sampler", cls.sampler,
                             "ideal:<scale> | digital:<Tw>,<Vt>,<TM>,<leak>:scale=<s>");
    classify_cmd->add_option("--gibbs", cls.gibbs, "clamped label-inference sweeps");
    classify_cmd->add_option("--classes", cls.classes, "label classes");
    classify_cmd->add_option("--seed", cls.seed, "master seed");
    classify_cmd->add_option("--threads", cls.threads, "worker threads");
    classify_cmd->add_option("--out", cls.out, "output CSV");

    auto* noise_cmd =
        app.add_subcommand("noise-sweep", "classification accuracy under pixel noise");
    add_data_flags(noise_cmd);
    noise_cmd->add_option("--model", cls.model, "model JSON")->required();
    noise_cmd->add_option("--sampler", cls.sampler, "sampler spec");
    noise_cmd->add_option("--gibbs", cls.gibbs, "clamped label-inference sweeps");
    noise_cmd->add_option("--classes", cls.classes, "label classes");
    noise_cmd->add_option("--seed", cls.seed, "master seed");
    noise_cmd->add_option("--threads", cls.threads, "worker threads");
    noise_cmd->add_option("--kind", cls.kind, "salt | salt_pepper");
    noise_cmd->add_option("--factors", cls.factors, "noise factors")
        ->delimiter(',')
        ->required();
    noise_cmd->add_option("--out", cls.out, "output CSV");

    struct KlArgs {
        std::string model;
        std::string sampler = "ideal:50";
        std::uint64_t sweeps = 100000;
        std::uint64_t trials = 3;
        std::uint64_t seed = 0;
        double epsilon = 1e-9;
        std::string out = "kl.csv";
    } kl;

    auto* kl_cmd = app.add_subcommand(
        "kl-eval", "KL divergence of sampled joint states against the exact distribution");
    kl_cmd->add_option("--model", kl.model, "model JSON")->required();
    kl_cmd->add_option("--sampler", kl.sampler, "sampler spec");
    kl_cmd->add_option("--sweeps", kl.sweeps, "Gibbs sweeps per trial");
    kl_cmd->add_option("--trials", kl.trials, "independent trials");
    kl_cmd->add_option("--seed", kl.seed, "master seed");
    kl_cmd->add_option("--epsilon", kl.epsilon, "histogram smoothing");
    kl_cmd->add_option("--out", kl.out, "output CSV");

    struct ReplayArgs {
        std::string manifest;
        std::string out;
    } replay;

    auto* replay_cmd =
        app.add_subcommand("replay", "re-run a recorded manifest byte-identically");
    replay_cmd->add_option("manifest", replay.manifest, "manifest JSON")->required();
    replay_cmd->add_option("--out", replay.out, "override output location");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (characterize->parsed() || crossbar->parsed()) {
            json params{{"tw", sweep.tw},          {"vt", sweep.vt},
                        {"tm", sweep.tm},          {"leak", sweep.leak},
                        {"scale", sweep.scale},    {"vmin", sweep.vmin},
                        {"vmax", sweep.vmax},      {"step", sweep.step},
                        {"samples", sweep.samples},{"seed", sweep.seed},
                        {"out", sweep.out},        {"svg", sweep.svg},
                        {"oracle", sweep.oracle},  {"threads", sweep.threads}};
            if (characterize->parsed()) {
                run_characterize(params, sweep.out);
            } else {
                run_crossbar(params, sweep.out);
            }
        } else if (train_cmd->parsed()) {
            json params{{"images", data.images},
                        {"labels", data.labels},
                        {"binarize_threshold", data.binarize_threshold},
                        {"downsample", data.downsample},
                        {"limit", data.limit},
                        {"hidden", train.hidden},
                        {"epochs", train.epochs},
                        {"lr", train.lr},
                        {"minibatch", train.minibatch},
                        {"sigma", train.sigma},
                        {"classes", train.classes},
                        {"seed", train.seed},
                        {"out", train.out}};
            run_train(params, train.out);
        } else if (classify_cmd->parsed() || noise_cmd->parsed()) {
            json params{{"images", data.images},
                        {"labels", data.labels},
                        {"binarize_threshold", data.binarize_threshold},
                        {"downsample", data.downsample},
                        {"limit", data.limit},
                        {"model", cls.model},
                        {"sampler", cls.sampler},
                        {"gibbs", cls.gibbs},
                        {"classes", cls.classes},
                        {"seed", cls.seed},
                        {"threads", cls.threads},
                        {"out", cls.out}};
            if (noise_cmd->parsed()) {
                params["kind"] = cls.kind;
                params["factors"] = cls.factors;
                run_noise_sweep(params, cls.out);
            } else {
                run_classify(params, cls.out);
            }
        } else if (kl_cmd->parsed()) {
            json params{{"model", kl.model},   {"sampler", kl.sampler},
                        {"sweeps", kl.sweeps}, {"trials", kl.trials},
                        {"seed", kl.seed},     {"epsilon", kl.epsilon},
                        {"out", kl.out}};
            run_kl_eval(params, kl.out);
        } else if (replay_cmd->parsed()) {
            run_replay(replay.manifest, replay.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
