#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tessforest/svg.hpp"
#include "tessforest/verify.hpp"

namespace tf = tessforest;
namespace fs = std::filesystem;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitResourceCap = 3;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

int env_threads() {
    const char* v = std::getenv("TESSFOREST_THREADS");
    if (!v) return 0;
    return std::atoi(v);
}

tf::Json load_config(const GlobalArgs& g) {
    tf::Json cfg = tf::Json::object();
    if (!g.config_path.empty()) cfg = tf::Json::parse(tf::read_text_file(g.config_path));
    if (g.seed_set) cfg["seed"] = g.seed;
    if (!cfg.contains("seed")) cfg["seed"] = 0;
    return cfg;
}

struct SamplerConfig {
    tf::Window window{tf::BoxWindow{{0.0, 0.0}, {1.0, 1.0}}};
    tf::DirectionalDistribution phi = tf::DirectionalDistribution::axis(2);
    double lambda = 1.0;
    tf::SamplerKind kind = tf::SamplerKind::Stit;
    int m_trees = 1;
    tf::SamplerOptions opt;
};

SamplerConfig sampler_config(const tf::Json& cfg) {
    SamplerConfig sc;
    if (cfg.contains("window")) sc.window = tf::window_from_json(cfg.at("window"));
    if (cfg.contains("phi")) sc.phi = tf::phi_from_json(cfg.at("phi"));
    if (cfg.contains("lambda")) sc.lambda = cfg.at("lambda").get<double>();
    if (cfg.contains("m_trees")) sc.m_trees = cfg.at("m_trees").get<int>();
    if (cfg.contains("max_cells")) sc.opt.max_cells = cfg.at("max_cells").get<std::size_t>();
    if (cfg.contains("sampler")) {
        std::string k = cfg.at("sampler").get<std::string>();
        if (k == "stit") sc.kind = tf::SamplerKind::Stit;
        else if (k == "pht") sc.kind = tf::SamplerKind::Pht;
        else throw std::invalid_argument("config: sampler must be 'stit' or 'pht'");
    }
    if (!(sc.lambda > 0.0)) throw std::invalid_argument("config: lambda must be positive");
    if (sc.m_trees < 1) throw std::invalid_argument("config: m_trees must be >= 1");
    if (sc.phi.dim() != sc.window.dim())
        throw std::invalid_argument("config: phi and window dimensions differ");
    return sc;
}

fs::path out_file(const GlobalArgs& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return fs::path(g.out_dir) / name;
}

int cmd_sample(const GlobalArgs& g, bool svg, double px_per_unit) {
    tf::Json cfg = load_config(g);
    SamplerConfig sc = sampler_config(cfg);
    std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    tf::RngStream stream(seed);
    tf::Partition p =
        tf::sample_partition(sc.kind, sc.window, sc.phi, sc.lambda, stream.child("sample"), sc.opt);
    tf::Json doc = tf::partition_to_json(p);
    doc["config"] = cfg;
    auto path = out_file(g, "partition.json");
    tf::write_text_file(path.string(), doc.dump(2) + "\n");
    std::cout << "wrote " << path.string() << " (" << p.cell_count() << " cells)\n";
    if (svg) {
        auto spath = out_file(g, "partition.svg");
        tf::write_text_file(spath.string(), tf::render_partition_svg(p, px_per_unit));
        std::cout << "wrote " << spath.string() << "\n";
    }
    return 0;
}

int cmd_fit(const GlobalArgs& g, const std::string& data_path) {
    tf::Json cfg = load_config(g);
    SamplerConfig sc = sampler_config(cfg);
    std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    tf::Dataset data = tf::dataset_from_csv(tf::read_text_file(data_path), sc.window);
    tf::RngStream stream(seed);
    tf::ForestModel model = tf::fit_forest(sc.kind, sc.window, sc.phi, sc.lambda, sc.m_trees, data,
                                           stream.child("fit"), sc.opt);
    tf::Json doc = tf::forest_to_json(model);
    doc["config"] = cfg;
    auto path = out_file(g, "model.json");
    tf::write_text_file(path.string(), doc.dump(2) + "\n");
    std::cout << "wrote " << path.string() << " (" << model.size() << " trees, n=" << data.size()
              << ")\n";
    return 0;
}

int cmd_predict(const GlobalArgs& g, const std::string& model_path, const std::string& data_path) {
    tf::Json doc = tf::Json::parse(tf::read_text_file(model_path));
    tf::ForestModel model = tf::forest_from_json(doc);
    int dim = model.window().dim();
    std::string text = tf::read_text_file(data_path);
    std::vector<tf::Vec> pts = tf::points_from_csv(text, dim);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!tf::window_contains(model.window(), pts[i]))
            throw std::invalid_argument("csv row " + std::to_string(i) + ": point outside window");
    }
    std::ostringstream out;
    out.precision(17);
    for (int i = 1; i <= dim; ++i) out << "x" << i << ",";
    out << "y_hat\n";
    for (const auto& x : pts) {
        for (int i = 0; i < dim; ++i) out << x[static_cast<std::size_t>(i)] << ",";
        out << model.predict(x) << "\n";
    }
    auto path = out_file(g, "predictions.csv");
    tf::write_text_file(path.string(), out.str());
    std::cout << "wrote " << path.string() << " (" << pts.size() << " rows)\n";
    return 0;
}

int cmd_verify(const GlobalArgs& g, const std::string& suite) {
    tf::Json cfg = load_config(g);
    tf::VerifyOptions opt;
    if (cfg.contains("seed") && cfg.at("seed").get<std::uint64_t>() != 0)
        opt.seed = cfg.at("seed").get<std::uint64_t>();
    opt.threads = g.threads;
    tf::SuiteReport report = tf::run_suite(suite, opt);
    tf::Json doc = report.to_json();
    // threads stays out of the echo: it cannot change any reported value.
    doc["config"] = tf::Json{{"seed", opt.seed}, {"suite", suite}};
    auto path = out_file(g, "verify_" + suite + ".json");
    tf::write_text_file(path.string(), doc.dump(2) + "\n");
    for (const auto& [name, content] : report.artifacts) {
        auto apath = out_file(g, name);
        tf::write_text_file(apath.string(), content);
        std::cout << "wrote " << apath.string() << "\n";
    }
    for (const auto& c : report.checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << suite << "/" << c.name << "  observed="
                  << c.observed << " expected=" << c.expected << " tol=" << c.tolerance << "  ("
                  << c.detail << ")\n";
    }
    std::cout << (report.pass() ? "suite passed" : "suite FAILED") << " in "
              << report.elapsed_seconds << "s; report: " << path.string() << "\n";
    return report.pass() ? 0 : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"STIT / Poisson hyperplane tessellations and purely random forests"};
    app.require_subcommand(0, 1);

    bool show_format_version = false;
    app.add_flag("--format-version", show_format_version, "print the file format version and exit");

    GlobalArgs g;
    g.threads = env_threads();

    auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config) sub->add_option("--config", g.config_path, "JSON config file");
        sub->add_option("--seed", g.seed, "master seed (overrides config)")
            ->each([&](const std::string&) { g.seed_set = true; });
        sub->add_option("--threads", g.threads, "worker threads (0 = all)");
        sub->add_option("--out", g.out_dir, "output directory");
    };

    auto* sample = app.add_subcommand("sample", "sample a partition and write its JSON document");
    bool svg = false;
    double px = 256.0;
    add_common(sample, true);
    sample->add_flag("--svg", svg, "also render the partition (d=2 box windows)");
    sample->add_option("--px-per-unit", px, "SVG scale");

    auto* fit = app.add_subcommand("fit", "fit a forest on a CSV dataset");
    std::string data_path;
    add_common(fit, true);
    fit->add_option("--data", data_path, "CSV with header x1..xd,y")->required();

    auto* predict = app.add_subcommand("predict", "predict with a saved model");
    std::string model_path, pred_data_path;
    predict->add_option("--model", model_path, "model JSON")->required();
    predict->add_option("--data", pred_data_path, "CSV with header x1..xd")->required();
    predict->add_option("--out", g.out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "run an acceptance suite");
    std::string suite;
    verify->add_option("suite", suite, "geometry|markov|equality|rates|biasvar")->required();
    add_common(verify, true);

    CLI11_PARSE(app, argc, argv);

    if (show_format_version) {
        std::cout << tf::kFormatVersion << "\n";
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }

    try {
        if (sample->parsed()) return cmd_sample(g, svg, px);
        if (fit->parsed()) return cmd_fit(g, data_path);
        if (predict->parsed()) return cmd_predict(g, model_path, pred_data_path);
        if (verify->parsed()) return cmd_verify(g, suite);
    } catch (const tf::resource_cap_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const tf::Json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
    return 0;
}
