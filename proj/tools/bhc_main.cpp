#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <bhc/bhc.hpp>

namespace {

using bhc::json;

// Parameter flags shared by every subcommand. Values layer preset -> config
// file -> explicit flags, later layers winning field by field.
struct ParamCli {
    long long n = 0;
    double alpha = 0.0;
    double eps1 = 1.0;
    double eps2 = 1.0;
    std::string omega = "0";
    int L = 9;
    int M = 4;
    std::string preset_name;
    std::string config_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--preset", preset_name, "named parameter set: theorem or practical");
        cmd->add_option("--config", config_path,
                        "JSON file with any of n, alpha, omega, eps1, eps2, L, M; flags override");
        cmd->add_option("--n", n, "number of nodes");
        cmd->add_option("--alpha", alpha, "log log n coefficient in the radius");
        cmd->add_option("--omega", omega, "divergent radius term: a number, or 'loglogn'");
        cmd->add_option("--eps1", eps1, "density lower bound, in (0, 1]");
        cmd->add_option("--eps2", eps2, "density upper bound, >= eps1");
        cmd->add_option("--L", L, "dense-tile threshold, >= 9");
        cmd->add_option("--M", M, "requested rectangle width in tiles");
    }

    static double parse_omega(const std::string& text, long long n_resolved) {
        if (text == "loglogn") {
            if (n_resolved < 3)
                throw std::invalid_argument("--omega loglogn needs n >= 3, got n=" +
                                            std::to_string(n_resolved));
            return bhc::log_log(n_resolved);
        }
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0')
            throw std::invalid_argument("--omega expects a number or 'loglogn', got '" + text +
                                        "'");
        return v;
    }

    bhc::ModelParams resolve(const CLI::App* cmd) const {
        bhc::ModelParams p;
        std::string deferred_omega;  // config-supplied string, resolved against final n

        if (cmd->count("--preset")) p = bhc::preset(preset_name);

        if (cmd->count("--config")) {
            std::ifstream in(config_path);
            if (!in.good())
                throw std::invalid_argument("cannot read config file '" + config_path + "'");
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw std::invalid_argument("config file '" + config_path + "': " + e.what());
            }
            if (!j.is_object())
                throw std::invalid_argument("config file must hold a JSON object");
            for (auto it = j.begin(); it != j.end(); ++it) {
                const std::string& key = it.key();
                const json& v = it.value();
                if (key == "n")
                    p.n = v.get<long long>();
                else if (key == "alpha")
                    p.alpha = v.get<double>();
                else if (key == "omega") {
                    if (v.is_string())
                        deferred_omega = v.get<std::string>();
                    else
                        p.omega = v.get<double>();
                } else if (key == "eps1")
                    p.eps1 = v.get<double>();
                else if (key == "eps2")
                    p.eps2 = v.get<double>();
                else if (key == "L")
                    p.L = v.get<int>();
                else if (key == "M")
                    p.M = v.get<int>();
                else
                    throw std::invalid_argument("config file: unknown key '" + key + "'");
            }
        }

        if (cmd->count("--n")) p.n = n;
        if (cmd->count("--alpha")) p.alpha = alpha;
        if (cmd->count("--eps1")) p.eps1 = eps1;
        if (cmd->count("--eps2")) p.eps2 = eps2;
        if (cmd->count("--L")) p.L = L;
        if (cmd->count("--M")) p.M = M;

        if (p.n <= 0)
            throw std::invalid_argument(
                "--n is required (directly, via --preset, or via --config)");

        if (cmd->count("--omega"))
            p.omega = parse_omega(omega, p.n);
        else if (!deferred_omega.empty())
            p.omega = parse_omega(deferred_omega, p.n);

        p.validate();
        return p;
    }
};

struct DensityCli {
    std::string kind = "uniform";
    std::string file;

    void attach(CLI::App* cmd) {
        cmd->add_option("--density", kind, "sampling density: uniform or step")
            ->check(CLI::IsMember({"uniform", "step"}));
        cmd->add_option("--density-file", file,
                        "JSON array of step patches {x0, y0, x1, y1, weight}");
    }

    bhc::Density resolve() const {
        if (kind == "uniform") {
            if (!file.empty())
                throw std::invalid_argument("--density-file requires --density step");
            return bhc::Density::uniform();
        }
        if (file.empty())
            throw std::invalid_argument("--density step requires --density-file");
        std::ifstream in(file);
        if (!in.good()) throw std::invalid_argument("cannot read density file '" + file + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw std::invalid_argument("density file '" + file + "': " + e.what());
        }
        if (!j.is_array()) throw std::invalid_argument("density file must hold a JSON array");
        std::vector<bhc::DensityPatch> patches;
        for (const json& entry : j) {
            if (!entry.is_object())
                throw std::invalid_argument("density patches must be JSON objects");
            bhc::DensityPatch patch;
            try {
                patch.x0 = entry.at("x0").get<double>();
                patch.y0 = entry.at("y0").get<double>();
                patch.x1 = entry.at("x1").get<double>();
                patch.y1 = entry.at("y1").get<double>();
                patch.weight = entry.at("weight").get<double>();
            } catch (const json::exception& e) {
                throw std::invalid_argument(std::string("density patch: ") + e.what());
            }
            patches.push_back(patch);
        }
        return bhc::Density::step(patches);
    }
};

bhc::TrialMode parse_mode(const std::string& text) {
    if (text == "strict") return bhc::TrialMode::strict;
    if (text == "best-effort" || text == "best_effort") return bhc::TrialMode::best_effort;
    throw std::invalid_argument("--mode expects strict or best-effort, got '" + text + "'");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << content;
    if (!out.good()) throw std::invalid_argument("write to '" + path + "' failed");
}

bhc::Instance make_instance(const bhc::ModelParams& p, const DensityCli& density,
                            const std::string& points_path, std::uint64_t seed) {
    if (points_path.empty()) return bhc::sample_nodes(p, density.resolve(), seed);
    if (density.kind != "uniform" || !density.file.empty())
        std::cerr << "note: --points overrides --density; the point set is taken as given\n";
    std::ifstream in(points_path);
    if (!in.good())
        throw std::invalid_argument("cannot read points file '" + points_path + "'");
    std::vector<bhc::Point> pts = bhc::read_points_csv(in);
    bhc::ModelParams adjusted = p;
    adjusted.n = static_cast<long long>(pts.size());
    return bhc::instance_from_points(adjusted, std::move(pts), seed);
}

std::string render_trial(const bhc::Instance& inst, const bhc::TrialOutput& out) {
    return bhc::render_svg(&inst, out.grid ? &*out.grid : nullptr,
                           out.backbone ? &*out.backbone : nullptr,
                           out.cycle ? &*out.cycle : nullptr, inst.r_n);
}

int cmd_params(const CLI::App* cmd, const ParamCli& params) {
    const bhc::ModelParams p = params.resolve(cmd);
    std::cout << bhc::params_to_json(p).dump(2) << '\n';
    return 0;
}

int cmd_run(const CLI::App* cmd, const ParamCli& params, const DensityCli& density,
            std::uint64_t seed, const std::string& mode_text, const std::string& points_path,
            const std::string& svg_path, const std::string& out_path) {
    const bhc::ModelParams base = params.resolve(cmd);
    const bhc::TrialMode mode = parse_mode(mode_text);
    const bhc::Instance inst = make_instance(base, density, points_path, seed);
    bhc::ModelParams p = base;
    p.n = inst.n;  // --points may change the count
    if (!points_path.empty()) p.validate();

    const bhc::TrialOutput out = bhc::run_trial_on(p, inst, mode);
    const std::string report = bhc::trial_report_to_json(out.report).dump(2);
    std::cout << report << '\n';
    if (!svg_path.empty()) write_file(svg_path, render_trial(inst, out));
    if (!out_path.empty()) write_file(out_path, report + "\n");

    if (!out.report.success) {
        std::cerr << "trial failed: " << out.report.failure_reason << '\n';
        return 1;
    }
    return 0;
}

int cmd_montecarlo(const CLI::App* cmd, const ParamCli& params, const DensityCli& density,
                   long long trials, std::uint64_t base_seed, const std::string& mode_text,
                   int jobs, const std::string& csv_path, const std::string& out_path) {
    const bhc::ModelParams p = params.resolve(cmd);
    const bhc::TrialMode mode = parse_mode(mode_text);
    const bhc::Density d = density.resolve();

    std::cerr << "running " << trials << " trial(s), seeds " << base_seed << ".."
              << (base_seed + static_cast<std::uint64_t>(trials) - 1) << ", mode "
              << bhc::mode_name(mode) << '\n';
    const bhc::BatchSummary summary = bhc::run_batch(p, d, trials, base_seed, mode, jobs);

    if (!csv_path.empty()) {
        std::ostringstream os;
        bhc::write_batch_csv(os, summary.rows);
        write_file(csv_path, os.str());
        std::cerr << "per-trial rows written to " << csv_path << '\n';
    }
    const std::string text = bhc::summary_to_json(summary).dump(2);
    std::cout << text << '\n';
    if (!out_path.empty()) write_file(out_path, text + "\n");
    return 0;
}

int cmd_render(const CLI::App* cmd, const ParamCli& params, const DensityCli& density,
               std::uint64_t seed, const std::string& mode_text, const std::string& points_path,
               const std::string& out_path) {
    const bhc::ModelParams base = params.resolve(cmd);
    const bhc::TrialMode mode = parse_mode(mode_text);
    const bhc::Instance inst = make_instance(base, density, points_path, seed);
    bhc::ModelParams p = base;
    p.n = inst.n;
    if (!points_path.empty()) p.validate();

    const bhc::TrialOutput out = bhc::run_trial_on(p, inst, mode);
    write_file(out_path, render_trial(inst, out));
    if (!out.cycle)
        std::cerr << "note: no cycle layer (" << out.report.failure_reason << ")\n";
    std::cerr << "figure written to " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bridged Hamiltonian cycles in sub-critical random geometric graphs"};
    app.require_subcommand(1);

    ParamCli params;
    DensityCli density;
    std::uint64_t seed = 1, base_seed = 1;
    long long trials = 100;
    int jobs = 0;
    std::string mode_text = "strict", render_mode_text = "best-effort";
    std::string points_path, svg_path, out_path, csv_path, render_out;

    CLI::App* c_params = app.add_subcommand("params", "print derived model quantities as JSON");
    params.attach(c_params);

    CLI::App* c_run = app.add_subcommand("run", "run one seeded trial; report JSON on stdout");
    params.attach(c_run);
    density.attach(c_run);
    c_run->add_option("--seed", seed, "trial seed");
    c_run->add_option("--mode", mode_text, "strict or best-effort");
    c_run->add_option("--points", points_path, "CSV point set to use instead of sampling");
    c_run->add_option("--svg", svg_path, "also render the trial figure to this file");
    c_run->add_option("--out", out_path, "also write the report JSON to this file");

    CLI::App* c_mc =
        app.add_subcommand("montecarlo", "run a seeded batch; summary JSON on stdout");
    params.attach(c_mc);
    density.attach(c_mc);
    c_mc->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
    c_mc->add_option("--base-seed", base_seed, "seed of the first trial");
    c_mc->add_option("--mode", mode_text, "strict or best-effort");
    c_mc->add_option("--jobs", jobs, "worker threads; 0 = all available");
    c_mc->add_option("--csv", csv_path, "write per-trial rows to this CSV file");
    c_mc->add_option("--out", out_path, "also write the summary JSON to this file");

    CLI::App* c_render = app.add_subcommand("render", "render one trial figure as SVG");
    params.attach(c_render);
    density.attach(c_render);
    c_render->add_option("--seed", seed, "trial seed");
    c_render->add_option("--mode", render_mode_text, "strict or best-effort");
    c_render->add_option("--points", points_path, "CSV point set to use instead of sampling");
    c_render->add_option("--out", render_out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << '\n';
        return 2;
    }

    try {
        if (c_params->parsed()) return cmd_params(c_params, params);
        if (c_run->parsed())
            return cmd_run(c_run, params, density, seed, mode_text, points_path, svg_path,
                           out_path);
        if (c_mc->parsed())
            return cmd_montecarlo(c_mc, params, density, trials, base_seed, mode_text, jobs,
                                  csv_path, out_path);
        if (c_render->parsed())
            return cmd_render(c_render, params, density, seed, render_mode_text, points_path,
                              render_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
