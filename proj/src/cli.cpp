#include "squeeze/cli.hpp"

#include "squeeze/extreme.hpp"
#include "squeeze/husimi.hpp"
#include "squeeze/io.hpp"
#include "squeeze/metrology.hpp"
#include "squeeze/optimizer.hpp"
#include "squeeze/scaling.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace squeeze::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char *kSeeding =
    "restart k draws from std::mt19937_64 seeded with "
    "splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15); restart 0 (free mode) "
    "and restarts k < 2^(n/2) (fixed-shear mode) start from fixed small "
    "parameters";

struct RunConfig {
    std::vector<int> atoms;
    double contrast = 0.9;
    int pulses = 4;
    std::vector<double> q_tilde;
    double gamma = 0.36;
    std::uint64_t seed = 1;
    int jobs = 1;
    int starts = 20;
    int max_iterations = 3000;
    double tolerance = 1e-10;
    std::string out;
    std::string husimi;
    std::string resume;
    std::string kind;
    std::string state = "extreme";
    std::string readout = "x";
    std::vector<double> phases{0.0};
    std::vector<double> params;
};

/// A flag that can also come from a JSON config file and is echoed back.
struct Binding {
    std::string name;
    CLI::Option *option;
    std::function<void(const json &)> load;
    std::function<json()> save;
};

class Registry {
  public:
    explicit Registry(CLI::App *app) : app_(app) {}

    template <class T>
    CLI::Option *bind(const std::string &name, T &field, const std::string &help) {
        CLI::Option *o = app_->add_option("--" + name, field, help);
        if constexpr (requires { field.push_back(field[0]); }) {
            o->delimiter(',');
        }
        bindings_.push_back({name, o,
                             [&field](const json &j) { field = j.get<T>(); },
                             [&field] { return json(field); }});
        return o;
    }

    // Config-file values fill only the flags absent from the command line.
    void apply_config(const json &cfg) const {
        for (const auto &[key, value] : cfg.items()) {
            const Binding *b = find(key);
            SQUEEZE_REQUIRE(b != nullptr, "unknown config key '" + key + "'");
            if (b->option->count() == 0) {
                try {
                    b->load(value);
                } catch (const json::exception &) {
                    throw InvalidArgument("config key '" + key + "' has the wrong type");
                }
            }
        }
    }

    [[nodiscard]] json echo() const {
        json j = json::object();
        for (const auto &b : bindings_) {
            j[b.name] = b.save();
        }
        return j;
    }

  private:
    [[nodiscard]] const Binding *find(const std::string &key) const {
        for (const auto &b : bindings_) {
            if (b.name == key) {
                return &b;
            }
        }
        return nullptr;
    }

    CLI::App *app_;
    std::vector<Binding> bindings_;
};

struct GridSize {
    int n_theta;
    int n_phi;
};

std::optional<GridSize> parse_grid(const std::string &spec) {
    if (spec.empty()) {
        return std::nullopt;
    }
    const auto x = spec.find('x');
    SQUEEZE_REQUIRE(x != std::string::npos, "--husimi expects NxM, got '" + spec + "'");
    int a = 0;
    int b = 0;
    try {
        std::size_t used_a = 0;
        std::size_t used_b = 0;
        a = std::stoi(spec.substr(0, x), &used_a);
        b = std::stoi(spec.substr(x + 1), &used_b);
        SQUEEZE_REQUIRE(used_a == x && used_b == spec.size() - x - 1,
                        "--husimi expects NxM, got '" + spec + "'");
    } catch (const std::logic_error &) {
        throw InvalidArgument("--husimi expects NxM, got '" + spec + "'");
    }
    SQUEEZE_REQUIRE(a >= 2 && b >= 2, "--husimi grid sizes must be >= 2");
    return GridSize{a, b};
}

int single_atoms(const RunConfig &cfg, int min_atoms) {
    SQUEEZE_REQUIRE(cfg.atoms.size() == 1, "--atoms takes a single value here");
    SQUEEZE_REQUIRE(cfg.atoms.front() >= min_atoms,
                    "--atoms must be >= " + std::to_string(min_atoms));
    return cfg.atoms.front();
}

void check_contrast(double c) {
    SQUEEZE_REQUIRE(c > 0.0 && c < 1.0 && std::isfinite(c),
                    "--contrast must lie strictly between 0 and 1");
}

void check_common(const RunConfig &cfg) {
    SQUEEZE_REQUIRE(cfg.jobs >= 1, "--jobs must be >= 1");
    SQUEEZE_REQUIRE(cfg.gamma >= 0.0 && std::isfinite(cfg.gamma),
                    "--gamma must be non-negative");
    SQUEEZE_REQUIRE(cfg.pulses >= 2 && cfg.pulses % 2 == 0,
                    "--pulses must be even and >= 2");
    SQUEEZE_REQUIRE(cfg.starts >= 1, "--starts must be >= 1");
    SQUEEZE_REQUIRE(cfg.max_iterations >= 1, "--max-iterations must be >= 1");
    SQUEEZE_REQUIRE(cfg.tolerance > 0.0, "--tolerance must be positive");
}

fs::path side_file(const RunConfig &cfg, const std::string &suffix) {
    SQUEEZE_REQUIRE(!cfg.out.empty(), "this output needs --out to name its files");
    fs::path p(cfg.out);
    fs::path stem = p.parent_path() / p.stem();
    stem += suffix;
    return stem;
}

json metrology_json(const MetrologyReport &r) {
    return {{"xi2", r.xi2},
            {"gain_db", r.gain_db},
            {"mean_spin", {r.mean_spin[0], r.mean_spin[1], r.mean_spin[2]}},
            {"min_perp_variance", r.min_perp_variance},
            {"squeezed_direction",
             {r.squeezed_direction[0], r.squeezed_direction[1], r.squeezed_direction[2]}},
            {"contrast", r.contrast}};
}

json husimi_summary(const HusimiGrid &g, double total_spin, const fs::path &file) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < g.values.size(); ++k) {
        if (g.values[k] > g.values[best]) {
            best = k;
        }
    }
    const auto n_phi = static_cast<std::size_t>(g.n_phi);
    return {{"file", file.string()},
            {"n_theta", g.n_theta},
            {"n_phi", g.n_phi},
            {"rows", g.values.size()},
            {"normalization", g.normalization(total_spin)},
            {"max_value", g.values[best]},
            {"argmax", {{"theta", g.theta[best / n_phi]}, {"phi", g.phi[best % n_phi]}}}};
}

json write_husimi(const SpinState &state, const GridSize &grid, const fs::path &file) {
    const HusimiGrid g = husimi_grid(state, grid.n_theta, grid.n_phi);
    io::write_file_atomic(file, io::husimi_csv(g));
    return husimi_summary(g, state.system().total_spin(), file);
}

SpinState build_state(const RunConfig &cfg, const SpinSystemPtr &sys) {
    if (cfg.state == "css") {
        return coherent_state(sys, 0.5 * std::numbers::pi, 0.0);
    }
    if (cfg.state == "extreme") {
        check_contrast(cfg.contrast);
        return solve_extreme(sys, cfg.contrast, cfg.tolerance).state;
    }
    SQUEEZE_REQUIRE(!cfg.params.empty(),
                    "--state sequence needs --params Q1,mu2,Q3,mu4,...");
    const PulseSequence seq = PulseSequence::from_parameters(cfg.params);
    return propagate(sequence_initial_state(sys), seq);
}

json cmd_extreme_state(const RunConfig &cfg) {
    const int n = single_atoms(cfg, 2);
    check_contrast(cfg.contrast);
    SQUEEZE_REQUIRE(cfg.tolerance > 0.0, "--tolerance must be positive");
    const auto grid = parse_grid(cfg.husimi);
    const auto sys = build_system(n);
    const ExtremeSolution sol = solve_extreme(sys, cfg.contrast, cfg.tolerance);
    json payload = {{"n_atoms", n},
                    {"target_contrast", cfg.contrast},
                    {"omega_over_chi", sol.omega_over_chi},
                    {"achieved_contrast", sol.achieved_contrast},
                    {"ground_energy", sol.ground_energy},
                    {"xi2", sol.xi2},
                    {"gain_db", gain_db(sol.xi2)},
                    {"metrology", metrology_json(wineland_xi2(sol.state))}};
    if (grid) {
        payload["husimi"] = write_husimi(sol.state, *grid, side_file(cfg, "_husimi.csv"));
    }
    return payload;
}

json cmd_optimize(const RunConfig &cfg) {
    const int n = single_atoms(cfg, 2);
    check_contrast(cfg.contrast);
    check_common(cfg);
    SQUEEZE_REQUIRE(cfg.q_tilde.size() <= 1, "--q-tilde takes a single value here");
    const auto grid = parse_grid(cfg.husimi);
    const auto sys = build_system(n);
    const ExtremeSolution target = solve_extreme(sys, cfg.contrast, cfg.tolerance);

    OptimizationConfig oc;
    oc.n_pulses = cfg.pulses;
    oc.n_starts = cfg.starts;
    oc.seed = cfg.seed;
    oc.max_iterations = cfg.max_iterations;
    oc.parallel = cfg.jobs > 1;
    if (!cfg.q_tilde.empty()) {
        SQUEEZE_REQUIRE(cfg.q_tilde.front() >= 0.0, "--q-tilde must be non-negative");
        oc.fixed_q_tilde = cfg.q_tilde.front();
    }
    const auto runs = run_restarts(sys, target.state, oc);
    const OptimizedSequence best = summarize(sys, best_restart(runs));

    const LossModel loss{cfg.gamma};
    const double c_sc = contrast_loss(loss, best.q_tilde);
    json payload = {{"mode", oc.fixed_q_tilde ? "fixed-shear" : "free"},
                    {"n_atoms", n},
                    {"target",
                     {{"contrast", cfg.contrast},
                      {"omega_over_chi", target.omega_over_chi},
                      {"xi2", target.xi2}}},
                    {"sequence", io::to_json(best.sequence)},
                    {"epsilon", best.epsilon},
                    {"xi2_generated", best.xi2_generated},
                    {"q_tilde", best.q_tilde},
                    {"contrast_loss", c_sc},
                    {"start_index", best.start_index},
                    {"converged", best.converged},
                    {"iterations", best.iterations}};
    if (std::isfinite(best.xi2_generated)) {
        const double xc = corrected_xi2(best.xi2_generated, c_sc);
        payload["gain_db"] = gain_db(best.xi2_generated);
        payload["xi2_corrected"] = xc;
        payload["corrected_gain_db"] = gain_db(xc);
    }
    json restarts = json::array();
    for (const auto &r : runs) {
        restarts.push_back({{"start_index", r.start_index},
                            {"epsilon", r.epsilon},
                            {"converged", r.converged},
                            {"iterations", r.iterations}});
    }
    payload["restarts"] = std::move(restarts);

    if (grid) {
        const SpinState initial = sequence_initial_state(sys);
        json snaps = json::array();
        snaps.push_back(write_husimi(initial, *grid, side_file(cfg, "_pulse0_husimi.csv")));
        const auto states = propagate_snapshots(initial, best.sequence);
        for (std::size_t k = 0; k < states.size(); ++k) {
            snaps.push_back(write_husimi(
                states[k], *grid,
                side_file(cfg, "_pulse" + std::to_string(k + 1) + "_husimi.csv")));
        }
        payload["husimi_snapshots"] = std::move(snaps);
    }
    return payload;
}

std::vector<double> default_shear_grid() {
    std::vector<double> q;
    for (int k = 1; k <= 15; ++k) {
        q.push_back(0.1 * k);
    }
    return q;
}

json fit_json(const SweepTable &table, bool use_corrected) {
    std::vector<double> n;
    std::vector<double> y;
    for (const auto &r : table.rows) {
        n.push_back(r.n_atoms);
        y.push_back(use_corrected ? r.xi2_corrected : r.xi2);
    }
    if (n.size() < 3) {
        return nullptr;
    }
    return io::to_json(power_law_fit(n, y));
}

json cmd_sweep(RunConfig &cfg) {
    check_common(cfg);
    SweepTable table;
    json analysis = json::object();
    if (cfg.kind == "extreme-scaling") {
        check_contrast(cfg.contrast);
        SQUEEZE_REQUIRE(cfg.resume.empty(), "--resume applies to gain-vs-shear sweeps");
        if (cfg.atoms.empty()) {
            cfg.atoms = default_atom_grid(20, 200, 8);
        }
        table = sweep_extreme_scaling(cfg.atoms, cfg.contrast, cfg.jobs);
        analysis["fit"] = fit_json(table, false);
    } else if (cfg.kind == "oat-scaling") {
        SQUEEZE_REQUIRE(cfg.resume.empty(), "--resume applies to gain-vs-shear sweeps");
        if (cfg.atoms.empty()) {
            cfg.atoms = default_atom_grid(20, 300, 8);
        }
        table = sweep_oat_scaling(cfg.atoms, cfg.jobs);
        analysis["fit"] = fit_json(table, false);
        bool interior = true;
        for (const auto &r : table.rows) {
            interior = interior && r.converged;
        }
        analysis["all_minima_interior"] = interior;
    } else {
        check_contrast(cfg.contrast);
        if (cfg.atoms.empty()) {
            cfg.atoms = {50, 100, 200, 350};
        }
        if (cfg.q_tilde.empty()) {
            cfg.q_tilde = default_shear_grid();
        }
        std::vector<SweepRow> completed;
        if (!cfg.resume.empty()) {
            completed = io::parse_sweep_csv(io::read_file(cfg.resume));
        }
        GainSweepOptions opt;
        opt.contrast = cfg.contrast;
        opt.n_pulses = cfg.pulses;
        opt.n_starts = cfg.starts;
        opt.seed = cfg.seed;
        opt.max_iterations = cfg.max_iterations;
        opt.gamma = cfg.gamma;
        opt.jobs = cfg.jobs;

        // Rows land in a progress file as they finish so an interrupted run
        // can be resumed from it.
        std::optional<std::ofstream> progress;
        fs::path progress_path;
        if (!cfg.out.empty()) {
            progress_path = side_file(cfg, ".partial.csv");
            if (progress_path.has_parent_path()) {
                fs::create_directories(progress_path.parent_path());
            }
            const bool fresh = !fs::exists(progress_path);
            progress.emplace(progress_path, std::ios::app);
            if (fresh) {
                *progress << io::sweep_csv_header();
            }
            for (const auto &row : completed) {
                *progress << io::sweep_csv_row(row);
            }
            progress->flush();
        }
        RowCallback on_row;
        if (progress) {
            on_row = [&progress](const SweepRow &row) {
                *progress << io::sweep_csv_row(row);
                progress->flush();
            };
        }
        table = sweep_gain_vs_shear(cfg.atoms, cfg.q_tilde, opt, completed, on_row);
        if (progress) {
            progress.reset();
            fs::remove(progress_path);
        }
        json peaks = json::array();
        for (const auto &p : gain_peaks(table)) {
            peaks.push_back({{"n_atoms", p.n_atoms},
                             {"q_tilde", p.peak.q_tilde},
                             {"gain_db", p.peak.gain_db},
                             {"grid_index", p.peak.index},
                             {"interior", p.peak.interior}});
        }
        json fits = json::array();
        for (const auto &c : column_fits(table)) {
            json f = io::to_json(c.fit);
            f["q_tilde"] = c.q_tilde;
            fits.push_back(std::move(f));
        }
        analysis["peaks"] = std::move(peaks);
        analysis["column_fits"] = std::move(fits);
    }
    json payload = {{"table", io::to_json(table)}, {"analysis", std::move(analysis)}};
    if (!cfg.out.empty()) {
        const fs::path csv = side_file(cfg, ".csv");
        io::write_file_atomic(csv, io::sweep_csv(table));
        payload["csv"] = csv.string();
    }
    return payload;
}

json cmd_ramsey(const RunConfig &cfg) {
    const int n = single_atoms(cfg, 1);
    SQUEEZE_REQUIRE(!cfg.phases.empty(), "--phases must not be empty");
    const auto sys = build_system(n);
    const SpinState input = build_state(cfg, sys);
    const ReadoutAxis axis = cfg.readout == "y" ? ReadoutAxis::Y : ReadoutAxis::X;
    const RotationSequence align = readout_alignment(input, axis);
    const SpinState aligned = apply_rotations(input, align);
    const MetrologyReport rep = wineland_xi2(input);
    const double root_n = std::sqrt(static_cast<double>(n));

    json rows = json::array();
    for (double phase : cfg.phases) {
        json row = {{"phase", phase},
                    {"signal", ramsey_signal(aligned, phase, axis)},
                    {"slope", ramsey_slope(aligned, phase, axis)},
                    {"slope_analytic", ramsey_slope_analytic(aligned, phase, axis)}};
        try {
            const double dphi = ramsey_sensitivity(aligned, phase, axis);
            row["delta_phi"] = dphi;
            row["delta_phi_sqrt_n"] = dphi * root_n;
            row["divergent"] = false;
        } catch (const DivergentSensitivity &) {
            row["delta_phi"] = nullptr;
            row["delta_phi_sqrt_n"] = nullptr;
            row["divergent"] = true;
        }
        rows.push_back(std::move(row));
    }
    const double xi = std::sqrt(rep.xi2);
    const double at_zero = ramsey_sensitivity(aligned, 0.0, axis) * root_n;
    json alignment = json::array();
    for (const auto &r : align) {
        alignment.push_back({{"axis", r.axis == Axis::X ? "x" : r.axis == Axis::Y ? "y" : "z"},
                             {"angle", r.angle}});
    }
    return {{"n_atoms", n},
            {"state", cfg.state},
            {"readout", cfg.readout},
            {"alignment", std::move(alignment)},
            {"metrology", metrology_json(rep)},
            {"xi", xi},
            {"delta_phi_sqrt_n_at_zero", at_zero},
            {"consistency_residual", std::abs(at_zero - xi) / xi},
            {"rows", std::move(rows)}};
}

json cmd_husimi(const RunConfig &cfg) {
    const int n = single_atoms(cfg, 1);
    const GridSize grid = parse_grid(cfg.husimi.empty() ? "64x128" : cfg.husimi).value();
    const auto sys = build_system(n);
    const SpinState state = build_state(cfg, sys);
    json payload = {{"n_atoms", n}, {"state", cfg.state}};
    payload["husimi"] = write_husimi(state, grid, side_file(cfg, "_husimi.csv"));
    return payload;
}

json error_json(const std::string &kind, const std::string &message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

void add_common(Registry &reg, RunConfig &cfg) {
    reg.bind("atoms", cfg.atoms, "Atom number N (comma-separated list for sweeps)");
    reg.bind("contrast", cfg.contrast, "Target contrast <S_x>/S in (0, 1)");
    reg.bind("pulses", cfg.pulses, "Number of pulses n (even)");
    reg.bind("q-tilde", cfg.q_tilde,
             "Fixed normalized shear sqrt(N) sum|Q_k| (grid for gain-vs-shear)");
    reg.bind("gamma", cfg.gamma, "Contrast-loss scale in exp(-gamma Q~)");
    reg.bind("seed", cfg.seed, "64-bit seed for restart streams");
    reg.bind("jobs", cfg.jobs, "Worker threads");
    reg.bind("starts", cfg.starts, "Optimizer restarts");
    reg.bind("max-iterations", cfg.max_iterations, "Iteration cap per restart");
    reg.bind("tolerance", cfg.tolerance, "Contrast tolerance of the extreme-state solve");
    reg.bind("out", cfg.out, "Envelope path; side files are named after its stem");
    reg.bind("husimi", cfg.husimi, "Husimi grid as NxM (n_theta x n_phi)");
    reg.bind("resume", cfg.resume, "Partial sweep CSV whose rows are reused");
}

void add_state(Registry &reg, RunConfig &cfg) {
    reg.bind("state", cfg.state, "Input state")
        ->check(CLI::IsMember({"css", "extreme", "sequence"}));
    reg.bind("params", cfg.params, "Pulse parameters Q1,mu2,... for --state sequence");
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Extreme spin squeezing: states, pulse sequences, metrology"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    struct Sub {
        std::string name;
        CLI::App *app;
        RunConfig cfg;
        std::unique_ptr<Registry> reg;
        std::string config_path;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    auto make = [&](const std::string &name, const std::string &help) -> Sub & {
        auto s = std::make_unique<Sub>();
        s->name = name;
        s->app = app.add_subcommand(name, help);
        s->reg = std::make_unique<Registry>(s->app);
        s->app->add_option("--config", s->config_path,
                           "JSON config (or a previous envelope); flags take precedence");
        subs.push_back(std::move(s));
        return *subs.back();
    };

    Sub &extreme = make("extreme-state", "Solve for the extreme spin-squeezed state");
    add_common(*extreme.reg, extreme.cfg);

    Sub &optimize = make("optimize", "Optimize a twist/rotation pulse sequence");
    add_common(*optimize.reg, optimize.cfg);

    Sub &sweep = make("sweep", "Scaling sweeps");
    add_common(*sweep.reg, sweep.cfg);
    sweep.cfg.kind = "extreme-scaling";
    sweep.reg->bind("kind", sweep.cfg.kind, "Sweep kind")
        ->check(CLI::IsMember({"extreme-scaling", "oat-scaling", "gain-vs-shear"}));

    Sub &ramsey = make("ramsey", "Simulate the Ramsey sequence and its sensitivity");
    add_common(*ramsey.reg, ramsey.cfg);
    add_state(*ramsey.reg, ramsey.cfg);
    ramsey.reg->bind("readout", ramsey.cfg.readout, "Readout axis")
        ->check(CLI::IsMember({"x", "y"}));
    ramsey.reg->bind("phases", ramsey.cfg.phases, "Phase grid (radians)");

    Sub &husimi = make("husimi", "Export a Husimi-Q grid");
    add_common(*husimi.reg, husimi.cfg);
    add_state(*husimi.reg, husimi.cfg);

    const auto started = std::chrono::steady_clock::now();
    Sub *active = nullptr;
    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp &) {
            for (auto &s : subs) {
                if (s->app->parsed()) {
                    out << s->app->help();
                    return 0;
                }
            }
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp &) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::CallForVersion &) {
            out << kVersion << '\n';
            return 0;
        } catch (const CLI::ParseError &e) {
            err << error_json("usage_error", e.what()).dump() << '\n';
            return 2;
        }
        for (auto &s : subs) {
            if (s->app->parsed()) {
                active = s.get();
            }
        }
        if (!active->config_path.empty()) {
            json cfg_json;
            try {
                cfg_json = json::parse(io::read_file(active->config_path));
            } catch (const json::parse_error &e) {
                throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
            }
            if (cfg_json.contains("config") && cfg_json["config"].is_object()) {
                cfg_json = cfg_json["config"];
            }
            SQUEEZE_REQUIRE(cfg_json.is_object(), "config must be a JSON object");
            active->reg->apply_config(cfg_json);
        }
        RunConfig &cfg = active->cfg;
        if (cfg.atoms.empty() && active->name != "sweep") {
            cfg.atoms = {60};
        }
        SQUEEZE_REQUIRE(cfg.jobs >= 1, "--jobs must be >= 1");
        omp_set_num_threads(cfg.jobs);

        json payload;
        if (active->name == "extreme-state") {
            payload = cmd_extreme_state(cfg);
        } else if (active->name == "optimize") {
            payload = cmd_optimize(cfg);
        } else if (active->name == "sweep") {
            payload = cmd_sweep(cfg);
        } else if (active->name == "ramsey") {
            payload = cmd_ramsey(cfg);
        } else {
            payload = cmd_husimi(cfg);
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        json envelope = {{"tool", "xsqueeze"},
                         {"version", kVersion},
                         {"command", active->name},
                         {"config", active->reg->echo()},
                         {"seeding", kSeeding},
                         {"duration_seconds", seconds},
                         {"payload", std::move(payload)}};
        const std::string text = envelope.dump(2) + "\n";
        if (cfg.out.empty()) {
            out << text;
        } else {
            io::write_file_atomic(cfg.out, text);
        }
        return 0;
    } catch (const InvalidArgument &e) {
        err << error_json(e.kind(), e.what()).dump() << '\n';
        return 2;
    } catch (const Error &e) {
        err << error_json(e.kind(), e.what()).dump() << '\n';
        return 1;
    } catch (const std::exception &e) {
        err << error_json("internal_error", e.what()).dump() << '\n';
        return 1;
    }
}

} // namespace squeeze::cli
