#include "squeeze/scaling.hpp"

#include "squeeze/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace squeeze {

namespace {

std::vector<int> sorted_unique_atoms(std::span<const int> atoms, int min_atoms) {
    SQUEEZE_REQUIRE(!atoms.empty(), "atom list must not be empty");
    std::vector<int> out(atoms.begin(), atoms.end());
    std::sort(out.begin(), out.end());
    SQUEEZE_REQUIRE(std::adjacent_find(out.begin(), out.end()) == out.end(),
                    "atom list contains duplicates");
    SQUEEZE_REQUIRE(out.front() >= min_atoms,
                    "atom number below the minimum for this sweep");
    return out;
}

double oat_xi2(const SpinSystemPtr &system, const VectorXcd &css, double shear) {
    VectorXcd psi = css;
    system->twist_inplace(psi, shear);
    return wineland_xi2(SpinState(system, std::move(psi))).xi2;
}

bool same_key(const SweepRow &row, int n, double q) {
    return row.n_atoms == n && row.q_tilde &&
           std::abs(*row.q_tilde - q) <= 1e-12 * std::max(1.0, std::abs(q));
}

} // namespace

PowerLawFit power_law_fit(std::span<const double> n, std::span<const double> y) {
    SQUEEZE_REQUIRE(n.size() == y.size(), "fit needs matching N and y lists");
    SQUEEZE_REQUIRE(n.size() >= 3, "fit needs at least 3 points");
    const auto k = static_cast<double>(n.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        SQUEEZE_REQUIRE(n[i] >= 1.0, "fit needs N >= 1");
        SQUEEZE_REQUIRE(y[i] > 0.0 && std::isfinite(y[i]),
                        "fit needs positive finite y");
        sx += std::log(n[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / k;
    const double my = sy / k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double dx = std::log(n[i]) - mx;
        const double dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    SQUEEZE_REQUIRE(sxx > 0.0, "fit needs at least two distinct N");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double r = std::log(y[i]) - (intercept + slope * std::log(n[i]));
        ss_res += r * r;
    }
    // Scale-aware zero test so exact power laws report r^2 = 1.
    double r2 = 1.0;
    if (syy > 1e-28 * std::max(1.0, my * my)) {
        r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return {std::exp(intercept), -slope, r2};
}

std::vector<int> default_atom_grid(int lo, int hi, int count) {
    SQUEEZE_REQUIRE(lo >= 2 && hi > lo && count >= 2, "invalid atom grid");
    std::vector<int> out;
    const double ratio = std::log(static_cast<double>(hi) / lo);
    for (int k = 0; k < count; ++k) {
        const double v = lo * std::exp(ratio * k / (count - 1));
        const int even = 2 * static_cast<int>(std::lround(0.5 * v));
        if (out.empty() || even != out.back()) {
            out.push_back(even);
        }
    }
    return out;
}

SweepTable sweep_extreme_scaling(std::span<const int> atoms, double contrast,
                                 int jobs) {
    const std::vector<int> ns = sorted_unique_atoms(atoms, 2);
    SQUEEZE_REQUIRE(jobs >= 1, "jobs must be >= 1");
    SweepTable table{"extreme-scaling", 0.0, 0, 0, std::vector<SweepRow>(ns.size())};
    const int count = static_cast<int>(ns.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs) if (jobs > 1)
    for (int i = 0; i < count; ++i) {
        const auto sys = build_system(ns[static_cast<std::size_t>(i)]);
        const ExtremeSolution sol = solve_extreme(sys, contrast);
        SweepRow row;
        row.n_atoms = sys->n_atoms();
        row.contrast = contrast;
        row.xi2 = sol.xi2;
        row.xi2_corrected = sol.xi2;
        row.gain_db = gain_db(sol.xi2);
        row.omega_over_chi = sol.omega_over_chi;
        table.rows[static_cast<std::size_t>(i)] = std::move(row);
    }
    return table;
}

OatScan oat_scan(const SpinSystemPtr &system, int points) {
    SQUEEZE_REQUIRE(system != nullptr, "oat_scan requires a system");
    SQUEEZE_REQUIRE(points >= 3, "oat_scan needs at least 3 points");
    const VectorXcd css =
        coherent_state(system, 0.5 * std::numbers::pi, 0.0).amplitudes();
    const double q_max =
        3.0 * std::pow(static_cast<double>(system->n_atoms()), -2.0 / 3.0);
    const double h = q_max / points;
    std::size_t best = 0;
    double best_xi2 = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= points; ++k) {
        const double v = oat_xi2(system, css, h * k);
        if (v < best_xi2) {
            best_xi2 = v;
            best = static_cast<std::size_t>(k);
        }
    }
    const bool interior = best > 1 && best < static_cast<std::size_t>(points);

    double a = h * static_cast<double>(best - 1);
    double b = std::min(q_max, h * static_cast<double>(best + 1));
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = oat_xi2(system, css, c);
    double fd = oat_xi2(system, css, d);
    while (b - a > 1e-13 * std::max(1.0, b)) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = oat_xi2(system, css, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = oat_xi2(system, css, d);
        }
    }
    const double q = 0.5 * (a + b);
    const double fq = oat_xi2(system, css, q);
    if (fq < best_xi2) {
        return {q, fq, interior};
    }
    return {h * static_cast<double>(best), best_xi2, interior};
}

SweepTable sweep_oat_scaling(std::span<const int> atoms, int jobs) {
    const std::vector<int> ns = sorted_unique_atoms(atoms, 4);
    SQUEEZE_REQUIRE(jobs >= 1, "jobs must be >= 1");
    SweepTable table{"oat-scaling", 0.0, 2, 0, std::vector<SweepRow>(ns.size())};
    const int count = static_cast<int>(ns.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs) if (jobs > 1)
    for (int i = 0; i < count; ++i) {
        const auto sys = build_system(ns[static_cast<std::size_t>(i)]);
        const OatScan scan = oat_scan(sys);
        SweepRow row;
        row.n_atoms = sys->n_atoms();
        row.q_tilde = std::sqrt(static_cast<double>(row.n_atoms)) * scan.shear;
        row.xi2 = scan.xi2;
        row.xi2_corrected = scan.xi2;
        row.gain_db = gain_db(scan.xi2);
        row.parameters = {scan.shear};
        row.converged = scan.interior;
        table.rows[static_cast<std::size_t>(i)] = std::move(row);
    }
    return table;
}

SweepTable sweep_gain_vs_shear(std::span<const int> atoms,
                               std::span<const double> q_grid,
                               const GainSweepOptions &options,
                               const std::vector<SweepRow> &completed,
                               const RowCallback &on_row) {
    const std::vector<int> ns = sorted_unique_atoms(atoms, 2);
    SQUEEZE_REQUIRE(!q_grid.empty(), "shear grid must not be empty");
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        SQUEEZE_REQUIRE(q_grid[i] > 0.0 && std::isfinite(q_grid[i]),
                        "shear grid values must be positive");
        SQUEEZE_REQUIRE(i == 0 || q_grid[i] > q_grid[i - 1],
                        "shear grid must be strictly ascending");
    }
    SQUEEZE_REQUIRE(options.jobs >= 1, "jobs must be >= 1");
    SQUEEZE_REQUIRE(options.gamma >= 0.0, "gamma must be non-negative");

    SweepTable table{"gain-vs-shear", options.gamma, options.n_pulses,
                     options.seed, {}};
    struct Task {
        std::size_t atom_index;
        double q;
        std::optional<SweepRow> done;
    };
    std::vector<Task> tasks;
    for (std::size_t a = 0; a < ns.size(); ++a) {
        for (double q : q_grid) {
            Task t{a, q, std::nullopt};
            for (const auto &row : completed) {
                if (same_key(row, ns[a], q)) {
                    t.done = row;
                    break;
                }
            }
            tasks.push_back(std::move(t));
        }
    }

    std::vector<SpinSystemPtr> systems(ns.size());
    std::vector<std::optional<SpinState>> targets(ns.size());
    for (std::size_t a = 0; a < ns.size(); ++a) {
        bool needed = false;
        for (const auto &t : tasks) {
            needed = needed || (t.atom_index == a && !t.done);
        }
        if (needed) {
            systems[a] = build_system(ns[a]);
            targets[a] = solve_extreme(systems[a], options.contrast).state;
        }
    }

    const LossModel loss{options.gamma};
    const int count = static_cast<int>(tasks.size());
    std::vector<SweepRow> rows(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(options.jobs) if (options.jobs > 1)
    for (int i = 0; i < count; ++i) {
        const Task &t = tasks[static_cast<std::size_t>(i)];
        if (t.done) {
            rows[static_cast<std::size_t>(i)] = *t.done;
            continue;
        }
        OptimizationConfig cfg;
        cfg.n_pulses = options.n_pulses;
        cfg.n_starts = options.n_starts;
        cfg.seed = options.seed;
        cfg.max_iterations = options.max_iterations;
        cfg.fixed_q_tilde = t.q;
        cfg.parallel = false;
        const auto &sys = systems[t.atom_index];
        const OptimizedSequence opt =
            optimize_fixed_shear(sys, *targets[t.atom_index], cfg);
        SweepRow row;
        row.n_atoms = sys->n_atoms();
        row.contrast = options.contrast;
        row.q_tilde = t.q;
        row.epsilon = opt.epsilon;
        row.xi2 = opt.xi2_generated;
        row.xi2_corrected = corrected_xi2(opt.xi2_generated, contrast_loss(loss, t.q));
        row.gain_db = gain_db(row.xi2_corrected);
        row.parameters = opt.sequence.parameters();
        row.converged = opt.converged;
        if (on_row) {
#pragma omp critical(squeeze_sweep_row)
            on_row(row);
        }
        rows[static_cast<std::size_t>(i)] = std::move(row);
    }
    table.rows = std::move(rows);
    return table;
}

PeakEstimate find_peak(std::span<const double> q, std::span<const double> gain) {
    SQUEEZE_REQUIRE(q.size() == gain.size() && !q.empty(),
                    "peak search needs matching non-empty grids");
    const auto it = std::max_element(gain.begin(), gain.end());
    const auto i = static_cast<std::size_t>(it - gain.begin());
    PeakEstimate est{q[i], gain[i], i, i > 0 && i + 1 < q.size()};
    if (!est.interior) {
        return est;
    }
    const double x0 = q[i - 1], x1 = q[i], x2 = q[i + 1];
    const double y0 = gain[i - 1], y1 = gain[i], y2 = gain[i + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    if (curv < 0.0) {
        const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
        est.q_tilde = std::clamp(xv, x0, x2);
        est.gain_db = y1 + d01 * (est.q_tilde - x1) +
                      curv * (est.q_tilde - x1) * (est.q_tilde - x0);
    }
    return est;
}

std::vector<PeakByAtoms> gain_peaks(const SweepTable &table) {
    std::map<int, std::vector<std::pair<double, double>>> by_n;
    for (const auto &row : table.rows) {
        if (row.q_tilde) {
            by_n[row.n_atoms].emplace_back(*row.q_tilde, row.gain_db);
        }
    }
    std::vector<PeakByAtoms> out;
    for (auto &[n, pts] : by_n) {
        std::sort(pts.begin(), pts.end());
        std::vector<double> q, g;
        for (const auto &[qq, gg] : pts) {
            q.push_back(qq);
            g.push_back(gg);
        }
        out.push_back({n, find_peak(q, g)});
    }
    return out;
}

std::vector<ColumnFit> column_fits(const SweepTable &table) {
    std::map<double, std::vector<std::pair<double, double>>> by_q;
    for (const auto &row : table.rows) {
        if (row.q_tilde) {
            by_q[*row.q_tilde].emplace_back(row.n_atoms, row.xi2_corrected);
        }
    }
    std::vector<ColumnFit> out;
    for (auto &[q, pts] : by_q) {
        if (pts.size() < 3) {
            continue;
        }
        std::sort(pts.begin(), pts.end());
        std::vector<double> n, y;
        for (const auto &[nn, yy] : pts) {
            n.push_back(nn);
            y.push_back(yy);
        }
        out.push_back({q, power_law_fit(n, y)});
    }
    return out;
}

} // namespace squeeze
