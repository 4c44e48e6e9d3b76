#pragma once

#include "squeeze/optimizer.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace squeeze {

/// y = a * N^(-b), least squares on (log N, log y).
struct PowerLawFit {
    double a;
    double b;
    double r_squared;
};

PowerLawFit power_law_fit(std::span<const double> n, std::span<const double> y);

/**
 * One sweep record.
 *
 * xi2_corrected and gain_db include the contrast-loss factor only for
 * gain-vs-shear rows; other kinds carry C_sc = 1.
 */
struct SweepRow {
    int n_atoms = 0;
    std::optional<double> contrast;
    std::optional<double> q_tilde;
    std::optional<double> epsilon;
    double xi2 = 0.0;
    double xi2_corrected = 0.0;
    double gain_db = 0.0;
    std::optional<double> omega_over_chi;
    std::vector<double> parameters; ///< pulse parameters, or {Q} for OAT rows
    bool converged = true;
};

struct SweepTable {
    std::string kind;
    double gamma = 0.36;
    int n_pulses = 0;
    std::uint64_t seed = 0;
    std::vector<SweepRow> rows;
};

/// 8 (or `count`) log-spaced atom numbers in [lo, hi], rounded to even values.
std::vector<int> default_atom_grid(int lo = 20, int hi = 200, int count = 8);

SweepTable sweep_extreme_scaling(std::span<const int> atoms, double contrast,
                                 int jobs = 1);

struct OatScan {
    double shear; ///< Q at the minimum
    double xi2;
    bool interior; ///< grid argmin not at either end of the scan
};

/**
 * Minimum over Q of xi^2 for exp(-i Q S_z^2) applied to the CSS along +x.
 * 2000 points on (0, 3 N^(-2/3)] then golden-section refinement between the
 * neighbours of the grid minimum.
 */
OatScan oat_scan(const SpinSystemPtr &system, int points = 2000);

SweepTable sweep_oat_scaling(std::span<const int> atoms, int jobs = 1);

struct GainSweepOptions {
    double contrast = 0.9;
    int n_pulses = 4;
    int n_starts = 20;
    std::uint64_t seed = 1;
    int max_iterations = 3000;
    double gamma = 0.36;
    int jobs = 1;
};

using RowCallback = std::function<void(const SweepRow &)>;

/**
 * optimize_fixed_shear for every (N, Q~) pair. Rows whose (N, Q~) key is
 * already in `completed` are copied instead of recomputed. `on_row` sees
 * each newly computed row, serialized across threads.
 */
SweepTable sweep_gain_vs_shear(std::span<const int> atoms,
                               std::span<const double> q_grid,
                               const GainSweepOptions &options,
                               const std::vector<SweepRow> &completed = {},
                               const RowCallback &on_row = {});

struct PeakEstimate {
    double q_tilde;
    double gain_db;
    std::size_t index; ///< grid argmax
    bool interior;
};

/// Grid argmax refined by a parabola through the bracketing points.
PeakEstimate find_peak(std::span<const double> q, std::span<const double> gain);

struct PeakByAtoms {
    int n_atoms;
    PeakEstimate peak;
};

/// Corrected-gain peak per N of a gain-vs-shear table.
std::vector<PeakByAtoms> gain_peaks(const SweepTable &table);

struct ColumnFit {
    double q_tilde;
    PowerLawFit fit;
};

/// Power-law fit of the corrected xi^2 against N for each Q~ column.
std::vector<ColumnFit> column_fits(const SweepTable &table);

} // namespace squeeze
