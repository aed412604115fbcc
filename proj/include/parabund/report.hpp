// include/parabund/report.hpp - predict-vs-estimate runs and the property batteries, with
// machine-readable reports.

#pragma once

#include "parabund/json_io.hpp"
#include "parabund/metric_model.hpp"
#include "parabund/schedule.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace parabund {

struct CheckRecord {
    std::string name;
    std::string predicted;  // exact prediction, as a string
    std::optional<double> estimated;
    std::optional<double> tolerance;
    bool pass = false;
    bool refused = false;
    Json detail = Json::object();
};

enum class RunStatus { pass, fail, refused };

const char* to_string(RunStatus s);

struct RunReport {
    std::string command;
    Json inputs = Json::object();  // name -> {"sha256": ...}
    std::uint64_t seed = 0;
    std::vector<CheckRecord> records;
    double wall_time_s = 0.0;

    /// refused if any record was refused, else fail if any record failed, else pass.
    RunStatus status() const;
    /// 0 pass, 1 check failure, 4 refused.
    int exit_code() const;
    Json to_json() const;
    /// One line per record plus a status line.
    std::string summary() const;

    void add_input(const std::string& name, const std::string& raw_text);
};

std::string sha256_hex(std::string_view data);

struct CheckOptions {
    RadialSampleSchedule schedule;
    /// Overrides the per-check default tolerance.
    std::optional<double> tolerance;
    Weight anchor = Weight(0);
    bool dump_samples = false;
};

inline constexpr double kGammaTolerance = 1e-2;

/// Known check names: gamma, acceptability, weak-norm, membership, polylog.
const std::vector<std::string>& known_checks();
/// gamma, acceptability, weak-norm, plus membership for rank-one models.
std::vector<std::string> default_checks(const MetricModel& mm);

/// Appends one record per check (membership adds one record per Laurent order -3..3).
/// Throws InputError for unknown checks or checks that do not apply to the model.
void run_checks(const MetricModel& mm, const std::vector<std::string>& checks, const CheckOptions& opts, RunReport& report);

struct BrGrid {
    std::vector<double> radii{0.5, 0.1, 0.01};
    int w_count = 64;
    int z_count = 32;

    /// "default" or "<w_count>x<z_count>".
    static BrGrid parse(std::string_view text);
};

/// Lower bounds on B_r(w), the three-term inequality over the grid and the centered equality case.
void suite_br(const BrGrid& grid, RunReport& report);

/// Random alpha in [0,1)^l, l cycling through 1, 2, 3, for each q.
void suite_dio(std::uint64_t seed, int trials, const std::vector<double>& qs, RunReport& report);

/// Exact calculus identities on seeded random filtered bundles, checked against enumeration.
void suite_calculus(std::uint64_t seed, int trials, RunReport& report);

} // namespace parabund
