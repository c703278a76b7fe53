#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "schedwin/capacity_search.hpp"
#include "schedwin/simulate.hpp"

namespace schedwin {

// A named show-up model included in a study. `placeholder` marks parameter
// sets that are configurable stand-ins rather than fitted values; they are
// flagged as such in every output that includes them.
struct ShowupSpec {
    std::string name;
    ShowupModel model;
    bool placeholder = false;
    bool in_tables = true;  // false: appears in curve output only

    ShowupSpec() = default;
    ShowupSpec(std::string name_, ShowupModel model_, bool placeholder_ = false,
               bool in_tables_ = true);
};

// Full study description. Defaults reproduce the bundled reference tables:
// a clinic serving mu = 20 appointments per day, panel sizes lambda close to
// capacity, four (theta, xi) economic scenarios, and a window grid whose top
// point doubles as the finite stand-in for "no window" when reporting gains.
struct ExperimentConfig {
    double mu = 20.0;
    std::vector<double> lambdas{18.0, 19.0, 19.9, 19.99};
    // (theta, xi) pairs: rejection penalty and ancillary revenue rate.
    std::vector<std::pair<double, double>> scenarios{
        {0.0, 0.0}, {0.0, 0.5}, {1.5, 0.0}, {1.5, 0.5}};
    std::vector<ServiceLaw> laws{ServiceLaw::Exponential, ServiceLaw::Deterministic};
    std::vector<ShowupSpec> showups;  // empty = default roster
    std::vector<DelayMap> delay_maps{DelayMap::SlotsOverMu, DelayMap::SlotsAsDays};

    WindowGrid window_grid{20, 1000, 20};
    // Gains in table output are measured against T at this grid point rather
    // than against the unbounded reward; nullopt switches to the unbounded
    // baseline.
    std::optional<std::int64_t> reference_window = 1000;
    double infinity_tolerance = 1e-11;
    double tail_tolerance = 1e-13;

    double regular_capacity = 20.0;
    std::vector<double> overtime_a{0.2, 2.0};
    LambdaGrid lambda_grid{};
    MuGrid mu_grid{};

    std::int64_t position_offset = 0;

    double curve_delay_max = 365.0;
    double curve_delay_step = 1.0;

    std::uint64_t seed = 8675309;
    double sim_horizon_days = 200000.0;
    double sim_warmup_days = 20000.0;
    int sim_batches = 32;

    int workers = 0;  // 0 = hardware concurrency

    static ExperimentConfig defaults();
    // The default show-up roster: three base-no-show levels of the
    // exponential-recovery family plus two saturating stand-ins and a
    // curve-only ancillary family.
    static std::vector<ShowupSpec> default_showups();
    void validate() const;
    std::vector<const ShowupSpec*> table_showups() const;
};

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

// One table cell: the optimal-window search outcome for a single
// (scenario, lambda, show-up family) combination.
struct TableCell {
    std::optional<std::int64_t> k_star;
    double t_at_k_star = 0.0;
    std::optional<double> t_at_infinity;
    double t_at_reference = 0.0;
    double gain_percent = 0.0;
    std::string error;  // nonempty: cell failed, holds the error code

    bool unbounded() const { return error.empty() && !k_star.has_value(); }
};

struct TableRow {
    double theta = 0.0;
    double xi = 0.0;
    double lambda = 0.0;
    std::vector<TableCell> cells;  // one per table show-up family
};

struct WindowTable {
    ServiceLaw law = ServiceLaw::Exponential;
    DelayMap map = DelayMap::SlotsOverMu;
    std::vector<std::string> columns;
    std::vector<TableRow> rows;

    const TableCell* find(double theta, double xi, double lambda,
                          const std::string& column) const;
};

// Agreement between the two service laws' optimal windows, and the gap
// between their efficiency gains averaged over the cells whose windows
// disagree (unbounded cells carry a gain of zero).
struct SummaryStats {
    int cells = 0;
    int matches = 0;
    int mismatches = 0;
    double match_percent = 0.0;
    double mean_loss_percent = 0.0;  // mean |gain_mm - gain_md| over mismatches
};

// How closely one delay map's windows reproduce the bundled reference values.
struct MappingStats {
    DelayMap map = DelayMap::SlotsOverMu;
    ServiceLaw law = ServiceLaw::Exponential;
    int comparable = 0;
    int exact = 0;
    int within_one_step = 0;
    double exact_percent = 0.0;
};

struct TablesResult {
    std::vector<WindowTable> tables;
    // Law-agreement stats per delay map, over every table column and over
    // the exponential-recovery columns alone.
    std::vector<std::pair<DelayMap, SummaryStats>> summary_all;
    std::vector<std::pair<DelayMap, SummaryStats>> summary_base;
    std::vector<MappingStats> mapping;
    // Delay map whose exponential-service windows best reproduce the
    // reference table.
    std::optional<DelayMap> best_map;

    const WindowTable* table(ServiceLaw law, DelayMap map) const;
};

struct CurveSeries {
    std::string name;
    bool placeholder = false;
    std::vector<double> values;
};

struct CurvesResult {
    std::vector<double> delays;
    std::vector<CurveSeries> series;
};

struct LeverRow {
    ServiceLaw law = ServiceLaw::Exponential;
    double overtime_a = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    std::string showup;
    CapacityMode mode = CapacityMode::FixedMu;
    double lambda_star = 0.0;
    double mu_star = 0.0;
    double objective = 0.0;
    std::optional<std::int64_t> k_star;
    double delta_e_percent = 0.0;
    double alpha = 1.0;
};

struct LeversResult {
    std::vector<LeverRow> rows;
    // Error codes of combinations that failed; empty on a clean run.
    std::vector<std::string> errors;
};

struct JointRow {
    ServiceLaw law = ServiceLaw::Exponential;
    double overtime_a = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    std::string showup;
    double lambda_joint = 0.0;
    double mu_joint = 0.0;
    std::optional<std::int64_t> k_joint;
    double t_joint = 0.0;
    double lambda_seq = 0.0;
    double mu_seq = 0.0;
    std::optional<std::int64_t> k_seq;
    double t_seq = 0.0;
    double gain_percent = 0.0;
};

struct JointResult {
    std::vector<JointRow> rows;
    // Mean joint-over-sequential gain per (overtime_a, theta) group.
    std::vector<std::tuple<double, double, double>> mean_gain;
    // Error codes of combinations that failed; empty on a clean run.
    std::vector<std::string> errors;
};

// Each runner computes its study and, when out_dir is nonempty, writes the
// corresponding CSV / markdown tables plus a <verb>_run.json echo of the
// configuration. Writes are deterministic: rerunning the same config yields
// byte-identical files.
TablesResult run_tables(const ExperimentConfig& config, const std::string& out_dir);
CurvesResult run_curves(const ExperimentConfig& config, const std::string& out_dir);
LeversResult run_levers(const ExperimentConfig& config, const std::string& out_dir);
JointResult run_joint(const ExperimentConfig& config, const std::string& out_dir);

// Runs fn(0..n-1) on `workers` threads. Results must be written to
// preallocated slots; the work distribution is dynamic but output placement
// is by index, so results are deterministic regardless of thread timing.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace schedwin
