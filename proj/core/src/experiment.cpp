#include "schedwin/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "schedwin/reference_data.hpp"
#include "table_io.hpp"

namespace schedwin {

using ordered_json = nlohmann::ordered_json;
namespace tio = schedwin::tabio;

namespace {

const char* law_name(ServiceLaw law) {
    return law == ServiceLaw::Exponential ? "mm" : "md";
}

ServiceLaw parse_law(const std::string& s) {
    if (s == "mm" || s == "exponential") return ServiceLaw::Exponential;
    if (s == "md" || s == "deterministic") return ServiceLaw::Deterministic;
    throw std::invalid_argument("config: unknown service law '" + s + "'");
}

const char* map_name(DelayMap map) {
    return map == DelayMap::SlotsAsDays ? "slots_as_days" : "slots_over_mu";
}

DelayMap parse_map(const std::string& s) {
    if (s == "slots_as_days" || s == "slots") return DelayMap::SlotsAsDays;
    if (s == "slots_over_mu" || s == "slots-over-mu") return DelayMap::SlotsOverMu;
    throw std::invalid_argument("config: unknown delay map '" + s + "'");
}

const char* family_name(ShowupFamily family) {
    switch (family) {
        case ShowupFamily::Kopach: return "kopach";
        case ShowupFamily::PureExponential: return "pure_exponential";
        case ShowupFamily::SaturatingExponential: return "saturating";
    }
    return "unknown";
}

ShowupFamily parse_family(const std::string& s) {
    if (s == "kopach") return ShowupFamily::Kopach;
    if (s == "pure_exponential") return ShowupFamily::PureExponential;
    if (s == "saturating") return ShowupFamily::SaturatingExponential;
    throw std::invalid_argument("config: unknown show-up family '" + s + "'");
}

const char* mode_name(CapacityMode mode) {
    switch (mode) {
        case CapacityMode::FixedMu: return "fixed_mu";
        case CapacityMode::OptimizeMu: return "optimize_mu";
        case CapacityMode::Joint: return "joint";
    }
    return "unknown";
}

std::string error_code(const std::exception& e) {
    if (dynamic_cast<const StabilityError*>(&e)) return "ERR:unstable";
    if (dynamic_cast<const NumericalError*>(&e)) return "ERR:numeric";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "ERR:config";
    return "ERR:internal";
}

std::string k_cell(const std::optional<std::int64_t>& k) {
    return k ? std::to_string(*k) : std::string("inf");
}

// An empty show-up roster stands for the default one.
ExperimentConfig with_default_roster(const ExperimentConfig& raw) {
    ExperimentConfig cfg = raw;
    if (cfg.showups.empty()) cfg.showups = ExperimentConfig::default_showups();
    cfg.validate();
    return cfg;
}

void require_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                  const char* where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw std::invalid_argument(std::string("config: unknown key '") + item.key() +
                                        "' in " + where);
        }
    }
}

}  // namespace

ShowupSpec::ShowupSpec(std::string name_, ShowupModel model_, bool placeholder_,
                       bool in_tables_)
    : name(std::move(name_)),
      model(std::move(model_)),
      placeholder(placeholder_),
      in_tables(in_tables_) {}

std::vector<ShowupSpec> ExperimentConfig::default_showups() {
    // The saturating G/GS parameter sets are stand-ins calibrated against the
    // bundled reference windows and gains (GS reproduces its reference gains
    // to within 0.2pt); they are not fitted to attendance data and are marked
    // as placeholders everywhere they appear.
    return {
        ShowupSpec("K_0.2", kopach_model(0.2)),
        ShowupSpec("K_0.4", kopach_model(0.4)),
        ShowupSpec("K_0.6", kopach_model(0.6)),
        ShowupSpec("G", saturating_model(0.45, 0.85, 0.10), true),
        ShowupSpec("GS", saturating_model(0.70, 1.00, 0.02), true),
        ShowupSpec("PureExp", pure_exponential_model(), false, false),
    };
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig cfg;
    cfg.showups = default_showups();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("config: mu must be > 0");
    if (lambdas.empty()) throw std::invalid_argument("config: lambdas must be nonempty");
    for (double l : lambdas) {
        if (!(l > 0.0)) throw std::invalid_argument("config: lambdas must be > 0");
    }
    if (scenarios.empty()) throw std::invalid_argument("config: scenarios must be nonempty");
    if (laws.empty()) throw std::invalid_argument("config: laws must be nonempty");
    if (delay_maps.empty()) throw std::invalid_argument("config: delay_maps must be nonempty");
    std::set<std::string> names;
    for (const auto& s : showups) {
        if (s.name.empty()) throw std::invalid_argument("config: show-up name must be nonempty");
        if (!names.insert(s.name).second) {
            throw std::invalid_argument("config: duplicate show-up name '" + s.name + "'");
        }
        s.model.validate();
    }
    window_grid.validate();
    if (reference_window &&
        (*reference_window < 1 || *reference_window > window_grid.k_max)) {
        throw std::invalid_argument("config: reference_window must lie within the window grid");
    }
    if (!(infinity_tolerance > 0.0)) {
        throw std::invalid_argument("config: infinity_tolerance must be > 0");
    }
    if (!(tail_tolerance > 0.0)) {
        throw std::invalid_argument("config: tail_tolerance must be > 0");
    }
    if (!(regular_capacity > 0.0)) {
        throw std::invalid_argument("config: regular_capacity must be > 0");
    }
    if (overtime_a.empty()) throw std::invalid_argument("config: overtime_a must be nonempty");
    for (double a : overtime_a) {
        if (!(a >= 0.0)) throw std::invalid_argument("config: overtime_a must be >= 0");
    }
    lambda_grid.validate();
    mu_grid.validate();
    if (position_offset < 0) {
        throw std::invalid_argument("config: position_offset must be >= 0");
    }
    if (!(curve_delay_max >= 0.0) || !(curve_delay_step > 0.0)) {
        throw std::invalid_argument("config: curve grid must have max >= 0 and step > 0");
    }
    for (const auto& [theta, xi] : scenarios) {
        EconomicParams{theta, xi, 0.0, regular_capacity}.validate();
    }
    if (!(sim_horizon_days > sim_warmup_days) || !(sim_warmup_days >= 0.0)) {
        throw std::invalid_argument("config: need 0 <= sim_warmup_days < sim_horizon_days");
    }
    if (sim_batches < 2) throw std::invalid_argument("config: sim_batches must be >= 2");
    if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
}

std::vector<const ShowupSpec*> ExperimentConfig::table_showups() const {
    std::vector<const ShowupSpec*> out;
    for (const auto& s : showups) {
        if (s.in_tables) out.push_back(&s);
    }
    return out;
}

namespace {

ordered_json showup_to_json(const ShowupSpec& spec) {
    ordered_json j;
    j["name"] = spec.name;
    j["family"] = family_name(spec.model.family);
    switch (spec.model.family) {
        case ShowupFamily::Kopach:
            j["noshow_base_p"] = spec.model.noshow_base_p;
            j["decay_amplitude"] = spec.model.decay_amplitude;
            break;
        case ShowupFamily::PureExponential:
            j["decay_amplitude"] = spec.model.decay_amplitude;
            break;
        case ShowupFamily::SaturatingExponential:
            j["q_min"] = spec.model.q_min;
            j["q_max"] = spec.model.q_max;
            break;
    }
    j["decay_coeff"] = spec.model.decay_coeff;
    j["placeholder"] = spec.placeholder;
    j["in_tables"] = spec.in_tables;
    return j;
}

ShowupSpec showup_from_json(const ordered_json& j) {
    require_keys(j,
                 {"name", "family", "noshow_base_p", "decay_amplitude", "decay_coeff",
                  "q_min", "q_max", "placeholder", "in_tables"},
                 "showups[]");
    ShowupSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.model.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("noshow_base_p")) spec.model.noshow_base_p = j["noshow_base_p"].get<double>();
    if (j.contains("decay_amplitude")) {
        spec.model.decay_amplitude = j["decay_amplitude"].get<double>();
    }
    if (j.contains("decay_coeff")) spec.model.decay_coeff = j["decay_coeff"].get<double>();
    if (j.contains("q_min")) spec.model.q_min = j["q_min"].get<double>();
    if (j.contains("q_max")) spec.model.q_max = j["q_max"].get<double>();
    if (j.contains("placeholder")) spec.placeholder = j["placeholder"].get<bool>();
    if (j.contains("in_tables")) spec.in_tables = j["in_tables"].get<bool>();
    spec.model.label = spec.name;
    return spec;
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["mu"] = cfg.mu;
    j["lambdas"] = cfg.lambdas;
    j["scenarios"] = ordered_json::array();
    for (const auto& [theta, xi] : cfg.scenarios) {
        j["scenarios"].push_back(ordered_json{{"theta", theta}, {"xi", xi}});
    }
    j["laws"] = ordered_json::array();
    for (ServiceLaw law : cfg.laws) j["laws"].push_back(law_name(law));
    j["delay_maps"] = ordered_json::array();
    for (DelayMap m : cfg.delay_maps) j["delay_maps"].push_back(map_name(m));
    j["showups"] = ordered_json::array();
    for (const auto& s : cfg.showups) j["showups"].push_back(showup_to_json(s));
    j["window_grid"] = ordered_json{{"k_min", cfg.window_grid.k_min},
                                    {"k_max", cfg.window_grid.k_max},
                                    {"k_step", cfg.window_grid.k_step}};
    if (cfg.reference_window) {
        j["reference_window"] = *cfg.reference_window;
    } else {
        j["reference_window"] = nullptr;
    }
    j["infinity_tolerance"] = cfg.infinity_tolerance;
    j["tail_tolerance"] = cfg.tail_tolerance;
    j["regular_capacity"] = cfg.regular_capacity;
    j["overtime_a"] = cfg.overtime_a;
    j["lambda_grid"] = ordered_json{{"lo", cfg.lambda_grid.lo},
                                    {"margin", cfg.lambda_grid.margin},
                                    {"coarse_step", cfg.lambda_grid.coarse_step},
                                    {"fine_step", cfg.lambda_grid.fine_step}};
    j["mu_grid"] = ordered_json{
        {"lo", cfg.mu_grid.lo}, {"hi", cfg.mu_grid.hi}, {"step", cfg.mu_grid.step}};
    j["position_offset"] = cfg.position_offset;
    j["curve_delay_max"] = cfg.curve_delay_max;
    j["curve_delay_step"] = cfg.curve_delay_step;
    j["seed"] = cfg.seed;
    j["sim_horizon_days"] = cfg.sim_horizon_days;
    j["sim_warmup_days"] = cfg.sim_warmup_days;
    j["sim_batches"] = cfg.sim_batches;
    j["workers"] = cfg.workers;
    return j;
}

ExperimentConfig config_from_json(const ordered_json& j) {
    require_keys(j,
                 {"mu", "lambdas", "scenarios", "laws", "delay_maps", "showups",
                  "window_grid", "reference_window", "infinity_tolerance", "tail_tolerance",
                  "regular_capacity", "overtime_a", "lambda_grid", "mu_grid",
                  "position_offset", "curve_delay_max", "curve_delay_step", "seed",
                  "sim_horizon_days", "sim_warmup_days", "sim_batches", "workers"},
                 "top level");
    ExperimentConfig cfg = ExperimentConfig::defaults();
    if (j.contains("mu")) cfg.mu = j["mu"].get<double>();
    if (j.contains("lambdas")) cfg.lambdas = j["lambdas"].get<std::vector<double>>();
    if (j.contains("scenarios")) {
        cfg.scenarios.clear();
        for (const auto& s : j["scenarios"]) {
            require_keys(s, {"theta", "xi"}, "scenarios[]");
            cfg.scenarios.emplace_back(s.at("theta").get<double>(), s.at("xi").get<double>());
        }
    }
    if (j.contains("laws")) {
        cfg.laws.clear();
        for (const auto& s : j["laws"]) cfg.laws.push_back(parse_law(s.get<std::string>()));
    }
    if (j.contains("delay_maps")) {
        cfg.delay_maps.clear();
        for (const auto& s : j["delay_maps"]) {
            cfg.delay_maps.push_back(parse_map(s.get<std::string>()));
        }
    }
    if (j.contains("showups")) {
        cfg.showups.clear();
        for (const auto& s : j["showups"]) cfg.showups.push_back(showup_from_json(s));
    }
    if (j.contains("window_grid")) {
        const auto& g = j["window_grid"];
        require_keys(g, {"k_min", "k_max", "k_step"}, "window_grid");
        if (g.contains("k_min")) cfg.window_grid.k_min = g["k_min"].get<std::int64_t>();
        if (g.contains("k_max")) cfg.window_grid.k_max = g["k_max"].get<std::int64_t>();
        if (g.contains("k_step")) cfg.window_grid.k_step = g["k_step"].get<std::int64_t>();
    }
    if (j.contains("reference_window")) {
        if (j["reference_window"].is_null()) {
            cfg.reference_window.reset();
        } else {
            cfg.reference_window = j["reference_window"].get<std::int64_t>();
        }
    }
    if (j.contains("infinity_tolerance")) {
        cfg.infinity_tolerance = j["infinity_tolerance"].get<double>();
    }
    if (j.contains("tail_tolerance")) cfg.tail_tolerance = j["tail_tolerance"].get<double>();
    if (j.contains("regular_capacity")) {
        cfg.regular_capacity = j["regular_capacity"].get<double>();
    }
    if (j.contains("overtime_a")) cfg.overtime_a = j["overtime_a"].get<std::vector<double>>();
    if (j.contains("lambda_grid")) {
        const auto& g = j["lambda_grid"];
        require_keys(g, {"lo", "margin", "coarse_step", "fine_step"}, "lambda_grid");
        if (g.contains("lo")) cfg.lambda_grid.lo = g["lo"].get<double>();
        if (g.contains("margin")) cfg.lambda_grid.margin = g["margin"].get<double>();
        if (g.contains("coarse_step")) cfg.lambda_grid.coarse_step = g["coarse_step"].get<double>();
        if (g.contains("fine_step")) cfg.lambda_grid.fine_step = g["fine_step"].get<double>();
    }
    if (j.contains("mu_grid")) {
        const auto& g = j["mu_grid"];
        require_keys(g, {"lo", "hi", "step"}, "mu_grid");
        if (g.contains("lo")) cfg.mu_grid.lo = g["lo"].get<double>();
        if (g.contains("hi")) cfg.mu_grid.hi = g["hi"].get<double>();
        if (g.contains("step")) cfg.mu_grid.step = g["step"].get<double>();
    }
    if (j.contains("position_offset")) {
        cfg.position_offset = j["position_offset"].get<std::int64_t>();
    }
    if (j.contains("curve_delay_max")) cfg.curve_delay_max = j["curve_delay_max"].get<double>();
    if (j.contains("curve_delay_step")) {
        cfg.curve_delay_step = j["curve_delay_step"].get<double>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sim_horizon_days")) {
        cfg.sim_horizon_days = j["sim_horizon_days"].get<double>();
    }
    if (j.contains("sim_warmup_days")) cfg.sim_warmup_days = j["sim_warmup_days"].get<double>();
    if (j.contains("sim_batches")) cfg.sim_batches = j["sim_batches"].get<int>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    cfg.validate();
    return cfg;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::string& path) {
    config.validate();
    tio::write_text(path, config_to_json(config).dump(2) + "\n");
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t thread_count = workers > 0
                                   ? static_cast<std::size_t>(workers)
                                   : std::max(1u, std::thread::hardware_concurrency());
    thread_count = std::min(thread_count, n);
    if (thread_count <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// tables

namespace {

struct CellRecord {
    TableCell cell;
    std::vector<std::pair<std::int64_t, double>> trace;
};

struct TableJob {
    std::size_t map_idx;
    std::size_t law_idx;
    std::size_t lambda_idx;
};

ShowupModel cell_model(const ExperimentConfig& cfg, const ShowupSpec& spec, DelayMap map) {
    ShowupModel model = spec.model;
    model.delay_map = map;
    model.position_offset = cfg.position_offset;
    return model;
}

const TableRow* find_row(const WindowTable& table, double theta, double xi, double lambda) {
    for (const auto& row : table.rows) {
        if (row.theta == theta && row.xi == xi && row.lambda == lambda) return &row;
    }
    return nullptr;
}

}  // namespace

const TableCell* WindowTable::find(double theta, double xi, double lambda,
                                   const std::string& column) const {
    const TableRow* row = find_row(*this, theta, xi, lambda);
    if (!row) return nullptr;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] == column) return &row->cells[c];
    }
    return nullptr;
}

const WindowTable* TablesResult::table(ServiceLaw law, DelayMap map) const {
    for (const auto& t : tables) {
        if (t.law == law && t.map == map) return &t;
    }
    return nullptr;
}

namespace {

SummaryStats law_agreement(const ExperimentConfig& cfg,
                           const WindowTable& mm, const WindowTable& md,
                           bool kopach_only) {
    SummaryStats stats;
    double loss_sum = 0.0;
    const auto showups = cfg.table_showups();
    for (const auto& [theta, xi] : cfg.scenarios) {
        for (double lambda : cfg.lambdas) {
            for (std::size_t c = 0; c < showups.size(); ++c) {
                if (kopach_only && showups[c]->model.family != ShowupFamily::Kopach) {
                    continue;
                }
                const TableCell* a = mm.find(theta, xi, lambda, showups[c]->name);
                const TableCell* b = md.find(theta, xi, lambda, showups[c]->name);
                if (!a || !b || !a->error.empty() || !b->error.empty()) continue;
                ++stats.cells;
                const bool match = (a->unbounded() && b->unbounded()) ||
                                   (a->k_star && b->k_star && *a->k_star == *b->k_star);
                if (match) {
                    ++stats.matches;
                    continue;
                }
                ++stats.mismatches;
                loss_sum += std::abs(a->gain_percent - b->gain_percent);
            }
        }
    }
    if (stats.cells > 0) {
        stats.match_percent = 100.0 * stats.matches / stats.cells;
    }
    if (stats.mismatches > 0) {
        stats.mean_loss_percent = loss_sum / stats.mismatches;
    }
    return stats;
}

MappingStats reference_agreement(const ExperimentConfig& cfg, const WindowTable& table) {
    MappingStats stats;
    stats.map = table.map;
    stats.law = table.law;
    const auto& reference = refdata::reference_windows(table.law);
    const auto showups = cfg.table_showups();
    for (const auto& ref : reference) {
        for (int c = 0; c < refdata::kColumns; ++c) {
            for (const auto* spec : showups) {
                if (spec->model.family != ShowupFamily::Kopach) continue;
                if (spec->name != refdata::kColumnNames[c]) continue;
                const TableCell* cell = table.find(ref.theta, ref.xi, ref.lambda, spec->name);
                if (!cell || !cell->error.empty()) continue;
                ++stats.comparable;
                const auto& want = ref.k[c];
                const bool exact = (!want && cell->unbounded()) ||
                                   (want && cell->k_star && *want == *cell->k_star);
                if (exact) {
                    ++stats.exact;
                    ++stats.within_one_step;
                } else if (want && cell->k_star &&
                           std::llabs(*want - *cell->k_star) <= cfg.window_grid.k_step) {
                    ++stats.within_one_step;
                }
            }
        }
    }
    if (stats.comparable > 0) {
        stats.exact_percent = 100.0 * stats.exact / stats.comparable;
    }
    return stats;
}

ordered_json window_table_json(const ExperimentConfig& cfg, const WindowTable& table,
                               const std::vector<CellRecord>& records) {
    ordered_json out;
    out["law"] = law_name(table.law);
    out["delay_map"] = map_name(table.map);
    out["cells"] = ordered_json::array();
    const auto showups = cfg.table_showups();
    std::size_t idx = 0;
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < showups.size(); ++c, ++idx) {
            const TableCell& cell = row.cells[c];
            ordered_json jc;
            jc["theta"] = row.theta;
            jc["xi"] = row.xi;
            jc["lambda"] = row.lambda;
            jc["column"] = showups[c]->name;
            if (!cell.error.empty()) {
                jc["error"] = cell.error;
            } else {
                jc["k_star"] = cell.k_star ? ordered_json(*cell.k_star) : ordered_json(nullptr);
                jc["t_at_k_star"] = cell.t_at_k_star;
                jc["t_at_infinity"] = cell.t_at_infinity ? ordered_json(*cell.t_at_infinity)
                                                         : ordered_json(nullptr);
                jc["t_at_reference"] = cell.t_at_reference;
                jc["gain_percent"] = cell.gain_percent;
                ordered_json trace = ordered_json::array();
                for (const auto& [k, t] : records[idx].trace) {
                    trace.push_back(ordered_json::array({k, t}));
                }
                jc["trace"] = std::move(trace);
            }
            out["cells"].push_back(std::move(jc));
        }
    }
    return out;
}

}  // namespace

TablesResult run_tables(const ExperimentConfig& config_in, const std::string& out_dir) {
    const ExperimentConfig config = with_default_roster(config_in);
    const auto showups = config.table_showups();
    if (showups.empty()) {
        throw std::invalid_argument("tables: no show-up families with in_tables=true");
    }

    const std::size_t n_maps = config.delay_maps.size();
    const std::size_t n_laws = config.laws.size();
    const std::size_t n_lambdas = config.lambdas.size();
    const std::size_t n_scen = config.scenarios.size();

    // records[map][law]: scenario-major, lambda-minor, column-innermost
    std::vector<std::vector<std::vector<CellRecord>>> records(
        n_maps, std::vector<std::vector<CellRecord>>(
                    n_laws, std::vector<CellRecord>(n_scen * n_lambdas * showups.size())));

    std::vector<TableJob> jobs;
    for (std::size_t m = 0; m < n_maps; ++m) {
        for (std::size_t l = 0; l < n_laws; ++l) {
            for (std::size_t x = 0; x < n_lambdas; ++x) jobs.push_back({m, l, x});
        }
    }

    parallel_for(jobs.size(), config.workers, [&](std::size_t job_idx) {
        const TableJob job = jobs[job_idx];
        const DelayMap map = config.delay_maps[job.map_idx];
        const ServiceLaw law = config.laws[job.law_idx];
        const double lambda = config.lambdas[job.lambda_idx];

        // The unbounded distribution depends only on (law, lambda, mu);
        // share it across every scenario and show-up family.
        std::optional<StationaryDistribution> unbounded;
        std::string unbounded_error;
        if (lambda < config.mu) {
            try {
                unbounded = stationary_distribution(
                    QueueSpec{lambda, config.mu, std::nullopt, law}, config.tail_tolerance);
            } catch (const std::exception& e) {
                unbounded_error = error_code(e);
            }
        }

        for (std::size_t s = 0; s < n_scen; ++s) {
            const auto [theta, xi] = config.scenarios[s];
            const EconomicParams econ{theta, xi, 0.0, config.regular_capacity};
            for (std::size_t c = 0; c < showups.size(); ++c) {
                CellRecord rec;
                if (!unbounded_error.empty()) {
                    rec.cell.error = unbounded_error;
                    const std::size_t slot =
                        (s * n_lambdas + job.lambda_idx) * showups.size() + c;
                    records[job.map_idx][job.law_idx][slot] = std::move(rec);
                    continue;
                }
                try {
                    const ShowupModel model = cell_model(config, *showups[c], map);
                    const RewardCurve curve(law, lambda, config.mu, econ, model,
                                            config.window_grid.k_max);
                    std::optional<double> t_inf;
                    if (unbounded) {
                        t_inf = net_reward_infinite(*unbounded, econ, model).total;
                    }
                    const WindowSearchResult wr = optimal_window_on_curve(
                        curve, config.window_grid, config.infinity_tolerance, t_inf);
                    rec.cell.k_star = wr.k_star;
                    rec.cell.t_at_k_star = wr.t_at_k_star;
                    rec.cell.t_at_infinity = wr.t_at_infinity;
                    if (config.reference_window) {
                        rec.cell.t_at_reference = curve.total(*config.reference_window);
                        rec.cell.gain_percent =
                            efficiency_gain_vs_reference(wr, rec.cell.t_at_reference);
                    } else {
                        if (!t_inf) {
                            throw StabilityError(
                                "tables: gain vs the unbounded system needs lambda < mu");
                        }
                        rec.cell.t_at_reference = *t_inf;
                        rec.cell.gain_percent = efficiency_gain_vs_infinite(wr);
                    }
                    rec.trace = wr.trace;
                } catch (const std::exception& e) {
                    rec.cell = TableCell{};
                    rec.cell.error = error_code(e);
                }
                const std::size_t slot =
                    (s * n_lambdas + job.lambda_idx) * showups.size() + c;
                records[job.map_idx][job.law_idx][slot] = std::move(rec);
            }
        }
    });

    TablesResult result;
    for (std::size_t m = 0; m < n_maps; ++m) {
        for (std::size_t l = 0; l < n_laws; ++l) {
            WindowTable table;
            table.law = config.laws[l];
            table.map = config.delay_maps[m];
            for (const auto* spec : showups) table.columns.push_back(spec->name);
            std::size_t idx = 0;
            for (std::size_t s = 0; s < n_scen; ++s) {
                for (std::size_t x = 0; x < n_lambdas; ++x) {
                    TableRow row;
                    row.theta = config.scenarios[s].first;
                    row.xi = config.scenarios[s].second;
                    row.lambda = config.lambdas[x];
                    for (std::size_t c = 0; c < showups.size(); ++c, ++idx) {
                        row.cells.push_back(records[m][l][idx].cell);
                    }
                    table.rows.push_back(std::move(row));
                }
            }
            result.tables.push_back(std::move(table));
        }
    }

    const bool have_both_laws =
        std::count(config.laws.begin(), config.laws.end(), ServiceLaw::Exponential) > 0 &&
        std::count(config.laws.begin(), config.laws.end(), ServiceLaw::Deterministic) > 0;
    for (std::size_t m = 0; m < n_maps; ++m) {
        const DelayMap map = config.delay_maps[m];
        if (have_both_laws) {
            const WindowTable* mm = result.table(ServiceLaw::Exponential, map);
            const WindowTable* md = result.table(ServiceLaw::Deterministic, map);
            result.summary_all.emplace_back(map, law_agreement(config, *mm, *md, false));
            result.summary_base.emplace_back(map, law_agreement(config, *mm, *md, true));
        }
        for (const auto& table : result.tables) {
            if (table.map == map) result.mapping.push_back(reference_agreement(config, table));
        }
    }

    // Select the delay map whose windows best reproduce the reference table.
    int best_exact = -1;
    for (std::size_t m = 0; m < n_maps; ++m) {
        int exact = 0;
        for (const auto& stats : result.mapping) {
            if (stats.map == config.delay_maps[m]) exact += stats.exact;
        }
        if (exact > best_exact) {
            best_exact = exact;
            result.best_map = config.delay_maps[m];
        }
    }

    if (out_dir.empty()) return result;

    tio::ensure_dir(out_dir);
    std::vector<std::string> outputs;
    const auto write_table = [&](const WindowTable& table, bool gains) {
        tio::Table t;
        t.header = {"theta", "xi", "lambda"};
        for (const auto& name : table.columns) t.header.push_back(name);
        for (const auto& row : table.rows) {
            std::vector<std::string> cells{tio::num(row.theta, "%.6g"),
                                           tio::num(row.xi, "%.6g"),
                                           tio::num(row.lambda, "%.6g")};
            for (const auto& cell : row.cells) {
                if (!cell.error.empty()) {
                    cells.push_back(cell.error);
                } else if (gains) {
                    cells.push_back(tio::fixed2(cell.gain_percent));
                } else {
                    cells.push_back(k_cell(cell.k_star));
                }
            }
            t.add_row(std::move(cells));
        }
        const std::string base = std::string(gains ? "gains" : "windows") + "_" +
                                 law_name(table.law) + "_" + map_name(table.map);
        tio::write_text(out_dir + "/" + base + ".csv", tio::to_csv(t));
        tio::write_text(out_dir + "/" + base + ".md", tio::to_markdown(t));
        outputs.push_back(base + ".csv");
        outputs.push_back(base + ".md");
    };
    for (const auto& table : result.tables) {
        write_table(table, false);
        write_table(table, true);
    }

    {
        tio::Table t;
        t.header = {"delay_map", "population",   "cells",
                    "matches",   "match_percent", "mismatches",
                    "mean_loss_percent"};
        const auto add = [&](DelayMap map, const char* pop, const SummaryStats& s) {
            t.add_row({map_name(map), pop, std::to_string(s.cells), std::to_string(s.matches),
                       tio::fixed2(s.match_percent), std::to_string(s.mismatches),
                       tio::num(s.mean_loss_percent, "%.4f")});
        };
        for (const auto& [map, s] : result.summary_all) add(map, "all_columns", s);
        for (const auto& [map, s] : result.summary_base) add(map, "kopach_columns", s);
        tio::write_text(out_dir + "/summary.csv", tio::to_csv(t));
        outputs.push_back("summary.csv");
    }
    {
        tio::Table t;
        t.header = {"delay_map", "law",           "comparable", "exact",
                    "within_one_step", "exact_percent", "selected"};
        for (const auto& s : result.mapping) {
            t.add_row({map_name(s.map), law_name(s.law), std::to_string(s.comparable),
                       std::to_string(s.exact), std::to_string(s.within_one_step),
                       tio::fixed2(s.exact_percent),
                       result.best_map && *result.best_map == s.map ? "yes" : "no"});
        }
        tio::write_text(out_dir + "/mapping_report.csv", tio::to_csv(t));
        outputs.push_back("mapping_report.csv");
    }

    ordered_json run;
    run["verb"] = "tables";
    run["config"] = config_to_json(config);
    run["outputs"] = outputs;
    run["tables"] = ordered_json::array();
    for (std::size_t m = 0; m < n_maps; ++m) {
        for (std::size_t l = 0; l < n_laws; ++l) {
            const WindowTable* table = result.table(config.laws[l], config.delay_maps[m]);
            run["tables"].push_back(window_table_json(config, *table, records[m][l]));
        }
    }
    run["summary"] = ordered_json::array();
    const auto summary_json = [](DelayMap map, const char* pop, const SummaryStats& s) {
        return ordered_json{{"delay_map", map_name(map)},
                            {"population", pop},
                            {"cells", s.cells},
                            {"matches", s.matches},
                            {"match_percent", s.match_percent},
                            {"mismatches", s.mismatches},
                            {"mean_loss_percent", s.mean_loss_percent}};
    };
    for (const auto& [map, s] : result.summary_all) {
        run["summary"].push_back(summary_json(map, "all_columns", s));
    }
    for (const auto& [map, s] : result.summary_base) {
        run["summary"].push_back(summary_json(map, "kopach_columns", s));
    }
    run["mapping"] = ordered_json::array();
    for (const auto& s : result.mapping) {
        run["mapping"].push_back(ordered_json{
            {"delay_map", map_name(s.map)},
            {"law", law_name(s.law)},
            {"comparable", s.comparable},
            {"exact", s.exact},
            {"within_one_step", s.within_one_step},
            {"exact_percent", s.exact_percent},
            {"selected", result.best_map && *result.best_map == s.map}});
    }
    tio::write_text(out_dir + "/tables_run.json", run.dump(2) + "\n");
    return result;
}

// ---------------------------------------------------------------------------
// curves

CurvesResult run_curves(const ExperimentConfig& config_in, const std::string& out_dir) {
    const ExperimentConfig config = with_default_roster(config_in);

    CurvesResult result;
    for (double d = 0.0; d <= config.curve_delay_max + 1e-12;
         d += config.curve_delay_step) {
        result.delays.push_back(d);
    }
    for (const auto& spec : config.showups) {
        CurveSeries series;
        series.name = spec.name;
        series.placeholder = spec.placeholder;
        series.values.reserve(result.delays.size());
        for (double d : result.delays) series.values.push_back(spec.model.at_delay(d));
        result.series.push_back(std::move(series));
    }

    if (out_dir.empty()) return result;
    tio::ensure_dir(out_dir);

    tio::Table wide;
    wide.header = {"delay_days"};
    for (const auto& s : result.series) wide.header.push_back(s.name);
    for (std::size_t i = 0; i < result.delays.size(); ++i) {
        std::vector<std::string> row{tio::num(result.delays[i], "%.6g")};
        for (const auto& s : result.series) row.push_back(tio::num(s.values[i], "%.10g"));
        wide.add_row(std::move(row));
    }
    tio::write_text(out_dir + "/showup_curves.csv", tio::to_csv(wide));

    tio::Table tall;
    tall.header = {"delay_days", "showup", "showup_prob"};
    for (const auto& s : result.series) {
        for (std::size_t i = 0; i < result.delays.size(); ++i) {
            tall.add_row({tio::num(result.delays[i], "%.6g"), s.name,
                          tio::num(s.values[i], "%.10g")});
        }
    }
    tio::write_text(out_dir + "/showup_curves_long.csv", tio::to_csv(tall));

    ordered_json run;
    run["verb"] = "curves";
    run["config"] = config_to_json(config);
    run["outputs"] = {"showup_curves.csv", "showup_curves_long.csv"};
    run["series"] = ordered_json::array();
    for (const auto& s : result.series) {
        run["series"].push_back(
            ordered_json{{"name", s.name}, {"placeholder", s.placeholder}});
    }
    tio::write_text(out_dir + "/curves_run.json", run.dump(2) + "\n");
    return result;
}

// ---------------------------------------------------------------------------
// levers

namespace {

struct LeverTask {
    CapacityMode mode;
    double overtime_a;  // meaningful for OptimizeMu only
    double theta;
    double xi;
    const ShowupSpec* spec;
    ServiceLaw law;
};

}  // namespace

LeversResult run_levers(const ExperimentConfig& config_in, const std::string& out_dir) {
    const ExperimentConfig config = with_default_roster(config_in);
    const auto showups = config.table_showups();

    std::vector<LeverTask> tasks;
    for (const auto& [theta, xi] : config.scenarios) {
        for (const auto* spec : showups) {
            for (ServiceLaw law : config.laws) {
                tasks.push_back({CapacityMode::FixedMu, 0.0, theta, xi, spec, law});
                for (double a : config.overtime_a) {
                    tasks.push_back({CapacityMode::OptimizeMu, a, theta, xi, spec, law});
                }
            }
        }
    }

    std::vector<LeverRow> rows(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::vector<std::vector<std::pair<std::int64_t, double>>> traces(tasks.size());

    parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
        const LeverTask& task = tasks[i];
        LeverRow row;
        row.law = task.law;
        row.overtime_a = task.overtime_a;
        row.theta = task.theta;
        row.xi = task.xi;
        row.showup = task.spec->name;
        row.mode = task.mode;
        try {
            const EconomicParams econ{task.theta, task.xi, task.overtime_a,
                                      config.regular_capacity};
            // Capacity is chosen with the default delay mapping of the model;
            // the study's delay-map comparison applies to the window tables.
            const ShowupModel model =
                cell_model(config, *task.spec, config.delay_maps.front());
            const CapacitySearchResult capacity =
                optimal_panel(task.mode, task.law, econ, model, config.lambda_grid,
                              config.mu_grid);
            const LeverReport report = levers_efficiency_report(
                capacity, task.law, econ, model, config.window_grid,
                config.infinity_tolerance, config.reference_window);
            row.lambda_star = capacity.lambda_star;
            row.mu_star = capacity.mu_star;
            row.objective = capacity.objective;
            row.k_star = report.window.k_star;
            row.delta_e_percent = report.delta_e_percent;
            row.alpha = report.service_level_alpha;
            traces[i] = report.window.trace;
        } catch (const std::exception& e) {
            errors[i] = error_code(e);
        }
        rows[i] = std::move(row);
    });

    LeversResult result;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (errors[i].empty()) {
            result.rows.push_back(rows[i]);
        } else {
            result.errors.push_back(errors[i]);
        }
    }

    if (out_dir.empty()) return result;
    tio::ensure_dir(out_dir);
    std::vector<std::string> outputs;

    {
        tio::Table t;
        t.header = {"law",        "mode",  "a",         "theta",   "xi",
                    "showup",     "lambda_star", "mu_star", "objective",
                    "k_star",     "delta_e_percent", "alpha"};
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const LeverRow& row = rows[i];
            if (!errors[i].empty()) {
                t.add_row({law_name(row.law), mode_name(row.mode),
                           row.mode == CapacityMode::FixedMu ? "-"
                                                             : tio::num(row.overtime_a, "%.6g"),
                           tio::num(row.theta, "%.6g"), tio::num(row.xi, "%.6g"), row.showup,
                           errors[i], errors[i], errors[i], errors[i], errors[i], errors[i]});
                continue;
            }
            t.add_row({law_name(row.law), mode_name(row.mode),
                       row.mode == CapacityMode::FixedMu ? "-"
                                                         : tio::num(row.overtime_a, "%.6g"),
                       tio::num(row.theta, "%.6g"), tio::num(row.xi, "%.6g"), row.showup,
                       tio::num(row.lambda_star, "%.6g"), tio::num(row.mu_star, "%.6g"),
                       tio::num(row.objective, "%.10g"), k_cell(row.k_star),
                       tio::fixed2(row.delta_e_percent), tio::fixed2(row.alpha)});
        }
        tio::write_text(out_dir + "/levers.csv", tio::to_csv(t));
        tio::write_text(out_dir + "/levers.md", tio::to_markdown(t));
        outputs.push_back("levers.csv");
        outputs.push_back("levers.md");
    }

    // Reference-shaped wide table, one per overtime coefficient: requires
    // both service laws in the configuration.
    const bool have_both_laws =
        std::count(config.laws.begin(), config.laws.end(), ServiceLaw::Exponential) > 0 &&
        std::count(config.laws.begin(), config.laws.end(), ServiceLaw::Deterministic) > 0;
    if (have_both_laws) {
        const auto find_task = [&](CapacityMode mode, double a, double theta, double xi,
                                   const ShowupSpec* spec,
                                   ServiceLaw law) -> const LeverRow* {
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                const LeverTask& t = tasks[i];
                if (t.mode == mode && t.theta == theta && t.xi == xi && t.spec == spec &&
                    t.law == law && (mode == CapacityMode::FixedMu || t.overtime_a == a)) {
                    return errors[i].empty() ? &rows[i] : nullptr;
                }
            }
            return nullptr;
        };
        for (double a : config.overtime_a) {
            tio::Table t;
            t.header = {"theta", "xi", "showup",
                        "de_fixed_mm", "alpha_fixed_mm", "de_fixed_md", "alpha_fixed_md",
                        "de_opt_mm", "alpha_opt_mm", "de_opt_md", "alpha_opt_md"};
            for (const auto& [theta, xi] : config.scenarios) {
                for (const auto* spec : showups) {
                    std::vector<std::string> cells{tio::num(theta, "%.6g"),
                                                   tio::num(xi, "%.6g"), spec->name};
                    const LeverRow* quads[4] = {
                        find_task(CapacityMode::FixedMu, a, theta, xi, spec,
                                  ServiceLaw::Exponential),
                        find_task(CapacityMode::FixedMu, a, theta, xi, spec,
                                  ServiceLaw::Deterministic),
                        find_task(CapacityMode::OptimizeMu, a, theta, xi, spec,
                                  ServiceLaw::Exponential),
                        find_task(CapacityMode::OptimizeMu, a, theta, xi, spec,
                                  ServiceLaw::Deterministic),
                    };
                    for (const LeverRow* r : quads) {
                        if (!r) {
                            cells.push_back("ERR:missing");
                            cells.push_back("ERR:missing");
                        } else {
                            cells.push_back(tio::fixed2(r->delta_e_percent));
                            cells.push_back(tio::fixed2(r->alpha));
                        }
                    }
                    t.add_row(std::move(cells));
                }
            }
            const std::string base = "levers_wide_a" + tio::num(a, "%g");
            tio::write_text(out_dir + "/" + base + ".csv", tio::to_csv(t));
            tio::write_text(out_dir + "/" + base + ".md", tio::to_markdown(t));
            outputs.push_back(base + ".csv");
            outputs.push_back(base + ".md");
        }
    }

    ordered_json run;
    run["verb"] = "levers";
    run["config"] = config_to_json(config);
    run["outputs"] = outputs;
    run["rows"] = ordered_json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const LeverRow& row = rows[i];
        ordered_json jr;
        jr["law"] = law_name(row.law);
        jr["mode"] = mode_name(row.mode);
        if (row.mode == CapacityMode::OptimizeMu) jr["a"] = row.overtime_a;
        jr["theta"] = row.theta;
        jr["xi"] = row.xi;
        jr["showup"] = row.showup;
        if (!errors[i].empty()) {
            jr["error"] = errors[i];
        } else {
            jr["lambda_star"] = row.lambda_star;
            jr["mu_star"] = row.mu_star;
            jr["objective"] = row.objective;
            jr["k_star"] = row.k_star ? ordered_json(*row.k_star) : ordered_json(nullptr);
            jr["delta_e_percent"] = row.delta_e_percent;
            jr["alpha"] = row.alpha;
            ordered_json trace = ordered_json::array();
            for (const auto& [k, tv] : traces[i]) {
                trace.push_back(ordered_json::array({k, tv}));
            }
            jr["window_trace"] = std::move(trace);
        }
        run["rows"].push_back(std::move(jr));
    }
    tio::write_text(out_dir + "/levers_run.json", run.dump(2) + "\n");
    return result;
}

// ---------------------------------------------------------------------------
// joint

JointResult run_joint(const ExperimentConfig& config_in, const std::string& out_dir) {
    const ExperimentConfig config = with_default_roster(config_in);
    // The joint study runs the exponential-service model only; the
    // deterministic law remains available through joint_optimal directly.
    const ServiceLaw law = ServiceLaw::Exponential;

    std::vector<const ShowupSpec*> families;
    for (const auto* spec : config.table_showups()) {
        if (!spec->placeholder) families.push_back(spec);
    }
    if (families.empty()) {
        throw std::invalid_argument("joint: no non-placeholder table show-up families");
    }

    struct JointTask {
        double a;
        double theta;
        double xi;
        const ShowupSpec* spec;
    };
    std::vector<JointTask> tasks;
    for (double a : config.overtime_a) {
        for (const auto& [theta, xi] : config.scenarios) {
            for (const auto* spec : families) tasks.push_back({a, theta, xi, spec});
        }
    }

    std::vector<JointRow> rows(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::vector<std::vector<CapacityTracePoint>> traces(tasks.size());

    parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
        const JointTask& task = tasks[i];
        JointRow row;
        row.law = law;
        row.overtime_a = task.a;
        row.theta = task.theta;
        row.xi = task.xi;
        row.showup = task.spec->name;
        try {
            const EconomicParams econ{task.theta, task.xi, task.a, config.regular_capacity};
            const ShowupModel model =
                cell_model(config, *task.spec, config.delay_maps.front());
            const CapacitySearchResult joint =
                joint_optimal(law, econ, model, config.lambda_grid, config.mu_grid,
                              config.window_grid, config.infinity_tolerance);
            row.lambda_joint = joint.lambda_star;
            row.mu_joint = joint.mu_star;
            row.k_joint = joint.k_star;
            row.t_joint = joint.objective;
            if (joint.sequential_point) {
                row.lambda_seq = joint.sequential_point->lambda;
                row.mu_seq = joint.sequential_point->mu;
                row.k_seq = joint.sequential_point->k;
                row.t_seq = joint.sequential_point->objective;
            }
            row.gain_percent = joint.gain_over_sequential_percent.value_or(0.0);
            traces[i] = joint.trace;
        } catch (const std::exception& e) {
            errors[i] = error_code(e);
        }
        rows[i] = std::move(row);
    });

    JointResult result;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (errors[i].empty()) {
            result.rows.push_back(rows[i]);
        } else {
            result.errors.push_back(errors[i]);
        }
    }
    for (double a : config.overtime_a) {
        std::map<double, std::pair<double, int>> by_theta;
        for (const auto& row : result.rows) {
            if (row.overtime_a != a) continue;
            auto& [sum, count] = by_theta[row.theta];
            sum += row.gain_percent;
            ++count;
        }
        for (const auto& [theta, agg] : by_theta) {
            result.mean_gain.emplace_back(a, theta, agg.first / agg.second);
        }
    }

    if (out_dir.empty()) return result;
    tio::ensure_dir(out_dir);
    std::vector<std::string> outputs;

    {
        tio::Table t;
        t.header = {"law",       "a",          "theta",    "xi",       "showup",
                    "lambda_joint", "mu_joint", "k_joint", "t_joint",
                    "lambda_seq",   "mu_seq",   "k_seq",   "t_seq",    "gain_percent"};
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const JointRow& row = rows[i];
            if (!errors[i].empty()) {
                std::vector<std::string> cells{law_name(row.law),
                                               tio::num(row.overtime_a, "%.6g"),
                                               tio::num(row.theta, "%.6g"),
                                               tio::num(row.xi, "%.6g"),
                                               row.showup};
                for (int c = 0; c < 9; ++c) cells.push_back(errors[i]);
                t.add_row(std::move(cells));
                continue;
            }
            t.add_row({law_name(row.law), tio::num(row.overtime_a, "%.6g"),
                       tio::num(row.theta, "%.6g"), tio::num(row.xi, "%.6g"), row.showup,
                       tio::num(row.lambda_joint, "%.6g"), tio::num(row.mu_joint, "%.6g"),
                       k_cell(row.k_joint), tio::num(row.t_joint, "%.10g"),
                       tio::num(row.lambda_seq, "%.6g"), tio::num(row.mu_seq, "%.6g"),
                       k_cell(row.k_seq), tio::num(row.t_seq, "%.10g"),
                       tio::fixed2(row.gain_percent)});
        }
        tio::write_text(out_dir + "/joint.csv", tio::to_csv(t));
        tio::write_text(out_dir + "/joint.md", tio::to_markdown(t));
        outputs.push_back("joint.csv");
        outputs.push_back("joint.md");
    }
    {
        tio::Table t;
        t.header = {"a", "theta", "mean_gain_percent"};
        for (const auto& [a, theta, gain] : result.mean_gain) {
            t.add_row({tio::num(a, "%.6g"), tio::num(theta, "%.6g"), tio::fixed2(gain)});
        }
        tio::write_text(out_dir + "/joint_summary.csv", tio::to_csv(t));
        outputs.push_back("joint_summary.csv");
    }

    ordered_json run;
    run["verb"] = "joint";
    run["config"] = config_to_json(config);
    run["outputs"] = outputs;
    run["rows"] = ordered_json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const JointRow& row = rows[i];
        ordered_json jr;
        jr["law"] = law_name(row.law);
        jr["a"] = row.overtime_a;
        jr["theta"] = row.theta;
        jr["xi"] = row.xi;
        jr["showup"] = row.showup;
        if (!errors[i].empty()) {
            jr["error"] = errors[i];
        } else {
            jr["lambda_joint"] = row.lambda_joint;
            jr["mu_joint"] = row.mu_joint;
            jr["k_joint"] = row.k_joint ? ordered_json(*row.k_joint) : ordered_json(nullptr);
            jr["t_joint"] = row.t_joint;
            jr["lambda_seq"] = row.lambda_seq;
            jr["mu_seq"] = row.mu_seq;
            jr["k_seq"] = row.k_seq ? ordered_json(*row.k_seq) : ordered_json(nullptr);
            jr["t_seq"] = row.t_seq;
            jr["gain_percent"] = row.gain_percent;
            ordered_json trace = ordered_json::array();
            for (const auto& p : traces[i]) {
                trace.push_back(ordered_json{{"lambda", p.lambda},
                                             {"mu", p.mu},
                                             {"k", p.k ? ordered_json(*p.k) : ordered_json(nullptr)},
                                             {"objective", p.objective}});
            }
            jr["mu_trace"] = std::move(trace);
        }
        run["rows"].push_back(std::move(jr));
    }
    tio::write_text(out_dir + "/joint_run.json", run.dump(2) + "\n");
    return result;
}

}  // namespace schedwin
