#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "schedwin/experiment.hpp"

namespace {

using schedwin::DelayMap;
using schedwin::ExperimentConfig;
using schedwin::ServiceLaw;
using ordered_json = nlohmann::ordered_json;

struct CommonOpts {
    std::string config_path;
    std::string out = "out";
    std::string delay_map = "default";
    std::int64_t k_step = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_tables_flags) {
    cmd->add_option("--config", opts.config_path,
                    "Study configuration JSON (omit for built-in defaults)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out, "Output directory")->capture_default_str();
    auto* seed = cmd->add_option("--seed", opts.seed, "Random seed override");
    cmd->add_option("--workers", opts.workers, "Worker threads (0 = hardware)");
    cmd->add_flag("--strict", opts.strict, "Exit nonzero if any cell reports an error");
    cmd->callback([&opts, seed] { opts.seed_set = seed->count() > 0; });
    if (with_tables_flags) {
        cmd->add_option("--delay-map", opts.delay_map,
                        "Slot-position to delay mapping: slots, slots-over-mu, or both")
            ->check(CLI::IsMember({"slots", "slots-over-mu", "both", "default"}))
            ->capture_default_str();
        cmd->add_option("--k-step", opts.k_step, "Window grid step override")
            ->check(CLI::PositiveNumber);
    }
}

ExperimentConfig make_config(const CommonOpts& opts) {
    ExperimentConfig cfg = opts.config_path.empty() ? ExperimentConfig::defaults()
                                                    : schedwin::load_config(opts.config_path);
    if (opts.delay_map == "slots") {
        cfg.delay_maps = {DelayMap::SlotsAsDays};
    } else if (opts.delay_map == "slots-over-mu") {
        cfg.delay_maps = {DelayMap::SlotsOverMu};
    } else if (opts.delay_map == "both") {
        cfg.delay_maps = {DelayMap::SlotsOverMu, DelayMap::SlotsAsDays};
    }
    if (opts.k_step > 0) cfg.window_grid.k_step = opts.k_step;
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.workers >= 0) cfg.workers = opts.workers;
    return cfg;
}

int finish_strict(const CommonOpts& opts, std::size_t error_count) {
    if (error_count == 0) return 0;
    std::fprintf(stderr, "%zu cell(s) reported errors\n", error_count);
    return opts.strict ? 2 : 0;
}

int cmd_tables(const CommonOpts& opts) {
    const ExperimentConfig cfg = make_config(opts);
    const auto result = schedwin::run_tables(cfg, opts.out);
    std::size_t errors = 0;
    for (const auto& table : result.tables) {
        for (const auto& row : table.rows) {
            for (const auto& cell : row.cells) {
                if (!cell.error.empty()) ++errors;
            }
        }
    }
    std::printf("wrote %zu window/gain tables to %s\n", result.tables.size(),
                opts.out.c_str());
    for (const auto& [map, stats] : result.summary_all) {
        std::printf("law agreement (%s, all columns): %.2f%% of %d cells\n",
                    map == DelayMap::SlotsAsDays ? "slots_as_days" : "slots_over_mu",
                    stats.match_percent, stats.cells);
    }
    for (const auto& stats : result.mapping) {
        std::printf("reference agreement (%s, %s): %d/%d exact\n",
                    stats.map == DelayMap::SlotsAsDays ? "slots_as_days" : "slots_over_mu",
                    stats.law == ServiceLaw::Exponential ? "mm" : "md", stats.exact,
                    stats.comparable);
    }
    if (result.best_map) {
        std::printf("selected delay map: %s\n",
                    *result.best_map == DelayMap::SlotsAsDays ? "slots_as_days"
                                                              : "slots_over_mu");
    }
    return finish_strict(opts, errors);
}

int cmd_curves(const CommonOpts& opts) {
    const ExperimentConfig cfg = make_config(opts);
    const auto result = schedwin::run_curves(cfg, opts.out);
    std::printf("wrote %zu show-up curves over %zu delay points to %s\n",
                result.series.size(), result.delays.size(), opts.out.c_str());
    return 0;
}

int cmd_levers(const CommonOpts& opts) {
    const ExperimentConfig cfg = make_config(opts);
    const auto result = schedwin::run_levers(cfg, opts.out);
    std::printf("wrote %zu lever rows to %s\n", result.rows.size(), opts.out.c_str());
    return finish_strict(opts, result.errors.size());
}

int cmd_joint(const CommonOpts& opts) {
    const ExperimentConfig cfg = make_config(opts);
    const auto result = schedwin::run_joint(cfg, opts.out);
    std::printf("wrote %zu joint rows to %s\n", result.rows.size(), opts.out.c_str());
    for (const auto& [a, theta, gain] : result.mean_gain) {
        std::printf("mean joint-vs-sequential gain (a=%g, theta=%g): %.2f%%\n", a, theta,
                    gain);
    }
    return finish_strict(opts, result.errors.size());
}

struct SimOpts {
    double lambda = 19.0;
    double mu = 20.0;
    std::int64_t capacity = 0;
    bool capacity_set = false;
    std::string law = "mm";
    double theta = 0.0;
    double xi = 0.0;
    std::string showup = "K_0.2";
    std::string delay_map = "default";
    double horizon = -1.0;
    double warmup = -1.0;
    int batches = 0;
    std::string daily_csv;
};

int cmd_simulate(const CommonOpts& opts, const SimOpts& sim_opts) {
    const ExperimentConfig cfg = make_config(opts);
    const auto roster =
        cfg.showups.empty() ? ExperimentConfig::default_showups() : cfg.showups;
    const schedwin::ShowupSpec* spec = nullptr;
    for (const auto& s : roster) {
        if (s.name == sim_opts.showup) spec = &s;
    }
    if (!spec) {
        std::fprintf(stderr, "error: unknown show-up model '%s'\n",
                     sim_opts.showup.c_str());
        std::fprintf(stderr, "available:");
        for (const auto& s : roster) std::fprintf(stderr, " %s", s.name.c_str());
        std::fprintf(stderr, "\n");
        return 1;
    }

    schedwin::SimConfig sc;
    sc.spec.lambda = sim_opts.lambda;
    sc.spec.mu = sim_opts.mu;
    if (sim_opts.capacity_set) sc.spec.capacity = sim_opts.capacity;
    sc.spec.service_law = sim_opts.law == "md" ? ServiceLaw::Deterministic
                                               : ServiceLaw::Exponential;
    sc.showup = spec->model;
    sc.showup.delay_map = sim_opts.delay_map == "slots" ? DelayMap::SlotsAsDays
                          : sim_opts.delay_map == "slots-over-mu"
                              ? DelayMap::SlotsOverMu
                              : cfg.delay_maps.front();
    sc.showup.position_offset = cfg.position_offset;
    sc.econ = schedwin::EconomicParams{sim_opts.theta, sim_opts.xi, 0.0,
                                       cfg.regular_capacity};
    sc.horizon_days = sim_opts.horizon > 0.0 ? sim_opts.horizon : cfg.sim_horizon_days;
    sc.warmup_days = sim_opts.warmup >= 0.0 ? sim_opts.warmup : cfg.sim_warmup_days;
    sc.batches = sim_opts.batches > 0 ? sim_opts.batches : cfg.sim_batches;
    sc.seed = cfg.seed;
    sc.record_daily_occupancy = !sim_opts.daily_csv.empty();

    const schedwin::SimResult sim = schedwin::simulate(sc);
    const schedwin::StationaryDistribution dist =
        schedwin::stationary_distribution(sc.spec, cfg.tail_tolerance);
    const schedwin::RewardBreakdown analytic =
        schedwin::net_reward(dist, sc.econ, sc.showup);

    double sim_mean = 0.0;
    for (std::size_t j = 0; j < sim.occupancy.size(); ++j) {
        sim_mean += static_cast<double>(j) * sim.occupancy[j];
    }
    const std::size_t levels = std::max(sim.occupancy.size(), dist.probs.size());
    double tv_gap = 0.0;
    double max_gap = 0.0;
    for (std::size_t j = 0; j < levels; ++j) {
        const double p_sim = j < sim.occupancy.size() ? sim.occupancy[j] : 0.0;
        const double p_ana = j < dist.probs.size() ? dist.probs[j] : 0.0;
        tv_gap += std::abs(p_sim - p_ana);
        max_gap = std::max(max_gap, std::abs(p_sim - p_ana));
    }
    tv_gap *= 0.5;
    const double z = sim.reward_se > 0.0
                         ? (sim.reward_per_day - analytic.total) / sim.reward_se
                         : 0.0;

    std::printf("reward/day: sim %.6f +- %.6f | analytic %.6f | z = %+.2f\n",
                sim.reward_per_day, sim.reward_se, analytic.total, z);
    std::printf("mean occupancy: sim %.6f | analytic %.6f | tv gap %.2e\n", sim_mean,
                dist.mean(), tv_gap);
    if (sc.spec.capacity) {
        const double sim_block =
            sim.arrivals > 0
                ? static_cast<double>(sim.rejected) / static_cast<double>(sim.arrivals)
                : 0.0;
        std::printf("blocking: sim %.6f | analytic %.6f\n", sim_block, dist.blocking());
    }

    std::filesystem::create_directories(opts.out);
    ordered_json j;
    j["verb"] = "simulate";
    j["queue"] = ordered_json{
        {"lambda", sc.spec.lambda},
        {"mu", sc.spec.mu},
        {"capacity",
         sc.spec.capacity ? ordered_json(*sc.spec.capacity) : ordered_json(nullptr)},
        {"law", sim_opts.law == "md" ? "md" : "mm"}};
    j["economics"] = ordered_json{{"theta", sc.econ.theta}, {"xi", sc.econ.xi}};
    j["showup"] = ordered_json{{"name", spec->name},
                               {"delay_map", sc.showup.delay_map == DelayMap::SlotsAsDays
                                                 ? "slots_as_days"
                                                 : "slots_over_mu"}};
    j["sim"] = ordered_json{{"horizon_days", sc.horizon_days},
                            {"warmup_days", sc.warmup_days},
                            {"batches", sc.batches},
                            {"seed", sc.seed}};
    j["result"] = ordered_json{{"reward_per_day", sim.reward_per_day},
                               {"reward_se", sim.reward_se},
                               {"visit_rate", sim.visit_rate},
                               {"ancillary_rate", sim.ancillary_rate},
                               {"rejection_rate", sim.rejection_rate},
                               {"mean_occupancy", sim_mean},
                               {"arrivals", sim.arrivals},
                               {"admitted", sim.admitted},
                               {"rejected", sim.rejected},
                               {"shows", sim.shows},
                               {"noshows", sim.noshows},
                               {"duration_days", sim.duration_days}};
    j["analytic"] = ordered_json{{"reward_per_day", analytic.total},
                                 {"visit_revenue", analytic.visit_revenue},
                                 {"ancillary_revenue", analytic.ancillary_revenue},
                                 {"rejection_cost", analytic.rejection_cost},
                                 {"mean_occupancy", dist.mean()},
                                 {"blocking", dist.blocking()}};
    j["comparison"] =
        ordered_json{{"reward_z", z}, {"tv_gap", tv_gap}, {"max_prob_gap", max_gap}};
    {
        std::FILE* f = std::fopen((opts.out + "/sim_result.json").c_str(), "wb");
        if (!f) {
            std::fprintf(stderr, "error: cannot write %s/sim_result.json\n",
                         opts.out.c_str());
            return 1;
        }
        const std::string text = j.dump(2) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }

    if (!sim_opts.daily_csv.empty()) {
        std::FILE* f = std::fopen((opts.out + "/" + sim_opts.daily_csv).c_str(), "wb");
        if (!f) {
            std::fprintf(stderr, "error: cannot write %s/%s\n", opts.out.c_str(),
                         sim_opts.daily_csv.c_str());
            return 1;
        }
        std::fprintf(f, "day,mean_occupancy\n");
        for (std::size_t d = 0; d < sim.daily_occupancy.size(); ++d) {
            std::fprintf(f, "%zu,%.10g\n", d, sim.daily_occupancy[d]);
        }
        std::fclose(f);
    }

    if (opts.strict && std::abs(z) > 4.0) {
        std::fprintf(stderr, "simulated reward is %.2f standard errors from analytic\n",
                     z);
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Appointment scheduling-window study driver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    CommonOpts tables_opts, curves_opts, levers_opts, joint_opts, sim_common;
    SimOpts sim_opts;

    CLI::App* tables = app.add_subcommand(
        "tables", "Optimal scheduling windows and efficiency gains");
    add_common(tables, tables_opts, true);

    CLI::App* curves =
        app.add_subcommand("curves", "Show-up probability against booking delay");
    add_common(curves, curves_opts, false);

    CLI::App* levers = app.add_subcommand(
        "levers", "Panel size and capacity levers with window efficiency");
    add_common(levers, levers_opts, true);

    CLI::App* joint = app.add_subcommand(
        "joint", "Joint panel/capacity/window search against the sequential result");
    add_common(joint, joint_opts, true);

    CLI::App* simulate =
        app.add_subcommand("simulate", "Discrete-event check of one configuration");
    add_common(simulate, sim_common, false);
    simulate->add_option("--lambda", sim_opts.lambda, "Booking request rate per day")
        ->capture_default_str();
    simulate->add_option("--mu", sim_opts.mu, "Service rate per day")
        ->capture_default_str();
    auto* cap_opt =
        simulate->add_option("--capacity", sim_opts.capacity,
                             "Queue bound K (omit for an unbounded queue)");
    simulate->add_option("--law", sim_opts.law, "Service law: mm or md")
        ->check(CLI::IsMember({"mm", "md"}))
        ->capture_default_str();
    simulate->add_option("--theta", sim_opts.theta, "Rejection penalty")
        ->capture_default_str();
    simulate->add_option("--xi", sim_opts.xi, "Ancillary revenue rate")
        ->capture_default_str();
    simulate->add_option("--showup", sim_opts.showup, "Show-up model name")
        ->capture_default_str();
    simulate
        ->add_option("--delay-map", sim_opts.delay_map,
                     "Slot-position to delay mapping: slots or slots-over-mu")
        ->check(CLI::IsMember({"slots", "slots-over-mu", "default"}))
        ->capture_default_str();
    simulate->add_option("--horizon", sim_opts.horizon, "Simulated days");
    simulate->add_option("--warmup", sim_opts.warmup, "Discarded warmup days");
    simulate->add_option("--batches", sim_opts.batches, "Batch count for errors");
    simulate->add_option("--daily-csv", sim_opts.daily_csv,
                         "Also write per-day mean occupancy to this file in --out");
    simulate->callback([&] { sim_opts.capacity_set = cap_opt->count() > 0; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (tables->parsed()) return cmd_tables(tables_opts);
        if (curves->parsed()) return cmd_curves(curves_opts);
        if (levers->parsed()) return cmd_levers(levers_opts);
        if (joint->parsed()) return cmd_joint(joint_opts);
        if (simulate->parsed()) return cmd_simulate(sim_common, sim_opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
