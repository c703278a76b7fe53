#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "schedwin/experiment.hpp"

using namespace schedwin;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Two lambdas, one scenario, two families, both laws, one delay map; deep
// enough to keep the known optimum at 180 in range and quick to sweep.
ExperimentConfig tiny_tables_config() {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.lambdas = {18.0, 19.9};
    cfg.scenarios = {{0.0, 0.0}};
    cfg.delay_maps = {DelayMap::SlotsOverMu};
    cfg.window_grid = WindowGrid{20, 300, 20};
    cfg.reference_window = 300;
    std::vector<ShowupSpec> roster = ExperimentConfig::default_showups();
    cfg.showups = {roster[0], roster[1]};  // K_0.2, K_0.4
    cfg.workers = 2;
    return cfg;
}

}  // namespace

TEST_CASE("config json round-trips byte for byte") {
    const fs::path dir = "exp_cfg_roundtrip";
    fs::create_directories(dir);
    const ExperimentConfig cfg = ExperimentConfig::defaults();
    save_config(cfg, (dir / "a.json").string());
    const ExperimentConfig loaded = load_config((dir / "a.json").string());
    save_config(loaded, (dir / "b.json").string());
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    CHECK(loaded.lambdas == cfg.lambdas);
    CHECK(loaded.showups.size() == cfg.default_showups().size());
    CHECK(loaded.reference_window == cfg.reference_window);
}

TEST_CASE("unknown config keys are rejected wherever they appear") {
    const fs::path dir = "exp_cfg_unknown";
    fs::create_directories(dir);
    save_config(ExperimentConfig::defaults(), (dir / "base.json").string());
    const nlohmann::ordered_json base =
        nlohmann::ordered_json::parse(slurp(dir / "base.json"));

    const auto expect_rejected = [&](nlohmann::ordered_json doc, const std::string& tag) {
        const fs::path path = dir / ("bad_" + tag + ".json");
        std::ofstream(path) << doc.dump(2);
        CAPTURE(tag);
        CHECK_THROWS_AS(load_config(path.string()), std::invalid_argument);
    };

    nlohmann::ordered_json top = base;
    top["surprise"] = 1;
    expect_rejected(top, "top");

    nlohmann::ordered_json showup = base;
    showup["showups"][0]["typo_field"] = true;
    expect_rejected(showup, "showup");

    nlohmann::ordered_json grid = base;
    grid["window_grid"]["k_mni"] = 20;
    expect_rejected(grid, "grid");

    // Absent keys are not errors: a partial config keeps the defaults.
    std::ofstream(dir / "partial.json") << R"({"mu": 21.0})";
    const ExperimentConfig partial = load_config((dir / "partial.json").string());
    CHECK(partial.mu == doctest::Approx(21.0));
    CHECK(partial.lambdas == ExperimentConfig::defaults().lambdas);

    std::ofstream(dir / "garbage.json") << "not json at all {";
    CHECK_THROWS_AS(load_config((dir / "garbage.json").string()), std::invalid_argument);
    CHECK_THROWS_AS(load_config((dir / "no_such_file.json").string()),
                    std::invalid_argument);
}

TEST_CASE("config validation pins the baseline inside the sweep") {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    CHECK_NOTHROW(cfg.validate());
    cfg.reference_window = 5000;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig::defaults();
    cfg.lambdas = {0.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig::defaults();
    cfg.scenarios.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("window tables resolve known optima and flag unbounded cells") {
    const ExperimentConfig cfg = tiny_tables_config();
    const TablesResult res = run_tables(cfg, "");
    REQUIRE(res.tables.size() == 2);  // one per service law

    const WindowTable* mm = res.table(ServiceLaw::Exponential, DelayMap::SlotsOverMu);
    REQUIRE(mm != nullptr);
    CHECK(mm->columns == std::vector<std::string>{"K_0.2", "K_0.4"});

    const TableCell* busy = mm->find(0.0, 0.0, 19.9, "K_0.2");
    REQUIRE(busy != nullptr);
    REQUIRE(busy->k_star.has_value());
    CHECK(*busy->k_star == 180);
    CHECK(busy->gain_percent > 0.0);
    CHECK(busy->t_at_k_star > busy->t_at_reference);

    // Light load: no finite window beats leaving the queue unbounded.
    const TableCell* light = mm->find(0.0, 0.0, 18.0, "K_0.2");
    REQUIRE(light != nullptr);
    CHECK(light->unbounded());
    CHECK(light->gain_percent == 0.0);
    REQUIRE(light->t_at_infinity.has_value());

    CHECK(mm->find(9.9, 0.0, 18.0, "K_0.2") == nullptr);
    CHECK(mm->find(0.0, 0.0, 18.0, "K_0.9") == nullptr);
}

TEST_CASE("law-agreement summary recounts from the emitted tables") {
    const ExperimentConfig cfg = tiny_tables_config();
    const TablesResult res = run_tables(cfg, "");
    const WindowTable* mm = res.table(ServiceLaw::Exponential, DelayMap::SlotsOverMu);
    const WindowTable* md = res.table(ServiceLaw::Deterministic, DelayMap::SlotsOverMu);
    REQUIRE(mm != nullptr);
    REQUIRE(md != nullptr);

    int cells = 0;
    int matches = 0;
    double loss = 0.0;
    for (std::size_t r = 0; r < mm->rows.size(); ++r) {
        for (std::size_t c = 0; c < mm->columns.size(); ++c) {
            const TableCell& a = mm->rows[r].cells[c];
            const TableCell& b = md->rows[r].cells[c];
            ++cells;
            if (a.k_star == b.k_star) {
                ++matches;
            } else {
                loss += std::abs(a.gain_percent - b.gain_percent);
            }
        }
    }
    REQUIRE(res.summary_all.size() == 1);
    const SummaryStats& s = res.summary_all[0].second;
    CHECK(s.cells == cells);
    CHECK(s.matches == matches);
    CHECK(s.mismatches == cells - matches);
    CHECK(s.match_percent ==
          doctest::Approx(100.0 * matches / static_cast<double>(cells)).epsilon(1e-12));
    if (s.mismatches > 0) {
        CHECK(s.mean_loss_percent ==
              doctest::Approx(loss / static_cast<double>(s.mismatches)).epsilon(1e-12));
    }
    CHECK(!res.mapping.empty());
}

TEST_CASE("table outputs are written deterministically") {
    const ExperimentConfig cfg = tiny_tables_config();
    run_tables(cfg, "exp_out_tables");
    for (const char* name :
         {"windows_mm_slots_over_mu.csv", "windows_mm_slots_over_mu.md",
          "windows_md_slots_over_mu.csv", "gains_mm_slots_over_mu.csv",
          "gains_md_slots_over_mu.md", "summary.csv", "mapping_report.csv",
          "tables_run.json"}) {
        CAPTURE(name);
        CHECK(fs::exists(fs::path("exp_out_tables") / name));
    }
    const std::string first = slurp("exp_out_tables/windows_mm_slots_over_mu.csv");
    const std::string summary_first = slurp("exp_out_tables/summary.csv");
    run_tables(cfg, "exp_out_tables");
    CHECK(slurp("exp_out_tables/windows_mm_slots_over_mu.csv") == first);
    CHECK(slurp("exp_out_tables/summary.csv") == summary_first);
    // Unbounded cells print as "inf" in the window table.
    CHECK(first.find("inf") != std::string::npos);
}

TEST_CASE("show-up curves start at the day-zero values and never rise") {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.curve_delay_max = 30.0;
    cfg.curve_delay_step = 1.0;
    const CurvesResult res = run_curves(cfg, "exp_out_curves");
    REQUIRE(res.delays.size() == 31);
    CHECK(res.delays.front() == 0.0);
    CHECK(res.delays.back() == 30.0);
    REQUIRE(res.series.size() == ExperimentConfig::default_showups().size());

    for (const CurveSeries& s : res.series) {
        REQUIRE(s.values.size() == res.delays.size());
        for (std::size_t i = 1; i < s.values.size(); ++i) {
            CAPTURE(s.name);
            CHECK(s.values[i] <= s.values[i - 1] + 1e-15);
        }
    }
    CHECK(res.series[0].name == "K_0.2");
    CHECK(res.series[0].values[0] == doctest::Approx(0.9).epsilon(1e-14));
    const CurveSeries& ancillary = res.series.back();
    CHECK(ancillary.name == "PureExp");
    CHECK(ancillary.values[0] == doctest::Approx(0.5).epsilon(1e-14));

    CHECK(fs::exists("exp_out_curves/showup_curves.csv"));
    CHECK(fs::exists("exp_out_curves/showup_curves_long.csv"));
    CHECK(fs::exists("exp_out_curves/curves_run.json"));
}

TEST_CASE("lever study emits one row per capacity mode and overtime level") {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.scenarios = {{0.0, 0.0}};
    std::vector<ShowupSpec> roster = ExperimentConfig::default_showups();
    cfg.showups = {roster[0]};  // K_0.2
    cfg.laws = {ServiceLaw::Exponential};
    cfg.workers = 2;
    const LeversResult res = run_levers(cfg, "exp_out_levers");
    CHECK(res.errors.empty());
    REQUIRE(res.rows.size() == 3);  // fixed panel + one optimised panel per a

    const LeverRow& fixed = res.rows[0];
    CHECK(fixed.mode == CapacityMode::FixedMu);
    CHECK(fixed.mu_star == doctest::Approx(20.0));
    CHECK(fixed.lambda_star == doctest::Approx(19.8).epsilon(1e-12));
    CHECK(fixed.alpha == doctest::Approx(0.87).epsilon(0.01));
    CHECK(fixed.delta_e_percent > 0.0);

    for (const LeverRow& row : res.rows) {
        CAPTURE(row.overtime_a);
        if (row.mode == CapacityMode::OptimizeMu) {
            CHECK(row.mu_star >= 20.0);
            CHECK(row.objective >= fixed.objective - 1e-9);
        }
        CHECK(row.lambda_star < row.mu_star);
    }

    CHECK(fs::exists("exp_out_levers/levers.csv"));
    CHECK(fs::exists("exp_out_levers/levers.md"));
    CHECK(fs::exists("exp_out_levers/levers_run.json"));
    // Law-comparison tables need both laws in the study.
    CHECK(!fs::exists("exp_out_levers/levers_wide_a0.2.csv"));

    cfg.laws = {ServiceLaw::Exponential, ServiceLaw::Deterministic};
    run_levers(cfg, "exp_out_levers_wide");
    CHECK(fs::exists("exp_out_levers_wide/levers_wide_a0.2.csv"));
    CHECK(fs::exists("exp_out_levers_wide/levers_wide_a2.csv"));
}

TEST_CASE("joint study reports non-negative gains over the two-stage baseline") {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.scenarios = {{0.0, 0.5}, {1.5, 0.5}};
    std::vector<ShowupSpec> roster = ExperimentConfig::default_showups();
    cfg.showups = {roster[0]};
    cfg.overtime_a = {0.2};
    cfg.mu_grid = MuGrid{20.0, 21.0, 0.5};
    cfg.workers = 2;
    const JointResult res = run_joint(cfg, "exp_out_joint");
    CHECK(res.errors.empty());
    REQUIRE(res.rows.size() == 2);
    for (const JointRow& row : res.rows) {
        CAPTURE(row.theta);
        CHECK(row.law == ServiceLaw::Exponential);
        CHECK(row.t_joint >= row.t_seq - 1e-12);
        CHECK(row.gain_percent >= 0.0);
        CHECK(row.lambda_joint < row.mu_joint);
        CHECK(row.lambda_seq < row.mu_seq);
    }
    REQUIRE(res.mean_gain.size() == 2);  // one (a, theta) group per scenario
    for (const auto& [a, theta, gain] : res.mean_gain) {
        CAPTURE(theta);
        CHECK(a == doctest::Approx(0.2));
        CHECK(gain >= 0.0);
    }
    CHECK(fs::exists("exp_out_joint/joint.csv"));
    CHECK(fs::exists("exp_out_joint/joint_summary.csv"));
    CHECK(fs::exists("exp_out_joint/joint_run.json"));
}

TEST_CASE("parallel for preserves index placement and propagates failures") {
    std::vector<int> out(257, -1);
    parallel_for(out.size(), 8, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i] == static_cast<int>(i * i));
    }

    parallel_for(0, 4, [&](std::size_t) { FAIL("must not be called"); });

    std::atomic<int> calls{0};
    CHECK_THROWS_AS(parallel_for(64, 4,
                                 [&](std::size_t i) {
                                     calls.fetch_add(1);
                                     if (i == 13) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    CHECK(calls.load() >= 1);
}
