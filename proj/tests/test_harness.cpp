#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ndsim/config.hpp"
#include "ndsim/csv.hpp"
#include "ndsim/presets.hpp"
#include "ndsim/stats.hpp"
#include "ndsim/validate.hpp"

using namespace ndsim;

namespace {

std::string fresh_dir(const std::string& leaf) {
    const auto dir = std::filesystem::temp_directory_path() / "ndsim_tests" / leaf;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("config text maps onto the run parameters") {
    const std::string text = R"(
# experiment description
scenario.node_count = 80
scenario.beam_count = 6
scenario.seed = 42

sim.algorithm = gossip
sim.transmit_prob = 0.3
sim.max_slots = 750
sim.completeness = mild
sim.record_slot_series = false
sim.fraction_targets = 0.5, 0.9

sweep.parameter = M
sweep.values = 50, 100

output.dir = somewhere/else
output.format = json
)";
    const auto cfg = parse_config_text(text);
    CHECK(cfg.scenario.node_count == 80);
    CHECK(cfg.scenario.beam_count == 6);
    CHECK(cfg.scenario.beam_width == Catch::Approx(2.0 * std::numbers::pi / 6.0));
    CHECK(cfg.scenario.seed == 42);
    CHECK(cfg.sim.algorithm == Algorithm::Gossip);
    CHECK(cfg.sim.transmit_prob == Catch::Approx(0.3));
    CHECK(cfg.sim.max_slots == 750);
    CHECK(cfg.sim.completeness == CompletenessCriterion::NodeInSensingRange);
    CHECK_FALSE(cfg.sim.record_slot_series);
    CHECK(cfg.sim.fraction_targets == std::vector<double>{0.5, 0.9});
    CHECK(cfg.sweep.active);
    CHECK(cfg.sweep.parameter == "node_count");
    CHECK(cfg.sweep.values == std::vector<std::string>{"50", "100"});
    CHECK(cfg.output.dir == "somewhere/else");
    CHECK(cfg.output.format == "json");
}

TEST_CASE("alias keys reach the same fields") {
    const auto cfg = parse_config_text("sim.k = 3\nsim.p_t = 0.4\nsweep.parameter = p_t\n"
                                       "sweep.values = 0.2,0.8\n");
    CHECK(cfg.sim.channel_count == 3);
    CHECK(cfg.sim.transmit_prob == Catch::Approx(0.4));
    CHECK(cfg.sweep.parameter == "transmit_prob");
}

TEST_CASE("all configuration problems surface in one error") {
    const std::string text = "scenario.node_count = many\nsim.algorithm = telepathy\n"
                             "made.up.key = 1\nsim.transmit_prob = 2.5\n";
    try {
        parse_config_text(text);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        const auto& issues = e.issues();
        REQUIRE(issues.size() == 4);  // three parse problems + range validation
        std::string all;
        for (const auto& s : issues) all += s + "\n";
        CHECK(all.find("node_count") != std::string::npos);
        CHECK(all.find("telepathy") != std::string::npos);
        CHECK(all.find("made.up.key") != std::string::npos);
        CHECK(all.find("transmit_prob") != std::string::npos);
    }
}

TEST_CASE("structural text problems are rejected") {
    CHECK_THROWS_AS(parse_key_values("a.b = 1\na.b = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("just words\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("= 3\n"), ConfigError);
    const auto kv = parse_key_values("  # full comment\n\n a.b = 1 # trailing\n");
    REQUIRE(kv.size() == 1);
    CHECK(kv.at("a.b") == "1");
}

TEST_CASE("later overrides win") {
    auto cfg = parse_config_text("scenario.node_count = 80\nsim.trials = 4\n");
    apply_overrides(cfg, {"scenario.node_count = 200", "sim.seed = 9"});
    CHECK(cfg.scenario.node_count == 200);
    CHECK(cfg.sim.trials == 4);
    CHECK(cfg.sim.seed == 9);
    CHECK_THROWS_AS(apply_overrides(cfg, {"nonsense.key = 1"}), ConfigError);
}

TEST_CASE("config hash identifies the experiment, not the destination") {
    HarnessConfig a;
    HarnessConfig b;
    b.output.dir = "elsewhere";
    b.output.format = "json";
    CHECK(config_hash_hex(a) == config_hash_hex(b));

    HarnessConfig c;
    c.scenario.seed = 2;
    CHECK(config_hash_hex(a) != config_hash_hex(c));
    HarnessConfig d;
    d.sim.channel_count = 3;
    CHECK(config_hash_hex(a) != config_hash_hex(d));

    // canonical text is itself a loadable config describing the same run
    const auto reparsed = parse_config_text(canonical_text(a));
    CHECK(config_hash_hex(reparsed) == config_hash_hex(a));
}

TEST_CASE("csv output carries provenance and proper quoting") {
    Table t;
    t.columns = {"name", "count", "ratio"};
    t.config_hash = "deadbeefdeadbeef";
    t.seed = 77;
    t.add_row({std::string("plain"), std::int64_t(3), 0.5});
    t.add_row({std::string("a,\"b\""), std::int64_t(-1), 1.0 / 3.0});
    CHECK_THROWS_AS(t.add_row({std::string("short row")}), std::invalid_argument);

    std::ostringstream os;
    t.write_csv(os);
    const std::string text = os.str();
    std::istringstream is(text);
    std::string comment, header, row1, row2;
    std::getline(is, comment);
    std::getline(is, header);
    std::getline(is, row1);
    std::getline(is, row2);
    CHECK(comment == std::string("# config_hash=deadbeefdeadbeef seed=77 version=") +
                         artifact_version);
    CHECK(header == "name,count,ratio");
    CHECK(row1 == "plain,3,0.5");
    CHECK(row2 == "\"a,\"\"b\"\"\",-1,0.3333333333333333");
}

TEST_CASE("json output round trips") {
    Table t;
    t.columns = {"label", "value"};
    t.config_hash = "00ff";
    t.seed = 5;
    t.add_row({std::string("x"), 2.5});
    t.add_row({std::string("y"), std::int64_t(4)});
    std::ostringstream os;
    t.write_json(os);
    const auto j = nlohmann::json::parse(os.str());
    CHECK(j["config_hash"] == "00ff");
    CHECK(j["seed"] == 5);
    CHECK(j["version"] == artifact_version);
    CHECK(j["columns"] == nlohmann::json({"label", "value"}));
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0][1] == 2.5);
    CHECK(j["rows"][1][1] == 4);
}

TEST_CASE("table writer creates directories and honors the format") {
    const std::string dir = fresh_dir("writer") + "/deep/nested";
    Table t;
    t.columns = {"v"};
    t.add_row({std::int64_t(1)});
    const auto csv_path = write_table(t, dir, "sample", "csv");
    const auto json_path = write_table(t, dir, "sample", "json");
    CHECK(csv_path.ends_with("deep/nested/sample.csv"));
    CHECK(json_path.ends_with("deep/nested/sample.json"));
    CHECK(std::filesystem::exists(csv_path));
    CHECK(nlohmann::json::parse(slurp(json_path)).contains("rows"));
}

TEST_CASE("sweeps produce per-trial and aggregate tables deterministically") {
    HarnessConfig cfg;
    cfg.scenario.node_count = 20;
    cfg.sim.trials = 3;
    cfg.sim.max_slots = 5000;
    cfg.sim.record_slot_series = false;
    cfg.sweep.active = true;
    cfg.sweep.parameter = "node_count";
    cfg.sweep.values = {"10", "20"};
    cfg.output.dir = fresh_dir("sweep_a");

    const auto files = run_sweep(cfg, 1);
    REQUIRE(files.size() == 2);
    const std::string trials_text = slurp(files[0]);
    const std::string agg_text = slurp(files[1]);
    CHECK(line_count(trials_text) == 2 + 2 * 3);  // comment + header + value x trial rows
    CHECK(line_count(agg_text) == 2 + 2);
    CHECK(agg_text.find("node_mean_slots") != std::string::npos);

    HarnessConfig again = cfg;
    again.output.dir = fresh_dir("sweep_b");
    const auto files2 = run_sweep(again, 1);
    CHECK(slurp(files2[0]) == trials_text);
    CHECK(slurp(files2[1]) == agg_text);

    SECTION("a sweep without an axis is a configuration error") {
        HarnessConfig bad;
        CHECK_THROWS_AS(run_sweep(bad, 1), ConfigError);
        bad.sweep.active = true;
        bad.sweep.parameter = "node_count";
        CHECK_THROWS_AS(run_sweep(bad, 1), ConfigError);
    }
}

TEST_CASE("analysis emits the operating point tables") {
    HarnessConfig cfg;
    cfg.output.dir = fresh_dir("analyze");
    const auto files = run_analyze(cfg);
    REQUIRE(files.size() == 3);
    const std::string params = slurp(files[0]);
    CHECK(params.find("alpha") != std::string::npos);
    CHECK(params.find("0.0837860830995967") != std::string::npos);
    CHECK(params.find("0.002755538406417217") != std::string::npos);
    for (const auto& f : files) CHECK(std::filesystem::exists(f));
}

TEST_CASE("simulation runs emit per-node and per-slot tables") {
    HarnessConfig cfg;
    cfg.scenario.node_count = 30;
    cfg.sim.trials = 2;
    cfg.sim.max_slots = 2000;
    cfg.output.dir = fresh_dir("simulate");
    const auto files = run_simulate(cfg, 1);
    REQUIRE(files.size() == 2);
    CHECK(line_count(slurp(files[0])) == 2 + 2 * 30);  // summary: one row per (trial, node)
    CHECK(line_count(slurp(files[1])) >= 4);           // series: at least a few slots
    HarnessConfig no_series = cfg;
    no_series.sim.record_slot_series = false;
    no_series.output.dir = fresh_dir("simulate2");
    CHECK(run_simulate(no_series, 1).size() == 1);
}

TEST_CASE("preset names are validated") {
    CHECK_THROWS_AS(run_preset("fig99", {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_preset("", {}, 1), std::invalid_argument);
}

TEST_CASE("theory-only preset reproduces byte for byte") {
    const auto files_a = run_preset("fig12", {"output.dir = " + fresh_dir("fig12_a")}, 1);
    const auto files_b = run_preset("fig12", {"output.dir = " + fresh_dir("fig12_b")}, 1);
    REQUIRE(files_a.size() == 1);
    REQUIRE(files_b.size() == 1);
    const auto text = slurp(files_a[0]);
    CHECK(text == slurp(files_b[0]));
    CHECK(line_count(text) == 2 + 20);  // node counts 50..1000 step 50
}

TEST_CASE("simulation presets are invariant to the worker count") {
    const std::vector<std::string> small{"sim.trials = 8", "sim.max_slots = 300"};
    auto with_dir = [&](const std::string& d) {
        auto o = small;
        o.push_back("output.dir = " + d);
        return o;
    };
    const auto a = run_preset("fig10", with_dir(fresh_dir("fig10_j1")), 1);
    const auto b = run_preset("fig10", with_dir(fresh_dir("fig10_j4")), 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(slurp(a[i]) == slurp(b[i]));
}

TEST_CASE("validation levels") {
    const auto fast = run_validation("fast");
    for (const auto& c : fast.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.pass);
    }
    CHECK(fast.all_passed());
    CHECK(fast.checks.size() >= 5);
    CHECK_THROWS_AS(run_validation("bogus"), std::invalid_argument);
}

TEST_CASE("statistics helpers") {
    SECTION("sample mean interval") {
        const auto m = mean_ci({1.0, 2.0, 3.0});
        CHECK(m.mean == Catch::Approx(2.0));
        CHECK(m.n == 3);
        CHECK(m.half_width == Catch::Approx(1.959963984540054 * std::sqrt(1.0 / 3.0)));
        CHECK(m.lo() == Catch::Approx(m.mean - m.half_width));
        CHECK_THROWS_AS(mean_ci({}), std::invalid_argument);
        CHECK(mean_ci({5.0}).half_width == 0.0);
    }
    SECTION("proportion interval") {
        const auto p = proportion_ci(1, 4);
        CHECK(p.p == Catch::Approx(0.25));
        CHECK(p.lo == 0.0);  // clamped at the boundary
        CHECK(p.hi == Catch::Approx(0.25 + 1.959963984540054 * std::sqrt(0.25 * 0.75 / 4.0)));
        CHECK_THROWS_AS(proportion_ci(0, 0), std::invalid_argument);
    }
    SECTION("paired differences") {
        const auto d = paired_diff({2.0, 4.0, 6.0}, {1.0, 2.0, 3.0});
        CHECK(d.mean_diff == Catch::Approx(2.0));
        CHECK(d.z == Catch::Approx(2.0 * std::sqrt(3.0)));
        CHECK_THROWS_AS(paired_diff({1.0}, {2.0}), std::invalid_argument);
    }
    SECTION("regression slope") {
        const auto s = slope_ci({1.0, 2.0, 3.0, 4.0}, {5.0, 8.0, 11.0, 14.0});
        CHECK(s.slope == Catch::Approx(3.0));
        CHECK(s.half_width == Catch::Approx(0.0).margin(1e-12));
        CHECK_THROWS_AS(slope_ci({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), std::invalid_argument);
        CHECK_THROWS_AS(slope_ci({1.0, 2.0}, {1.0, 2.0}), std::invalid_argument);
    }
}
