#include <doctest.h>

#include <sstream>

#include "kinetic_harris/config.hpp"
#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/experiment.hpp"

using namespace kh;

TEST_CASE("a complete config parses")
{
    auto c = parse_config_text(R"(
[scenario]
name = confined-bgk
d = 1
[potential]
name = quartic
c = 2
[simulation]
N = 1e4
t_final = 5
snapshots = 0, 1, 2.5, 5
seed = 3
x0 = 0.5
v0 = -1
[binning]
bins = 32
[output]
dir = /tmp/x
)");
    CHECK(c.scenario == ScenarioKind::ConfinedBGK);
    CHECK(c.N == 10000);
    CHECK(c.snapshots == std::vector<double>{0, 1, 2.5, 5});
    CHECK(c.x0[0] == 0.5);
    CHECK(c.v0[0] == -1.0);
    CHECK(make_potential(c)->name() == "quartic");
}

TEST_CASE("invalid fields are rejected by name")
{
    CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nname = subgeometric-bgk\n[potential]\nbeta = 1.5\n"),
                         doctest::Contains("potential.beta"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nname = torus-bgk\nfoo = 1\n"),
                         doctest::Contains("scenario.foo"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nname = torus-bgk\n[simulation]\nsnapshots = 0, 2, 1\n"),
                         doctest::Contains("simulation.snapshots"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nname = torus-bgk\n[simulation]\nt_final = 1\nsnapshots = 0, 2\n"),
                         doctest::Contains("within [0, t_final]"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nname = nowhere\n"), doctest::Contains("scenario.name"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[simulation]\nN = 1000\n"), doctest::Contains("scenario.name"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config_text("[scenario]\nname = torus-bgk\n[simulation]\nN = 12.5\n"), ConfigError);
}

TEST_CASE("overrides and defaults")
{
    auto c = default_config(ScenarioKind::TorusBGK, {{"d", "1"}, {"N", "1e5"}, {"t", "20"}, {"seed", "7"}});
    CHECK(c.N == 100000);
    CHECK(c.t_final == 20.0);
    CHECK(c.seed == 7);
    CHECK(c.snapshots.front() == 0.0);
    CHECK(c.snapshots.back() == 20.0);
    CHECK(std::is_sorted(c.snapshots.begin(), c.snapshots.end()));
    CHECK_THROWS_AS(default_config(ScenarioKind::TorusBGK, {{"bogus", "1"}}), ConfigError);
}

TEST_CASE("heavy-tail starts need whole space and a finite first moment")
{
    auto c = default_config(ScenarioKind::SubgeometricBGK,
                            {{"simulation.initial", "heavy-tail"}, {"simulation.tail_index", "2.5"},
                             {"simulation.tail_scale", "3"}});
    CHECK(c.initial == InitialLaw::HeavyTail);
    CHECK(c.tail_index == 2.5);
    CHECK(c.tail_scale == 3.0);
    CHECK_THROWS_AS(default_config(ScenarioKind::TorusBGK, {{"simulation.initial", "heavy-tail"}}), ConfigError);
    CHECK_THROWS_AS(default_config(ScenarioKind::ConfinedBGK,
                                   {{"simulation.initial", "heavy-tail"}, {"simulation.tail_index", "1"}}),
                    ConfigError);
}

TEST_CASE("torus scenarios warn about potential settings")
{
    auto c = parse_config_text("[scenario]\nname = torus-bgk\n[potential]\nname = quadratic\n");
    REQUIRE(c.warnings.size() == 1);
    CHECK(c.warnings[0].find("ignored") != std::string::npos);
}

TEST_CASE("validate checks declared drift parameters")
{
    auto good = parse_config_text(
        "[scenario]\nname = confined-bgk\n[potential]\nname = quadratic\ngamma1 = 0.5\ngamma2 = 1\nA = 0\n");
    auto rep = validate_experiment(good);
    CHECK(rep.ok());
    auto bad = parse_config_text(
        "[scenario]\nname = confined-bgk\n[potential]\nname = quadratic\ngamma1 = 1\ngamma2 = 1\nA = 0\n");
    auto rep2 = validate_experiment(bad);
    CHECK_FALSE(rep2.ok());
    CHECK(rep2.text().find("at x = (") != std::string::npos);
}

TEST_CASE("runs are deterministic across worker counts")
{
    auto c = default_config(ScenarioKind::TorusBGK, {{"N", "4000"}, {"t", "3"}, {"simulation.snapshot_count", "6"}});
    auto a = run_experiment(c, Execution{1, false});
    auto b = run_experiment(c, Execution{3, false});
    CHECK(snapshots_csv(a.rows) == snapshots_csv(b.rows));
    CHECK(snapshots_csv(a.rows).rfind("t,tv,tv_stderr,wtv,wtv_stderr,bound\n", 0) == 0);
}

TEST_CASE("exit codes")
{
    std::ostringstream out, err;
    auto bad = default_config(ScenarioKind::TorusBGK, {{"d", "3"}});
    CHECK(command_run(bad, {}, out, err) == exit_config);
    auto c = default_config(ScenarioKind::TorusBGK, {{"N", "2000"}, {"t", "2"}, {"output.dir", "kh_test_out"}});
    CHECK(command_run(c, {}, out, err) == exit_ok);
}
