#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "blockfit/bench.hpp"
#include "blockfit/types.hpp"
#include "doctest.h"

using namespace blockfit;

namespace {

SweepRow make_row(std::vector<double> point, int rep, double nmi_v, double nmi_init, int converged,
                  int exact, std::string error = "") {
  SweepRow r;
  r.point = std::move(point);
  r.replicate = rep;
  r.seed = static_cast<std::uint64_t>(rep);
  r.nmi = nmi_v;
  r.nmi_init = nmi_init;
  r.converged = converged;
  r.exact = exact;
  r.error = std::move(error);
  return r;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("setting names round trip and unknown names are rejected") {
  for (SweepSetting s : {SweepSetting::s1_convergence, SweepSetting::s2_small_dense,
                         SweepSetting::s3_sparse, SweepSetting::dcsbm, SweepSetting::bisbm,
                         SweepSetting::consistency}) {
    CHECK(parse_setting(setting_name(s)) == s);
  }
  CHECK_THROWS_AS(parse_setting("not_a_setting"), DataError);
  CHECK_THROWS_AS(parse_setting(""), DataError);
}

TEST_CASE("default sweeps are well formed") {
  for (SweepSetting s : {SweepSetting::s1_convergence, SweepSetting::s2_small_dense,
                         SweepSetting::s3_sparse, SweepSetting::dcsbm, SweepSetting::bisbm,
                         SweepSetting::consistency}) {
    const SweepSpec spec = default_sweep(s);
    CHECK(spec.setting == s);
    CHECK(!spec.grid.empty());
    CHECK(spec.replicates >= 1);
    for (const auto& axis : spec.grid) CHECK(!axis.second.empty());
  }
  const SweepSpec s3 = default_sweep(SweepSetting::s3_sparse);
  REQUIRE(s3.grid.size() == 3);
  CHECK(s3.grid[0].first == "beta");
  CHECK(s3.grid[1].first == "lambda");
  CHECK(s3.grid[2].first == "n");
  CHECK(s3.grid[0].second == std::vector<double>{0.0, 0.05, 0.1, 0.15, 0.2});
}

TEST_CASE("summarize: single replicate has zero spread") {
  SweepTable t;
  t.setting = "consistency";
  t.axes = {"gamma", "n"};
  t.rows = {make_row({0.7, 100}, 0, 0.4, 0.2, 1, 0)};
  const SummaryTable s = summarize(t);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].replicates == 1);
  CHECK(s.rows[0].failures == 0);
  CHECK(s.rows[0].nmi_mean == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(s.rows[0].nmi_sd == 0.0);
  CHECK(s.rows[0].nmi_init_mean == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(s.rows[0].convergence_rate == 1.0);
  CHECK(s.rows[0].exact_rate == 0.0);
}

TEST_CASE("summarize: sample standard deviation over two replicates") {
  SweepTable t;
  t.setting = "consistency";
  t.axes = {"gamma"};
  t.rows = {make_row({0.7}, 0, 0.4, 0.1, 1, 1), make_row({0.7}, 1, 0.6, 0.3, 0, 0)};
  const SummaryTable s = summarize(t);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].nmi_mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.rows[0].nmi_sd == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
  CHECK(s.rows[0].nmi_init_mean == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(s.rows[0].convergence_rate == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.rows[0].exact_rate == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("summarize: failed replicates are counted and excluded from moments") {
  SweepTable t;
  t.setting = "consistency";
  t.axes = {"gamma"};
  t.rows = {make_row({0.7}, 0, 0.4, 0.1, 1, 1),
            make_row({0.7}, 1, 99.0, 99.0, 1, 1, "boom"),
            make_row({0.7}, 2, 0.6, 0.3, 1, 0)};
  const SummaryTable s = summarize(t);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].replicates == 3);
  CHECK(s.rows[0].failures == 1);
  CHECK(s.rows[0].nmi_mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.rows[0].nmi_sd == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
}

TEST_CASE("summarize: all-failed points zero their moments") {
  SweepTable t;
  t.setting = "consistency";
  t.axes = {"gamma"};
  t.rows = {make_row({0.7}, 0, 1.0, 1.0, 1, 1, "x"), make_row({0.7}, 1, 1.0, 1.0, 1, 1, "y")};
  const SummaryTable s = summarize(t);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].failures == 2);
  CHECK(s.rows[0].nmi_mean == 0.0);
  CHECK(s.rows[0].nmi_sd == 0.0);
  CHECK(s.rows[0].convergence_rate == 0.0);
}

TEST_CASE("summarize groups by grid point in first-appearance order") {
  SweepTable t;
  t.setting = "consistency";
  t.axes = {"gamma"};
  t.rows = {make_row({0.9}, 0, 0.8, 0.1, 1, 1), make_row({0.5}, 0, 0.2, 0.1, 1, 0),
            make_row({0.9}, 1, 0.6, 0.1, 1, 1)};
  const SummaryTable s = summarize(t);
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].point == std::vector<double>{0.9});
  CHECK(s.rows[0].replicates == 2);
  CHECK(s.rows[0].nmi_mean == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(s.rows[1].point == std::vector<double>{0.5});
  CHECK(s.rows[1].replicates == 1);
}

TEST_CASE("run_sweep executes the grid-major replicate-minor order with offset seeds") {
  SweepSpec spec;
  spec.setting = SweepSetting::consistency;
  spec.grid = {{"gamma", {0.6, 0.9}}, {"n", {50, 60}}};
  spec.replicates = 2;
  spec.base_seed = 7;
  const SweepTable t = run_sweep(spec);
  CHECK(t.setting == "consistency");
  CHECK(t.axes == std::vector<std::string>{"gamma", "n"});
  REQUIRE(t.rows.size() == 8);
  const std::vector<std::vector<double>> want_points = {
      {0.6, 50}, {0.6, 50}, {0.6, 60}, {0.6, 60}, {0.9, 50}, {0.9, 50}, {0.9, 60}, {0.9, 60}};
  for (size_t i = 0; i < 8; ++i) {
    CHECK(t.rows[i].point == want_points[i]);
    CHECK(t.rows[i].replicate == static_cast<int>(i % 2));
    CHECK(t.rows[i].seed == 7 + (i % 2));
    CHECK(t.rows[i].error.empty());
    CHECK(t.rows[i].nmi >= 0.0);
    CHECK(t.rows[i].nmi <= 1.0);
    CHECK(t.rows[i].converged == 1);
  }
}

TEST_CASE("run_sweep is reproducible apart from wall-clock time") {
  SweepSpec spec;
  spec.setting = SweepSetting::consistency;
  spec.grid = {{"gamma", {0.8}}, {"n", {80}}};
  spec.replicates = 3;
  spec.base_seed = 21;
  const SweepTable a = run_sweep(spec);
  const SweepTable b = run_sweep(spec);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].point == b.rows[i].point);
    CHECK(a.rows[i].seed == b.rows[i].seed);
    CHECK(a.rows[i].nmi == b.rows[i].nmi);
    CHECK(a.rows[i].nmi_init == b.rows[i].nmi_init);
    CHECK(a.rows[i].objective == b.rows[i].objective);
    CHECK(a.rows[i].converged == b.rows[i].converged);
    CHECK(a.rows[i].outer_iters == b.rows[i].outer_iters);
    CHECK(a.rows[i].exact == b.rows[i].exact);
    CHECK(a.rows[i].error == b.rows[i].error);
  }
}

TEST_CASE("run_sweep captures per-replicate failures without aborting") {
  SweepSpec spec;
  spec.setting = SweepSetting::consistency;
  spec.grid = {{"gamma", {2.0}}, {"n", {40}}};  // gamma outside [0, 1] fails inside the job
  spec.replicates = 2;
  const SweepTable t = run_sweep(spec);
  REQUIRE(t.rows.size() == 2);
  for (const SweepRow& row : t.rows) CHECK(!row.error.empty());
  const SummaryTable s = summarize(t);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].failures == 2);
}

TEST_CASE("run_sweep validates its spec") {
  SweepSpec spec;
  spec.setting = SweepSetting::consistency;
  spec.grid = {{"gamma", {0.8}}, {"n", {40}}};
  spec.replicates = 0;
  CHECK_THROWS_AS(run_sweep(spec), DataError);
  spec.replicates = 1;
  spec.grid.clear();
  CHECK_THROWS_AS(run_sweep(spec), DataError);
  spec.grid = {{"gamma", {}}};
  CHECK_THROWS_AS(run_sweep(spec), DataError);
  // a grid missing a required axis fails per row, not globally
  spec.grid = {{"gamma", {0.8}}};
  const SweepTable t = run_sweep(spec);
  for (const SweepRow& row : t.rows) CHECK(row.error.find("axis") != std::string::npos);
}

TEST_CASE("sweep CSV golden line with quoted error field") {
  SweepTable t;
  t.setting = "consistency";
  t.axes = {"gamma", "n"};
  SweepRow r = make_row({0.5, 60}, 0, 0.5, 0.25, 1, 1, "bad, \"thing\"");
  r.seed = 7;
  r.objective = -12.5;
  r.runtime_ms = 1.5;
  r.outer_iters = 3;
  t.rows = {r};
  std::ostringstream os;
  write_sweep_csv(t, os);
  CHECK(os.str() ==
        "setting,gamma,n,replicate,seed,nmi,nmi_init,objective,runtime_ms,converged,outer_iters,"
        "exact,error\n"
        "consistency,0.5,60,0,7,0.5,0.25,-12.5,1.5,1,3,1,\"bad, \"\"thing\"\"\"\n");
}

TEST_CASE("summary CSV golden line") {
  SweepTable t;
  t.setting = "consistency";
  t.axes = {"gamma", "n"};
  SweepRow r = make_row({0.5, 60}, 0, 0.5, 0.25, 1, 1);
  r.runtime_ms = 1.5;
  t.rows = {r};
  std::ostringstream os;
  write_summary_csv(summarize(t), os);
  CHECK(os.str() ==
        "setting,gamma,n,replicates,failures,nmi_mean,nmi_sd,nmi_init_mean,convergence_rate,"
        "exact_rate,runtime_ms_mean\n"
        "consistency,0.5,60,1,0,0.5,0,0.25,1,1,1.5\n");
}

}  // TEST_SUITE
