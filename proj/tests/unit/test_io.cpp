#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "sdet/error.hpp"
#include "sdet/io.hpp"

using namespace sdet;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an sdet::Error";
  return ErrorKind::io;
}

}  // namespace

TEST(Fmt12, TwelveSignificantDigits) {
  EXPECT_EQ(io::fmt12(0.75), "0.75");
  EXPECT_EQ(io::fmt12(2.0 / 3.0), "0.666666666667");
  EXPECT_EQ(io::fmt12(1e-20), "1e-20");
}

TEST(DistributionJson, RoundTrip) {
  const std::vector<Distribution> ds{
      Distribution::gaussian(1.5, 2),
      Distribution::gen_gaussian(1.0, 3.0),
      Distribution::uniform(-1, 4),
      Distribution::dilated(Distribution::gaussian(), 2.0),
      Distribution::finite_discrete({{0, 0.25}, {1, 0.75}}),
      Distribution::mixture({{0.9, Distribution::gaussian()}, {0.1, Distribution::point_mass(3)}}),
  };
  for (const auto& d : ds) {
    const auto j = io::to_json(d);
    const auto back = io::distribution_from_json(j);
    EXPECT_EQ(io::to_json(back), j);
    for (double y : {-2.0, 0.0, 0.5, 1.0, 3.0}) EXPECT_EQ(back.cdf(y), d.cdf(y));
  }
  EXPECT_EQ(kind_of([] { io::distribution_from_json({{"kind", "cauchy"}}); }), ErrorKind::invalid_parameter);
}

TEST(ConfigJson, RoundTripAndHash) {
  const auto j = nlohmann::json::parse(R"({
    "family": "hetero", "params": {"sigma2": 0.5},
    "beta_grid": [0.6, 0.7], "r_grid": [0.1], "n_list": [1000],
    "replicates": 20, "tests": ["hc", "lr"], "seed": 42, "workers": 3
  })");
  const auto cfg = io::config_from_json(j);
  EXPECT_EQ(cfg.family, Family::hetero);
  EXPECT_EQ(cfg.params.sigma2, 0.5);
  EXPECT_EQ(cfg.tests.size(), 2u);
  EXPECT_EQ(cfg.workers, 3u);
  const auto again = io::config_from_json(io::to_json(cfg));
  EXPECT_EQ(io::config_hash(again), io::config_hash(cfg));
  auto other = cfg;
  other.workers = 9;
  EXPECT_EQ(io::config_hash(other), io::config_hash(cfg));
  other.seed = 43;
  EXPECT_NE(io::config_hash(other), io::config_hash(cfg));
  EXPECT_EQ(kind_of([] { io::config_from_json({{"tests", {"ks"}}}); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { io::config_from_json({{"replicates", "many"}}); }), ErrorKind::config);
}

TEST(Manifest, Fields) {
  ExperimentConfig cfg;
  cfg.seed = 5;
  PhaseTable t;
  t.wall_time = 1.25;
  t.worker_count = 4;
  const auto m = io::manifest(cfg, t);
  EXPECT_EQ(m.at("seed"), 5);
  EXPECT_EQ(m.at("worker_count"), 4);
  EXPECT_EQ(m.at("config_hash").get<std::string>().size(), 16u);
}

TEST(BoundaryJson, ReparsedValueReproducesBits) {
  BoundaryResult b;
  b.beta = 2.0 / 3.0;
  const auto j = nlohmann::json::parse(io::to_json(b).dump());
  EXPECT_EQ(io::fmt12(j.at("beta").get<double>()), io::fmt12(b.beta));
  EXPECT_EQ(j.at("method"), "grid");
}

TEST(Sample, ParsesColumnsAndHeader) {
  std::istringstream in("y,label\n1.5,a\n-2\n\n3e-1, x\n");
  const auto ys = io::parse_sample(in);
  ASSERT_EQ(ys.size(), 3u);
  EXPECT_EQ(ys[0], 1.5);
  EXPECT_EQ(ys[2], 0.3);
  std::istringstream bad("1\nfoo\n");
  EXPECT_EQ(kind_of([&] { io::parse_sample(bad); }), ErrorKind::io);
  EXPECT_EQ(kind_of([] { io::read_sample("/nonexistent/sample.csv"); }), ErrorKind::io);
}

TEST(ExponentCsv, RoundTrip) {
  std::istringstream in("# convolutional\nu,alpha\n-1,-inf\n0,0\n1,0.5\n");
  const auto e = io::parse_exponent_csv(in);
  EXPECT_EQ(e.axis(), Axis::u);
  EXPECT_TRUE(e.convolutional());
  EXPECT_EQ(e(-1.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(e(0.5), 0.25);
  std::ostringstream out;
  io::write_exponent_csv(out, e);
  std::istringstream back(out.str());
  const auto e2 = io::parse_exponent_csv(back);
  EXPECT_TRUE(e2.convolutional());
  EXPECT_EQ(e2(1.0), 0.5);

  std::istringstream s_axis("s,gamma\n0,0\n2,1\n");
  EXPECT_EQ(io::parse_exponent_csv(s_axis).axis(), Axis::s);
  std::istringstream bad("x,alpha\n0,0\n");
  EXPECT_EQ(kind_of([&] { io::parse_exponent_csv(bad); }), ErrorKind::io);
}

TEST(PhaseCsv, Header) {
  std::ostringstream out;
  io::write_phase_csv(out, PhaseTable{});
  EXPECT_EQ(out.str(), "beta,r,n,test,type1_rate,type2_rate,total_error,wilson_ci_halfwidth,replicates,seed,beta_star\n");
}
