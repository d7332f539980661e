// Copyright 2026 The lanepred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "lanepred/eval/metrics.hpp"
#include "lanepred/eval/reports.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

namespace lanepred::eval
{
namespace
{

using geom::Point2;
namespace oracle = lanepred::testing::oracle;

std::vector<std::vector<oracle::Xy>> to_xy(const Hypotheses & h)
{
  std::vector<std::vector<oracle::Xy>> out;
  for (const auto & traj : h) {
    out.emplace_back();
    for (const auto & p : traj) {
      out.back().push_back({p.x, p.y});
    }
  }
  return out;
}

std::vector<oracle::Xy> to_xy(const std::vector<Point2> & pts)
{
  std::vector<oracle::Xy> out;
  for (const auto & p : pts) {
    out.push_back({p.x, p.y});
  }
  return out;
}

Hypotheses random_hypotheses(std::mt19937_64 & rng, std::size_t k, std::size_t h)
{
  std::uniform_real_distribution<double> u(-5, 5);
  Hypotheses out(k);
  for (auto & traj : out) {
    for (std::size_t i = 0; i < h; ++i) {
      traj.push_back({u(rng), u(rng)});
    }
  }
  return out;
}

TEST(AdeFde, WorkedExample)
{
  const std::vector<Point2> gt{{0, 0}, {0, 0}};
  const Hypotheses preds{{{1, 0}, {2, 0}}, {{0, 1}, {0, 1}}};
  const auto two = ade_fde(preds, gt, 2);
  EXPECT_EQ(two.ade, 1.0);
  EXPECT_EQ(two.fde, 1.0);
  const auto one = ade_fde(preds, gt, 1);
  EXPECT_EQ(one.ade, 1.5);
  EXPECT_EQ(one.fde, 2.0);
}

TEST(AdeFde, FirstHypothesisOnly)
{
  std::mt19937_64 rng(1);
  auto preds = random_hypotheses(rng, 4, 6);
  const std::vector<Point2> gt = preds[2];
  const auto before = ade_fde(preds, gt, 1);
  preds[3] = gt;
  EXPECT_EQ(ade_fde(preds, gt, 1).ade, before.ade);
  EXPECT_EQ(ade_fde(preds, gt, 3).ade, 0.0);
  EXPECT_EQ(ade_fde(preds, gt, 3).fde, 0.0);
}

TEST(AdeFde, RejectsBadArguments)
{
  const Hypotheses preds{{{1, 0}}};
  const std::vector<Point2> gt{{0, 0}};
  EXPECT_THROW(ade_fde(preds, gt, 0), std::invalid_argument);
  EXPECT_THROW(ade_fde(preds, gt, 2), std::invalid_argument);
  EXPECT_THROW(ade_fde(preds, std::vector<Point2>{{0, 0}, {1, 1}}, 1), std::invalid_argument);
}

TEST(AdeFde, MatchesOracleAndShrinksWithK)
{
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t K = 1 + rng() % 15;
    const std::size_t h = 1 + rng() % 30;
    const auto preds = random_hypotheses(rng, K, h);
    const auto gt = random_hypotheses(rng, 1, h)[0];
    double prev_ade = std::numeric_limits<double>::infinity();
    double prev_fde = prev_ade;
    for (std::size_t k = 1; k <= K; ++k) {
      const auto m = ade_fde(preds, gt, k);
      const auto o = oracle::min_ade_fde(to_xy(preds), to_xy(gt), k);
      EXPECT_EQ(m.ade, o.ade);
      EXPECT_EQ(m.fde, o.fde);
      EXPECT_LE(m.ade, prev_ade);
      EXPECT_LE(m.fde, prev_fde);
      prev_ade = m.ade;
      prev_fde = m.fde;
    }
  }
}

TEST(AdeFde, TranslationInvariant)
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto preds = random_hypotheses(rng, 5, 8);
    auto gt = random_hypotheses(rng, 1, 8)[0];
    const auto a = ade_fde(preds, gt, 5);
    for (auto & traj : preds) {
      for (auto & p : traj) {
        p = {p.x + 7.25, p.y - 3.5};
      }
    }
    for (auto & p : gt) {
      p = {p.x + 7.25, p.y - 3.5};
    }
    const auto b = ade_fde(preds, gt, 5);
    EXPECT_NEAR(a.ade, b.ade, 1e-12);
    EXPECT_NEAR(a.fde, b.fde, 1e-12);
  }
}

TEST(AdeFde, ZeroFinalErrorOnlyAtTheEndpoint)
{
  const std::vector<Point2> gt{{1, 1}, {2, 2}};
  EXPECT_EQ(ade_fde(Hypotheses{{{5, 5}, {2, 2}}}, gt, 1).fde, 0.0);
  EXPECT_GT(ade_fde(Hypotheses{{{1, 1}, {2, 2.001}}}, gt, 1).fde, 0.0);
}

std::vector<scenario::PredictionInstance> with_futures(const std::vector<Hypotheses> & gts)
{
  std::vector<scenario::PredictionInstance> out;
  for (const auto & g : gts) {
    scenario::PredictionInstance inst;
    inst.future = g[0];
    out.push_back(inst);
  }
  return out;
}

TEST(Aggregate, MatchesPerInstanceMean)
{
  std::mt19937_64 rng(4);
  std::vector<Hypotheses> preds;
  std::vector<Hypotheses> gts;
  for (int i = 0; i < 20; ++i) {
    preds.push_back(random_hypotheses(rng, 6, 12));
    gts.push_back(random_hypotheses(rng, 1, 12));
  }
  const auto data = with_futures(gts);
  const auto report = evaluate_predictions(preds, data, {1, 3, 6});
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.count, 20u);
  for (const int k : {1, 3, 6}) {
    double ade = 0.0;
    double fde = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
      const auto o = oracle::min_ade_fde(to_xy(preds[i]), to_xy(gts[i][0]), k);
      ade += o.ade;
      fde += o.fde;
    }
    EXPECT_NEAR(report.at_k(k).ade, ade / 20, 1e-12);
    EXPECT_NEAR(report.at_k(k).fde, fde / 20, 1e-12);
  }
  EXPECT_THROW(report.at_k(2), std::out_of_range);
}

TEST(Aggregate, SingleAndDuplicatedInstances)
{
  std::mt19937_64 rng(5);
  const std::vector<Hypotheses> preds{random_hypotheses(rng, 3, 5)};
  const std::vector<Hypotheses> gts{random_hypotheses(rng, 1, 5)};
  const auto one = evaluate_predictions(preds, with_futures(gts), {3});
  const auto m = ade_fde(preds[0], gts[0][0], 3);
  EXPECT_EQ(one.at_k(3).ade, m.ade);
  EXPECT_EQ(one.at_k(3).fde, m.fde);
  const auto two = evaluate_predictions(
    {preds[0], preds[0]}, with_futures({gts[0], gts[0]}), {3});
  EXPECT_EQ(two.at_k(3).ade, m.ade);
  EXPECT_EQ(two.at_k(3).fde, m.fde);
}

TEST(Aggregate, Errors)
{
  EXPECT_THROW(evaluate_predictions({}, {}, {1}), std::invalid_argument);
  std::mt19937_64 rng(6);
  const std::vector<Hypotheses> preds{random_hypotheses(rng, 2, 3)};
  const auto data = with_futures({random_hypotheses(rng, 1, 3)});
  EXPECT_THROW(evaluate_predictions(preds, data, {3}), std::invalid_argument);
  EXPECT_THROW(evaluate_predictions({preds[0], preds[0]}, data, {1}), std::invalid_argument);
}

TEST(Baseline, ConstantVelocity)
{
  const std::vector<Point2> still{{0, 0}, {0, 0}, {0, 0}};
  for (const auto & p : constant_velocity_baseline(still, 4)) {
    EXPECT_EQ(p, (Point2{0, 0}));
  }
  const std::vector<Point2> moving{{-3, 0.5}, {-2, 0.5}, {-1, 0}, {0, 0}};
  const auto f = constant_velocity_baseline(moving, 5);
  ASSERT_EQ(f.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(f[i].x, static_cast<double>(i + 1));
    EXPECT_DOUBLE_EQ(f[i].y, 0.0);
  }
  EXPECT_THROW(constant_velocity_baseline(std::vector<Point2>{{0, 0}}, 3), std::invalid_argument);
}

TEST(Baseline, PositiveErrorOnACurve)
{
  scenario::PredictionInstance inst;
  inst.past = {{-3, 0}, {-2, 0}, {-1, 0}, {0, 0}};
  std::vector<Point2> cv;
  for (int i = 1; i <= 6; ++i) {
    inst.future.push_back({std::sin(0.2 * i) / 0.2, (1 - std::cos(0.2 * i)) / 0.2});
    cv.push_back({1.0 * i, 0.0});
  }
  const auto report = evaluate_constant_velocity({inst}, {1});
  const auto o = oracle::min_ade_fde({to_xy(cv)}, to_xy(inst.future), 1);
  EXPECT_GT(report.at_k(1).ade, 0.0);
  EXPECT_NEAR(report.at_k(1).ade, o.ade, 1e-12);
  EXPECT_NEAR(report.at_k(1).fde, o.fde, 1e-12);
  EXPECT_EQ(report.method, "constant_velocity");
}

TEST(KList, Parsing)
{
  EXPECT_EQ(parse_k_list("5,1,10,5"), (std::vector<int>{1, 5, 10}));
  EXPECT_EQ(parse_k_list("15"), (std::vector<int>{15}));
  EXPECT_THROW(parse_k_list(""), std::invalid_argument);
  EXPECT_THROW(parse_k_list("1,x"), std::invalid_argument);
  EXPECT_THROW(parse_k_list("0"), std::invalid_argument);
  EXPECT_THROW(parse_k_list("2.5"), std::invalid_argument);
}

TEST(Reports, HashAndNumberFormat)
{
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Reports, MetricCsv)
{
  lanepred::testing::TempDir dir("metric_csv");
  MetricReport r;
  r.method = "lanepred";
  r.count = 3;
  r.rows = {{1, 1.5, 2.0}, {5, 0.25, 0.5}};
  write_metric_csv(dir / "m.csv", {r});
  EXPECT_EQ(lanepred::testing::read_file(dir / "m.csv"),
    "method,k,ade,fde,count\nlanepred,1,1.5,2,3\nlanepred,5,0.25,0.5,3\n");
}

}  // namespace
}  // namespace lanepred::eval
