#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "schervish/dataset.hpp"

using namespace schervish;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return load_csv(in);
}

std::size_t error_row(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.row();
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST(LoadCsv, Basic) {
  const Dataset d = parse("score,label\n0.9,1\n0.1,0\n");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.prevalence(), 0.5);
  EXPECT_EQ(d.scores()[0], 0.9);
  EXPECT_EQ(d.labels()[1], 0);
}

TEST(LoadCsv, ColumnOrderCrlfAndOptionalColumns) {
  const Dataset d = parse("weight,label,group,score\r\n2,1,a,0.7\r\n1,0,b,0.2\r\n\r\n");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_NEAR(d.prevalence(), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(d.groups()[0], "a");
  EXPECT_EQ(d.scores()[0], 0.7);
  EXPECT_EQ(d.weights()[0], 2.0);
}

TEST(LoadCsv, ErrorsCarryRows) {
  EXPECT_EQ(error_row("score,label\n1.2,0\n0.1,1\n"), 1u);
  EXPECT_EQ(error_row("score,label\n0.2,0\n0.1,2\n"), 2u);
  EXPECT_EQ(error_row("score,label\n0.2,0\nabc,1\n"), 2u);
  EXPECT_EQ(error_row("score,label,weight\n0.2,0,1\n0.1,1,0\n"), 2u);
  EXPECT_EQ(error_row("score,label\n0.2,0\n0.1\n"), 2u);
  EXPECT_THROW(parse("score,label\n0.2,1\n0.4,1\n"), DataError);
  EXPECT_THROW(parse("score,label,extra\n0.2,1,3\n"), DataError);
  EXPECT_THROW(parse("score\n0.2\n"), DataError);
  EXPECT_THROW(parse(""), DataError);
  try {
    parse("score,label\n0.2,1\n0.4,1\n");
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate prevalence"), std::string::npos);
  }
}

TEST(LoadCsv, RoundTrip) {
  std::mt19937_64 rng(4);
  const Dataset d = fixtures::random_dataset(rng, 300, fixtures::Labels::Calibrated, true);
  std::ostringstream out;
  write_csv(out, d);
  const Dataset back = parse(out.str());
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back.scores()[i], d.scores()[i]);
    EXPECT_EQ(back.labels()[i], d.labels()[i]);
    EXPECT_EQ(back.weights()[i], d.weights()[i]);
  }
  EXPECT_EQ(back.prevalence(), d.prevalence());
}

TEST(EmpiricalPrevalence, Examples) {
  EXPECT_EQ(empirical_prevalence(parse("score,label\n0.1,0\n0.2,1\n")), 0.5);
  EXPECT_EQ(empirical_prevalence(parse("score,label\n0,1\n0,1\n0,0\n0,0\n0,0\n0,0\n0,0\n0,0\n")), 0.25);
  EXPECT_NEAR(empirical_prevalence(parse("score,label,weight\n0.5,1,2\n0.5,0,1\n")), 2.0 / 3.0, 1e-15);
}

TEST(Dataset, OverrideAndValidation) {
  const std::vector<Sample> rows{{0.3, 1}, {0.6, 0}, {0.4, 0}};
  EXPECT_EQ(Dataset(rows, 0.2).prevalence(), 0.2);
  EXPECT_THROW(Dataset(rows, 1.0), DataError);
  EXPECT_THROW(Dataset(std::vector<Sample>{}), DataError);
  EXPECT_THROW(Dataset(std::vector<Sample>{{0.3, 1, "", -1.0}, {0.2, 0}}), DataError);
}

TEST(Reweight, Examples) {
  const Dataset d = fixtures::d4();
  const Dataset same = reweight(d, d.prevalence());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(same.weights()[i], d.weights()[i]);

  const Dataset shifted = reweight(d, 0.75);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(shifted.weights()[i], d.labels()[i] == 1 ? 1.5 : 0.5);
  }
  EXPECT_EQ(shifted.prevalence(), 0.75);
  EXPECT_EQ(shifted.reference_weight(), d.reference_weight());
}

TEST(Reweight, MeanLabelAndInverse) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Dataset d = fixtures::random_dataset(rng, 100, fixtures::Labels::Calibrated, true);
    const double pi = u(rng);
    const Dataset r = reweight(d, pi);
    EXPECT_NEAR(empirical_prevalence(r), pi, 1e-12);
    const Dataset back = reweight(r, d.prevalence());
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(back.weights()[i], d.weights()[i], 1e-12);
  }
  const Dataset d = fixtures::d4();
  const Dataset all_pos = reweight(d, 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(all_pos.weights()[i] == 0.0, d.labels()[i] == 0);
}

TEST(Generate, Deterministic) {
  GeneratorSpec spec;
  spec.n = 500;
  spec.seed = 42;
  const Dataset a = generate(spec), b = generate(spec);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.scores()[i], b.scores()[i]);
    EXPECT_EQ(a.labels()[i], b.labels()[i]);
  }
  spec.seed = 43;
  EXPECT_NE(generate(spec).scores()[0], a.scores()[0]);
}

TEST(Generate, PrevalenceConcentration) {
  GeneratorSpec spec;
  spec.n = 10000;
  spec.pi0 = 0.3;
  spec.seed = 7;
  const Dataset d = generate(spec);
  EXPECT_LE(std::abs(d.prevalence() - 0.3), 3 * std::sqrt(0.3 * 0.7 / 10000));
}

TEST(Generate, SlopeAndInterceptActOnLogit) {
  GeneratorSpec base;
  base.n = 200;
  base.seed = 9;
  base.pi0 = 0.4;
  GeneratorSpec tilted = base;
  tilted.calib_slope = 0.5;
  tilted.calib_intercept = 0.3;
  const Dataset a = generate(base), b = generate(tilted);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(logit(b.scores()[i]), 0.5 * logit(a.scores()[i]) + 0.3, 1e-9);
  }
}

TEST(Generate, Validation) {
  GeneratorSpec spec;
  spec.sigma = 0;
  EXPECT_THROW(generate(spec), std::invalid_argument);
  spec.sigma = 1;
  spec.n = 1;
  EXPECT_THROW(generate(spec), std::invalid_argument);
}

TEST(Dataset, GroupsAndConcatenate) {
  const Dataset d = parse("score,label,group\n0.1,0,a\n0.9,1,a\n0.2,1,b\n0.3,0,b\n0.4,0,b\n");
  EXPECT_EQ(d.group_names(), (std::vector<std::string>{"a", "b"}));
  const Dataset b = d.subgroup("b");
  EXPECT_EQ(b.size(), 3u);
  EXPECT_NEAR(b.prevalence(), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(d.subgroup("zzz"), DataError);
  const std::vector<Dataset> parts{d.subgroup("a"), b};
  const Dataset joined = concatenate(parts);
  EXPECT_EQ(joined.size(), 5u);
  EXPECT_EQ(joined.prevalence(), 0.4);
}
