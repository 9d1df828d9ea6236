#include <gtest/gtest.h>

#include <algorithm>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "vulnchain/engine.hpp"

using namespace vulnchain;

namespace {

ThresholdConfig default_config() {
  ThresholdConfig c;
  c.window_start = Date{2022, 4, 1};
  c.as_of = Date{2023, 4, 30};
  return c;
}

VulnerabilityRecord record_with(const std::string& id,
                                std::optional<double> cvss, bool kev,
                                std::optional<double> max_epss) {
  VulnerabilityRecord r;
  r.cve = CveId::parse(id);
  r.published = Date{2022, 6, 1};
  if (cvss) r.cvss.emplace(*cvss, CvssVersion::V3_1);
  if (kev) {
    KevEntry e;
    e.cve = r.cve;
    e.date_added = Date{2022, 7, 1};
    e.due_date = Date{2022, 7, 22};
    r.kev = e;
  }
  if (max_epss) r.add_epss({*max_epss, 0.9, Date{2022, 8, 1}});
  return r;
}

}  // namespace

TEST(Classify, KevListedHighCvssIsHighPriority) {
  const auto r = record_with("CVE-2022-1000", 9.8, true, 0.01);
  const auto result = classify(r, default_config());
  EXPECT_EQ(result.tier, PriorityTier::HighPriority);
  EXPECT_TRUE(result.kev_listed);
  ASSERT_TRUE(result.cvss_exceeds);
  EXPECT_TRUE(*result.cvss_exceeds);
}

TEST(Classify, ThreatGateBeforeSeverity) {
  // no KEV, low EPSS: normal process no matter the score
  const auto r = record_with("CVE-2022-1001", 9.8, false, 0.05);
  const auto result = classify(r, default_config());
  EXPECT_EQ(result.tier, PriorityTier::NormalProcess);
  EXPECT_FALSE(result.kev_listed);
  EXPECT_FALSE(result.epss_exceeds);
  ASSERT_TRUE(result.max_epss_in_window);
  EXPECT_DOUBLE_EQ(*result.max_epss_in_window, 0.05);
}

TEST(Classify, KevListedLowCvssIsMediumPriority) {
  const auto r = record_with("CVE-2023-26083", 3.3, true, std::nullopt);
  const auto result = classify(r, default_config());
  EXPECT_EQ(result.tier, PriorityTier::MediumPriority);
  EXPECT_TRUE(result.kev_listed);
  ASSERT_TRUE(result.cvss_exceeds);
  EXPECT_FALSE(*result.cvss_exceeds);
}

TEST(Classify, KnownDeprioritizationCase) {
  // network-accessible but sub-cutoff: lands in the medium tier by design
  const auto r = record_with("CVE-2022-2856", 6.5, true, std::nullopt);
  EXPECT_EQ(classify(r, default_config()).tier, PriorityTier::MediumPriority);
}

TEST(Classify, ExactThresholdsBothFlagged) {
  const auto r = record_with("CVE-2022-1002", 7.0, false, 0.088);
  const auto result = classify(r, default_config());
  EXPECT_EQ(result.tier, PriorityTier::HighPriority);
  EXPECT_TRUE(result.epss_exceeds);
  EXPECT_TRUE(result.flags.exact_threshold_epss);
  EXPECT_TRUE(result.flags.exact_threshold_cvss);
}

TEST(Classify, EpssWindowRespectsAsOf) {
  auto r = record_with("CVE-2022-1003", 9.8, false, std::nullopt);
  r.add_epss({0.95, 0.99, Date{2023, 5, 15}});  // after as-of: invisible
  const auto result = classify(r, default_config());
  EXPECT_EQ(result.tier, PriorityTier::NormalProcess);
  EXPECT_FALSE(result.max_epss_in_window);
}

TEST(Classify, KevAddedAfterAsOfDoesNotCount) {
  auto r = record_with("CVE-2022-1004", 9.8, false, 0.01);
  KevEntry e;
  e.cve = r.cve;
  e.date_added = Date{2023, 5, 1};  // one day past as-of
  e.due_date = Date{2023, 5, 22};
  r.kev = e;
  const auto result = classify(r, default_config());
  EXPECT_FALSE(result.kev_listed);
  EXPECT_EQ(result.tier, PriorityTier::NormalProcess);
}

TEST(Classify, MissingCvssPolicies) {
  const auto r = record_with("CVE-2022-1005", std::nullopt, true, std::nullopt);

  auto config = default_config();
  auto result = classify(r, config);
  EXPECT_EQ(result.tier, PriorityTier::HighPriority);
  EXPECT_TRUE(result.flags.missing_cvss_escalated);
  EXPECT_FALSE(result.cvss_exceeds.has_value());

  config.missing_cvss_policy = MissingCvssPolicy::EscalateMedium;
  result = classify(r, config);
  EXPECT_EQ(result.tier, PriorityTier::MediumPriority);
  EXPECT_TRUE(result.flags.missing_cvss_escalated);

  // Exclude keeps unscored records out of the priority set entirely
  config.missing_cvss_policy = MissingCvssPolicy::Exclude;
  result = classify(r, config);
  EXPECT_EQ(result.tier, PriorityTier::NormalProcess);
  EXPECT_FALSE(result.flags.missing_cvss_escalated);
  EXPECT_TRUE(result.kev_listed);
}

TEST(ClassifyPopulation, EmptyInput) {
  const auto out = classify_population({}, default_config());
  EXPECT_TRUE(out.results.empty());
  EXPECT_EQ(out.counts.total(), 0u);
}

TEST(ClassifyPopulation, CountsAndOrder) {
  std::vector<VulnerabilityRecord> records;
  for (int i = 0; i < 10; ++i) {
    const bool kev = i < 2;
    const bool hot_epss = i == 5;
    records.push_back(record_with("CVE-2022-" + std::to_string(2000 + i), 8.0,
                                  kev, hot_epss ? 0.4 : 0.01));
  }
  const auto out = classify_population(records, default_config());
  ASSERT_EQ(out.results.size(), 10u);
  EXPECT_EQ(out.counts.non_normal(), 3u);
  EXPECT_EQ(out.counts.high, 3u);
  EXPECT_EQ(out.counts.normal, 7u);
  for (std::size_t i = 0; i < records.size(); ++i)
    EXPECT_EQ(out.results[i].cve, records[i].cve);  // input order kept
}

TEST(BaselineSelect, MethodSemantics) {
  std::vector<VulnerabilityRecord> records;
  records.push_back(record_with("CVE-2022-3000", 9.8, false, 0.01));  // cvss only
  records.push_back(record_with("CVE-2022-3001", 5.0, true, 0.01));   // kev only
  records.push_back(record_with("CVE-2022-3002", 5.0, false, 0.30));  // epss only
  records.push_back(record_with("CVE-2022-3003", std::nullopt, false, 0.01));

  const auto config = default_config();
  const auto cvss = baseline_select(records, BaselineMethod::CvssOnly, config);
  const auto kev = baseline_select(records, BaselineMethod::KevOnly, config);
  const auto epss = baseline_select(records, BaselineMethod::EpssOnly, config);

  EXPECT_EQ(cvss, std::set<CveId>{CveId::parse("CVE-2022-3000")});
  EXPECT_EQ(kev, std::set<CveId>{CveId::parse("CVE-2022-3001")});
  EXPECT_EQ(epss, std::set<CveId>{CveId::parse("CVE-2022-3002")});
}

TEST(BaselineSelect, CatalogScalePopulation) {
  // every catalog member inside the population is selected
  std::vector<VulnerabilityRecord> records;
  for (int i = 0; i < 922; ++i)
    records.push_back(
        record_with("CVE-2022-" + std::to_string(10000 + i), 7.5, true, 0.01));
  for (int i = 0; i < 300; ++i)
    records.push_back(record_with("CVE-2022-" + std::to_string(20000 + i), 7.5,
                                  false, 0.01));
  const auto kev =
      baseline_select(records, BaselineMethod::KevOnly, default_config());
  EXPECT_EQ(kev.size(), 922u);
}

TEST(BaselineSelect, UnattainableEpssCutoff) {
  std::vector<VulnerabilityRecord> records;
  records.push_back(record_with("CVE-2022-3004", 9.0, false, 0.97));
  auto config = default_config();
  config.epss_cutoff = 1.0;
  EXPECT_TRUE(
      baseline_select(records, BaselineMethod::EpssOnly, config).empty());
}

TEST(EngineProperties, GateSoundness) {
  gen::Fixture fixture(8001);
  const auto population = fixture.random_population(400);
  for (int trial = 0; trial < 20; ++trial) {
    const auto config = fixture.random_config();
    for (const auto& record : population) {
      const auto result = classify(record, config);
      EXPECT_EQ(result.tier != PriorityTier::NormalProcess,
                result.kev_listed || result.epss_exceeds);
    }
  }
}

TEST(EngineProperties, ChainedEqualsKevUnionEpss) {
  gen::Fixture fixture(8002);
  const auto population = fixture.random_population(300);
  for (int trial = 0; trial < 20; ++trial) {
    const auto config = fixture.random_config();
    std::set<CveId> chained;
    for (const auto& record : population)
      if (classify(record, config).tier != PriorityTier::NormalProcess)
        chained.insert(record.cve);

    auto expected = baseline_select(population, BaselineMethod::KevOnly, config);
    const auto epss = baseline_select(population, BaselineMethod::EpssOnly, config);
    expected.insert(epss.begin(), epss.end());
    EXPECT_EQ(chained, expected);
  }
}

TEST(EngineProperties, HighTierContainedInSeverityBaseline) {
  // every high-priority record either clears the severity cutoff or was
  // escalated under the missing-score policy
  gen::Fixture fixture(8006);
  const auto population = fixture.random_population(400);
  for (int trial = 0; trial < 15; ++trial) {
    const auto config = fixture.random_config();
    const auto cvss_set =
        baseline_select(population, BaselineMethod::CvssOnly, config);
    for (const auto& record : population) {
      const auto result = classify(record, config);
      if (result.tier != PriorityTier::HighPriority) continue;
      EXPECT_TRUE(cvss_set.count(record.cve) > 0 ||
                  result.flags.missing_cvss_escalated)
          << record.cve.str();
    }
  }
}

TEST(EngineProperties, ThresholdMonotonicity) {
  gen::Fixture fixture(8003);
  const auto population = fixture.random_population(300);
  auto config = fixture.random_config();

  std::size_t previous = population.size() + 1;
  for (int milli = 50; milli <= 150; milli += 10) {
    config.epss_cutoff = milli / 1000.0;
    const auto counts = classify_population(population, config).counts;
    EXPECT_LE(counts.non_normal(), previous);
    previous = counts.non_normal();
  }

  // raising the cvss cutoff never moves records from medium to high
  config = fixture.random_config();
  std::size_t previous_high = population.size() + 1;
  for (int tenths = 60; tenths <= 80; tenths += 2) {
    config.cvss_cutoff = tenths / 10.0;
    const auto counts = classify_population(population, config).counts;
    EXPECT_LE(counts.high, previous_high);
    previous_high = counts.high;
  }
}

TEST(EngineProperties, MatchesNaiveOracle) {
  gen::Fixture fixture(8004);
  for (int trial = 0; trial < 30; ++trial) {
    const auto population =
        fixture.random_population(1 + fixture.rng()() % 200);
    const auto config = fixture.random_config();
    for (const auto& record : population) {
      const auto expected = oracle::naive_classify(record, config);
      const auto actual = classify(record, config);
      EXPECT_EQ(actual.tier, expected.tier) << record.cve.str();
      EXPECT_EQ(actual.kev_listed, expected.kev_listed);
      EXPECT_EQ(actual.epss_exceeds, expected.epss_exceeds);
    }
  }
}

TEST(EngineProperties, DeterministicClassification) {
  gen::Fixture fixture(8005);
  const auto population = fixture.random_population(100);
  const auto config = fixture.random_config();
  const auto a = classify_population(population, config);
  const auto b = classify_population(population, config);
  EXPECT_EQ(a.results, b.results);
}
