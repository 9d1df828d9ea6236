#include <gtest/gtest.h>

#include <random>

#include "vulnchain/cve_id.hpp"
#include "vulnchain/cvss.hpp"
#include "vulnchain/date.hpp"
#include "vulnchain/record.hpp"

using namespace vulnchain;

TEST(Date, ParseAndFormat) {
  auto d = try_parse_date("2022-04-01");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->year, 2022);
  EXPECT_EQ(d->month, 4u);
  EXPECT_EQ(d->day, 1u);
  EXPECT_EQ(to_string(*d), "2022-04-01");

  EXPECT_TRUE(try_parse_date("2024-02-29"));   // leap year
  EXPECT_FALSE(try_parse_date("2023-02-29"));
  EXPECT_FALSE(try_parse_date("2022-13-01"));
  EXPECT_FALSE(try_parse_date("2022-02-30"));
  EXPECT_FALSE(try_parse_date("02-30"));
  EXPECT_FALSE(try_parse_date("2022/02/03"));
}

TEST(Date, TimestampSuffixIgnored) {
  auto d = try_parse_date("2022-05-10T14:15:00.000");
  ASSERT_TRUE(d);
  EXPECT_EQ(to_string(*d), "2022-05-10");
}

TEST(Date, DayArithmeticAndOrdering) {
  const Date d{2023, 4, 30};
  EXPECT_EQ(to_string(plus_days(d, 1)), "2023-05-01");
  EXPECT_EQ(to_string(plus_days(Date{2022, 12, 31}, 1)), "2023-01-01");
  EXPECT_EQ(to_epoch_days(Date{1970, 1, 1}), 0);
  EXPECT_LT((Date{2022, 4, 1}), (Date{2022, 4, 2}));
  EXPECT_LT((Date{2022, 12, 31}), (Date{2023, 1, 1}));
  // round-trip across a few thousand days
  for (std::int64_t z = -1000; z < 30000; z += 37)
    EXPECT_EQ(to_epoch_days(from_epoch_days(z)), z);
}

TEST(CveId, CanonicalForm) {
  auto id = CveId::parse("cve-2022-1234");
  EXPECT_EQ(id.str(), "CVE-2022-1234");
  EXPECT_EQ(id.year(), 2022);
  EXPECT_EQ(id.sequence(), 1234);
  EXPECT_EQ(CveId::parse("CVE-2022-1234"), id);
}

TEST(CveId, RejectsMalformed) {
  EXPECT_FALSE(CveId::try_parse("CVE-1998-1234"));   // year < 1999
  EXPECT_FALSE(CveId::try_parse("CVE-2022-123"));    // < 4 digits
  EXPECT_FALSE(CveId::try_parse("CVE-2022-12a4"));
  EXPECT_FALSE(CveId::try_parse("CVE-22-1234"));
  EXPECT_FALSE(CveId::try_parse("XCVE-2022-1234"));
  EXPECT_FALSE(CveId::try_parse(""));
  EXPECT_THROW(CveId::parse("not-a-cve"), MalformedCveId);
}

TEST(CveId, NumericOrdering) {
  EXPECT_LT(CveId::parse("CVE-2022-9999"), CveId::parse("CVE-2022-10000"));
  EXPECT_LT(CveId::parse("CVE-2021-44228"), CveId::parse("CVE-2022-0001"));
}

TEST(SeverityBand, FixedRanges) {
  EXPECT_EQ(severity_band(9.0), SeverityBand::Critical);
  EXPECT_EQ(severity_band(10.0), SeverityBand::Critical);
  EXPECT_EQ(severity_band(8.9), SeverityBand::High);
  EXPECT_EQ(severity_band(7.0), SeverityBand::High);
  EXPECT_EQ(severity_band(6.9), SeverityBand::Medium);
  EXPECT_EQ(severity_band(4.0), SeverityBand::Medium);
  EXPECT_EQ(severity_band(3.9), SeverityBand::Low);
  EXPECT_EQ(severity_band(0.1), SeverityBand::Low);
  EXPECT_EQ(severity_band(0.0), SeverityBand::None);
}

TEST(SeverityBand, OutOfRange) {
  EXPECT_THROW(severity_band(-0.1), OutOfRange);
  EXPECT_THROW(severity_band(10.1), OutOfRange);
}

TEST(SeverityBand, TotalAndMonotone) {
  int previous = 0;
  for (int t = 0; t <= 100; ++t) {
    const auto band = severity_band(t / 10.0);
    const int ordinal = static_cast<int>(band);
    EXPECT_GE(ordinal, previous) << "band not monotone at " << t / 10.0;
    EXPECT_EQ(band, severity_band(t / 10.0));  // pure
    previous = ordinal;
  }
}

TEST(CvssVector, ParsesFullVector) {
  const auto v =
      parse_cvss_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H");
  EXPECT_EQ(v.attack_vector, AttackVector::Network);
  EXPECT_EQ(v.attack_complexity, AttackComplexity::Low);
  EXPECT_EQ(v.privileges_required, PrivilegesRequired::None);
  EXPECT_EQ(v.user_interaction, UserInteraction::None);
  EXPECT_EQ(v.scope, Scope::Unchanged);
  EXPECT_EQ(v.confidentiality, Impact::High);
  EXPECT_EQ(v.integrity, Impact::High);
  EXPECT_EQ(v.availability, Impact::High);
}

TEST(CvssVector, ParsesLocalLowImpact) {
  const auto v =
      parse_cvss_vector("CVSS:3.1/AV:L/AC:L/PR:L/UI:N/S:U/C:L/I:N/A:N");
  EXPECT_EQ(v.attack_vector, AttackVector::Local);
  EXPECT_EQ(v.confidentiality, Impact::Low);
  EXPECT_EQ(v.privileges_required, PrivilegesRequired::Low);
}

TEST(CvssVector, MalformedInputs) {
  EXPECT_THROW(parse_cvss_vector("CVSS:3.1/AV:N/AC:L"), MalformedVector);
  EXPECT_THROW(parse_cvss_vector("CVSS:2.0/AV:N/AC:L/Au:N/C:P/I:P/A:P"),
               MalformedVector);
  EXPECT_THROW(
      parse_cvss_vector("CVSS:3.1/AV:X/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"),
      MalformedVector);
  EXPECT_THROW(parse_cvss_vector(""), MalformedVector);
  EXPECT_THROW(
      parse_cvss_vector("AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"),
      MalformedVector);
}

TEST(CvssVector, UnknownMetricKeysIgnored) {
  const auto v = parse_cvss_vector(
      "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/E:U/RL:O/RC:C");
  EXPECT_EQ(v.attack_vector, AttackVector::Network);
}

TEST(CvssVector, SerializeCanonicalOrdering) {
  // components permuted plus a temporal metric; canonical form restores order
  const std::string scrambled =
      "CVSS:3.1/C:H/AV:N/I:H/AC:L/A:H/PR:N/S:U/UI:N/E:U";
  const auto v = parse_cvss_vector(scrambled);
  EXPECT_EQ(serialize_cvss_vector(v, cvss_vector_version(scrambled)),
            "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H");
}

TEST(CvssVector, RoundTripProperty) {
  std::mt19937 rng(20230430);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  for (int i = 0; i < 1000; ++i) {
    CvssVector v;
    v.attack_vector = static_cast<AttackVector>(pick(4));
    v.attack_complexity = static_cast<AttackComplexity>(pick(2));
    v.privileges_required = static_cast<PrivilegesRequired>(pick(3));
    v.user_interaction = static_cast<UserInteraction>(pick(2));
    v.scope = static_cast<Scope>(pick(2));
    v.confidentiality = static_cast<Impact>(pick(3));
    v.integrity = static_cast<Impact>(pick(3));
    v.availability = static_cast<Impact>(pick(3));
    const auto version = pick(2) ? CvssVersion::V3_1 : CvssVersion::V3_0;
    const std::string text = serialize_cvss_vector(v, version);
    EXPECT_EQ(parse_cvss_vector(text), v);
    EXPECT_EQ(cvss_vector_version(text), version);
    EXPECT_EQ(serialize_cvss_vector(parse_cvss_vector(text), version), text);
  }
}

TEST(CvssMetric, QuantizesToTenths) {
  const CvssMetric m(9.7999999, CvssVersion::V3_1);
  EXPECT_EQ(m.tenths(), 98);
  EXPECT_DOUBLE_EQ(m.base_score(), 9.8);
  EXPECT_EQ(m.band(), SeverityBand::Critical);
  EXPECT_THROW(CvssMetric(-0.1, CvssVersion::V3_1), OutOfRange);
  EXPECT_THROW(CvssMetric(10.2, CvssVersion::V3_1), OutOfRange);
}

TEST(EpssObservation, Validation) {
  EXPECT_NO_THROW(validate(EpssObservation{0.5, 0.9, Date{2023, 1, 15}}));
  EXPECT_THROW(validate(EpssObservation{1.5, 0.9, Date{2023, 1, 15}}),
               OutOfRange);
  EXPECT_THROW(validate(EpssObservation{0.5, -0.2, Date{2023, 1, 15}}),
               OutOfRange);
}

TEST(KevEntry, DueDateOrdering) {
  KevEntry e;
  e.cve = CveId::parse("CVE-2022-26925");
  e.date_added = Date{2022, 5, 16};
  e.due_date = Date{2022, 6, 6};
  EXPECT_NO_THROW(validate(e));
  e.due_date = Date{2022, 5, 15};
  EXPECT_THROW(validate(e), SchemaError);
}

TEST(VulnerabilityRecord, EpssHistoryStaysSortedAndUnique) {
  VulnerabilityRecord r;
  r.cve = CveId::parse("CVE-2022-1111");
  r.published = Date{2022, 4, 2};
  r.add_epss({0.10, 0.8, Date{2022, 6, 1}});
  r.add_epss({0.02, 0.4, Date{2022, 5, 1}});
  r.add_epss({0.04, 0.5, Date{2022, 7, 1}});
  ASSERT_EQ(r.epss_history.size(), 3u);
  EXPECT_EQ(r.epss_history[0].observed_on, (Date{2022, 5, 1}));
  EXPECT_EQ(r.epss_history[2].observed_on, (Date{2022, 7, 1}));

  // same-date re-ingest overwrites
  r.add_epss({0.30, 0.9, Date{2022, 6, 1}});
  ASSERT_EQ(r.epss_history.size(), 3u);
  EXPECT_DOUBLE_EQ(r.epss_history[1].score, 0.30);
  EXPECT_NO_THROW(validate(r));
}

TEST(VulnerabilityRecord, MaxEpssBetween) {
  VulnerabilityRecord r;
  r.cve = CveId::parse("CVE-2022-1111");
  r.published = Date{2022, 4, 2};
  r.add_epss({0.02, 0.4, Date{2022, 5, 1}});
  r.add_epss({0.10, 0.8, Date{2022, 6, 1}});
  r.add_epss({0.04, 0.5, Date{2022, 7, 1}});

  auto max = r.max_epss_between(Date{2022, 4, 1}, Date{2023, 4, 30});
  ASSERT_TRUE(max);
  EXPECT_DOUBLE_EQ(*max, 0.10);
  EXPECT_FALSE(r.max_epss_between(Date{2021, 1, 1}, Date{2022, 4, 30}));
  // inclusive boundary on the window end
  auto edge = r.max_epss_between(Date{2022, 6, 2}, Date{2022, 7, 1});
  ASSERT_TRUE(edge);
  EXPECT_DOUBLE_EQ(*edge, 0.04);
}

TEST(VulnerabilityRecord, KevCveMismatchRejected) {
  VulnerabilityRecord r;
  r.cve = CveId::parse("CVE-2022-1111");
  r.published = Date{2022, 4, 2};
  KevEntry e;
  e.cve = CveId::parse("CVE-2022-2222");
  e.date_added = Date{2022, 5, 1};
  e.due_date = Date{2022, 5, 22};
  r.kev = e;
  EXPECT_THROW(validate(r), SchemaError);
}

TEST(ThresholdConfig, Validation) {
  ThresholdConfig c;
  c.window_start = Date{2022, 4, 1};
  c.as_of = Date{2023, 4, 30};
  EXPECT_NO_THROW(validate(c));
  EXPECT_DOUBLE_EQ(c.epss_cutoff, 0.088);
  EXPECT_DOUBLE_EQ(c.cvss_cutoff, 7.0);
  EXPECT_EQ(c.missing_cvss_policy, MissingCvssPolicy::EscalateHigh);

  c.epss_cutoff = 1.1;
  EXPECT_THROW(validate(c), OutOfRange);
  c.epss_cutoff = 0.088;
  c.cvss_cutoff = 10.1;
  EXPECT_THROW(validate(c), OutOfRange);
  c.cvss_cutoff = 7.0;
  c.window_start = Date{2023, 5, 1};
  EXPECT_THROW(validate(c), InvalidRange);
}
