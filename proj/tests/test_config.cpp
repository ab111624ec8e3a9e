#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nvsim/config.hpp"

using namespace nvsim;
using namespace nvsim::config;

namespace {

ConfigError catch_config(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a ConfigError";
  return ConfigError(ConfigError::Kind::Parse, "", 0, "none");
}

}  // namespace

TEST(ConfigUnits, GoldenConversions) {
  const double tp = 2 * std::numbers::pi;
  EXPECT_DOUBLE_EQ(parse_quantity("1 GHz", Quantity::Frequency, "k", 1), tp * 1e9);
  EXPECT_DOUBLE_EQ(parse_quantity("70 MHz", Quantity::Frequency, "k", 1), tp * 70e6);
  EXPECT_DOUBLE_EQ(parse_quantity("2.5 kHz", Quantity::Frequency, "k", 1), tp * 2500);
  EXPECT_DOUBLE_EQ(parse_quantity("3 rad/s", Quantity::Frequency, "k", 1), 3.0);
  EXPECT_DOUBLE_EQ(parse_quantity("76.9 1/us", Quantity::Rate, "k", 1), 76.9e6);
  EXPECT_DOUBLE_EQ(parse_quantity("40 mT", Quantity::Field, "k", 1), 400.0);
  EXPECT_DOUBLE_EQ(parse_quantity("180 deg", Quantity::Angle, "k", 1), std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse_quantity("13 ns", Quantity::Time, "k", 1), 13e-9);
  EXPECT_DOUBLE_EQ(parse_quantity("1 uW", Quantity::Power, "k", 1), 1e-6);
  EXPECT_DOUBLE_EQ(parse_quantity("0.412 um^2", Quantity::Area, "k", 1), 0.412e-12);
  EXPECT_DOUBLE_EQ(parse_quantity("1.945 eV", Quantity::Energy, "k", 1), 1.945 * 1.602176634e-19);
  EXPECT_DOUBLE_EQ(parse_quantity("-0.08", Quantity::Dimensionless, "k", 1), -0.08);
}

TEST(ConfigUnits, ProductUnitForFaradayAmplitude) {
  const double v = parse_quantity("2 urad*GHz", Quantity::FaradayAmplitude, "k", 1);
  EXPECT_DOUBLE_EQ(v, 2e-6 * 2 * std::numbers::pi * 1e9);
  EXPECT_FALSE(lookup_unit("GHz*urad").has_value());
}

TEST(ConfigUnits, MissingUnitIsValidationError) {
  auto e = catch_config([] { parse_quantity("6.7", Quantity::Frequency, "field.strain_delta", 4); });
  EXPECT_EQ(e.kind(), ConfigError::Kind::Validation);
  EXPECT_EQ(e.key(), "field.strain_delta");
  EXPECT_EQ(e.line(), 4);
}

TEST(ConfigUnits, MalformedUnitIsParseErrorNamingKey) {
  auto e = catch_config([] { parse_quantity("6.7 GHzz", Quantity::Frequency, "field.strain_delta", 4); });
  EXPECT_EQ(e.kind(), ConfigError::Kind::Parse);
  EXPECT_NE(std::string(e.what()).find("field.strain_delta"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("GHzz"), std::string::npos);
}

TEST(ConfigUnits, WrongDimensionIsValidationError) {
  auto e = catch_config([] { parse_quantity("3 ns", Quantity::Frequency, "k", 1); });
  EXPECT_EQ(e.kind(), ConfigError::Kind::Validation);
}

TEST(ConfigUnits, MalformedNumberIsParseError) {
  for (const char* s : {"abc GHz", "1..2 GHz", "nan GHz", "1e999 GHz", ""}) {
    auto e = catch_config([&] { parse_quantity(s, Quantity::Frequency, "k", 1); });
    EXPECT_EQ(e.kind(), ConfigError::Kind::Parse) << s;
  }
}

TEST(ConfigSection, ReadsNestedValuesWithDefaults) {
  Section root = load_string("scenario: levels\nfield:\n  b_z: 100 G\n  strain_angle: -0.08 rad\nscan:\n  points: 5\n");
  EXPECT_EQ(root.string("scenario"), "levels");
  Section f = root.section("field");
  EXPECT_DOUBLE_EQ(f.quantity("b_z", Quantity::Field), 100.0);
  EXPECT_DOUBLE_EQ(f.quantity("strain_angle", Quantity::Angle), -0.08);
  EXPECT_DOUBLE_EQ(f.quantity("strain_delta", Quantity::Frequency, 7.0), 7.0);
  EXPECT_NO_THROW(f.finish());
  Section s = root.section("scan");
  EXPECT_EQ(s.integer("points", 1), 5);
  EXPECT_TRUE(root.section("absent").section("deeper").boolean("flag", true));
  EXPECT_NO_THROW(s.finish());
  EXPECT_NO_THROW(root.finish());
}

TEST(ConfigSection, UnknownKeyRejectedWithLine) {
  Section root = load_string("scenario: levels\nfield:\n  b_z: 100 G\n  b_zz: 3 G\n");
  Section f = root.section("field");
  f.quantity("b_z", Quantity::Field);
  auto e = catch_config([&] { f.finish(); });
  EXPECT_EQ(e.kind(), ConfigError::Kind::Parse);
  EXPECT_EQ(e.key(), "field.b_zz");
  EXPECT_EQ(e.line(), 4);
}

TEST(ConfigSection, ValueErrorsReportTheirLine) {
  Section root = load_string("a: 1 GHz\nb: 2 GHz\nc: 3 parsecs\n");
  auto e = catch_config([&] { root.quantity("c", Quantity::Frequency); });
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.key(), "c");
}

TEST(ConfigSection, RequiredKeyMissing) {
  Section root = load_string("a: 1 GHz\n");
  auto e = catch_config([&] { root.quantity("b", Quantity::Frequency); });
  EXPECT_EQ(e.kind(), ConfigError::Kind::Validation);
  EXPECT_EQ(e.key(), "b");
}

TEST(ConfigSection, ChoiceRejectsOutsideValue) {
  Section root = load_string("axis: bx\n");
  auto e = catch_config([&] { root.choice("axis", {"bz", "strain"}, "bz"); });
  EXPECT_EQ(e.kind(), ConfigError::Kind::Validation);
  EXPECT_EQ(e.line(), 1);
}

TEST(ConfigSection, ListsAndTypes) {
  Section root = load_string("b: [1 G, 2 G, 3 mT]\nn: 2.5\nflag: yes\nsub: 3\n");
  auto b = root.quantity_list("b", Quantity::Field);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_DOUBLE_EQ(b[2], 30.0);
  EXPECT_EQ(catch_config([&] { root.integer("n", 0); }).kind(), ConfigError::Kind::Parse);
  EXPECT_EQ(catch_config([&] { root.boolean("flag", false); }).kind(), ConfigError::Kind::Parse);
  EXPECT_EQ(catch_config([&] { root.section("sub"); }).kind(), ConfigError::Kind::Parse);
}

TEST(ConfigSection, YamlSyntaxErrorHasLine) {
  auto e = catch_config([] { load_string("a: 1 GHz\nb: [1, 2\nc: 3\n"); });
  EXPECT_EQ(e.kind(), ConfigError::Kind::Parse);
  EXPECT_GT(e.line(), 0);
}

TEST(ConfigSection, MissingFileIsParseError) {
  EXPECT_EQ(catch_config([] { load_file("/nonexistent/config.yaml"); }).kind(), ConfigError::Kind::Parse);
}
