#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "brandt/cache.hpp"
#include "brandt/report.hpp"
#include "support.hpp"

using namespace brandt;
using namespace testing_support;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("brandt-unit-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Cache, RoundTripReproducesTheLevel) {
  for (std::int64_t N : {11, 37, 61}) {
    const auto& L = level(N);
    const auto j = nlohmann::ordered_json::parse(serialize_level(L).dump());
    const auto back = deserialize_level(j, N, 20, 1e-9);
    ASSERT_TRUE(back.has_value()) << N;
    EXPECT_EQ(back->classdata->weights(), L.classdata->weights());
    for (std::size_t i = 0; i < L.classdata->size(); ++i) {
      EXPECT_EQ(back->classdata->classes[i].ideal, L.classdata->classes[i].ideal);
      EXPECT_EQ(back->classdata->classes[i].right_order, L.classdata->classes[i].right_order);
    }
    EXPECT_EQ(back->family.matrices, L.family.matrices);
    ASSERT_EQ(back->forms.size(), L.forms.size());
    for (std::size_t k = 0; k < L.forms.size(); ++k) {
      EXPECT_EQ(back->forms[k].label, L.forms[k].label);
      EXPECT_EQ(back->forms[k].lambda, L.forms[k].lambda);
    }
    EXPECT_EQ(serialize_level(*back).dump(), serialize_level(L).dump());
  }
}

TEST(Cache, RejectsStaleOrTamperedEntries) {
  const auto& L = level(37);
  const auto good = serialize_level(L);

  auto j = good;
  j["schema_version"] = cache_schema_version + 1;
  EXPECT_FALSE(deserialize_level(j, 37, 20, 1e-9).has_value());

  EXPECT_FALSE(deserialize_level(good, 41, 20, 1e-9).has_value());
  EXPECT_FALSE(deserialize_level(good, 37, 80, 1e-9).has_value());

  j = good;
  j["eigenforms"][0]["lambda"][0] = "0.5";
  EXPECT_FALSE(deserialize_level(j, 37, 20, 1e-9).has_value());

  j = good;
  j["classes"][0]["weight"] = 2;
  EXPECT_FALSE(deserialize_level(j, 37, 20, 1e-9).has_value());

  j = good;
  j["brandt"]["6"][1] = j["brandt"]["6"][1].get<std::int64_t>() + 1;
  EXPECT_FALSE(deserialize_level(j, 37, 20, 1e-9).has_value());

  j = good;
  j["classes"].erase(j["classes"].begin());
  EXPECT_FALSE(deserialize_level(j, 37, 20, 1e-9).has_value());

  j = good;
  j["algebra"]["a"] = -3;
  EXPECT_FALSE(deserialize_level(j, 37, 20, 1e-9).has_value());
}

TEST(Cache, LoadOrComputeWritesThenReuses) {
  const auto dir = scratch_dir("reuse");
  const LevelData first = load_or_compute(29, 20, 1e-9, dir);
  ASSERT_TRUE(std::filesystem::exists(cache_file(dir, 29)));
  const auto written = std::filesystem::last_write_time(cache_file(dir, 29));
  const LevelData second = load_or_compute(29, 20, 1e-9, dir);
  EXPECT_EQ(std::filesystem::last_write_time(cache_file(dir, 29)), written);
  EXPECT_EQ(serialize_level(first).dump(), serialize_level(second).dump());
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    EXPECT_EQ(entry.path().filename().string().find(".tmp"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cache, CorruptFileIsRecomputedAndReplaced) {
  const auto dir = scratch_dir("corrupt");
  std::filesystem::create_directories(dir);
  std::ofstream(cache_file(dir, 23)) << "{ not json";
  const LevelData L = load_or_compute(23, 20, 1e-9, dir);
  EXPECT_EQ(L.forms.size(), 2u);
  std::ifstream in(cache_file(dir, 23));
  EXPECT_NO_THROW(nlohmann::ordered_json::parse(in));
  std::filesystem::remove_all(dir);
}

TEST(Cache, FileNameAndDefaultDirectory) {
  EXPECT_EQ(cache_file("/x", 37), std::filesystem::path("/x/level_37.json"));
  EXPECT_FALSE(default_cache_dir().empty());
}

TEST(Report, RowStatusFollowsResidual) {
  const auto exact_pass = exact_row("x", "", Rational(1, 3), Rational(1, 3));
  EXPECT_EQ(exact_pass.status, Status::pass);
  EXPECT_EQ(exact_pass.lhs, "1/3");
  EXPECT_EQ(exact_row("x", "", Rational(1, 3), Rational(1, 2)).status, Status::fail);
  const auto r = real_row("y", "", Real("1.5"), Real("1.5000001"), Real("1e-6"));
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(real_row("y", "", Real("1.5"), Real("1.6"), Real("1e-6")).status, Status::fail);
  EXPECT_EQ(not_applicable_row("z", "", "n/a").status, Status::not_applicable);
}

TEST(Report, AllPassIgnoresNotApplicableRows) {
  VerificationReport rep;
  rep.rows.push_back(not_applicable_row("z", "", ""));
  EXPECT_TRUE(rep.all_pass());
  rep.rows.push_back(exact_row("x", "", Rational(1), Rational(2)));
  EXPECT_FALSE(rep.all_pass());
  EXPECT_EQ(rep.count(Status::fail), 1u);
}

TEST(Report, JsonAndCsvShapes) {
  VerificationReport rep;
  rep.level = 37;
  auto row = exact_row("cor46", "N=37", Rational(2, 3), Rational(2, 3));
  row.discrepancy = true;
  row.note = "a, \"quoted\" note";
  rep.rows.push_back(row);
  rep.summary["triple_sum"] = "2/3";
  const auto j = to_json(rep);
  EXPECT_EQ(j["level"], 37);
  EXPECT_EQ(j["identities"][0]["identity"], "cor46");
  EXPECT_EQ(j["identities"][0]["status"], "pass");
  EXPECT_EQ(j["identities"][0]["discrepancy"], true);
  EXPECT_EQ(j["identities"][0]["residual"], "0");
  EXPECT_EQ(j["triple_sum"], "2/3");
  EXPECT_EQ(to_csv(rep), "identity,params,lhs,rhs,residual,status,note\ncor46,N=37,2/3,2/3,0,pass,\"a, \"\"quoted\"\" note\"\n");
  const std::string table = to_table(rep);
  EXPECT_NE(table.find("cor46"), std::string::npos);
  EXPECT_NE(table.find("pass 1, fail 0, not-applicable 0"), std::string::npos);
}

TEST(Report, RealsUseSeventeenSignificantDigits) {
  EXPECT_EQ(format_real(Real(0)), "0");
  const std::string s = format_real(Real(1) / 3);
  EXPECT_EQ(s.substr(0, 2), "3.");
  EXPECT_NE(s.find("e-01"), std::string::npos);
  std::size_t digits = 0;
  for (char c : s.substr(0, s.find('e'))) digits += std::isdigit(static_cast<unsigned char>(c)) != 0;
  EXPECT_EQ(digits, 17u);
}

TEST(Report, SerializationIsDeterministic) {
  const auto a = verify_level(level(43), 20, 1e-9);
  const auto b = verify_level(43, 20, 1e-9);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}
