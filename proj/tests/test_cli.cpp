#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fnls/cli.hpp"

using namespace fnls;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return testing::TempDir() + "fnls_cli_" + name; }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"build"}).code, 2);  // --depth is required
  EXPECT_EQ(run({"build", "--depth", "0"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "nonsense"}).code, 2);
  EXPECT_EQ(run({"scan", "--quantity", "dls-upper", "--grid", ""}).code, 2);
  EXPECT_EQ(run({"scan", "--quantity", "volume", "--grid", "1:3"}).code, 2);
  EXPECT_EQ(run({"build", "--depth", "3", "--family", "custom-table"}).code, 2);  // needs --input
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BuildLoadReserializeIsIdentity) {
  const Outcome a = run({"build", "--law", "exp-double", "--depth", "40", "--twist-fraction", "0.3"});
  ASSERT_EQ(a.code, 0) << a.err;
  const Surface s = io::surface_from_json(json::parse(a.out));
  EXPECT_EQ(io::dump(io::to_json(s)), a.out);

  const std::string path = tmp("flute.json");
  ASSERT_EQ(run({"build", "--depth", "12", "--output", path}).code, 0);
  const Outcome b = run({"build", "--family", "custom-table", "--input", path, "--depth", "12"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(io::surface_from_json(json::parse(b.out)).point.coords(),
            io::surface_from_json(io::read_json_file(path)).point.coords());
}

TEST(Cli, ScanCsvShape) {
  const Outcome r = run({"scan", "--quantity", "dls-upper", "--grid", "10:50:10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  ASSERT_FALSE(r.out.empty());
  EXPECT_EQ(r.out.back(), '\n');
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "twist", "dls_upper"}));
  EXPECT_NEAR(std::stod(rows[1][2]), 0.0505560681104, 1e-12);
  for (std::size_t k = 2; k < rows.size(); ++k) EXPECT_LT(std::stod(rows[k][2]), std::stod(rows[k - 1][2]));
}

TEST(Cli, ScanLowerBoundsIncrease) {
  const Outcome q = run({"scan", "--quantity", "dqc-lower", "--grid", "1,5,20,100", "--n", "8"});
  ASSERT_EQ(q.code, 0) << q.err;
  const auto rows = csv_rows(q.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "rho", "dqc_lower"}));
  for (std::size_t k = 2; k < rows.size(); ++k) EXPECT_GT(std::stod(rows[k][2]), std::stod(rows[k - 1][2]));

  const Outcome l = run({"scan", "--quantity", "dls-lower", "--grid", "50:200:50", "--n", "8"});
  ASSERT_EQ(l.code, 0) << l.err;
  for (const auto& row : csv_rows(l.out)) {
    if (row[0] == "t") continue;
    EXPECT_LE(std::stod(row[2]), std::stod(row[1]) + 1e-9);
  }
}

TEST(Cli, MembershipScanGoesOutside) {
  const Outcome r = run({"scan", "--quantity", "membership-ratio", "--grid", "10,20", "--tau-law", "exp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][2], "outside");
  EXPECT_GT(std::stod(rows[2][1]), std::stod(rows[1][1]));
}

TEST(Cli, VerifyReportAndTiming) {
  const std::string report = tmp("report.json");
  const Outcome r = run({"verify", "--suite", "special-functions", "--report", report});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = io::read_json_file(report);
  EXPECT_EQ(j.at("version"), "fns-report-1");
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("profile_hash"), io::profile_hash(ConstantsProfile{}));
  EXPECT_FALSE(j.contains("wall_time_s"));
  EXPECT_FALSE(j.at("items")[0].contains("wall_time_s"));

  ASSERT_EQ(run({"verify", "--suite", "special-functions", "--report", report, "--timing"}).code, 0);
  j = io::read_json_file(report);
  EXPECT_TRUE(j.contains("wall_time_s"));
}

TEST(Cli, ProfileHashMismatchExitsOne) {
  const std::string path = tmp("profile.json");
  io::write_text_file(path, io::dump(io::to_json(ConstantsProfile{})));
  EXPECT_EQ(run({"verify", "--suite", "special-functions", "--profile", path}).code, 0);

  json j = io::read_json_file(path);
  j["defect"] = 9.0;
  io::write_text_file(path, io::dump(j));
  const Outcome r = run({"verify", "--suite", "special-functions", "--profile", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("hash mismatch"), std::string::npos);
  EXPECT_EQ(run({"scan", "--quantity", "dls-upper", "--grid", "10", "--profile", path}).code, 1);
}

TEST(Cli, CalibrateWritesAValidProfile) {
  const Outcome r = run({"calibrate", "--family", "torus-chain"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::LoadedProfile lp = io::profile_from_json(json::parse(r.out));
  EXPECT_TRUE(lp.hash_ok());
  EXPECT_EQ(lp.profile.grid_hash, "c62b420f7de5a11f");
}
