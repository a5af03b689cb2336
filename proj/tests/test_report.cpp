#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qclab/error.hpp"
#include "qclab/report.hpp"

using namespace qclab;

namespace {

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("report csv round trip") {
  const std::vector<VerificationReport> rs{
      {"binomial", {{"range", "full"}, {"note", "a \"quoted\", comma"}}, 364, 364, 0, false},
      {"plemelj", {{"m3", 2}}, 0.1 + 0.2, 1e-300, 1e-2, true},
      {"taylor_exponent", {}, std::numeric_limits<double>::infinity(), 0, 0, true}};
  const std::string path = temp_path("qclab_report_roundtrip.csv");
  std::remove(path.c_str());
  append_reports_csv(path, {rs[0]});
  append_reports_csv(path, {rs[1], rs[2]});
  std::ifstream in(path);
  std::string first, line;
  std::getline(in, first);
  CHECK(first == "schema_version,identity,params,value,defect,tolerance,pass");
  int headers = 1;
  while (std::getline(in, line)) headers += line == first;
  CHECK(headers == 1);

  const auto back = read_reports_csv(path);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].identity == rs[i].identity);
    CHECK(back[i].params == rs[i].params);
    CHECK(back[i].value == rs[i].value);  // shortest round-trip formatting
    CHECK(back[i].defect == rs[i].defect);
    CHECK(back[i].tolerance == rs[i].tolerance);
    CHECK(back[i].pass == rs[i].pass);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_reports_csv(path), Error);
}

TEST_CASE("suite registry") {
  const auto& names = registered_identities();
  CHECK(names.size() == 9);
  const nlohmann::json def = default_suite();
  CHECK(def.at("identities").size() == names.size());
  try {
    run_suite({{"identities", {"binomial", "nope"}}}, 0);
    FAIL("expected an unknown identity error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
  }
  CHECK_THROWS_AS(run_suite({{"identities", {{{"name", "binomial"}, {"params", {{"range", "most"}}}}}}}, 0), Error);

  const auto hyp = run_suite({{"identities", {{{"name", "binomial"}, {"params", {{"range", "hypothesis"}}}}}}}, 0);
  REQUIRE(hyp.size() == 1);
  CHECK(hyp[0].pass);
  const auto forced = run_suite({{"identities", {{{"name", "h_disk"}, {"tolerance", 1e-300}}}}}, 0);
  CHECK(!forced[0].pass);
}

TEST_CASE("suite output is independent of the thread count") {
  const nlohmann::json m = {{"identities", {"h_disk", "kernel_disk", "plemelj", "binomial"}}};
  std::ostringstream a, b;
  write_reports_csv(a, run_suite(m, 11, 1));
  write_reports_csv(b, run_suite(m, 11, 4));
  CHECK(a.str() == b.str());
  std::ostringstream c;
  write_reports_csv(c, run_suite(m, 12, 1));
  CHECK(c.str() != a.str());  // the seed moves the plemelj points
}
