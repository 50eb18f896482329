#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "thermoait/cli.hpp"
#include "thermoait/dyadic.hpp"

using namespace thermoait;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"thermoait"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool encloses(const json& e, const Rational& q) {
  return compare(Dyadic::parse(e.at("lo").get<std::string>()), q) != std::strong_ordering::greater &&
         compare(Dyadic::parse(e.at("hi").get<std::string>()), q) != std::strong_ordering::less;
}

bool has_float(const json& j) {
  if (j.is_number_float()) return true;
  if (j.is_structured()) {
    for (const auto& v : j) {
      if (has_float(v)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("thermo at the limit encloses the closed form") {
  const auto r = invoke({"thermo", "--machine", "geometric", "--T", "1/2", "--limit"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(encloses(j.at("evaluation").at("Z"), Rational(1, 3)));
  CHECK(encloses(j.at("evaluation").at("E"), Rational(4, 3)));
  CHECK_FALSE(has_float(j));
}

TEST_CASE("thermo csv columns") {
  const auto r = invoke({"--format", "csv", "thermo", "--machine", "geometric", "--T", "1/2", "--k", "2"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "T_lo,T_hi,quantity,k,value_lo,value_hi,tail_bound");
  CHECK(first.find(",Z,2,3.1250000000000000000e-1,3.1250000000000000000e-1,0") != std::string::npos);
  // global flags are also accepted after the subcommand
  CHECK(invoke({"thermo", "--machine", "geometric", "--T", "1/2", "--k", "2", "--format", "csv"}).out == r.out);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({"thermo", "--T", "0"}).code == 2);
  CHECK(invoke({"thermo", "--T", "1/2", "--bogus"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"thermo", "--T", "1/2", "--k", "3", "--limit"}).code == 2);
  CHECK(invoke({"solve", "--machine", "geometric", "--quantity", "Z", "--target", "10"}).code == 2);
  CHECK(invoke({"thermo", "--machine", "nonsense", "--T", "1/2"}).code == 2);
  CHECK(invoke({"--format", "xml", "thermo", "--T", "1/2"}).code == 2);
  CHECK(invoke({"reconstruct", "--T", "1/2", "--u", "3/4", "--n", "16", "--b", "1", "--quantity", "Z"}).code == 2);
}

TEST_CASE("help exits 0") { CHECK(invoke({"--help"}).code == 0); }

TEST_CASE("verify on sdm4 passes") {
  const auto r = invoke({"verify", "--machine", "sdm4", "--grid", "1/16:15/16:1/16"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  for (const auto& rep : j.at("reports")) CHECK(rep.at("verdict") == "pass");
}

TEST_CASE("solve recovers the temperature") {
  const auto r = invoke({"solve", "--machine", "geometric", "--quantity", "Z", "--target", "1/3"});
  REQUIRE(r.code == 0);
  CHECK(encloses(json::parse(r.out).at("T"), Rational(1, 2)));
  const auto e = invoke({"solve", "--machine", "geometric", "--quantity", "E", "--target", "4/3", "--tol",
                         "1*2^-20"});
  REQUIRE(e.code == 0);
  CHECK(encloses(json::parse(e.out).at("T"), Rational(1, 2)));

  // F decreases, so the answer for F = 1/2 must satisfy F(lo) >= 1/2 >= F(hi); checked in MPFR
  const auto f = invoke({"solve", "--machine", "geometric", "--quantity", "F", "--target", "1/2"});
  REQUIRE(f.code == 0);
  const json t = json::parse(f.out).at("T");
  auto F = [](const Rational& T) {
    const oracle::Real z = oracle::geometric_Z(T);
    return oracle::Real::of(0) - oracle::Real::of(T) * oracle::log2(z);
  };
  CHECK_FALSE(F(Dyadic::parse(t.at("lo").get<std::string>()).to_rational()) < oracle::Real::of(Rational(1, 2)));
  CHECK_FALSE(oracle::Real::of(Rational(1, 2)) < F(Dyadic::parse(t.at("hi").get<std::string>()).to_rational()));
}

TEST_CASE("fixed-point subcommands") {
  const auto w = invoke({"witness", "--T", "1/2", "--n", "20"});
  REQUIRE(w.code == 0);
  const json wj = json::parse(w.out);
  CHECK(std::stoi(wj.at("verified_through").get<std::string>()) >= 10 * std::stoi(wj.at("k_e").get<std::string>()));

  const auto s = invoke({"semidecide", "--T", "1/2", "--r", "9/16"});
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out).at("answer") == "yes");
  CHECK(json::parse(invoke({"semidecide", "--T", "1/2", "--r", "7/16"}).out).at("answer") == "unknown");

  const auto rec = invoke({"reconstruct", "--T", "1/2", "--u", "3/4", "--n", "16", "--b", "0"});
  REQUIRE(rec.code == 0);
  const json rj = json::parse(rec.out);
  CHECK(rj.at("beta_bits_used") == 11);
  CHECK(rj.at("contained") == true);

  CHECK(invoke({"witness", "--T", "1/2", "--n", "2"}).code == 2);
}

TEST_CASE("complexity and profile") {
  const auto c = invoke({"--format", "csv", "complexity", "--machine", "literal", "--maxlen", "5"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("output,H,program\n-,1,0\n0,3,100\n1,3,101\n", 0) == 0);

  const auto p = invoke({"--format", "csv", "profile", "--machine", "gamma_literal", "--alpha", "5/8", "--N", "6"});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("6,101000,11,11/6") != std::string::npos);

  const auto q = invoke({"profile", "--machine", "gamma_literal", "--alpha", "Z@1/2", "--alpha-machine", "geometric",
                         "--N", "8"});
  REQUIRE(q.code == 0);
  const json qj = json::parse(q.out);
  CHECK(qj.at("rows").size() == 8);
}

TEST_CASE("divergence probe") {
  const auto r = invoke({"diverge", "--T", "11/10", "--M", "10"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("exceeded") == true);
  CHECK(j.at("L") == 132);
}

TEST_CASE("snapshots feed later commands and outputs are reproducible") {
  const std::string path = (std::filesystem::temp_directory_path() / "thermoait_cli_test.snap").string();
  REQUIRE(invoke({"enumerate", "--machine", "sdm4", "--maxlen", "12", "--save", path.c_str()}).code == 0);
  const auto a = invoke({"thermo", "--snapshot", path.c_str(), "--T", "3/8", "--k", "7"});
  const auto b = invoke({"thermo", "--snapshot", path.c_str(), "--T", "3/8", "--k", "7"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  std::filesystem::remove(path);
}

TEST_CASE("precision from the environment") {
  const auto base = invoke({"thermo", "--machine", "geometric", "--T", "3/8", "--limit"});
  const auto flag = invoke({"--precision", "100", "thermo", "--machine", "geometric", "--T", "3/8", "--limit"});
  ::setenv("THERMOAIT_PRECISION", "100", 1);
  const auto env = invoke({"thermo", "--machine", "geometric", "--T", "3/8", "--limit"});
  ::unsetenv("THERMOAIT_PRECISION");
  CHECK(env.out == flag.out);
  CHECK(env.out != base.out);
}
