#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "thermoait/ensemble.hpp"
#include "thermoait/error.hpp"
#include "thermoait/machines.hpp"
#include "thermoait/snapshot_io.hpp"

using namespace thermoait;
using oracle::gamma_count;
using oracle::kraft_through;
using oracle::literal_count;
using oracle::sdm4_count;

namespace {

std::vector<std::string> listed(const EnsembleSnapshot& s) {
  std::vector<std::string> out;
  for (const auto& r : s.programs()) out.push_back(r.program.str());
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("thermoait_test_" + name)).string();
}

}  // namespace

TEST_CASE("sdm4 interpreter") {
  const auto halt = run_sdm4(BitString("11"), 100);
  CHECK(halt.status == RunStatus::halted);
  CHECK(halt.output.empty());
  CHECK(halt.halts_on_whole_input(BitString("11")));

  const auto two = run_sdm4(BitString("000111"), 100);
  CHECK(two.status == RunStatus::halted);
  CHECK(two.output.str() == "01");

  CHECK(run_sdm4(BitString("1011"), 100).status == RunStatus::diverged);
  // phantom last bit is 0 before any emission; count is bb+1
  CHECK(run_sdm4(BitString("100111"), 100).output.str() == "00");
  CHECK(run_sdm4(BitString("0110"), 100).status == RunStatus::diverged);
  CHECK(run_sdm4(BitString("000111"), 2).status == RunStatus::budget_exhausted);
}

TEST_CASE("literal and gamma interpreters") {
  const auto lit = run_literal(BitString("110" "01"), 100);
  CHECK(lit.status == RunStatus::halted);
  CHECK(lit.output.str() == "01");
  CHECK(elias_gamma(1).str() == "1");
  CHECK(elias_gamma(5).str() == "00101");
  const auto g = run_gamma_literal(elias_gamma(3) + BitString("101"), 100);
  CHECK(g.status == RunStatus::halted);
  CHECK(g.output.str() == "101");
  for (std::uint64_t n = 1; n <= 40; ++n) {
    unsigned lg = 0;
    while ((2ull << lg) <= n) ++lg;
    CHECK(gamma_program_length(n) == n + 2 * lg + 1);
  }
}

TEST_CASE("enumeration examples") {
  const auto sdm = enumerate(EnsembleSpec::parse("sdm4"), 1000, 2);
  CHECK(listed(sdm) == std::vector<std::string>{"11"});
  CHECK(sdm.census().at(2) == 1);

  const auto lit = enumerate(EnsembleSpec::parse("literal"), 1000, 3);
  CHECK(listed(lit) == std::vector<std::string>{"0", "100", "101"});
  CHECK(lit.programs()[0].output.str().empty());
  CHECK(lit.programs()[1].output.str() == "0");
  CHECK(lit.programs()[2].output.str() == "1");

  const auto geo = enumerate(EnsembleSpec::parse("geometric"), 1000, 4);
  CHECK(geo.census() == Census{{1, 1}, {2, 1}, {3, 1}, {4, 1}});
  CHECK(geo.kraft_sum() == Rational(15, 16));
}

TEST_CASE("census matches independent counts") {
  const auto sdm = enumerate(EnsembleSpec::parse("sdm4"), 100000, 16);
  const auto lit = enumerate(EnsembleSpec::parse("literal"), 100000, 15);
  const auto gam = enumerate(EnsembleSpec::parse("gamma_literal"), 100000, 17);
  for (std::uint32_t len = 1; len <= 16; ++len) {
    const auto it = sdm.census().find(len);
    CHECK((it == sdm.census().end() ? mpz_class(0) : it->second) == sdm4_count(len));
  }
  for (std::uint32_t len = 1; len <= 15; ++len) {
    const auto it = lit.census().find(len);
    CHECK((it == lit.census().end() ? mpz_class(0) : it->second) == literal_count(len));
  }
  for (std::uint32_t len = 1; len <= 17; ++len) {
    const auto it = gam.census().find(len);
    CHECK((it == gam.census().end() ? mpz_class(0) : it->second) == gamma_count(len));
  }
  // listings are complete at these lengths, so listed counts equal the census
  CHECK(sdm.listing_complete_through(16));
  for (const auto& [len, n] : sdm.listed_census()) CHECK(sdm.census().at(len) == n);
}

TEST_CASE("builtin ensembles are prefix-free and canonically ordered") {
  for (const char* id : {"sdm4", "literal", "gamma_literal", "geometric", "geometric:3"}) {
    const auto s = enumerate(EnsembleSpec::parse(id), 100000, 14);
    const auto& ps = s.programs();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i > 0) CHECK(ps[i - 1].program < ps[i].program);
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (i != j) CHECK_FALSE(ps[i].program.is_prefix_of(ps[j].program));
      }
    }
    CHECK(s.listed_kraft_sum() <= 1);
    CHECK(s.kraft_sum() <= 1);
    CHECK_NOTHROW(replay(s));
  }
}

TEST_CASE("sdm4 Kraft sums stay below 4/5 and approach it") {
  Rational prev_gap = 1;
  for (std::uint32_t L = 2; L <= 40; L += 2) {
    const Rational k = kraft_through(sdm4_count, L);
    const Rational gap = Rational(4, 5) - k;
    CHECK(gap > 0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("tail masses") {
  const auto geo = enumerate(EnsembleSpec::parse("geometric"), 1000, 40);
  CHECK(census_tail_mass(geo, 4) == Enclosure(Dyadic::exact(Rational(1, 16))));

  const auto lit = enumerate(EnsembleSpec::parse("literal"), 1000, 41);
  for (std::uint32_t n = 0; n <= 20; ++n) {
    const Enclosure t = census_tail_mass(lit, 2 * n + 1);
    CHECK(t.is_point());
    CHECK(t.lo() == Dyadic::pow2(-static_cast<std::int64_t>(n + 1)));
  }
  for (std::uint32_t L = 0; L <= 41; ++L) {
    CHECK(census_tail_mass(lit, L).lo().to_rational() == 1 - kraft_through(literal_count, L));
  }

  const auto gam = enumerate(EnsembleSpec::parse("gamma_literal"), 1000, 60);
  for (std::uint32_t L = 0; L <= 60; ++L) {
    const Enclosure t = census_tail_mass(gam, L);
    CHECK(t.is_point());
    CHECK(t.lo().to_rational() == 1 - kraft_through(gamma_count, L));
  }

  const auto sdm = enumerate(EnsembleSpec::parse("sdm4"), 100000, 40);
  Rational prev = 1;
  for (std::uint32_t L = 2; L <= 40; L += 2) {
    const Enclosure t = census_tail_mass(sdm, L);
    CHECK(t.lo() == Dyadic(0));
    CHECK(t.hi().to_rational() == 1 - kraft_through(sdm4_count, L));
    CHECK(t.hi().to_rational() > Rational(1, 5));
    CHECK(t.hi().to_rational() <= prev);
    prev = t.hi().to_rational();
  }
  CHECK(prev - Rational(1, 5) < Rational(1, 256));
  CHECK_THROWS_AS(census_tail_mass(sdm, 41), PreconditionError);
}

TEST_CASE("snapshot round trip is bit identical") {
  const auto s = enumerate(EnsembleSpec::parse("sdm4"), 100000, 10);
  const std::string path = temp_path("roundtrip.snap");
  save_snapshot(s, path);
  const auto back = load_snapshot(path);
  CHECK(back == s);
  std::ostringstream a, b;
  write_snapshot(a, s);
  write_snapshot(b, enumerate(EnsembleSpec::parse("sdm4"), 100000, 10));
  CHECK(a.str() == b.str());
  std::remove(path.c_str());
}

TEST_CASE("snapshot load errors") {
  const std::string dir = THERMOAIT_TEST_DATA;
  try {
    load_snapshot(dir + "/duplicate_program.snap");
    FAIL("expected an invariant error");
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("prefix-free violation") != std::string::npos);
  }
  try {
    load_snapshot(dir + "/kraft_violation.snap");
    FAIL("expected an invariant error");
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("Kraft violation") != std::string::npos);
  }

  std::istringstream bad("THERMOAIT-SNAPSHOT v1\nensemble=sdm4 budget=10 maxlen=2\nL 2 one\n");
  try {
    read_snapshot(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  std::istringstream checksum("THERMOAIT-SNAPSHOT v1\nensemble=sdm4 budget=10 maxlen=2\nL 2 1\nP 1 11 - 1\nKRAFT 1/2\n");
  CHECK_THROWS_AS(read_snapshot(checksum), InvariantError);
  CHECK_THROWS_AS(load_snapshot(temp_path("does_not_exist.snap")), Error);
}

TEST_CASE("spec parsing") {
  CHECK(EnsembleSpec::parse("geometric:3").base == 3);
  CHECK(EnsembleSpec::parse("gamma_literal").id() == "gamma_literal");
  CHECK_THROWS_AS(EnsembleSpec::parse("turing"), Error);
  CHECK_THROWS_AS(EnsembleSpec::parse("geometric:0"), Error);
}
