#include <doctest.h>

#include "oracles.hpp"
#include "thermoait/closed_form.hpp"
#include "thermoait/error.hpp"
#include "thermoait/thermo.hpp"

using namespace thermoait;

namespace {

const EnsembleSnapshot& geometric() {
  static const EnsembleSnapshot s = enumerate(EnsembleSpec::parse("geometric"), 1000, 128);
  return s;
}
const EnsembleSnapshot& sdm4() {
  static const EnsembleSnapshot s = enumerate(EnsembleSpec::parse("sdm4"), 100000, 128);
  return s;
}
const EnsembleSnapshot& gamma() {
  static const EnsembleSnapshot s = enumerate(EnsembleSpec::parse("gamma_literal"), 100000, 128);
  return s;
}
const EnsembleSnapshot& literal() {
  static const EnsembleSnapshot s = enumerate(EnsembleSpec::parse("literal"), 100000, 128);
  return s;
}

oracle::Counts prefix_counts(const EnsembleSnapshot& s, const mpz_class& k) {
  oracle::Counts c;
  for (const auto& lc : s.lengths_through(k)) c[lc.length] = lc.count;
  return c;
}

void check_all(const ThermoEvaluation& ev, const oracle::Quantities& q) {
  CHECK(oracle::inside(ev.Z, q.Z));
  CHECK(oracle::inside(ev.W, q.W));
  CHECK(oracle::inside(ev.Y, q.Y));
  CHECK(oracle::inside(ev.F, q.F));
  CHECK(oracle::inside(ev.E, q.E));
  CHECK(oracle::inside(ev.S, q.S));
  CHECK(oracle::inside(ev.C, q.C));
}

}  // namespace

TEST_CASE("one and two program prefixes by exact arithmetic") {
  const Temperature half(1, 2);
  const auto one = eval_partial(geometric(), half, 1);
  CHECK(one.Z == Enclosure(Dyadic::exact(Rational(1, 4))));
  CHECK(one.F.contains(Rational(1)));
  CHECK(one.E.contains(Rational(1)));
  CHECK(one.S.contains(Rational(0)));
  CHECK(one.C.contains(Rational(0)));
  CHECK(one.S.lo() >= Dyadic(0));
  CHECK(one.C.lo() >= Dyadic(0));

  const auto two = eval_partial(geometric(), half, 2);
  CHECK(two.Z == Enclosure(Dyadic::exact(Rational(5, 16))));
  CHECK(two.W.contains(Rational(3, 8)));
  CHECK(two.E.contains(Rational(6, 5)));

  const auto s1 = eval_partial(sdm4(), half, 1);
  CHECK(s1.Z == Enclosure(Dyadic::exact(Rational(1, 16))));
}

TEST_CASE("partial sums against MPFR for every ensemble") {
  for (const EnsembleSnapshot* s : {&geometric(), &sdm4(), &gamma(), &literal()}) {
    for (const Rational T : {Rational(1, 16), Rational(1, 4), Rational(3, 8), Rational(1, 2), Rational(11, 16),
                             Rational(15, 16)}) {
      for (const long k : {1L, 2L, 3L, 7L, 16L, 100L}) {
        CAPTURE(s->id());
        CAPTURE(to_string(T));
        CAPTURE(k);
        const auto ev = eval_partial(*s, Temperature(T), k);
        check_all(ev, oracle::quantities(prefix_counts(*s, k), T));
      }
    }
  }
}

TEST_CASE("limits contain the closed forms") {
  const Temperature half(1, 2);
  const auto g = eval_limit(geometric(), half);
  CHECK(g.Z.contains(Rational(1, 3)));
  CHECK(g.E.contains(Rational(4, 3)));
  const auto s = eval_limit(sdm4(), half);
  CHECK(s.Z.contains(Rational(16, 221)));

  for (const Rational T : {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(7, 8)}) {
    CAPTURE(to_string(T));
    const auto ge = eval_limit(geometric(), Temperature(T));
    CHECK(oracle::inside(ge.Z, oracle::geometric_Z(T)));
    CHECK(oracle::inside(ge.E, oracle::geometric_E(T)));
    CHECK(oracle::inside(ge.W, oracle::geometric_W(T)));
    const auto se = eval_limit(sdm4(), Temperature(T));
    CHECK(oracle::inside(se.Z, oracle::sdm4_Z(T)));
  }
}

TEST_CASE("limits of every quantity against long MPFR sums") {
  struct Case {
    const EnsembleSnapshot* snap;
    mpz_class (*count)(std::uint32_t);
    std::uint32_t terms;
  };
  // the truncation error of each MPFR sum is far below 2^-400 at these T
  const Case cases[] = {{&geometric(), oracle::geometric_count, 3000},
                        {&sdm4(), oracle::sdm4_count, 3000},
                        {&gamma(), oracle::gamma_count, 3000},
                        {&literal(), oracle::literal_count, 3000}};
  for (const auto& c : cases) {
    const auto census = oracle::counts_through(c.count, c.terms);
    for (const Rational T : {Rational(1, 4), Rational(1, 2), Rational(5, 8)}) {
      CAPTURE(c.snap->id());
      CAPTURE(to_string(T));
      check_all(eval_limit(*c.snap, Temperature(T)), oracle::quantities(census, T));
    }
  }
}

TEST_CASE("closed forms agree with MPFR") {
  for (const Rational T : {Rational(1, 8), Rational(1, 2), Rational(3, 4)}) {
    CHECK(oracle::inside(*closed_form_Z(EnsembleSpec::parse("geometric"), Temperature(T), 96), oracle::geometric_Z(T)));
    CHECK(oracle::inside(*closed_form_E(EnsembleSpec::parse("geometric"), Temperature(T), 96), oracle::geometric_E(T)));
    CHECK(oracle::inside(*closed_form_Z(EnsembleSpec::parse("sdm4"), Temperature(T), 96), oracle::sdm4_Z(T)));
  }
  CHECK_FALSE(closed_form_Z(EnsembleSpec::parse("gamma_literal"), Temperature(1, 2), 64).has_value());
}

TEST_CASE("limit width request that cannot be met reports the achievable width") {
  const auto short_snap = enumerate(EnsembleSpec::parse("sdm4"), 100000, 8);
  try {
    eval_limit(short_snap, Temperature(3, 4), 64, Dyadic::pow2(-40));
    FAIL("expected a precision error");
  } catch (const PrecisionError& e) {
    CHECK(std::string(e.what()).find("width") != std::string::npos);
  }
}

TEST_CASE("partial sums increase with k") {
  for (const Rational T : {Rational(1, 4), Rational(3, 4)}) {
    ThermoEvaluation prev = eval_partial(sdm4(), Temperature(T), 1);
    for (long k = 2; k <= 40; ++k) {
      const auto cur = eval_partial(sdm4(), Temperature(T), k);
      CHECK(compare(prev.Z, cur.Z) == Order::less);
      CHECK(compare(prev.W, cur.W) == Order::less);
      CHECK(compare(prev.Y, cur.Y) == Order::less);
      prev = cur;
    }
  }
}

TEST_CASE("k beyond the census is rejected") {
  const auto small = enumerate(EnsembleSpec::parse("sdm4"), 100000, 4);
  CHECK_THROWS_AS(eval_partial(small, Temperature(1, 2), small.total() + 1), PreconditionError);
  CHECK_THROWS_AS(eval_partial(small, Temperature(1, 2), 0), PreconditionError);
}

TEST_CASE("Z at T = 1 equals the Kraft partial sums exactly") {
  const auto s = enumerate(EnsembleSpec::parse("sdm4"), 100000, 12);
  Rational kraft = 0;
  mpz_class k = 0;
  for (const auto& rec : s.programs()) {
    ++k;
    kraft += Rational(1, mpz_class(1) << rec.program.size());
    kraft.canonicalize();
    const auto ev = eval_partial(s, Temperature(1, 1), k);
    CHECK(ev.Z.is_point());
    CHECK(ev.Z.lo().to_rational() == kraft);
  }
}

TEST_CASE("power sums") {
  const auto ps = power_sum(geometric(), Temperature(1, 2), 2, 2);
  CHECK(ps.contains(Rational(17, 256)));
  CHECK(ps.is_point());
  for (long k : {1L, 5L, 16L}) {
    CHECK(power_sum(sdm4(), Temperature(1, 2), 1, k) == eval_partial(sdm4(), Temperature(1, 2), k).Z);
    for (unsigned n : {2u, 3u}) {
      const Enclosure a = power_sum(sdm4(), Temperature(3, 4), n, k);
      const Enclosure b = eval_partial(sdm4(), Temperature(Rational(3, 4) / n), k).Z;
      CHECK(a.overlaps(b));
      // Σ (2^-ℓ/T)^n = Σ 2^-ℓn/T in MPFR
      CHECK(oracle::inside(a, oracle::moment(prefix_counts(sdm4(), k), Rational(3, 4) / n, 0)));
    }
  }
  CHECK_THROWS_AS(power_sum(sdm4(), Temperature(1, 2), 0, 1), PreconditionError);
}

TEST_CASE("sweep examples") {
  const auto grid = parse_grid("1/4:3/4:1/4");
  REQUIRE(grid.size() == 3);
  const auto evs = sweep(geometric(), grid, Depth::limit());
  REQUIRE(evs.size() == 3);
  CHECK(compare(evs[0].Z, evs[1].Z) == Order::less);
  CHECK(compare(evs[1].Z, evs[2].Z) == Order::less);
  for (std::size_t i = 0; i < 3; ++i) CHECK(evs[i].Z == eval_limit(geometric(), grid[i]).Z);

  CHECK(sweep(geometric(), {}, Depth::limit()).empty());
  CHECK_THROWS_AS(parse_grid("0:1/2:1/4"), PreconditionError);
  CHECK_THROWS_AS(sweep(geometric(), {Temperature(1, 2), Temperature(1, 4)}, Depth::limit()), PreconditionError);
  CHECK_THROWS_AS(sweep(geometric(), {Temperature(3, 2)}, Depth::prefix(4)), PreconditionError);
  CHECK_NOTHROW(sweep(geometric(), {Temperature(3, 2)}, Depth::prefix(4), 64, true));
}

TEST_CASE("Gibbs and variance forms overlap the moment forms") {
  for (const EnsembleSnapshot* s : {&geometric(), &sdm4(), &gamma()}) {
    for (const Rational T : {Rational(1, 16), Rational(1, 2), Rational(15, 16)}) {
      for (const Depth& d : {Depth::prefix(1), Depth::prefix(4), Depth::prefix(16), Depth::limit()}) {
        const auto ev = evaluate(*s, Temperature(T), d);
        CHECK(gibbs_entropy(*s, Temperature(T), d).overlaps(ev.S));
        CHECK(variance_heat(*s, Temperature(T), d).overlaps(ev.C));
      }
    }
  }
}

TEST_CASE("tail factor is the maximum over longer lengths") {
  for (const Rational T : {Rational(1, 4), Rational(1, 2), Rational(7, 8)}) {
    for (unsigned j : {0u, 1u, 2u, 4u}) {
      for (std::uint32_t L : {1u, 10u, 60u}) {
        oracle::Real best;
        for (long l = L + 1; l <= L + 400; ++l) {
          oracle::Real term = oracle::pow2q(mpq_class(-l) * (1 / T - 1));
          for (unsigned i = 0; i < j; ++i) term = term * oracle::Real::of(l);
          if (best < term) best = term;
        }
        CHECK_FALSE(oracle::Real::of(tail_factor(L, T, j, 64)) < best);
      }
    }
  }
}

TEST_CASE("remainder bounds dominate and shrink with temperature") {
  // for t <= T the certified remainder at t never exceeds the one at T, and
  // every bound sits above the true remainder past max_length
  struct Case {
    const EnsembleSnapshot* snap;
    mpz_class (*count)(std::uint32_t);
  };
  const Case cases[] = {{&geometric(), oracle::geometric_count},
                        {&sdm4(), oracle::sdm4_count},
                        {&gamma(), oracle::gamma_count},
                        {&literal(), oracle::literal_count}};
  for (const auto& c : cases) {
    oracle::Counts beyond;
    for (std::uint32_t len = c.snap->max_length() + 1; len <= 3000; ++len) {
      const mpz_class v = c.count(len);
      if (v != 0) beyond[len] = v;
    }
    std::vector<Dyadic> prev;
    for (int i = 1; i <= 15; ++i) {
      CAPTURE(c.snap->id());
      CAPTURE(i);
      const Rational T(i, 16);
      const auto bounds = limit_tails(*c.snap, Temperature(T), 2, 64);
      for (unsigned j = 0; j <= 2; ++j) {
        CHECK_FALSE(oracle::Real::of(bounds[j]) < oracle::moment(beyond, T, j));
        if (!prev.empty()) CHECK(prev[j] <= bounds[j]);
      }
      prev = bounds;
    }
  }
}

TEST_CASE("divergence above the critical temperature") {
  const auto hot = divergence_probe(EnsembleSpec::parse("gamma_literal"), Temperature(11, 10), 10, 4096);
  REQUIRE(hot.exceeded);
  // independent check of the first crossing
  const auto census = oracle::counts_through(oracle::gamma_count, hot.L);
  const auto below = oracle::counts_through(oracle::gamma_count, hot.L - 1);
  CHECK(oracle::Real::of(10) < oracle::moment(census, Rational(11, 10), 0));
  CHECK_FALSE(oracle::Real::of(10) < oracle::moment(below, Rational(11, 10), 0));
  CHECK(hot.L == 132);

  const auto cool = divergence_probe(EnsembleSpec::parse("gamma_literal"), Temperature(9, 10), 10, 4096);
  CHECK_FALSE(cool.exceeded);
  REQUIRE(cool.limit.has_value());
  CHECK(cool.limit->hi() < Dyadic(10));

  const auto geo = divergence_probe(EnsembleSpec::parse("geometric"), Temperature(3, 2), 10, 4096);
  CHECK_FALSE(geo.exceeded);
  REQUIRE(geo.limit.has_value());
  CHECK(oracle::inside(*geo.limit, oracle::geometric_Z(Rational(3, 2))));
}
