#include "thermoait/cli.hpp"

#include <cstdlib>
#include <functional>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "emit.hpp"
#include "thermoait/complexity.hpp"
#include "thermoait/error.hpp"
#include "thermoait/expansion.hpp"
#include "thermoait/fixedpoint.hpp"
#include "thermoait/oracle.hpp"
#include "thermoait/relations.hpp"
#include "thermoait/snapshot_io.hpp"
#include "thermoait/thermo.hpp"

namespace thermoait::cli {
namespace {

using emit::json;

// A bad flag value found after parsing; reported like a parse error.
struct UsageError : Error {
  using Error::Error;
};

struct Source {
  std::string machine = "geometric";
  std::string snapshot;
  std::uint64_t budget = 100000;
  std::uint32_t maxlen = 128;
  std::optional<std::uint32_t> list_maxlen;

  void attach(CLI::App* sub, std::uint32_t default_maxlen = 128) {
    maxlen = default_maxlen;
    auto* m = sub->add_option("--machine", machine, "ensemble: sdm4, literal, gamma_literal, geometric[:b], file:<path>");
    sub->add_option("--snapshot", snapshot, "load a saved snapshot instead of enumerating")->excludes(m);
    sub->add_option("--budget", budget, "step budget per program");
    sub->add_option("--maxlen", maxlen, "census length cap");
    sub->add_option("--list-maxlen", list_maxlen, "longest individually listed program");
  }

  std::shared_ptr<const EnsembleSnapshot> load() const {
    if (!snapshot.empty()) return std::make_shared<const EnsembleSnapshot>(load_snapshot(snapshot));
    return std::make_shared<const EnsembleSnapshot>(enumerate(EnsembleSpec::parse(machine), budget, maxlen, list_maxlen));
  }
};

struct Settings {
  unsigned precision = kDefaultPrecision;
  std::string format = "json";
};

unsigned env_precision() {
  const char* text = std::getenv("THERMOAIT_PRECISION");
  if (text == nullptr || *text == '\0') return kDefaultPrecision;
  char* end = nullptr;
  const unsigned long v = std::strtoul(text, &end, 10);
  if (*end != '\0' || v < 16 || v > 1u << 16) {
    throw UsageError(std::string("THERMOAIT_PRECISION must be an integer in [16, 65536], got '") + text + "'");
  }
  return static_cast<unsigned>(v);
}

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

mpz_class parse_natural(const std::string& text, std::string_view what) {
  mpz_class v;
  if (text.empty() || v.set_str(text, 10) != 0 || v < 0) {
    throw UsageError(std::string(what) + " must be a natural number, got '" + text + "'");
  }
  return v;
}

// `limit` or a program count.
std::vector<Depth> parse_depths(const std::string& text, const mpz_class& total) {
  std::vector<Depth> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "limit") {
      out.push_back(Depth::limit());
    } else {
      mpz_class k = parse_natural(item, "depth");
      if (k < 1) throw UsageError("depth must be at least 1");
      out.push_back(Depth::prefix(k < total ? k : total));
    }
  }
  if (out.empty()) throw UsageError("no depths given");
  return out;
}

Temperature parse_temperature(const std::string& text) { return Temperature::parse(text); }

Quantity parse_quantity(std::string_view text) {
  for (const Quantity q : kAllQuantities) {
    if (quantity_name(q) == text) return q;
  }
  throw UsageError("unknown quantity '" + std::string(text) + "'");
}

int cmd_enumerate(const Source& src, const std::string& save, const Settings&, std::ostream& out) {
  const auto snap = src.load();
  if (!save.empty()) save_snapshot(*snap, save);
  json census = json::object();
  for (const auto& [l, count] : snap->census()) census[std::to_string(l)] = count.get_str();
  print(out, {{"ensemble", snap->id()},
              {"budget", snap->step_budget()},
              {"maxlen", snap->max_length()},
              {"total", snap->total().get_str()},
              {"listed", snap->programs().size()},
              {"kraft_sum", emit::rational(snap->kraft_sum())},
              {"listed_kraft_sum", emit::rational(snap->listed_kraft_sum())},
              {"census", census},
              {"saved", save.empty() ? json(nullptr) : json(save)}});
  return 0;
}

int cmd_thermo(const Source& src, const std::string& T_text, const std::string& grid_text,
               const std::optional<std::string>& k_text, const Settings& set, std::ostream& out) {
  if (T_text.empty() == grid_text.empty()) throw UsageError("give exactly one of --T and --grid");
  std::vector<Temperature> grid = T_text.empty() ? parse_grid(grid_text) : std::vector{parse_temperature(T_text)};
  for (const auto& T : grid) {
    if (k_text) {
      T.require_probe_range("thermo");
    } else {
      T.require_unit_interval("thermo --limit");
    }
  }
  const auto snap = src.load();
  Depth depth = Depth::limit();
  if (k_text) {
    const mpz_class k = parse_natural(*k_text, "--k");
    if (k < 1 || k > snap->total()) throw UsageError("--k must lie in [1, " + snap->total().get_str() + "]");
    depth = Depth::prefix(k);
  }
  std::vector<ThermoEvaluation> evs;
  for (const auto& T : grid) evs.push_back(evaluate(*snap, T, depth, set.precision));
  if (set.format == "csv") {
    emit::thermo_csv(out, evs);
    return 0;
  }
  json j = json::object();
  j["ensemble"] = snap->id();
  j["precision"] = set.precision;
  if (evs.size() == 1 && !T_text.empty()) {
    j["evaluation"] = emit::evaluation(evs.front());
  } else {
    j["evaluations"] = json::array();
    for (const auto& ev : evs) j["evaluations"].push_back(emit::evaluation(ev));
  }
  print(out, j);
  return 0;
}

int cmd_verify(const Source& src, const std::string& grid_text, const std::string& depths_text,
               const std::string& h_text, const Settings& set, std::ostream& out) {
  const std::vector<Temperature> grid = parse_grid(grid_text);
  for (const auto& T : grid) T.require_unit_interval("verify");
  const Dyadic h = Dyadic::parse(h_text);
  if (h.sign() <= 0) throw UsageError("--step must be positive");
  const auto snap = src.load();
  const std::vector<Depth> depths = parse_depths(depths_text, snap->total());

  std::vector<RelationReport> reports;
  for (const auto& depth : depths) {
    for (const auto& T : grid) {
      for (auto& r : check_identities(*snap, T, depth, set.precision)) reports.push_back(std::move(r));
    }
    for (auto& r : check_positivity(*snap, grid, depth, set.precision)) reports.push_back(std::move(r));
    for (const auto q : {MonotoneQuantity::Z, MonotoneQuantity::F, MonotoneQuantity::E, MonotoneQuantity::S}) {
      reports.push_back(check_monotone(*snap, q, grid, depth, set.precision));
    }
    if (depth.is_limit()) continue;
    for (const auto& T : grid) {
      if (compare(h, T.value()) >= 0) continue;
      for (const auto q : {DerivedQuantity::F, DerivedQuantity::E, DerivedQuantity::S}) {
        reports.push_back(check_derivative(*snap, q, T, depth.k, h, set.precision));
      }
    }
  }
  std::size_t pass = 0, fail = 0, unresolved = 0;
  for (const auto& r : reports) {
    (r.verdict == Verdict::pass ? pass : r.verdict == Verdict::fail ? fail : unresolved)++;
  }
  if (set.format == "csv") {
    out << "relation,T,depth,verdict,residual_lo,residual_hi\n";
    for (const auto& r : reports) {
      out << relation_name(r.id) << ',' << r.T.str() << ',' << r.depth.str() << ',' << verdict_name(r.verdict) << ','
          << to_decimal(r.residual.lo(), 20, Rounding::down) << ',' << to_decimal(r.residual.hi(), 20, Rounding::up)
          << '\n';
    }
  } else {
    json list = json::array();
    for (const auto& r : reports) list.push_back(emit::relation(r));
    print(out, {{"ensemble", snap->id()},
                {"summary", {{"pass", pass}, {"fail", fail}, {"unresolved", unresolved}}},
                {"reports", list}});
  }
  return fail == 0 ? 0 : 1;
}

int cmd_solve(const Source& src, const std::string& q_text, const std::string& target_text,
              const std::string& tol_text, const Settings& set, std::ostream& out) {
  // F decreases with T; solve -F = -target instead.
  const bool free_energy = q_text == "F";
  const HandleQuantity q = free_energy ? HandleQuantity::negF : parse_handle_quantity(q_text);
  Rational target = parse_rational(target_text);
  if (free_energy) target = -target;
  const Dyadic tol = Dyadic::parse(tol_text);
  if (tol.sign() <= 0) throw UsageError("--tol must be positive");
  const auto snap = src.load();
  SolveOptions opt;
  opt.precision = set.precision;
  const Enclosure T = solve_temperature(*snap, q, Enclosure::of(target, set.precision + 16), tol, opt);
  print(out, {{"ensemble", snap->id()},
              {"quantity", q_text},
              {"target", parse_rational(target_text).get_str()},
              {"tol", emit::dyadic(tol)},
              {"T", emit::enclosure(T)}});
  return 0;
}

HandleQuantity handle_or_default(const std::string& text) { return parse_handle_quantity(text.empty() ? "Z" : text); }

int cmd_witness(const Source& src, const std::string& T_text, unsigned n, const std::string& oracle_spec,
                const std::string& q_text, const Settings& set, std::ostream& out) {
  const Temperature T = parse_temperature(T_text);
  T.require_unit_interval("witness");
  if (n == 0) throw UsageError("--n must be positive");
  const auto h = certify(src.load(), handle_or_default(q_text), T, set.precision);
  Oracle upper = make_oracle(oracle_spec, [&](unsigned p) { return h.f(p); }, Approach::from_above);
  const WitnessReport rep = witness_search(h, bits_prefix(T.value(), n), upper);
  json j = emit::witness(rep);
  j["quantity"] = handle_quantity_name(h.quantity());
  j["certificate"] = emit::certificate(h.certificate());
  j["oracle"] = oracle_spec;
  print(out, j);
  return 0;
}

int cmd_semidecide(const Source& src, const std::string& T_text, const std::string& r_text,
                   const std::string& oracle_spec, std::size_t budget, const std::string& q_text, const Settings& set,
                   std::ostream& out) {
  const Temperature T = parse_temperature(T_text);
  T.require_unit_interval("semidecide");
  const auto h = certify(src.load(), handle_or_default(q_text), T, set.precision);
  Oracle upper = make_oracle(oracle_spec, [&](unsigned p) { return h.f(p); }, Approach::from_above);
  const SemidecisionReport rep = semidecide_above(h, Dyadic::parse(r_text), upper, budget);
  json j = {{"r", r_text}, {"answer", rep.answer == Semidecision::yes ? "yes" : "unknown"}};
  if (rep.answer == Semidecision::yes) {
    j["m"] = rep.m;
    j["k"] = rep.k.get_str();
  }
  print(out, j);
  return 0;
}

int cmd_reconstruct(const Source& src, const std::string& T_text, const std::string& u_text, unsigned n,
                    unsigned b, const std::string& a_spec, const std::string& b_spec, const std::string& q_text,
                    const Settings& set, std::ostream& out) {
  const Temperature T = parse_temperature(T_text);
  T.require_unit_interval("reconstruct");
  const Temperature u = parse_temperature(u_text);
  if (b > 1) throw UsageError("--b must be 0 or 1");
  const HandleQuantity q = q_text.empty() ? (b == 0 ? HandleQuantity::Z : HandleQuantity::E)
                                          : parse_handle_quantity(q_text);
  const auto h = certify(src.load(), q, T, set.precision);
  if (h.certificate().b_upper != b) {
    throw UsageError("quantity " + std::string(handle_quantity_name(q)) + " has increment exponent " +
                     std::to_string(h.certificate().b_upper) + ", not " + std::to_string(b));
  }
  const BitString bits = beta_prefix(h, u, n);
  Oracle A = make_descending_oracle(a_spec, T.value(), h.certificate().t.value());
  Oracle B = make_oracle(b_spec, [&](unsigned p) { return h.f(p); }, Approach::from_below);
  const ReconstructionReport rep = reconstruct_T(h, u, n, bits, A, B);
  const Rational dist = abs(rep.candidate.to_rational() - T.value());
  const bool contained = dist < rep.radius.to_rational();
  const bool tail_ok = rep.raised_tail < Dyadic::pow2(-static_cast<std::int64_t>(n));
  json j = emit::reconstruction(rep);
  j["quantity"] = handle_quantity_name(q);
  j["certificate"] = emit::certificate(h.certificate());
  j["beta_prefix"] = bits.render();
  j["contained"] = contained;
  j["raised_tail_below_2^-n"] = tail_ok;
  print(out, j);
  return contained && tail_ok ? 0 : 1;
}

int cmd_complexity(const Source& src, const std::string& against, std::optional<std::size_t> max_out,
                   const Settings& set, std::ostream& out) {
  Source listing = src;
  if (!listing.list_maxlen) listing.list_maxlen = listing.maxlen;
  const ComplexityTable table = build_table(*listing.load());
  if (against.empty()) {
    if (set.format == "csv") {
      emit::complexity_csv(out, table);
    } else {
      print(out, emit::complexity(table));
    }
    return 0;
  }
  Source other = listing;
  other.machine = against;
  other.snapshot.clear();
  const ComplexityTable table_b = build_table(*other.load());
  const InvarianceGap gap = invariance_gap(table, table_b, max_out);
  print(out, {{"a", table.ensemble},
              {"b", table_b.ensemble},
              {"exactness_a", table.exactness == Exactness::exact ? "exact" : "upper_bound"},
              {"exactness_b", table_b.exactness == Exactness::exact ? "exact" : "upper_bound"},
              {"shared_outputs", gap.shared},
              {"max_abs_gap", gap.max_abs},
              {"max_a_minus_b", gap.max_a_minus_b},
              {"max_b_minus_a", gap.max_b_minus_a}});
  return 0;
}

int cmd_profile(const Source& src, const std::string& alpha_text, const std::string& alpha_machine, unsigned N,
                const Settings& set, std::ostream& out) {
  Alpha alpha;
  json alpha_json;
  if (const auto at = alpha_text.find('@'); at != std::string::npos) {
    const Quantity q = parse_quantity(alpha_text.substr(0, at));
    const Temperature T = parse_temperature(alpha_text.substr(at + 1));
    T.require_unit_interval("profile");
    Source qsrc = src;
    if (!alpha_machine.empty()) {
      qsrc.machine = alpha_machine;
      qsrc.snapshot.clear();
    }
    qsrc.list_maxlen = 0;
    qsrc.maxlen = 128;
    const unsigned p = std::max(set.precision, N + 32);
    const Enclosure value = eval_limit(*qsrc.load(), T, p).get(q);
    alpha = value;
    alpha_json = emit::enclosure(value);
  } else {
    const Rational a = parse_rational(alpha_text);
    alpha = a;
    alpha_json = to_string(a);
  }
  Source listing = src;
  if (!listing.list_maxlen) listing.list_maxlen = listing.maxlen;
  const ComplexityTable table = build_table(*listing.load());
  const Profile p = profile(alpha, N, table);
  if (set.format == "csv") {
    emit::profile_csv(out, p);
  } else {
    json j = emit::profile(p);
    j["alpha"] = alpha_json;
    j["table"] = table.ensemble;
    j["exactness"] = table.exactness == Exactness::exact ? "exact" : "upper_bound";
    print(out, j);
  }
  return p.unresolved ? 1 : 0;
}

int cmd_diverge(const std::string& machine, const std::string& T_text, const std::string& M_text, std::uint32_t cap,
                const Settings& set, std::ostream& out) {
  const Temperature T = parse_temperature(T_text);
  T.require_probe_range("diverge");
  const DivergenceReport rep = divergence_probe(EnsembleSpec::parse(machine), T, parse_rational(M_text), cap,
                                                set.precision);
  json j = emit::divergence(rep);
  j["ensemble"] = machine;
  j["T"] = T.str();
  j["M"] = M_text;
  print(out, j);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified thermodynamic quantities of prefix-free program ensembles", "thermoait"};
  app.require_subcommand(1);
  // global flags may follow the subcommand too
  app.fallthrough();
  Settings set;
  std::optional<unsigned> precision;
  app.add_option("--precision", precision, "working precision in bits (default $THERMOAIT_PRECISION or 64)");
  app.add_option("--format", set.format, "output format")->check(CLI::IsMember({"json", "csv"}));

  std::function<int()> action;

  Source enum_src;
  std::string save;
  auto* c_enum = app.add_subcommand("enumerate", "enumerate an ensemble and report its census");
  enum_src.attach(c_enum);
  c_enum->add_option("--save", save, "write the snapshot to PATH");
  c_enum->callback([&] { action = [&] { return cmd_enumerate(enum_src, save, set, out); }; });

  Source th_src;
  std::string th_T, th_grid;
  std::optional<std::string> th_k;
  bool th_limit = false;
  auto* c_thermo = app.add_subcommand("thermo", "evaluate Z, W, Y, F, E, S, C");
  th_src.attach(c_thermo);
  c_thermo->add_option("--T", th_T, "temperature (dyadic or p/q)");
  c_thermo->add_option("--grid", th_grid, "grid a:b:step");
  auto* k_opt = c_thermo->add_option("--k", th_k, "first k programs");
  c_thermo->add_flag("--limit", th_limit, "k -> infinity limit (default)")->excludes(k_opt);
  c_thermo->callback([&] { action = [&] { return cmd_thermo(th_src, th_T, th_grid, th_k, set, out); }; });

  Source ver_src;
  std::string ver_grid = "1/16:15/16:1/16", ver_depths = "1,4,16,limit", ver_h = "1/1024";
  auto* c_verify = app.add_subcommand("verify", "run the relations suite");
  ver_src.attach(c_verify);
  c_verify->add_option("--grid", ver_grid, "temperature grid a:b:step");
  c_verify->add_option("--depths", ver_depths, "comma-separated depths (counts or 'limit')");
  c_verify->add_option("--step", ver_h, "finite-difference step h");
  c_verify->callback([&] { action = [&] { return cmd_verify(ver_src, ver_grid, ver_depths, ver_h, set, out); }; });

  Source sol_src;
  std::string sol_q, sol_target, sol_tol = "1/1073741824";
  auto* c_solve = app.add_subcommand("solve", "find the temperature where a quantity takes a value");
  sol_src.attach(c_solve);
  c_solve->add_option("--quantity", sol_q, "Z, F, E or S")->required()->check(CLI::IsMember({"Z", "F", "E", "S"}));
  c_solve->add_option("--target", sol_target, "target value (rational)")->required();
  c_solve->add_option("--tol", sol_tol, "width of the returned T interval");
  c_solve->callback([&] { action = [&] { return cmd_solve(sol_src, sol_q, sol_target, sol_tol, set, out); }; });

  Source wit_src;
  std::string wit_T, wit_oracle = "closed-form", wit_q;
  unsigned wit_n = 0;
  auto* c_wit = app.add_subcommand("witness", "search for k_e and a witness string from n bits of T");
  wit_src.attach(c_wit);
  c_wit->add_option("--T", wit_T, "temperature")->required();
  c_wit->add_option("--n", wit_n, "bits of T revealed")->required();
  c_wit->add_option("--oracle", wit_oracle, "upper oracle: closed-form, grid:<step>, file:<path>");
  c_wit->add_option("--quantity", wit_q, "Z, -F, E or S (default Z)");
  c_wit->callback([&] { action = [&] { return cmd_witness(wit_src, wit_T, wit_n, wit_oracle, wit_q, set, out); }; });

  Source semi_src;
  std::string semi_T, semi_r, semi_oracle = "closed-form", semi_q;
  std::size_t semi_budget = 64;
  auto* c_semi = app.add_subcommand("semidecide", "try to certify T < r");
  semi_src.attach(c_semi);
  c_semi->add_option("--T", semi_T, "temperature behind the oracle")->required();
  c_semi->add_option("--r", semi_r, "dyadic threshold")->required();
  c_semi->add_option("--oracle", semi_oracle, "upper oracle spec");
  c_semi->add_option("--queries", semi_budget, "oracle values to consume");
  c_semi->add_option("--quantity", semi_q, "Z, -F, E or S (default Z)");
  c_semi->callback([&] {
    action = [&] { return cmd_semidecide(semi_src, semi_T, semi_r, semi_oracle, semi_budget, semi_q, set, out); };
  });

  Source rec_src;
  std::string rec_T, rec_u, rec_A = "closed-form", rec_B = "closed-form", rec_q;
  unsigned rec_n = 0, rec_b = 0;
  auto* c_rec = app.add_subcommand("reconstruct", "recover T from n, u and a prefix of β");
  rec_src.attach(c_rec);
  c_rec->add_option("--T", rec_T, "true temperature (used for β and the oracles)")->required();
  c_rec->add_option("--u", rec_u, "computable u with T < u < 1")->required();
  c_rec->add_option("--n", rec_n, "precision target")->required();
  c_rec->add_option("--b", rec_b, "increment exponent (0 selects Z, 1 selects E)");
  c_rec->add_option("--oracle-A", rec_A, "descending oracle for T");
  c_rec->add_option("--oracle-B", rec_B, "ascending oracle for f(T)");
  c_rec->add_option("--quantity", rec_q, "Z, -F, E or S");
  c_rec->callback([&] {
    action = [&] { return cmd_reconstruct(rec_src, rec_T, rec_u, rec_n, rec_b, rec_A, rec_B, rec_q, set, out); };
  });

  Source cx_src;
  std::string cx_against;
  std::optional<std::size_t> cx_max_out;
  auto* c_cx = app.add_subcommand("complexity", "machine-relative program-size complexity table");
  cx_src.attach(c_cx, 17);
  c_cx->add_option("--against", cx_against, "second machine for the invariance gap");
  c_cx->add_option("--max-output-length", cx_max_out, "only compare outputs up to this length");
  c_cx->callback([&] { action = [&] { return cmd_complexity(cx_src, cx_against, cx_max_out, set, out); }; });

  Source pr_src;
  std::string pr_alpha, pr_alpha_machine;
  unsigned pr_N = 0;
  auto* c_pr = app.add_subcommand("profile", "compression-rate profile H(α_n)/n");
  pr_src.attach(c_pr, 17);
  c_pr->add_option("--alpha", pr_alpha, "dyadic/rational, or quantity@T such as Z@1/2")->required();
  c_pr->add_option("--alpha-machine", pr_alpha_machine, "ensemble for quantity@T (default --machine)");
  c_pr->add_option("--N", pr_N, "number of prefixes")->required();
  c_pr->callback([&] { action = [&] { return cmd_profile(pr_src, pr_alpha, pr_alpha_machine, pr_N, set, out); }; });

  std::string dv_machine = "gamma_literal", dv_T, dv_M = "10";
  std::uint32_t dv_cap = 4096;
  auto* c_dv = app.add_subcommand("diverge", "scan partial sums of Z for a bound crossing");
  c_dv->add_option("--machine", dv_machine, "ensemble with a closed-form census");
  c_dv->add_option("--T", dv_T, "temperature, below 2")->required();
  c_dv->add_option("--M", dv_M, "bound");
  c_dv->add_option("--cap", dv_cap, "longest length scanned");
  c_dv->callback([&] { action = [&] { return cmd_diverge(dv_machine, dv_T, dv_M, dv_cap, set, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    set.precision = precision ? *precision : env_precision();
    if (set.precision < 16) throw UsageError("--precision must be at least 16");
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    // Certification failures, unresolved comparisons, exhausted oracles.
    err << "failed: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace thermoait::cli
