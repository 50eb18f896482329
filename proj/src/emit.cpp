#include "emit.hpp"

namespace thermoait::emit {
namespace {

constexpr int kDigits = 20;

std::string lower_decimal(const Dyadic& x) { return to_decimal(x, kDigits, Rounding::down); }
std::string upper_decimal(const Dyadic& x) { return to_decimal(x, kDigits, Rounding::up); }

json optional_natural(const std::optional<std::uint32_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json dyadic(const Dyadic& x) {
  return {{"exact", x.str()}, {"decimal", x.exponent() >= 0 ? x.mantissa().get_str() : lower_decimal(x)}};
}

json enclosure(const Enclosure& e) {
  return {{"lo", e.lo().str()},
          {"hi", e.hi().str()},
          {"lo_decimal", lower_decimal(e.lo())},
          {"hi_decimal", upper_decimal(e.hi())}};
}

json rational(const Rational& q) { return to_string(q); }

json evaluation(const ThermoEvaluation& ev) {
  json j;
  j["T"] = ev.T.str();
  j["k"] = ev.extent == Extent::limit ? json("limit") : json(ev.k.get_str());
  if (ev.extent == Extent::limit) {
    j["summed_programs"] = ev.k.get_str();
    j["tail_length"] = ev.tail_length;
  }
  for (const Quantity q : kAllQuantities) {
    const std::string name(quantity_name(q));
    j[name] = enclosure(ev.get(q));
    if (ev.extent == Extent::limit) j["tail"][name] = enclosure(ev.tail_of(q));
  }
  return j;
}

json relation(const RelationReport& r) {
  return {{"relation", relation_name(r.id)},
          {"T", r.T.str()},
          {"depth", r.depth.str()},
          {"verdict", verdict_name(r.verdict)},
          {"residual", enclosure(r.residual)},
          {"detail", r.detail}};
}

json certificate(const ConditionCertificate& c) {
  return {{"a", c.a},          {"a_lower", c.a_lower}, {"b", c.b},
          {"c", c.c},          {"b_upper", c.b_upper}, {"c_upper", c.c_upper},
          {"k0", c.k0.get_str()}, {"t", c.t.str()}};
}

json witness(const WitnessReport& w) {
  return {{"T", w.T.str()},
          {"n", w.n},
          {"k_e", w.k_e.get_str()},
          {"m_e", w.m_e},
          {"length_threshold", dyadic(w.length_threshold)},
          {"witness", w.witness.render()},
          {"verified_through", w.verified_through.get_str()}};
}

json reconstruction(const ReconstructionReport& r) {
  return {{"T_true", r.T_true.str()},
          {"n", r.n},
          {"u", r.u.str()},
          {"beta_bits_used", r.beta_bits_used},
          {"k_e", r.k_e.get_str()},
          {"l_e", r.l_e},
          {"m_e", r.m_e},
          {"candidate", dyadic(r.candidate)},
          {"radius", dyadic(r.radius)},
          {"raised_tail", dyadic(r.raised_tail)}};
}

json divergence(const DivergenceReport& d) {
  json j = {{"exceeded", d.exceeded}, {"L", d.L}, {"cap", d.cap}, {"partial", enclosure(d.partial)}};
  j["limit"] = d.limit ? enclosure(*d.limit) : json(nullptr);
  return j;
}

json complexity(const ComplexityTable& t) {
  json entries = json::array();
  for (const auto& [s, e] : t.entries) {
    entries.push_back({{"output", s.render()}, {"H", e.min_length}, {"program", e.min_program.render()}});
  }
  return {{"ensemble", t.ensemble},
          {"exactness", t.exactness == Exactness::exact ? "exact" : "upper_bound"},
          {"complete_through", t.complete_through},
          {"entries", entries}};
}

json profile(const Profile& p) {
  json rows = json::array();
  for (const auto& r : p.rows) {
    rows.push_back({{"n", r.n},
                    {"bits", r.bits.render()},
                    {"H", optional_natural(r.H)},
                    {"ratio", r.ratio ? rational(*r.ratio) : json(nullptr)}});
  }
  json j = {{"rows", rows}, {"unresolved", p.unresolved}};
  if (p.unresolved) j["note"] = p.note;
  return j;
}

void thermo_csv(std::ostream& out, const std::vector<ThermoEvaluation>& evs) {
  out << "T_lo,T_hi,quantity,k,value_lo,value_hi,tail_bound\n";
  for (const auto& ev : evs) {
    const Enclosure T = ev.T.enclosure(64);
    const std::string k = ev.extent == Extent::limit ? "limit" : ev.k.get_str();
    for (const Quantity q : kAllQuantities) {
      const Enclosure& v = ev.get(q);
      out << lower_decimal(T.lo()) << ',' << upper_decimal(T.hi()) << ',' << quantity_name(q) << ',' << k << ','
          << lower_decimal(v.lo()) << ',' << upper_decimal(v.hi()) << ','
          << upper_decimal(ev.tail_of(q).magnitude()) << '\n';
    }
  }
}

void profile_csv(std::ostream& out, const Profile& p) {
  out << "n,bits,H,ratio\n";
  for (const auto& r : p.rows) {
    out << r.n << ',' << r.bits.render() << ',';
    if (r.H) out << *r.H;
    out << ',';
    if (r.ratio) out << to_string(*r.ratio);
    out << '\n';
  }
  if (p.unresolved) out << "# " << p.note << '\n';
}

void complexity_csv(std::ostream& out, const ComplexityTable& t) {
  out << "output,H,program\n";
  for (const auto& [s, e] : t.entries) out << s.render() << ',' << e.min_length << ',' << e.min_program.render() << '\n';
}

}  // namespace thermoait::emit
