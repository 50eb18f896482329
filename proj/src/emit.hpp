#pragma once

// Serialization for the command-line front end. Numbers go out as exact
// dyadic text plus an outward-rounded decimal rendering, never as bare floats.

#include <ostream>
#include <vector>

#include <json.hpp>

#include "thermoait/complexity.hpp"
#include "thermoait/fixedpoint.hpp"
#include "thermoait/relations.hpp"
#include "thermoait/thermo.hpp"

namespace thermoait::emit {

using nlohmann::json;

json dyadic(const Dyadic& x);
json enclosure(const Enclosure& e);
json rational(const Rational& q);

json evaluation(const ThermoEvaluation& ev);
json relation(const RelationReport& r);
json certificate(const ConditionCertificate& c);
json witness(const WitnessReport& w);
json reconstruction(const ReconstructionReport& r);
json divergence(const DivergenceReport& d);
json complexity(const ComplexityTable& t);
json profile(const Profile& p);

/// Columns T_lo,T_hi,quantity,k,value_lo,value_hi,tail_bound; one row per
/// quantity per evaluation.
void thermo_csv(std::ostream& out, const std::vector<ThermoEvaluation>& evs);
/// Columns n,bits,H,ratio; absent entries are left empty.
void profile_csv(std::ostream& out, const Profile& p);
/// Columns output,H,program.
void complexity_csv(std::ostream& out, const ComplexityTable& t);

}  // namespace thermoait::emit
