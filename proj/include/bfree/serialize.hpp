#pragma once

#include <json.hpp>

#include "bfree/proximality.hpp"
#include "bfree/quadratic.hpp"

namespace bfree {

using Json = nlohmann::ordered_json;

/// Integers that fit in int64 become JSON numbers, larger ones strings.
Json to_json(const BigInt& v);
BigInt bigint_from_json(const Json& j);

Json point_to_json(const Point& p);
Point point_from_json(const Json& j);

/// A lattice is the array of its canonical basis columns.
Json lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const Json& j);

Json ring_to_json(const QuadraticRing& r);
Json ideal_to_json(const QuadIdeal& i);

Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

/// {status, reason, certificate:{kind, data}, evidence:{zero_window_sides, windows}}
Json verdict_to_json(const ProximalityVerdict& v);
ProximalityVerdict verdict_from_json(const Json& j);

Json density_to_json(const DensityProfile& p);
Json report_to_json(const FamilySpec& spec, const ConditionsReport& r);

}  // namespace bfree
