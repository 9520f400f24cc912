#pragma once

// JSON schemas for the exact types.  Scalars keep their two rational
// components as reduced fraction strings, so round trips are lossless and
// output is deterministic (insertion-ordered objects throughout).
//
//   QScalar            {"a":"p/q","b":"p/q"}
//   polynomial         {"basis":"monomial_x","coeffs":[QScalar,...]}
//   family member      {"n":[...],"method":"...","monic":true,"coeffs":[QScalar,...]}
//   verification run   {"suite":...,"entries":[{identity,params,n,status,residual,...}],...}

#include <string>

#include "json.hpp"
#include "qmeix/classical.hpp"
#include "qmeix/verify.hpp"

namespace qmeix {

using OrderedJson = nlohmann::ordered_json;

OrderedJson qscalar_to_json(const QScalar& x);
QScalar qscalar_from_json(const OrderedJson& j, const FieldPtr& fld);

OrderedJson polynomial_to_json(const LatticePolynomial& p);
LatticePolynomial polynomial_from_json(const OrderedJson& j, const FieldPtr& fld);

// the classical family reuses the schema; x then means the linear lattice
OrderedJson xpolynomial_to_json(const XPolynomial& p);

OrderedJson mop_to_json(const MopPolynomial& m);
// params supply the field and are trusted; the stored index, monic flag and
// degree are cross-checked (InvalidParams on any disagreement)
MopPolynomial mop_from_json(const OrderedJson& j, const WeightParams& w);

OrderedJson report_to_json(const VerifyReport& r);

// strict "p" or "-p/q" rational parsing (no decimals, no whitespace)
Rational rational_from_string(const std::string& s);

}  // namespace qmeix
