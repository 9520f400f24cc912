#include "qmeix/json_io.hpp"

namespace qmeix {

namespace {

std::string need_string(const OrderedJson& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string())
    fail(ErrorCode::InvalidParams, std::string("expected string field '") + key + "'");
  return j[key].get<std::string>();
}

Method method_from_name(const std::string& s) {
  if (s == "oracle") return Method::Oracle;
  if (s == "rodrigues") return Method::Rodrigues;
  if (s == "recurrence") return Method::Recurrence;
  fail(ErrorCode::InvalidParams, "unknown method '" + s + "'");
}

}  // namespace

Rational rational_from_string(const std::string& s) {
  if (s.empty()) fail(ErrorCode::InvalidParams, "empty rational");
  size_t pos = 0;
  if (s[pos] == '-') ++pos;
  size_t slash = std::string::npos;
  bool digits = false;
  for (; pos < s.size(); ++pos) {
    if (s[pos] >= '0' && s[pos] <= '9') {
      digits = true;
    } else if (s[pos] == '/' && slash == std::string::npos && digits) {
      slash = pos;
      digits = false;  // denominator needs its own digits
    } else {
      fail(ErrorCode::InvalidParams, "malformed rational '" + s + "' (use p or p/q)");
    }
  }
  if (!digits) fail(ErrorCode::InvalidParams, "malformed rational '" + s + "'");
  if (slash != std::string::npos && Integer(s.substr(slash + 1)) == 0)
    fail(ErrorCode::InvalidParams, "zero denominator in '" + s + "'");
  return Rational(s);
}

OrderedJson qscalar_to_json(const QScalar& x) {
  return OrderedJson{{"a", x.a().str()}, {"b", x.b().str()}};
}

QScalar qscalar_from_json(const OrderedJson& j, const FieldPtr& fld) {
  return QScalar(rational_from_string(need_string(j, "a")),
                 rational_from_string(need_string(j, "b")), fld);
}

OrderedJson polynomial_to_json(const LatticePolynomial& p) {
  OrderedJson coeffs = OrderedJson::array();
  for (long k = 0; k <= p.degree(); ++k) coeffs.push_back(qscalar_to_json(p.coeff(k)));
  return OrderedJson{{"basis", "monomial_x"}, {"coeffs", std::move(coeffs)}};
}

namespace {
LatticePolynomial coeffs_from_json(const OrderedJson& j, const FieldPtr& fld) {
  if (!j.contains("coeffs") || !j["coeffs"].is_array())
    fail(ErrorCode::InvalidParams, "polynomial needs a coeffs array");
  std::vector<QScalar> c;
  for (const auto& e : j["coeffs"]) c.push_back(qscalar_from_json(e, fld));
  return LatticePolynomial(std::move(c), fld);
}
}  // namespace

LatticePolynomial polynomial_from_json(const OrderedJson& j, const FieldPtr& fld) {
  if (need_string(j, "basis") != "monomial_x")
    fail(ErrorCode::InvalidParams, "unsupported polynomial basis");
  return coeffs_from_json(j, fld);
}

OrderedJson xpolynomial_to_json(const XPolynomial& p) {
  OrderedJson coeffs = OrderedJson::array();
  for (long k = 0; k <= p.degree(); ++k)
    coeffs.push_back(OrderedJson{{"a", p.coeff(k).str()}, {"b", "0"}});
  return OrderedJson{{"basis", "monomial_x"}, {"coeffs", std::move(coeffs)}};
}

OrderedJson mop_to_json(const MopPolynomial& m) {
  OrderedJson coeffs = OrderedJson::array();
  for (long k = 0; k <= m.poly.degree(); ++k) coeffs.push_back(qscalar_to_json(m.poly.coeff(k)));
  return OrderedJson{{"n", m.index.entries()},
                     {"method", method_name(m.method)},
                     {"monic", m.poly.is_monic()},
                     {"coeffs", std::move(coeffs)}};
}

MopPolynomial mop_from_json(const OrderedJson& j, const WeightParams& w) {
  if (!j.contains("n") || !j["n"].is_array())
    fail(ErrorCode::InvalidParams, "family member needs a multi-index");
  std::vector<long> e;
  for (const auto& v : j["n"]) {
    if (!v.is_number_integer()) fail(ErrorCode::InvalidParams, "multi-index must be integral");
    e.push_back(v.get<long>());
  }
  MopPolynomial m;
  m.index = MultiIndex(std::move(e));
  if (m.index.r() != w.r())
    fail(ErrorCode::InvalidParams, "multi-index order does not match the parameters");
  m.params = w;
  m.method = method_from_name(need_string(j, "method"));
  m.poly = coeffs_from_json(j, w.fld);
  if (m.poly.degree() != m.index.total() || !m.poly.is_monic())
    fail(ErrorCode::InvalidParams, "stored member is not monic of degree |n|");
  if (!j.contains("monic") || !j["monic"].is_boolean() || !j["monic"].get<bool>())
    fail(ErrorCode::InvalidParams, "stored member must declare monic:true");
  return m;
}

OrderedJson report_to_json(const VerifyReport& r) {
  OrderedJson entries = OrderedJson::array();
  for (const VerifyEntry& e : r.entries) {
    OrderedJson row{{"identity", e.identity},
                    {"params", e.params},
                    {"n", e.n.entries()},
                    {"status", verify_status_name(e.status)},
                    {"residual", e.residual}};
    if (!e.detail.empty()) row["detail"] = e.detail;
    entries.push_back(std::move(row));
  }
  return OrderedJson{
      {"suite", r.suite},
      {"entries", std::move(entries)},
      {"counts",
       OrderedJson{{"exact-pass", r.count(VerifyStatus::ExactPass)},
                   {"mismatch", r.count(VerifyStatus::Mismatch)},
                   {"mismatch-documented", r.count(VerifyStatus::MismatchDocumented)}}},
      {"hard_failure", r.hard_failure()}};
}

}  // namespace qmeix
