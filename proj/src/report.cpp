#include <set>

#include "gcs/scenario.hpp"

namespace gcs {

namespace {

// Schema nodes use a small JSON-Schema subset: type, properties, required, items, enum.
Json N() { return Json{{"type", Json::array({"number", "null"})}}; }  // null stands for a non-finite value
Json I() { return Json{{"type", "integer"}}; }
Json S() { return Json{{"type", "string"}}; }
Json B() { return Json{{"type", "boolean"}}; }
Json A(Json items) { return Json{{"type", "array"}, {"items", std::move(items)}}; }
Json O(std::initializer_list<std::pair<const char*, Json>> props) {
  Json p = Json::object(), req = Json::array();
  for (auto& [k, v] : props) {
    p[k] = v;
    req.push_back(k);
  }
  return Json{{"type", "object"}, {"properties", p}, {"required", req}};
}
Json Nullable(Json s) {
  Json t = s["type"].is_array() ? s["type"] : Json::array({s["type"]});
  t.push_back("null");
  s["type"] = t;
  return s;
}
Json Enum(std::initializer_list<const char*> v) {
  Json e = Json::array();
  for (auto s : v) e.push_back(s);
  return Json{{"type", "string"}, {"enum", e}};
}

Json net() { return O({{"re", A(N())}, {"im", A(N())}}); }
Json cls() {
  return O({{"verdict", Enum({"Negligible", "Moderate", "SlowScale", "NotModerate"})},
            {"fitted_exponent", N()},
            {"fit_residual", N()},
            {"strictly_nonzero", B()},
            {"lower_exponent", N()},
            {"all_zero", B()}});
}
Json comparison() {
  return O({{"lambda", net()},
            {"lambda_class", cls()},
            {"xi_growth", N()},
            {"status", Enum({"holds", "fails", "indeterminate"})},
            {"verdict", B()},
            {"sample_count", I()},
            {"max_decade", I()},
            {"witnesses", A(O({{"eps", N()}, {"xi", A(N())}, {"ratio", N()}}))}});
}
Json hypotheses() {
  return O({{"h1", B()}, {"h2", B()}, {"h3", B()}, {"h4", B()}, {"h5", B()}, {"h6", B()},
            {"h2_point", A(N())},
            {"h5_order", I()},
            {"terms", A(O({{"name", S()},
                           {"lambda", net()},
                           {"h3", B()},
                           {"lambda_valuation", N()},
                           {"deriv_bound", net()},
                           {"product_valuation", N()},
                           {"h6_valuations", A(N())}}))}});
}

Json results() {
  Json r = Json::object();
  r["classify"] = O({{"net", S()}, {"eps", A(N())}, {"samples", net()}, {"class", cls()}, {"valuation", N()}});
  r["compare"] = O({{"mode", Enum({"stronger", "dominates"})},
                    {"Q", S()},
                    {"P", S()},
                    {"stronger", comparison()},
                    {"domination", Nullable(O({{"t", A(N())},
                                               {"C_of_t", A(N())},
                                               {"gamma", N()},
                                               {"decay_ok", B()},
                                               {"uniform_ok", B()},
                                               {"uniform_checks", I()},
                                               {"verdict", B()}}))}});
  r["ellipticity"] = O({{"mode", Enum({"g-elliptic", "principal"})},
                        {"c", N()},
                        {"a", N()},
                        {"verdict", B()},
                        {"inf_net", net()},
                        {"inf_class", cls()},
                        {"worst_direction", A(A(N()))}});
  r["hypotheses"] = hypotheses();
  r["fundsol"] = O({{"N", I()},
                    {"theta", A(N())},
                    {"shift_score", N()},
                    {"table", A(O({{"eps", N()}, {"residual", N()}, {"l2", N()}, {"b_inf", N()}}))},
                    {"l2_class", cls()},
                    {"min_symbol", net()},
                    {"max_residual", N()},
                    {"tol", N()}});
  r["solve-bp"] = O({{"delta", N()},
                     {"eps1", N()},
                     {"theta", A(N())},
                     {"ladder", A(N())},
                     {"accepted_factor", A(N())},
                     {"C1", A(N())},
                     {"head_contracting", I()},
                     {"k_ladder", A(O({{"s", N()}, {"holds", B()}}))},
                     {"table", A(O({{"eps", N()},
                                    {"contraction", N()},
                                    {"iterations", I()},
                                    {"residual", N()},
                                    {"max_ratio", N()},
                                    {"g_norm", N()},
                                    {"T_norm", N()}}))},
                     {"g_class", cls()},
                     {"T_class", cls()},
                     {"hypotheses", hypotheses()},
                     {"max_residual", N()},
                     {"max_contraction", N()},
                     {"residual_tol", N()}});
  Json pr = O({{"profile_check", O({{"pass", B()},
                                     {"cond_i", B()},
                                     {"cond_ii", B()},
                                     {"cond_iii", B()},
                                     {"i_exponent", N()},
                                     {"c_ii", net()},
                                     {"iii_exponent", N()},
                                     {"failed", S()},
                                     {"witness", S()},
                                     {"via_elliptic", B()},
                                     {"profile", O({{"a", N()}, {"a_prime", N()}, {"m_prime", N()}, {"R", N()},
                                                    {"c", N()}})}})},
               {"terms", A(O({{"j", I()}, {"decay", N()}, {"weighted_sup", A(N())}, {"telescoping_max", N()}}))},
               {"telescoping_max", N()},
               {"sum", O({{"R", A(N())}, {"contribution", A(N())}, {"dropped", A(B())}})},
               {"remainder", O({{"sup_l1", A(N())},
                                {"sup_l3", A(N())},
                                {"l1_class", cls()},
                                {"xi_growth", N()},
                                {"smoothing", B()},
                                {"bounded", B()},
                                {"kernel_sup", A(N())},
                                {"kernel_class", cls()}})},
               {"left_remainder", O({{"sup", A(N())}, {"class", cls()}})},
               {"solve", Nullable(O({{"delta", N()},
                                     {"eps1", N()},
                                     {"ladder", A(N())},
                                     {"table", A(O({{"eps", N()},
                                                    {"contraction", N()},
                                                    {"iterations", I()},
                                                    {"residual", N()},
                                                    {"max_ratio", N()}}))},
                                     {"derivative_classes", A(cls())},
                                     {"regular", B()},
                                     {"max_residual", N()},
                                     {"residual_tol", N()}}))}});
  // present only for the elliptic profile route
  pr["properties"]["elliptic"] = O({{"c0", net()}, {"a", N()}, {"R_eps", A(N())}, {"capped", B()}});
  r["parametrix"] = pr;
  r["sobolev-check"] = O({{"x0", A(N())},
                          {"delta", N()},
                          {"s", N()},
                          {"battery_size", I()},
                          {"label", S()},
                          {"lambda", net()},
                          {"class", cls()},
                          {"verdict", B()},
                          {"worst", A(I())},
                          {"inequality", O({{"holds", B()}, {"worst", N()}})},
                          {"exponent_target", Nullable(O({{"value", N()}, {"tol", N()}}))}});
  r["solve-weak"] = O({{"inv_sob", Nullable(O({{"verdict", B()}, {"label", S()}, {"fitted_exponent", N()}}))},
                       {"dim_V", I()},
                       {"rank_V", I()},
                       {"table", A(O({{"eps", N()},
                                      {"weak_residual", N()},
                                      {"strong_residual", N()},
                                      {"cond", N()},
                                      {"t_norm", N()},
                                      {"bound", N()}}))},
                       {"t_class", cls()},
                       {"max_weak_residual", N()},
                       {"weak_tol", N()}});
  return r;
}

bool type_ok(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "number") return v.is_number();
  if (t == "integer") return v.is_number_integer();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

void check(const Json& v, const Json& s, const std::string& path, bool strict, std::vector<std::string>& err) {
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (auto& t : s["type"]) ok = ok || type_ok(v, t.get<std::string>());
    } else {
      ok = type_ok(v, s["type"].get<std::string>());
    }
    if (!ok) {
      err.push_back(path + ": expected " + s["type"].dump() + ", got " + v.type_name());
      return;
    }
  }
  if (v.is_null()) return;
  if (s.contains("enum")) {
    bool found = false;
    for (auto& e : s["enum"]) found = found || e == v;
    if (!found) err.push_back(path + ": value " + v.dump() + " not in " + s["enum"].dump());
  }
  if (v.is_object() && s.contains("properties")) {
    const Json& props = s["properties"];
    if (s.contains("required"))
      for (auto& k : s["required"])
        if (!v.contains(k.get<std::string>())) err.push_back(path + ": missing key '" + k.get<std::string>() + "'");
    for (auto& [k, x] : v.items()) {
      if (props.contains(k)) check(x, props[k], path + "." + k, strict, err);
      else if (strict) err.push_back(path + ": unknown key '" + k + "'");
    }
  }
  if (v.is_array() && s.contains("items"))
    for (size_t i = 0; i < v.size(); ++i) check(v[i], s["items"], path + "[" + std::to_string(i) + "]", strict, err);
}

}  // namespace

Json report_schema() {
  Json kinds = Json::array();
  Json r = results();
  for (auto& [k, v] : r.items()) kinds.push_back(k);
  Json envelope = O({{"schema", Json{{"type", "string"}, {"enum", Json::array({kReportSchema})}}},
                     {"scenario", S()},
                     {"task", S()},
                     {"kind", Json{{"type", "string"}, {"enum", kinds}}},
                     {"seed", I()},
                     {"expect", S()},
                     {"outcome", Enum({"pass", "fail", "error"})},
                     {"passed", B()},
                     {"error", Nullable(O({{"kind", S()}, {"message", S()}}))},
                     {"result", Json{{"type", Json::array({"object", "null"})}}}});
  return Json{{"id", kReportSchema},
              {"version", 1},
              {"note", "envelope validates the whole document; results[kind] validates its 'result' member. "
                       "Numbers may be null where the value is not finite."},
              {"envelope", envelope},
              {"results", r}};
}

std::vector<std::string> validate_report(const Json& doc, const Json& schema, bool strict) {
  std::vector<std::string> err;
  check(doc, schema["envelope"], "$", strict, err);
  if (!err.empty()) return err;
  const std::string kind = doc["kind"].get<std::string>();
  if (!doc["result"].is_null()) check(doc["result"], schema["results"][kind], "$.result", strict, err);
  return err;
}

std::string dump_report(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace gcs
