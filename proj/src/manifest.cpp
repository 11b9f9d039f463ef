#include "isothermic/manifest.hpp"

#include <cstdio>
#include <variant>

namespace isothermic {

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

Json to_json(const ParamRect& r) {
  return Json{{"u1", {r.u1_min, r.u1_max}}, {"u2", {r.u2_min, r.u2_max}}};
}

Json to_json(ParamPoint p) { return Json::array({p.u1, p.u2}); }

Json to_json(const MaskTolerances& tol) {
  return Json{{"tol_domain", tol.domain}, {"tol_sing", tol.singular}};
}

Json to_json(const FamilyParams& params) {
  Json coeffs;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GeneralCoeffs>) {
          coeffs = {{"mode", "general"}, {"a1", k.a1}, {"b1", k.b1}, {"a2", k.a2}, {"b2", k.b2}};
        } else if constexpr (std::is_same_v<T, NormalizedCoeffs>) {
          if (params.tag() == CaseTag::NegOne) {
            coeffs = {{"mode", "normalized"}, {"A1", k.A1}, {"a2", k.a2}, {"b2", k.b2}};
          } else {
            coeffs = {{"mode", "normalized"}, {"A1", k.A1}, {"B1", k.B1}};
          }
        } else {
          coeffs = {{"mode", "singular"}, {"epsilon1", k.epsilon1}};
        }
      },
      params.coeffs());
  const GeneralCoeffs& g = params.expanded();
  Json out;
  out["b"] = params.b();
  out["c"] = params.c();
  out["case"] = to_string(params.tag());
  out["coeffs"] = coeffs;
  out["expanded"] = {{"a1", g.a1}, {"b1", g.b1}, {"a2", g.a2}, {"b2", g.b2}};
  out["epsilon"] = params.c() > 0.0 ? 1 : -1;
  if (params.is_singular()) out["epsilon1"] = params.epsilon1();
  out["constraint"] = {{"residual", params.constraint_residual()},
                       {"scale", params.constraint_scale()},
                       {"tolerance", kConstraintTolerance * params.constraint_scale()},
                       {"satisfied", params.satisfies_constraint()}};
  return out;
}

Json to_json(const RationalApprox& r) {
  Json out{{"value", r.value}, {"rational", r.rational}};
  if (r.rational) {
    out["numerator"] = r.numerator;
    out["denominator"] = r.denominator;
  }
  return out;
}

Json to_json(const GeometryClass& geo) {
  Json out;
  out["case"] = to_string(geo.tag);
  out["sqrt_abs_one_plus_c"] = to_json(geo.sqrt_abs_one_plus_c);
  out["sqrt_neg_c"] = geo.sqrt_neg_c ? to_json(*geo.sqrt_neg_c) : Json(nullptr);
  out["bubbles"] = geo.bubbles ? Json(*geo.bubbles) : Json(nullptr);
  out["end_index"] = geo.end_index ? Json(*geo.end_index) : Json(nullptr);
  out["side"] = to_string(geo.side);
  out["cmc"] = geo.cmc;
  out["planar_ends"] = geo.planar_ends;
  return out;
}

Json to_json(const CheckResult& c) {
  Json out{{"name", c.name},         {"passed", c.passed},   {"value", c.value},
           {"max_abs", c.max_abs},   {"tolerance", c.tolerance}};
  out["worst_point"] = c.worst ? to_json(*c.worst) : Json(nullptr);
  return out;
}

Json to_json(const IdentityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"passed", r.passed()},
              {"window", to_json(r.window)},
              {"sequence", {{"kind", "halton(2,3)"}, {"offset", r.sequence_offset}}},
              {"points", r.points},
              {"skipped_masked", r.skipped_masked},
              {"checks", checks}};
}

Json to_json(const AuditMetric& m) {
  return Json{{"name", m.name},   {"passed", m.passed}, {"gap_coarse", m.gap_coarse},
              {"gap_fine", m.gap_fine}, {"ratio", m.ratio},   {"bound", m.bound}};
}

Json to_json(const FdAudit& a) {
  Json metrics = Json::array();
  for (const auto& m : a.metrics) metrics.push_back(to_json(m));
  return Json{{"passed", a.passed()},
              {"window", to_json(a.window)},
              {"sequence", {{"kind", "halton(2,3)"}, {"offset", a.sequence_offset}}},
              {"points", a.points},
              {"h", {a.h_coarse, a.h_fine}},
              {"ratio_band", {kRatioLow, kRatioHigh}},
              {"metrics", metrics}};
}

Json to_json(const CalapsoCheck& c) {
  Json out{{"field", c.field}, {"passed", c.passed}};
  out["patch"] = c.patch ? to_json(*c.patch) : Json(nullptr);
  out["h"] = c.h;
  out["max_abs"] = c.max_abs;
  out["order"] = c.order;
  out["order_band"] = {c.order_low, c.order_high};
  if (!c.error.empty()) out["error"] = c.error;
  return out;
}

Json to_json(const LengthProbe& p) {
  return Json{{"passed", p.passed},
              {"p0", to_json(p.p0)},
              {"direction", {p.direction[0], p.direction[1]}},
              {"delta", p.delta},
              {"epsilons", p.epsilons},
              {"lengths", p.lengths},
              {"c_fit", p.c_fit},
              {"c_expected", p.c_expected},
              {"halving_ratio", p.halving_ratio},
              {"increasing", p.increasing}};
}

Json to_json(const BubbleReport& r) {
  Json out;
  out["window"] = to_json(r.grid.window());
  out["resolution"] = {r.grid.n1(), r.grid.n2()};
  out["expected"] = r.expected ? Json(*r.expected) : Json(nullptr);
  if (r.count) {
    out["n_max"] = r.count->n_max;
    out["n_min"] = r.count->n_min;
    out["matches"] = r.expected && r.count->n_max == *r.expected;
  }
  if (!r.error.empty()) out["error"] = r.error;
  out["gating"] = false;
  return out;
}

Json to_json(const VerifyReport& r) {
  Json out;
  out["passed"] = r.passed();
  out["failures"] = r.failures();
  out["identities"] = to_json(r.identities);
  out["conformality"] = to_json(r.conformality);
  out["curvature"] = to_json(r.curvature);
  out["sign_calibration"] = {{"sign", r.calibration.sign},
                             {"cylinder_k1", r.calibration.k1},
                             {"cylinder_k2", r.calibration.k2}};
  Json cal = Json::array();
  for (const auto& c : r.calapso) cal.push_back(to_json(c));
  out["calapso"] = cal;
  if (r.probe) {
    out["length_probe"] = to_json(*r.probe);
  } else if (!r.probe_error.empty()) {
    out["length_probe"] = {{"passed", false}, {"error", r.probe_error}};
  } else {
    out["length_probe"] = nullptr;
  }
  out["bubbles"] = r.bubbles ? to_json(*r.bubbles) : Json(nullptr);
  return out;
}

Json run_manifest(const Json& inputs, const FamilyParams& params, const ParamRect& lattice_window,
                  const MaskTolerances& tol) {
  Json out;
  out["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  out["inputs"] = inputs;
  out["inputs_hash"] = "fnv1a64:" + hex64(fnv1a64(inputs.dump()));
  out["family"] = to_json(params);

  Json derived;
  const auto p1 = u1_period(params);
  const auto p2 = u2_period(params);
  derived["u1_period"] = p1 ? Json(*p1) : Json(nullptr);
  derived["u2_period"] = p2 ? Json(*p2) : Json(nullptr);
  Json lattice = Json::array();
  for (const auto& p : singular_points(params, lattice_window)) lattice.push_back(to_json(p));
  derived["singular_lattice"] = {{"window", to_json(lattice_window)}, {"points", lattice}};
  derived["classification"] = to_json(classify_geometry(params));
  derived["mean_curvature"] =
      params.b() == 0.0 ? Json{{"constant", true}, {"H", -0.5}} : Json{{"constant", false}};
  out["derived"] = derived;

  out["tolerances"] = {{"constraint", kConstraintTolerance},
                       {"tol_domain", tol.domain},
                       {"tol_sing", tol.singular}};
  return out;
}

}  // namespace isothermic
