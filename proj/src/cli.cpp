#include "isothermic/cli.hpp"

#include <charconv>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "isothermic/catalog.hpp"
#include "isothermic/errors.hpp"
#include "isothermic/export.hpp"
#include "isothermic/grid.hpp"
#include "isothermic/manifest.hpp"
#include "isothermic/verify.hpp"

namespace isothermic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) {
    throw ValidationError(std::string(what) + " must be given as min:max, got '" + text + "'");
  }
  const double lo = parse_number(parts[0]);
  const double hi = parse_number(parts[1]);
  if (!(lo < hi)) throw ValidationError(std::string(what) + " needs min < max");
  return {lo, hi};
}

// "a:b,c:d"
ParamRect parse_patch(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ValidationError("patch must be given as u1min:u1max,u2min:u2max");
  return parse_window(parts[0], parts[1]);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_number(p));
  return out;
}

struct Options {
  std::string command;
  std::string preset;
  std::string b;
  std::string c;
  std::string coeffs;
  std::string u1;
  std::string u2;
  std::string res = "64x64";
  double tol_domain = 1e-8;
  double tol_sing = 1e-8;
  std::string out;
  bool json = false;
  unsigned threads = 1;
  bool normals = false;
  std::string field = "omega";
  std::string patch;
  std::string patch_window;
  std::string steps = "0.04,0.02,0.01";
};

struct Family {
  FamilyParams params;
  const CatalogEntry* preset = nullptr;
  Json inputs;
};

MaskTolerances tolerances(const Options& o) {
  if (!(o.tol_domain >= 0.0) || !(o.tol_sing >= 0.0)) {
    throw ValidationError("mask tolerances must be non-negative");
  }
  return {o.tol_domain, o.tol_sing};
}

Family resolve_family(const Options& o, ConstraintPolicy policy) {
  Json inputs;
  inputs["command"] = o.command;
  if (!o.preset.empty()) {
    if (!o.b.empty() || !o.c.empty() || !o.coeffs.empty()) {
      throw ValidationError("--preset cannot be combined with --b, --c or --coeffs");
    }
    const CatalogEntry* entry = find_preset(o.preset);
    if (!entry) throw ValidationError("unknown preset '" + o.preset + "'");
    inputs["preset"] = entry->key;
    return {build_family(entry->b, entry->c, entry->coeffs, policy), entry, inputs};
  }
  if (o.c.empty()) throw ValidationError("--c is required (or use --preset)");
  if (o.coeffs.empty()) throw ValidationError("--coeffs is required (or use --preset)");
  const CoeffSpec coeffs = parse_coeffs(o.coeffs);
  const bool singular = std::holds_alternative<SingularCoeffs>(coeffs);
  if (o.b.empty() && !singular) throw ValidationError("--b is required unless --coeffs singular");
  const double b = o.b.empty() ? 0.0 : parse_number(o.b);
  const double c = parse_number(o.c);
  inputs["b"] = o.b.empty() ? Json(nullptr) : Json(b);
  inputs["c"] = c;
  inputs["coeffs"] = o.coeffs;
  return {build_family(b, c, coeffs, policy), nullptr, inputs};
}

ParamRect window_or(const Options& o, ParamRect fallback) {
  ParamRect w = fallback;
  if (!o.u1.empty()) std::tie(w.u1_min, w.u1_max) = parse_range(o.u1, "--u1");
  if (!o.u2.empty()) std::tie(w.u2_min, w.u2_max) = parse_range(o.u2, "--u2");
  return w;
}

void add_common_inputs(Json& inputs, const Options& o, const MaskTolerances& tol) {
  inputs["tolerances"] = to_json(tol);
  if (!o.out.empty()) inputs["out"] = o.out;
}

// Sends text to --out when given, otherwise to stdout.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_text_file(o.out, text);
  }
}

std::string fmt(double x) { return format_number(x); }

std::string point_text(ParamPoint p) { return fmt(p.u1) + " " + fmt(p.u2); }

int cmd_family(const Options& o, std::ostream& out) {
  const MaskTolerances tol = tolerances(o);
  Family fam = resolve_family(o, ConstraintPolicy::Enforce);
  const ParamRect lattice = window_or(o, {-kTwoPi, kTwoPi, -kTwoPi, kTwoPi});
  fam.inputs["lattice_window"] = to_json(lattice);
  add_common_inputs(fam.inputs, o, tol);
  emit(o, out, run_manifest(fam.inputs, fam.params, lattice, tol).dump(2) + "\n");
  return kExitOk;
}

GridSpec sampling_grid(const Options& o, const MaskTolerances& tol, Json& inputs) {
  const ParamRect window = window_or(o, {-2.0, 2.0, 0.0, kTwoPi});
  const auto [n1, n2] = parse_resolution(o.res);
  inputs["window"] = to_json(window);
  inputs["resolution"] = {n1, n2};
  return GridSpec(window, n1, n2, tol);
}

int cmd_sample(const Options& o, std::ostream& out) {
  const MaskTolerances tol = tolerances(o);
  Family fam = resolve_family(o, ConstraintPolicy::Enforce);
  const GridSpec grid = sampling_grid(o, tol, fam.inputs);
  const ProfilePair pair(fam.params);
  const SampleTable table = sample_grid(pair, grid, o.threads);
  std::ostringstream csv;
  write_csv(table, csv);
  emit(o, out, csv.str());
  return kExitOk;
}

int cmd_mesh(const Options& o, std::ostream& out) {
  const MaskTolerances tol = tolerances(o);
  Family fam = resolve_family(o, ConstraintPolicy::Enforce);
  const GridSpec grid = sampling_grid(o, tol, fam.inputs);
  const ProfilePair pair(fam.params);
  const SampleTable table = sample_grid(pair, grid, o.threads);
  std::ostringstream obj;
  const ObjStats stats = write_obj(table, obj, o.normals);
  if (o.out.empty()) {
    out << obj.str();
    return kExitOk;
  }
  write_text_file(o.out, obj.str());
  if (o.json) {
    out << Json{{"vertices", stats.vertices}, {"faces", stats.faces},
                {"masked", table.masked_count()}}.dump()
        << "\n";
  } else {
    out << "vertices " << stats.vertices << "\nfaces " << stats.faces << "\nmasked "
        << table.masked_count() << "\n";
  }
  return kExitOk;
}

int cmd_calapso(const Options& o, std::ostream& out) {
  const MaskTolerances tol = tolerances(o);
  Family fam = resolve_family(o, ConstraintPolicy::Enforce);
  const ProfilePair pair(fam.params);
  FieldKind kind;
  if (o.field == "omega") {
    kind = FieldKind::Omega;
  } else if (o.field == "Omega") {
    kind = FieldKind::CapitalOmega;
  } else {
    throw ValidationError("--field must be omega or Omega");
  }
  const CalapsoField field = make_field(pair, kind, tol);
  const std::vector<double> steps = parse_list(o.steps);

  std::optional<ParamRect> patch;
  std::string patch_source;
  if (!o.patch.empty()) {
    patch = parse_patch(o.patch);
    patch_source = "argument";
  } else if (fam.preset && (kind == FieldKind::Omega ? fam.preset->omega_patch
                                                     : fam.preset->capital_omega_patch)) {
    patch = kind == FieldKind::Omega ? fam.preset->omega_patch : fam.preset->capital_omega_patch;
    patch_source = "preset";
  } else {
    const ParamRect scan = window_or(o, fam.preset ? fam.preset->patch_window
                                                   : ParamRect{-2.0, 2.0, 0.0, std::numbers::pi});
    patch = select_patch(field, pair, scan, 1.0, tol);
    patch_source = "scan";
  }

  fam.inputs["field"] = o.field;
  fam.inputs["steps"] = steps;
  if (!o.patch.empty()) fam.inputs["patch"] = o.patch;
  add_common_inputs(fam.inputs, o, tol);

  if (!o.out.empty()) {
    const ParamRect window = window_or(o, {-2.0, 2.0, 0.0, kTwoPi});
    const auto [n1, n2] = parse_resolution(o.res);
    export_field_csv(field, GridSpec(window, n1, n2, tol), o.out);
  }

  const CalapsoCheck check = check_solution(o.field, field, patch, steps);
  if (o.json) {
    Json report = to_json(check);
    report["patch_source"] = patch_source;
    report["inputs_hash"] = "fnv1a64:" + hex64(fnv1a64(fam.inputs.dump()));
    out << report.dump() << "\n";
  } else {
    out << "field " << o.field << "\n";
    if (check.patch) {
      out << "patch " << fmt(check.patch->u1_min) << ":" << fmt(check.patch->u1_max) << ","
          << fmt(check.patch->u2_min) << ":" << fmt(check.patch->u2_max) << " (" << patch_source
          << ")\n";
    }
    for (size_t k = 0; k < check.h.size(); ++k) {
      out << "h " << fmt(check.h[k]) << " max_abs " << fmt(check.max_abs[k]) << "\n";
    }
    if (!check.error.empty()) out << "error " << check.error << "\n";
    out << "order " << fmt(check.order) << "\n" << (check.passed ? "PASS" : "FAIL") << "\n";
  }
  return check.passed ? kExitOk : kExitVerification;
}

int cmd_singular(const Options& o, std::ostream& out) {
  Family fam = resolve_family(o, ConstraintPolicy::Enforce);
  const ParamRect window = window_or(o, {-kTwoPi, kTwoPi, -kTwoPi, kTwoPi});
  const auto points = singular_points(fam.params, window);
  if (o.json) {
    Json list = Json::array();
    for (const auto& p : points) list.push_back(to_json(p));
    emit(o, out, Json{{"window", to_json(window)}, {"points", list}}.dump() + "\n");
  } else {
    std::string text;
    for (const auto& p : points) text += point_text(p) + "\n";
    emit(o, out, text);
  }
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  Family fam = resolve_family(o, ConstraintPolicy::Enforce);
  const GeometryClass geo = classify_geometry(fam.params);
  if (o.json) {
    emit(o, out, to_json(geo).dump() + "\n");
    return kExitOk;
  }
  std::ostringstream os;
  auto ratio = [](const RationalApprox& r) {
    return r.rational ? std::to_string(r.numerator) + "/" + std::to_string(r.denominator)
                      : std::string("irrational within tolerance");
  };
  os << "case " << to_string(geo.tag) << "\n";
  os << "sqrt|1+c| " << fmt(geo.sqrt_abs_one_plus_c.value) << " = " << ratio(geo.sqrt_abs_one_plus_c)
     << "\n";
  if (geo.sqrt_neg_c) os << "sqrt(-c) " << fmt(geo.sqrt_neg_c->value) << " = " << ratio(*geo.sqrt_neg_c) << "\n";
  if (geo.bubbles) os << "bubbles " << *geo.bubbles << "\nend_index " << *geo.end_index << "\n";
  os << "side " << to_string(geo.side) << "\n";
  os << "cmc " << (geo.cmc ? "true" : "false") << "\n";
  os << "planar_ends " << (geo.planar_ends ? "true" : "false") << "\n";
  emit(o, out, os.str());
  return kExitOk;
}

void print_verify_text(const VerifyReport& r, std::ostream& out) {
  auto mark = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  out << "identities (" << r.identities.points << " points)\n";
  for (const auto& c : r.identities.checks) {
    out << "  " << mark(c.passed) << " " << c.name << " " << fmt(c.value) << " <= " << fmt(c.tolerance)
        << "\n";
  }
  for (const FdAudit* a : {&r.conformality, &r.curvature}) {
    out << a->name << " (" << a->points << " points)\n";
    for (const auto& m : a->metrics) {
      out << "  " << mark(m.passed) << " " << m.name << " " << fmt(m.gap_coarse) << " ratio "
          << fmt(m.ratio) << "\n";
    }
  }
  out << "calapso\n";
  for (const auto& c : r.calapso) {
    out << "  " << mark(c.passed) << " " << c.field << " order " << fmt(c.order);
    if (!c.error.empty()) out << " (" << c.error << ")";
    out << "\n";
  }
  if (r.probe) {
    out << "length probe\n  " << mark(r.probe->passed) << " c_fit " << fmt(r.probe->c_fit)
        << " expected " << fmt(r.probe->c_expected) << "\n";
  } else if (!r.probe_error.empty()) {
    out << "length probe\n  FAIL " << r.probe_error << "\n";
  }
  if (r.bubbles) {
    out << "bubbles (informational)\n  ";
    if (r.bubbles->count) {
      out << "n_max " << r.bubbles->count->n_max << " n_min " << r.bubbles->count->n_min
          << " expected " << *r.bubbles->expected << "\n";
    } else {
      out << r.bubbles->error << "\n";
    }
  }
  out << (r.passed() ? "PASS" : "FAIL") << "\n";
}

int cmd_verify(const Options& o, std::ostream& out) {
  const MaskTolerances tol = tolerances(o);
  Family fam = resolve_family(o, ConstraintPolicy::Report);
  VerifyOptions vo = fam.preset ? verify_options(*fam.preset, tol) : VerifyOptions{};
  vo.tol = tol;
  vo.audit_window = window_or(o, vo.audit_window);
  if (!o.patch_window.empty()) {
    vo.patch_window = parse_patch(o.patch_window);
    vo.omega_patch.reset();
    vo.capital_omega_patch.reset();
  }
  fam.inputs["audit_window"] = to_json(vo.audit_window);
  fam.inputs["patch_window"] = to_json(vo.patch_window);
  add_common_inputs(fam.inputs, o, tol);

  const ProfilePair pair(fam.params);
  const VerifyReport report = run_verification(pair, vo);
  const Json doc{{"manifest", run_manifest(fam.inputs, fam.params, vo.patch_window, tol)},
                 {"report", to_json(report)}};
  if (!o.out.empty()) write_text_file(o.out, doc.dump(2) + "\n");
  if (o.json) {
    out << doc.dump(2) << "\n";
  } else {
    print_verify_text(report, out);
  }
  return report.passed() ? kExitOk : kExitVerification;
}

void add_family_options(CLI::App* sub, Options& o) {
  sub->add_option("--preset", o.preset, "Named family (see README)");
  sub->add_option("--b", o.b, "Ribaucour parameter b (decimal)");
  sub->add_option("--c", o.c, "Transformation parameter c != 0 (decimal)");
  sub->add_option("--coeffs", o.coeffs,
                  "A1=..,B1=.. | A1=..,a2=..,b2=.. | a1=..,b1=..,a2=..,b2=.. | singular[:+1|-1]");
  sub->add_option("--tol-domain", o.tol_domain, "Mask |f+g| below this")->capture_default_str();
  sub->add_option("--tol-sing", o.tol_sing, "Mask |M| below this")->capture_default_str();
  sub->add_flag("--json", o.json, "Machine-readable output");
}

void add_window_options(CLI::App* sub, Options& o) {
  sub->add_option("--u1", o.u1, "u1 range min:max");
  sub->add_option("--u2", o.u2, "u2 range min:max");
}

void add_output_option(CLI::App* sub, Options& o) { sub->add_option("--out", o.out, "Output file"); }

void add_grid_options(CLI::App* sub, Options& o) {
  add_window_options(sub, o);
  sub->add_option("--res", o.res, "Vertex counts N1xN2")->capture_default_str();
  sub->add_option("--threads", o.threads, "Sampling threads")->capture_default_str();
}

std::string error_kind(int code) {
  switch (code) {
    case kExitValidation: return "validation";
    case kExitVerification: return "verification";
    case kExitIo: return "io";
    default: return "error";
  }
}

bool wants_json(const std::vector<std::string>& args) {
  for (const auto& a : args) {
    if (a == "--json") return true;
  }
  return false;
}

}  // namespace

double parse_number(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (text.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ValidationError("not a number: '" + text + "'");
  }
  if (!std::isfinite(value)) throw ValidationError("non-finite value: '" + text + "'");
  return value;
}

ParamRect parse_window(const std::string& u1, const std::string& u2) {
  const auto [a, b] = parse_range(u1, "u1 range");
  const auto [c, d] = parse_range(u2, "u2 range");
  return {a, b, c, d};
}

std::pair<int, int> parse_resolution(const std::string& text) {
  const auto parts = split(text, 'x');
  if (parts.size() != 2) throw ValidationError("resolution must be N1xN2, got '" + text + "'");
  int dims[2];
  for (int k = 0; k < 2; ++k) {
    const auto& p = parts[k];
    const auto res = std::from_chars(p.data(), p.data() + p.size(), dims[k]);
    if (p.empty() || res.ec != std::errc() || res.ptr != p.data() + p.size()) {
      throw ValidationError("resolution must be N1xN2, got '" + text + "'");
    }
    if (dims[k] < 2) throw ValidationError("resolution needs at least 2 vertices per axis");
  }
  return {dims[0], dims[1]};
}

CoeffSpec parse_coeffs(const std::string& text) {
  if (text == "singular" || text.rfind("singular:", 0) == 0) {
    SingularCoeffs s;
    if (text.size() > 9) {
      const std::string eps = text.substr(9);
      if (eps == "+1" || eps == "1") {
        s.epsilon1 = 1;
      } else if (eps == "-1") {
        s.epsilon1 = -1;
      } else {
        throw ValidationError("singular epsilon must be +1 or -1");
      }
    }
    return s;
  }
  const auto parts = split(text, ',');
  if (text.find('=') == std::string::npos) {
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(parse_number(p));
    switch (v.size()) {
      case 2: return NormalizedCoeffs{v[0], v[1], 0.0, 0.0};
      case 3: return NormalizedCoeffs{v[0], 0.0, v[1], v[2]};
      case 4: return GeneralCoeffs{v[0], v[1], v[2], v[3]};
      default: throw ValidationError("--coeffs list must have 2, 3 or 4 values");
    }
  }
  std::map<std::string, double> kv;
  for (const auto& p : parts) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ValidationError("malformed coefficient '" + p + "'");
    const std::string key = p.substr(0, eq);
    if (key != "A1" && key != "B1" && key != "a1" && key != "b1" && key != "a2" && key != "b2") {
      throw ValidationError("unknown coefficient '" + key + "'");
    }
    if (!kv.emplace(key, parse_number(p.substr(eq + 1))).second) {
      throw ValidationError("duplicate coefficient '" + key + "'");
    }
  }
  auto get = [&](const char* k) { return kv.count(k) ? kv.at(k) : 0.0; };
  const bool normalized = kv.count("A1") || kv.count("B1");
  if (normalized) {
    if (kv.count("a1") || kv.count("b1")) {
      throw ValidationError("cannot mix A1/B1 with a1/b1");
    }
    return NormalizedCoeffs{get("A1"), get("B1"), get("a2"), get("b2")};
  }
  return GeneralCoeffs{get("a1"), get("b1"), get("a2"), get("b2")};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Ribaucour transforms of the cylinder: isothermic surfaces and Calapso fields",
               std::string(kToolName)};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto* family = app.add_subcommand("family", "Validate parameters and print the run manifest");
  add_family_options(family, o);
  add_window_options(family, o);
  add_output_option(family, o);

  auto* sample = app.add_subcommand("sample", "Sample the surface on a grid as CSV");
  add_family_options(sample, o);
  add_grid_options(sample, o);
  add_output_option(sample, o);

  auto* mesh = app.add_subcommand("mesh", "Write the sampled surface as an OBJ mesh");
  add_family_options(mesh, o);
  add_grid_options(mesh, o);
  add_output_option(mesh, o);
  mesh->add_flag("--normals", o.normals, "Also write vn records");

  auto* calapso = app.add_subcommand("calapso", "Calapso field export and residual convergence");
  add_family_options(calapso, o);
  add_window_options(calapso, o);
  add_output_option(calapso, o);
  calapso->add_option("--res", o.res, "Field CSV vertex counts N1xN2")->capture_default_str();
  calapso->add_option("--field", o.field, "omega or Omega")->capture_default_str();
  calapso->add_option("--patch", o.patch, "Residual patch u1min:u1max,u2min:u2max");
  calapso->add_option("--steps", o.steps, "Comma-separated decreasing steps")->capture_default_str();

  auto* singular = app.add_subcommand("singular", "List singular points in a window");
  add_family_options(singular, o);
  add_window_options(singular, o);
  add_output_option(singular, o);

  auto* classify = app.add_subcommand("classify", "Bubble/end classification");
  add_family_options(classify, o);
  add_output_option(classify, o);

  auto* verify = app.add_subcommand("verify", "Run the full audit; exit 2 on any failure");
  add_family_options(verify, o);
  add_window_options(verify, o);
  add_output_option(verify, o);
  verify->add_option("--patch-window", o.patch_window,
                     "Scan window for residual patches u1min:u1max,u2min:u2max");

  const bool json_errors = wants_json(args);
  auto fail = [&](int code, const std::string& message) {
    if (json_errors) {
      err << Json{{"error", {{"kind", error_kind(code)}, {"message", message}}}, {"exit_code", code}}
                 .dump()
          << "\n";
    } else {
      err << "error: " << message << "\n";
    }
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolName << " " << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(kExitValidation, e.what());
  }

  const std::vector<std::pair<CLI::App*, int (*)(const Options&, std::ostream&)>> commands = {
      {family, cmd_family},   {sample, cmd_sample},     {mesh, cmd_mesh},    {calapso, cmd_calapso},
      {singular, cmd_singular}, {classify, cmd_classify}, {verify, cmd_verify}};
  try {
    for (const auto& [sub, run] : commands) {
      if (sub->parsed()) {
        o.command = sub->get_name();
        return run(o, out);
      }
    }
    return fail(kExitValidation, "no subcommand given");
  } catch (const IoError& e) {
    return fail(kExitIo, e.what());
  } catch (const ValidationError& e) {
    return fail(kExitValidation, e.what());
  } catch (const DomainError& e) {
    return fail(kExitValidation, e.what());
  } catch (const std::exception& e) {
    return fail(kExitVerification, e.what());
  }
}

}  // namespace isothermic
