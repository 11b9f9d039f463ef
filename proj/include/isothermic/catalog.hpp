#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isothermic/profile.hpp"
#include "isothermic/verify.hpp"

namespace isothermic {

// A named family with the audit windows and residual patches it is verified on.
struct CatalogEntry {
  std::string key;
  std::string description;
  double b;
  double c;
  CoeffSpec coeffs;
  ParamRect audit_window;
  ParamRect patch_window;  // scanned by select_patch
  std::optional<ParamRect> omega_patch;
  std::optional<ParamRect> capital_omega_patch;
  std::optional<ProbeSetup> probe;
};

const std::vector<CatalogEntry>& catalog();

// nullptr when the key is unknown.
const CatalogEntry* find_preset(const std::string& key);

FamilyParams build_family(const CatalogEntry& entry);

VerifyOptions verify_options(const CatalogEntry& entry, const MaskTolerances& tol = {});

}  // namespace isothermic
