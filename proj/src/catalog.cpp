#include "isothermic/catalog.hpp"

#include <cmath>
#include <numbers>

namespace isothermic {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<CatalogEntry> make_catalog() {
  const double sqrt5 = std::sqrt(5.0);
  const ParamRect unit_square{-1.0, 1.0, -1.0, 1.0};
  const ParamRect ring{-1.0, 1.0, 0.0, 2.0 * pi};
  const ParamRect strip{-1.0, 1.0, 0.5, 1.5};
  const ParamRect half_period{-2.0, 2.0, 0.0, pi};
  const ParamRect square2{-2.0, 2.0, -2.0, 2.0};

  return {
      {"pos-inside", "c = 3, b = 4 sqrt6: two bubbles inside the cylinder", 4.0 * std::sqrt(6.0), 3.0,
       NormalizedCoeffs{4.0, 1.0}, ring, half_period, ParamRect{-0.5, 0.5, 0.25, 1.25},
       ParamRect{-0.5, 0.5, 0.5, 1.5}, std::nullopt},
      {"pos-outside", "c = 3, b = -4 sqrt6: two bubbles outside the cylinder", -4.0 * std::sqrt(6.0),
       3.0, NormalizedCoeffs{4.0, 1.0}, ring, half_period, ParamRect{-0.5, 0.5, 2.0, 3.0},
       ParamRect{-0.5, 0.5, 1.75, 2.75}, std::nullopt},
      {"mid-nested", "c = -16/25: doubly periodic nested bubbles", 12.0 * std::sqrt(73.0) / 125.0,
       -16.0 / 25.0, NormalizedCoeffs{4.0, 1.0}, ParamRect{0.0, 2.0 * pi, 0.0, 2.0 * pi},
       ParamRect{0.0, 8.0, 0.0, 11.0}, ParamRect{1.5, 2.5, 4.0, 5.0}, ParamRect{5.5, 6.5, 5.0, 6.0},
       std::nullopt},
      {"low-outside", "c = -5, b = 4 sqrt5 / 3", 4.0 * sqrt5 / 3.0, -5.0,
       NormalizedCoeffs{1.0 / 9.0, 0.25}, strip, square2, ParamRect{0.25, 1.25, -2.0, -1.0},
       ParamRect{-1.25, -0.25, -2.0, -1.0}, std::nullopt},
      {"low-inside", "c = -5, b = -4 sqrt5 / 3", -4.0 * sqrt5 / 3.0, -5.0,
       NormalizedCoeffs{1.0 / 9.0, 0.25}, strip, square2, ParamRect{0.25, 1.25, -1.5, -0.5},
       ParamRect{-1.25, -0.25, -1.75, -0.75}, std::nullopt},
      {"negone", "c = -1, b = 2", 2.0, -1.0, NormalizedCoeffs{1.0, 0.0, 0.0, -0.75}, unit_square,
       ParamRect{-3.0, 3.0, -2.0, 2.0}, ParamRect{-0.5, 0.5, -0.75, 0.25},
       ParamRect{-0.5, 0.5, -0.75, 0.25}, std::nullopt},
      {"pos-planar", "c = 3 with planar ends", -1.0, 3.0, SingularCoeffs{1},
       ParamRect{0.5, 1.5, 0.0, 2.0 * pi}, half_period, ParamRect{-2.0, -1.0, 0.25, 1.25},
       ParamRect{-2.0, -1.0, 0.5, 1.5}, ProbeSetup{{0.0, pi / 4.0}, {0.0, -1.0}}},
      {"mid-planar", "c = -16/25 with planar ends", 1.0, -16.0 / 25.0, SingularCoeffs{1},
       unit_square, ParamRect{-8.0, 8.0, -11.0, 11.0}, ParamRect{1.5, 2.5, -8.25, -7.25},
       ParamRect{-2.5, -1.5, -8.25, -7.25}, ProbeSetup{{pi / 1.6, -pi / 1.2}, {1.0, 0.0}}},
      {"low-planar", "c = -5 with planar ends", 1.0, -5.0, SingularCoeffs{1}, strip, square2,
       ParamRect{0.25, 1.25, -2.0, -1.0}, ParamRect{-1.25, -0.25, -2.0, -1.0},
       ProbeSetup{{pi / (2.0 * sqrt5), 0.0}, {0.0, 1.0}}},
      {"cmc", "c = 3, b = 0: constant mean curvature -1/2", 0.0, 3.0, NormalizedCoeffs{4.0, 3.0},
       ring, half_period, std::nullopt, std::nullopt, std::nullopt},
      {"negone-planar", "c = -1 with planar ends", 1.0, -1.0, SingularCoeffs{1}, unit_square,
       ParamRect{-3.0, 3.0, -2.0, 2.0}, std::nullopt, std::nullopt,
       ProbeSetup{{pi / 2.0, 0.0}, {1.0, 0.0}}},
  };
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = make_catalog();
  return entries;
}

const CatalogEntry* find_preset(const std::string& key) {
  for (const auto& e : catalog()) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

FamilyParams build_family(const CatalogEntry& entry) {
  return build_family(entry.b, entry.c, entry.coeffs);
}

VerifyOptions verify_options(const CatalogEntry& entry, const MaskTolerances& tol) {
  VerifyOptions opt;
  opt.audit_window = entry.audit_window;
  opt.patch_window = entry.patch_window;
  opt.omega_patch = entry.omega_patch;
  opt.capital_omega_patch = entry.capital_omega_patch;
  opt.probe = entry.probe;
  opt.tol = tol;
  return opt;
}

}  // namespace isothermic
