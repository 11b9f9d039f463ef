#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "isothermic/calapso.hpp"
#include "isothermic/profile.hpp"
#include "isothermic/verify.hpp"

namespace isothermic {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "isothermic";
inline constexpr std::string_view kToolVersion = "1.0.0";

std::uint64_t fnv1a64(std::string_view data) noexcept;
std::string hex64(std::uint64_t value);

Json to_json(const ParamRect& rect);
Json to_json(ParamPoint p);
Json to_json(const MaskTolerances& tol);
Json to_json(const FamilyParams& params);
Json to_json(const RationalApprox& r);
Json to_json(const GeometryClass& geo);
Json to_json(const CheckResult& check);
Json to_json(const IdentityReport& report);
Json to_json(const AuditMetric& metric);
Json to_json(const FdAudit& audit);
Json to_json(const CalapsoCheck& check);
Json to_json(const LengthProbe& probe);
Json to_json(const BubbleReport& report);
Json to_json(const VerifyReport& report);

// Everything needed to reproduce a run: the parsed inputs, the validated
// family, derived constants and tolerances. `inputs` is hashed verbatim.
Json run_manifest(const Json& inputs, const FamilyParams& params, const ParamRect& lattice_window,
                  const MaskTolerances& tol);

}  // namespace isothermic
