#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "vincl/certify.hpp"
#include "vincl/instances.hpp"
#include "vincl/resolvent.hpp"
#include "vincl/solver.hpp"

namespace vincl {

/// Version tag carried by every CSV trace (in the `schema` column).
inline constexpr const char* kTraceSchema = "vincl-trace/1";

// JSON forms. Non-finite numbers are written as null; key order is fixed, so
// equal inputs serialize to identical bytes.
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const CertificateBundle& b);
nlohmann::json to_json(const AuditReport& a);
nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const SolveTrace& t, bool include_rows = true);
nlohmann::json to_json(const std::vector<ExpectationOutcome>& outcomes);

/// Columns: n, step, ratio, residual, theta_n, error_norm, u1..ud, schema.
/// Undefined values (step at n = 0, ...) are empty cells.
std::string trace_to_csv(const SolveTrace& t);

}  // namespace vincl
