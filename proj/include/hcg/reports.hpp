#pragma once

#include <string>

#include "json.hpp"

#include "hcg/barrier.hpp"
#include "hcg/radial.hpp"
#include "hcg/solver.hpp"
#include "hcg/verify.hpp"

// JSON / CSV serialization of run artifacts.  All numeric formatting is
// deterministic; anything time- or host-dependent goes into a separate
// metadata file so repeated runs with the same seed produce identical
// reports.

namespace hcg {

nlohmann::json continuation_report_json(const ContinuationReport& rep);
nlohmann::json diagnostics_json(const FieldDiagnostics& d);
nlohmann::json barrier_audit_json(const BarrierAuditReport& rep);
nlohmann::json verify_report_json(const VerifyReport& rep);
nlohmann::json radial_report_json(const RadialProfile& prof,
                                  const DomainShape& shape);

// Post-solve estimate audit: gradient bound, height floor, sphere
// inclusion / exclusion, extrapolated boundary angles against the
// two-sided envelope (with a discretization allowance of 10 h^2), and
// admissibility margin.  `pass` only aggregates applicable checks.
nlohmann::json solve_estimates_json(const GridDomain& dom,
                                    const ScalarField& field,
                                    const CurvatureFamily& fam, double sigma);

// Columns x, y, u, w, kappa1, kappa2, nu3; one row per node.
void write_field_csv(const std::string& path, const GridDomain& dom,
                     const ScalarField& field);

// Header line `# {json}` followed by r, u rows.
void write_radial_csv(const std::string& path, const RadialProfile& prof);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace hcg
