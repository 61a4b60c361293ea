#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "spindex/index.hpp"
#include "spindex/mathieu.hpp"
#include "spindex/pendulum.hpp"

namespace spindex::io {

/// Shortest round-trippable decimal form (17 significant digits).
std::string g17(double x);

/// Write-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

const char* stability_name(Stability s);

nlohmann::json index_report_json(const IndexReport& report);

/// Scan table, header omega2,eps,tr1,tr2,i1,i2,stability,degenerate.
/// Missing indices print as NA; floats carry 17 significant digits.
std::string scan_csv(const std::vector<mathieu::ScanCell>& cells);
nlohmann::json scan_json(const std::vector<mathieu::ScanCell>& cells);

/// Curve table, header n,branch,multiplier,eps,omega2.
std::string curves_csv(const std::vector<mathieu::TransitionCurve>& curves);

/// Region table of a crossection, one row per region.
std::string crossection_csv(const mathieu::Crossection& cs);
nlohmann::json crossection_json(const mathieu::Crossection& cs);

nlohmann::json pendulum_report_json(const pendulum::PendulumReport& report);

/// Problem document {beta, T, forcing: {cos: [...], sin: [...]}}.
pendulum::PendulumProblem pendulum_problem_from_json(const nlohmann::json& j,
                                                     int modes = 64);

}  // namespace spindex::io
