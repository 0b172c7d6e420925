#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace heis {

/// One named verification: expected vs actual at a tolerance.
struct Check {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Absolute check helper.
Check make_check(std::string name, double expected, double actual, double tol);
/// Relative check helper: |actual - expected| <= tol * max(1, |expected|)
/// is too lax for large values, so the scale is |expected| when nonzero.
Check make_check_rel(std::string name, double expected, double actual,
                     double rtol);
/// One-sided check: actual >= bound - tol.
Check make_check_ge(std::string name, double bound, double actual, double tol);

/// Machine-readable command report; overall pass is the conjunction of the
/// individual checks.
struct Report {
    std::string command;
    std::map<std::string, nlohmann::json> inputs;
    std::map<std::string, double> results;
    std::vector<Check> checks;
    long long runtime_ms = 0;

    bool pass() const;
    nlohmann::json to_json() const;
    static Report from_json(const nlohmann::json& j);
    std::string dump(int indent = 2) const;
};

} // namespace heis
