#include "heis/report.hpp"

#include <cmath>

namespace heis {

Check make_check(std::string name, double expected, double actual, double tol) {
    const bool ok = std::isfinite(actual) && std::abs(actual - expected) <= tol;
    return Check{std::move(name), expected, actual, tol, ok};
}

Check make_check_rel(std::string name, double expected, double actual,
                     double rtol) {
    const double scale = expected != 0.0 ? std::abs(expected) : 1.0;
    const bool ok =
        std::isfinite(actual) && std::abs(actual - expected) <= rtol * scale;
    return Check{std::move(name), expected, actual, rtol, ok};
}

Check make_check_ge(std::string name, double bound, double actual, double tol) {
    const bool ok = std::isfinite(actual) && actual >= bound - tol;
    return Check{std::move(name), bound, actual, tol, ok};
}

bool Report::pass() const {
    for (const Check& c : checks)
        if (!c.pass) return false;
    return true;
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["results"] = results;
    nlohmann::json arr = nlohmann::json::array();
    for (const Check& c : checks)
        arr.push_back({{"name", c.name},
                       {"expected", c.expected},
                       {"actual", c.actual},
                       {"tol", c.tol},
                       {"pass", c.pass}});
    j["checks"] = arr;
    j["runtime_ms"] = runtime_ms;
    j["pass"] = pass();
    return j;
}

Report Report::from_json(const nlohmann::json& j) {
    Report r;
    r.command = j.at("command").get<std::string>();
    for (const auto& [key, value] : j.at("inputs").items()) r.inputs[key] = value;
    for (const auto& [key, value] : j.at("results").items())
        r.results[key] = value.get<double>();
    for (const auto& c : j.at("checks"))
        r.checks.push_back(Check{c.at("name").get<std::string>(),
                                 c.at("expected").get<double>(),
                                 c.at("actual").get<double>(),
                                 c.at("tol").get<double>(),
                                 c.at("pass").get<bool>()});
    r.runtime_ms = j.at("runtime_ms").get<long long>();
    return r;
}

std::string Report::dump(int indent) const { return to_json().dump(indent); }

} // namespace heis
