#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace pst {

/// One CLI invocation. Identical configs (seed included) produce
/// byte-identical artifacts.
struct JobConfig {
    std::string command;
    nlohmann::ordered_json options = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string output_dir;  // empty writes no files, reports go to stdout
    std::string only;        // paper-suite row filter

    static JobConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

/// Exit codes: 0 success, 2 negative verdict (distinguishable from errors);
/// errors are thrown as pst::Error and mapped to 1 by the caller.
int run(const JobConfig& job);

}  // namespace pst
