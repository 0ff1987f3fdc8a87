// One named checker per verified result, each producing a structured
// pass/fail/skip record with witnesses and counts.

#ifndef BBV_THEOREMS_HPP
#define BBV_THEOREMS_HPP

#include <json.hpp>

#include "bbv/varieties.hpp"

namespace bbv {

using json = nlohmann::ordered_json;

struct Mode {
    bool exhaustive = false;
    u32 samples = 200;
    u64 seed = 0;
};

enum class Status { pass, fail, skip };

std::string status_name(Status s);

struct CheckRecord {
    std::string theorem_id;
    u32 q = 0;
    Status status = Status::skip;
    std::string reason;  // skip reason or failure summary
    json counts = json::object();
    json witnesses = json::object();
    double elapsed_ms = 0.0;
};

using CheckFn = CheckRecord (*)(const Frame&, const Mode&);

// Registered checkers in canonical order.
const std::vector<std::pair<std::string, CheckFn>>& check_registry();
bool is_registered(const std::string& id);
std::vector<std::string> registered_ids();

// Throws std::invalid_argument for an unknown id.
CheckRecord run_check(const std::string& id, const Frame& fr, const Mode& mode);

}  // namespace bbv

#endif
