#pragma once

#include <optional>
#include <string>

namespace ophom {

// Command-line job: dims / homology / verify / act / export.  A seed fully
// determines all sampling, so identical specs produce byte-identical reports.
struct JobSpec {
    std::string command;
    std::string target;          // Ger | M | Mcirc | Gra | vKGra | TwGra
    size_t arity = 2;
    unsigned trunc = 4;
    size_t samples = 100;
    uint64_t seed = 1;
    std::string check;           // for verify
    std::string graph_path;      // for act
    std::string inputs_path;     // for act
    std::string output_path;     // optional; stdout otherwise
};

struct JobResult {
    int exit_code = 0;           // 0 pass, 1 mathematical failure, 2 usage
    std::string report_json;
};

JobResult run_job(const JobSpec& spec);

// Content-addressed table cache under OPHOM_CACHE_DIR (no caching when the
// variable is unset).
std::optional<std::string> cache_lookup(const std::string& key);
void cache_store(const std::string& key, const std::string& value);

}  // namespace ophom
