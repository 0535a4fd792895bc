#pragma once
// Experiment harness: run configuration, content-hashed cache, atomic report files,
// SVG/DOT writers and one runner per CLI subcommand.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plab/graph.hpp"

namespace plab::harness {

// bad or inadmissible configuration (exit code 2)
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kOk = 0, kConfig = 2, kComputation = 3, kAcceptance = 4 };

// Schema (every key optional):
//   discriminants [int], prime int, hecke [int], N [lo, hi], target_n int,
//   eps [float] (each p^-e, default p^-2 and p^-4), n_max int (0: derived from eps),
//   local {primes [int], N [lo, hi], angles int, tol float, gauss_primes [int], c_max int},
//   amplifier {L [int], q_max int}, seed int, cache_dir string, out string, format string
struct RunConfig {
    std::vector<i64> discs{11};
    i64 prime = 2;
    std::vector<i64> hecke{3, 5, 7};
    int N_lo = 1, N_hi = 4;
    int target_n = 0;
    std::vector<double> eps;  // empty: {p^-2, p^-4}
    i64 n_max = 0;
    std::vector<i64> local_primes{2, 3, 5};
    int local_N_lo = 2, local_N_hi = 6;
    int angles = 5;
    double tol = 1e-8;
    std::vector<i64> gauss_primes{2, 3, 5, 7};
    int c_max = 3;
    std::vector<int> amp_L{10, 20};
    i64 q_max = 50;
    uint64_t seed = 1;
    std::string cache_dir;  // empty: $PLAB_CACHE_DIR, else .cache
    std::string out = "out";
    std::string format = "json";

    // experiment inputs only; out and cache_dir are locations and stay out of the hash
    nlohmann::json to_json() const;
    // unknown keys and wrong types are ConfigError
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::filesystem::path& file);
    // sha256 of the canonical (sorted, compact) JSON
    std::string hash() const;
    // Hecke primes coprime to pD, eps exact powers of p, N range under the path cap
    void validate_global(bool hecke_used = true) const;
    int eps_exponent(double e) const;
    std::vector<double> eps_list() const;
    std::filesystem::path cache_root() const;
};

std::string sha256_hex(std::string_view data);
// write to a temporary sibling, then rename over the target
void atomic_write(const std::filesystem::path& file, std::string_view content);
// shortest round-trip decimal for doubles in CSV cells
std::string fmt(double x);

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};
// line plot with axes, ticks, legend; log10 y axis when log_y
std::string svg_plot(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<PlotSeries>& series,
                     bool log_y);
std::string graph_dot(const nlohmann::json& graph);
// vertices on a circle, one segment per edge pair
std::string graph_svg(const nlohmann::json& graph);

struct Artifact {
    std::string name;
    std::string content;
};

// status: pass, fail, expected-failure, trend-pass, trend-fail
struct Report {
    std::string id;
    std::string config_hash;
    nlohmann::json inputs, outputs;
    std::string status = "pass";
    std::vector<Artifact> artifacts;
    double wall_time = 0;  // reported on stderr, kept out of the files
    bool ok() const { return status != "fail" && status != "trend-fail"; }
    std::string json() const;
    // report_<id>.json plus the artifacts, each written atomically
    void write(const std::filesystem::path& dir) const;
};

// class graph JSON for (D, p) through the cache; recomputed when the content hash is off
struct CachedGraph {
    nlohmann::json graph;
    bool from_cache = false;
};
CachedGraph cached_graph(const RunConfig& cfg, i64 D, i64 p);

Report run_graph(const RunConfig& cfg);
Report run_paths(const RunConfig& cfg);
Report run_spectrum(const RunConfig& cfg);
Report run_newvectors(const RunConfig& cfg);
Report run_que(const RunConfig& cfg);
Report run_returns(const RunConfig& cfg);
// sub in {gauss, rs-I, rs-II, rs-III, mv-epic}; anything else is ConfigError
Report run_local(const RunConfig& cfg, const std::string& sub);
Report run_amplifier(const RunConfig& cfg);

// E_{u in U1} omega(ut) psi(ut) by enumerating U1 mod p^d with a discrete-log table
cplx gauss_oracle(const UnitCharacter& omega, int v, i64 unit, int m, int d);

}  // namespace plab::harness
