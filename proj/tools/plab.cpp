// plab: command-line front end for the experiments.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "plab/harness.hpp"

using namespace plab;
using namespace plab::harness;

namespace {

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

int fail(int code, const std::string& kind, const std::string& msg) {
    std::fprintf(stderr, "error code=%d kind=%s reason=%s\n", code, kind.c_str(), one_line(msg).c_str());
    return code;
}

void parse_range(const std::string& s, int& lo, int& hi) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            lo = 1;
            hi = std::stoi(s);
        } else {
            lo = std::stoi(s.substr(0, dots));
            hi = std::stoi(s.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw ConfigError("-N expects K or LO..HI, got " + s);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic microlocal lifts and Brandt graph experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_file, n_range, cache_dir, out, format;
    std::vector<i64> discs, hecke;
    std::vector<double> eps;
    i64 prime = 0, n_max = -1;
    int target_n = -1;
    uint64_t seed = 0;
    app.add_option("--config", config_file, "JSON run configuration (flags override it)");
    app.add_option("--disc", discs, "quaternion discriminants (primes)");
    app.add_option("--prime", prime, "graph prime p");
    app.add_option("--hecke", hecke, "Hecke primes");
    app.add_option("-N", n_range, "N range: K (meaning 1..K) or LO..HI");
    app.add_option("--target-n", target_n, "push masses to Y_{-n..n}");
    app.add_option("--eps", eps, "ball radii, each a power p^-e");
    app.add_option("--n-max", n_max, "largest n for returns (default from eps)");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--cache-dir", cache_dir, "cache root (default $PLAB_CACHE_DIR or .cache)");
    app.add_option("--out", out, "output directory");
    app.add_option("--format", format, "csv|json|dot|svg")->check(CLI::IsMember({"csv", "json", "dot", "svg"}));

    std::string which;
    for (const char* name : {"graph", "paths", "spectrum", "newvectors", "que", "returns", "amplifier"})
        app.add_subcommand(name, std::string("run the ") + name + " experiment")->callback([&, name] { which = name; });
    auto* local = app.add_subcommand("local", "local experiments");
    local->require_subcommand(1);
    for (const char* name : {"gauss", "rs-I", "rs-II", "rs-III", "mv-epic"})
        local->add_subcommand(name, std::string("local ") + name)->callback([&, name] { which = std::string("local:") + name; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kConfig, "usage", e.what());
    }

    try {
        RunConfig cfg = config_file.empty() ? RunConfig{} : RunConfig::load(config_file);
        if (!discs.empty()) cfg.discs = discs;
        if (prime) cfg.prime = prime;
        if (!hecke.empty()) cfg.hecke = hecke;
        if (!n_range.empty()) parse_range(n_range, cfg.N_lo, cfg.N_hi);
        if (target_n >= 0) cfg.target_n = target_n;
        if (!eps.empty()) cfg.eps = eps;
        if (n_max >= 0) cfg.n_max = n_max;
        if (app.count("--seed")) cfg.seed = seed;
        if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
        if (!out.empty()) cfg.out = out;
        if (!format.empty()) cfg.format = format;

        const auto t0 = std::chrono::steady_clock::now();
        Report r;
        if (which == "graph") r = run_graph(cfg);
        else if (which == "paths") r = run_paths(cfg);
        else if (which == "spectrum") r = run_spectrum(cfg);
        else if (which == "newvectors") r = run_newvectors(cfg);
        else if (which == "que") r = run_que(cfg);
        else if (which == "returns") r = run_returns(cfg);
        else if (which == "amplifier") r = run_amplifier(cfg);
        else r = run_local(cfg, which.substr(6));
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.write(cfg.out);
        std::printf("%s status=%s config=%s out=%s\n", r.id.c_str(), r.status.c_str(),
                    r.config_hash.substr(0, 16).c_str(), cfg.out.c_str());
        std::fprintf(stderr, "%s wall_time_s=%.3f\n", r.id.c_str(), r.wall_time);
        return r.ok() ? kOk : kAcceptance;
    } catch (const ConfigError& e) {
        return fail(kConfig, "config", e.what());
    } catch (const DomainError& e) {
        return fail(kConfig, "domain", e.what());
    } catch (const NoSplitting& e) {
        return fail(kConfig, "no-splitting", e.what());
    } catch (const std::exception& e) {
        return fail(kComputation, "computation", e.what());
    }
}
