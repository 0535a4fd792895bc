#include "plab/harness.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace plab::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <class T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void take_range(const json& j, const char* key, int& lo, int& hi) {
    if (!j.contains(key)) return;
    const auto& r = j.at(key);
    if (r.is_number_integer()) {
        lo = hi = r.get<int>();
        return;
    }
    if (!r.is_array() || r.size() != 2) throw ConfigError(std::string(key) + " must be [lo, hi]");
    lo = r[0].get<int>();
    hi = r[1].get<int>();
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError("unknown config key " + where + k);
}

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

std::string num(double x, int prec = 2) {
    char b[64];
    std::snprintf(b, sizeof b, "%.*f", prec, x);
    return b;
}

}  // namespace

json RunConfig::to_json() const {
    return json{{"discriminants", discs},
                {"prime", prime},
                {"hecke", hecke},
                {"N", {N_lo, N_hi}},
                {"target_n", target_n},
                {"eps", eps},
                {"n_max", n_max},
                {"local",
                 {{"primes", local_primes},
                  {"N", {local_N_lo, local_N_hi}},
                  {"angles", angles},
                  {"tol", tol},
                  {"gauss_primes", gauss_primes},
                  {"c_max", c_max}}},
                {"amplifier", {{"L", amp_L}, {"q_max", q_max}}},
                {"seed", seed},
                {"format", format}};
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    try {
        only_keys(j,
                  {"discriminants", "prime", "hecke", "N", "target_n", "eps", "n_max", "local",
                   "amplifier", "seed", "cache_dir", "out", "format"},
                  "");
        take(j, "discriminants", c.discs);
        take(j, "prime", c.prime);
        take(j, "hecke", c.hecke);
        take_range(j, "N", c.N_lo, c.N_hi);
        take(j, "target_n", c.target_n);
        take(j, "eps", c.eps);
        take(j, "n_max", c.n_max);
        if (j.contains("local")) {
            const auto& l = j.at("local");
            only_keys(l, {"primes", "N", "angles", "tol", "gauss_primes", "c_max"}, "local.");
            take(l, "primes", c.local_primes);
            take_range(l, "N", c.local_N_lo, c.local_N_hi);
            take(l, "angles", c.angles);
            take(l, "tol", c.tol);
            take(l, "gauss_primes", c.gauss_primes);
            take(l, "c_max", c.c_max);
        }
        if (j.contains("amplifier")) {
            const auto& a = j.at("amplifier");
            only_keys(a, {"L", "q_max"}, "amplifier.");
            take(a, "L", c.amp_L);
            take(a, "q_max", c.q_max);
        }
        take(j, "seed", c.seed);
        take(j, "cache_dir", c.cache_dir);
        take(j, "out", c.out);
        take(j, "format", c.format);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (c.format != "csv" && c.format != "json" && c.format != "dot" && c.format != "svg")
        throw ConfigError("format must be csv, json, dot or svg");
    return c;
}

RunConfig RunConfig::load(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
}

std::string RunConfig::hash() const { return sha256_hex(to_json().dump()); }

int RunConfig::eps_exponent(double e) const {
    if (!(e > 0 && e < 1)) throw ConfigError("eps must lie in (0, 1)");
    const int k = int(std::lround(-std::log(e) / std::log(double(prime))));
    if (k < 1 || std::abs(std::pow(double(prime), -k) - e) > 1e-12 * e)
        throw ConfigError("eps must be a power p^-e of the prime");
    return k;
}

void RunConfig::validate_global(bool hecke_used) const {
    if (!is_prime(prime)) throw ConfigError("prime " + std::to_string(prime) + " is not prime");
    if (discs.empty()) throw ConfigError("no discriminants");
    if (hecke_used && hecke.empty()) throw ConfigError("no Hecke primes");
    for (i64 D : discs) {
        if (!is_prime(D)) throw ConfigError("discriminant " + std::to_string(D) + " is not prime");
        if (D % prime == 0) throw ConfigError("p divides D: p=" + std::to_string(prime));
        for (i64 l : hecke_used ? hecke : std::vector<i64>{})
            if (!is_prime(l) || l == prime || D % l == 0)
                throw ConfigError("Hecke prime " + std::to_string(l) + " not admissible (ell | pD)");
        // |Y| <= (class number)(p + 1)p^{L-1} with class number at most (D - 1)/12 + 2
        const double h = double(D - 1) / 12.0 + 2.0;
        const int L = 2 * N_hi;
        if (L > 0 && h * double(prime + 1) * std::pow(double(prime), L - 1) > double(kPathCap))
            throw ConfigError("N range exceeds the path-space cap");
    }
    if (N_lo < 0 || N_hi < N_lo) throw ConfigError("N range must satisfy 0 <= lo <= hi");
    if (target_n < 0 || target_n > N_lo) throw ConfigError("target n must lie in [0, N_lo]");
}

std::vector<double> RunConfig::eps_list() const {
    if (!eps.empty()) return eps;
    return {std::pow(double(prime), -2), std::pow(double(prime), -4)};
}

fs::path RunConfig::cache_root() const {
    if (!cache_dir.empty()) return cache_dir;
    if (const char* env = std::getenv("PLAB_CACHE_DIR"); env && *env) return env;
    return ".cache";
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

void atomic_write(const fs::path& file, std::string_view content) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        if (!o) throw std::runtime_error("cannot write " + tmp.string());
        o.write(content.data(), std::streamsize(content.size()));
        if (!o) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, file);
}

std::string fmt(double x) {
    char b[64];
    auto r = std::to_chars(b, b + sizeof b, x);
    return std::string(b, r.ptr);
}

std::string svg_plot(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<PlotSeries>& series,
                     bool log_y) {
    const double W = 640, H = 400, l = 70, r = 20, t = 40, b = 50;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, ty(y));
            y1 = std::max(y1, ty(y));
        }
    if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 1, x1 += 1;
    if (log_y) {
        y0 = std::floor(y0);
        y1 = std::ceil(y1);
    }
    if (y1 - y0 < 1e-12) y0 -= 1, y1 += 1;
    auto px = [&](double x) { return l + (x - x0) / (x1 - x0) * (W - l - r); };
    auto py = [&](double y) { return H - b - (y - y0) / (y1 - y0) * (H - t - b); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << esc(title) << "</text>\n";
    o << "<line x1=\"" << l << "\" y1=\"" << H - b << "\" x2=\"" << W - r << "\" y2=\"" << H - b
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << l << "\" y1=\"" << t << "\" x2=\"" << l << "\" y2=\"" << H - b
      << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double x = x0 + (x1 - x0) * k / 4;
        o << "<line x1=\"" << num(px(x)) << "\" y1=\"" << H - b << "\" x2=\"" << num(px(x))
          << "\" y2=\"" << H - b + 5 << "\" stroke=\"black\"/>";
        o << "<text x=\"" << num(px(x)) << "\" y=\"" << H - b + 18
          << "\" text-anchor=\"middle\">" << num(x, 2) << "</text>\n";
    }
    const int ny = log_y ? int(std::lround(y1 - y0)) : 4;
    for (int k = 0; k <= ny; ++k) {
        const double y = y0 + (y1 - y0) * k / ny;
        const std::string lab = log_y ? "1e" + std::to_string(int(std::lround(y))) : num(y, 3);
        o << "<line x1=\"" << l - 5 << "\" y1=\"" << num(py(y)) << "\" x2=\"" << l << "\" y2=\""
          << num(py(y)) << "\" stroke=\"black\"/>";
        o << "<text x=\"" << l - 8 << "\" y=\"" << num(py(y) + 4)
          << "\" text-anchor=\"end\">" << lab << "</text>\n";
    }
    o << "<text x=\"" << (l + W - r) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
      << esc(xlabel) << "</text>\n";
    o << "<text x=\"16\" y=\"" << (t + H - b) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (t + H - b) / 2 << ")\">" << esc(ylabel) << (log_y ? " (log)" : "") << "</text>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (size_t s = 0; s < series.size(); ++s) {
        const char* c = colors[s % 4];
        o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
        for (size_t k = 0; k < series[s].points.size(); ++k) {
            auto [x, y] = series[s].points[k];
            o << (k ? " " : "") << num(px(x)) << "," << num(py(ty(y)));
        }
        o << "\"/>\n";
        for (auto [x, y] : series[s].points)
            o << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(ty(y))) << "\" r=\"3\" fill=\""
              << c << "\"/>\n";
        o << "<text x=\"" << W - r - 150 << "\" y=\"" << t + 16 * (s + 1) << "\" fill=\"" << c
          << "\">" << esc(series[s].label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string graph_dot(const json& g) {
    std::ostringstream o;
    o << "graph \"D" << g.at("disc").get<i64>() << "_p" << g.at("prime").get<i64>() << "\" {\n";
    for (const auto& v : g.at("vertices"))
        o << "  v" << v.at("id").get<int>() << " [label=\"" << v.at("id").get<int>()
          << " w=" << v.at("weight").get<int>() << "\"];\n";
    for (const auto& e : g.at("edges")) {
        const int id = e.at("id").get<int>(), rev = e.at("reverse_id").get<int>();
        if (rev < id) continue;
        o << "  v" << e.at("from").get<int>() << " -- v" << e.at("to").get<int>()
          << " [label=\"" << e.at("mult").get<int>() << "\"];\n";
    }
    o << "}\n";
    return o.str();
}

std::string graph_svg(const json& g) {
    const double W = 480, c = 240, R = 180;
    const auto& vs = g.at("vertices");
    const size_t n = vs.size();
    auto pos = [&](int i) {
        const double a = 2 * std::numbers::pi * i / double(std::max<size_t>(n, 1));
        return std::pair<double, double>{c + R * std::cos(a), c + R * std::sin(a)};
    };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << W
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& e : g.at("edges")) {
        const int id = e.at("id").get<int>(), rev = e.at("reverse_id").get<int>();
        if (rev < id) continue;
        auto [x0, y0] = pos(e.at("from").get<int>());
        auto [x1, y1] = pos(e.at("to").get<int>());
        if (x0 == x1 && y0 == y1)
            o << "<circle cx=\"" << num(x0 + 12) << "\" cy=\"" << num(y0) << "\" r=\"12\" fill=\"none\" stroke=\"gray\"/>\n";
        else
            o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
              << "\" y2=\"" << num(y1) << "\" stroke=\"gray\"/>\n";
    }
    for (size_t i = 0; i < n; ++i) {
        auto [x, y] = pos(int(i));
        o << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"10\" fill=\"#1f77b4\"/>";
        o << "<text x=\"" << num(x) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"middle\" fill=\"white\">"
          << i << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string Report::json() const {
    nlohmann::json arts = nlohmann::json::array();
    for (const auto& a : artifacts) arts.push_back({{"name", a.name}, {"sha256", sha256_hex(a.content)}});
    return nlohmann::json{{"id", id},
                          {"config_hash", config_hash},
                          {"inputs", inputs},
                          {"outputs", outputs},
                          {"status", status},
                          {"artifacts", arts}}
               .dump(2) +
           "\n";
}

void Report::write(const fs::path& dir) const {
    for (const auto& a : artifacts) atomic_write(dir / a.name, a.content);
    atomic_write(dir / ("report_" + id + ".json"), json());
}

CachedGraph cached_graph(const RunConfig& cfg, i64 D, i64 p) {
    const fs::path dir = cfg.cache_root() / ("graph_D" + std::to_string(D) + "_p" + std::to_string(p));
    const fs::path body = dir / "graph.json", sum = dir / "graph.sha256";
    const std::string key = sha256_hex(nlohmann::json{{"disc", D}, {"prime", p}, {"version", 1}}.dump());
    if (fs::exists(body) && fs::exists(sum)) {
        std::ifstream b(body, std::ios::binary), s(sum);
        std::string content((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        std::string stored_key, stored_hash;
        s >> stored_key >> stored_hash;
        if (stored_key == key && stored_hash == sha256_hex(content)) {
            try {
                return {nlohmann::json::parse(content), true};
            } catch (const nlohmann::json::parse_error&) {
            }
        }
    }
    const auto R = MaximalOrder::for_prime(D);
    const std::string content = ideal_class_graph(R, p).json();
    atomic_write(body, content);
    atomic_write(sum, key + " " + sha256_hex(content) + "\n");
    return {nlohmann::json::parse(content), false};
}

}  // namespace plab::harness
