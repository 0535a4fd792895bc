#include <algorithm>
#include <numeric>

#include "plab/graph.hpp"

namespace plab {

namespace {

IdealLattice ideal(const std::vector<IVec4>& gens, i64 norm) { return {hnf_mod(gens, norm), norm}; }

// X + Y for lattices of norms a | b or b | a inside a common ideal; norm given by the caller
IdealLattice sum(const IdealLattice& X, const IdealLattice& Y, i64 norm) {
    std::vector<IVec4> g = X.basis();
    for (const auto& r : Y.L.rows) g.push_back(r);
    return ideal(g, norm);
}

IdealLattice scaled(const IdealLattice& X, i64 s) {
    std::vector<IVec4> g;
    for (const auto& r : X.L.rows) g.push_back(scale(r, s));
    return ideal(g, checked(__int128(X.norm) * s * s));
}

}  // namespace

IdealLattice PathSpace::chain_member(int L, int id, int k) const {
    const auto& P = level(L).paths[size_t(id)];
    const IdealLattice& I0 = G_.classes[size_t(P.start)].ideal;
    if (k >= L) return P.end;
    return sum(P.end, scaled(I0, ipow(G_.p, k)), checked(__int128(I0.norm) * ipow(G_.p, k)));
}

IdealLattice PathSpace::canonical(int start, const IdealLattice& X, int* fixers) const {
    const auto& C = G_.classes[size_t(start)];
    IdealLattice best = X;
    bool first = true;
    int fix = 0;
    for (const auto& beta : C.unit_betas) {
        const IdealLattice u = left_transport(R_, beta, C.ideal.norm, X);
        if (u.L == X.L) ++fix;
        if (first || u.L < best.L) best = u;
        first = false;
    }
    if (fixers) *fixers = fix;
    return best;
}

int PathSpace::locate(int L, int start, const IdealLattice& X) const {
    const IdealLattice c = canonical(start, X, nullptr);
    const auto& idx = level(L).index;
    auto it = idx.find({start, c.L.rows});
    if (it == idx.end()) throw ClassificationFailure("path class not found at level " + std::to_string(L));
    return it->second;
}

std::vector<IdealLattice> PathSpace::forward_ends(int L, int id) const {
    const auto& P = level(L).paths[size_t(id)];
    auto nb = neighbors(R_, P.end, G_.p);
    if (L == 0) return nb;
    // exclude the backtrack p I_{L-1}
    const IdealLattice back = scaled(chain_member(L, id, L - 1), G_.p);
    std::vector<IdealLattice> out;
    for (auto& J : nb)
        if (!(J.L == back.L)) out.push_back(std::move(J));
    if (i64(out.size()) != G_.p) throw DomainError("forward_ends: backtrack not among the neighbors");
    return out;
}

void PathSpace::add_level(size_t cap) {
    PathLevel next;
    next.L = int(levels_.size());
    if (levels_.empty()) {
        for (int i = 0; i < G_.h(); ++i) {
            PathClass P;
            P.start = i;
            P.end = G_.classes[size_t(i)].ideal;
            P.stab = G_.classes[size_t(i)].units / 2;
            P.vertices = {i};
            next.index[{i, P.end.L.rows}] = i;
            next.paths.push_back(std::move(P));
        }
        levels_.push_back(std::move(next));
        return;
    }
    const PathLevel& prev = levels_.back();
    const int L = next.L;
    for (size_t y = 0; y < prev.paths.size(); ++y) {
        const int start = prev.paths[y].start;
        for (const auto& X : forward_ends(L - 1, int(y))) {
            int fix = 0;
            IdealLattice c = canonical(start, X, &fix);
            auto key = std::make_pair(start, c.L.rows);
            if (next.index.count(key)) continue;
            if (next.paths.size() >= cap)
                throw SizeLimit("path space exceeds the cap of " + std::to_string(cap) + " classes");
            PathClass P;
            P.start = start;
            P.end = std::move(c);
            P.stab = fix / 2;
            next.index[key] = int(next.paths.size());
            next.drop_last.push_back(int(y));
            next.paths.push_back(std::move(P));
        }
    }
    levels_.push_back(std::move(next));
    PathLevel& cur = levels_.back();
    // drop_first: I_1 = X + p I_0 is a neighbor of I_0; carry the rest to its class
    cur.drop_first.resize(cur.paths.size());
    for (size_t x = 0; x < cur.paths.size(); ++x) {
        const auto& P = cur.paths[x];
        const IdealLattice I1 = chain_member(L, int(x), 1);
        const auto& nb = G_.neighbor_lattices[size_t(P.start)];
        size_t s = 0;
        while (s < nb.size() && !(nb[s].L == I1.L)) ++s;
        if (s == nb.size()) throw ClassificationFailure("drop_first: first step is not a stored neighbor");
        const Transport& t = G_.neighbor_transport[size_t(P.start)][s];
        cur.drop_first[x] = locate(L - 1, t.target, left_transport(R_, t.g, t.d, P.end));
    }
    for (size_t x = 0; x < cur.paths.size(); ++x) {
        auto& P = cur.paths[x];
        P.vertices = {P.start};
        const auto& tail = levels_[size_t(L - 1)].paths[size_t(cur.drop_first[x])].vertices;
        P.vertices.insert(P.vertices.end(), tail.begin(), tail.end());
    }
}

PathSpace PathSpace::build(const MaximalOrder& R, const ClassGraph& G, int m, int mp, size_t cap) {
    if (mp < m) throw DomainError("build_path_space: need m <= m'");
    PathSpace Y(R, G);
    Y.m_ = m;
    Y.mp_ = mp;
    for (int L = 0; L <= mp - m; ++L) Y.add_level(cap);
    return Y;
}

std::vector<Q> PathSpace::weights(int L) const {
    std::vector<Q> w;
    for (const auto& P : level(L).paths) w.push_back(Q(1, P.stab));
    return w;
}

std::vector<double> PathSpace::weights_double(int L) const {
    std::vector<double> w;
    for (const auto& P : level(L).paths) w.push_back(1.0 / P.stab);
    return w;
}

Q PathSpace::total_weight(int L) const {
    Q s = 0;
    for (const auto& w : weights(L)) s += w;
    return s;
}

std::vector<int> PathSpace::projection(int L, int k_first, int k_last) const {
    if (k_first < 0 || k_last < 0 || k_first + k_last > L)
        throw DomainError("projection: cannot drop more edges than the path has");
    std::vector<int> map(level(L).paths.size());
    for (size_t x = 0; x < map.size(); ++x) {
        int id = int(x), l = L;
        for (int k = 0; k < k_last; ++k) id = level(l--).drop_last[size_t(id)];
        for (int k = 0; k < k_first; ++k) id = level(l--).drop_first[size_t(id)];
        map[x] = id;
    }
    return map;
}

std::vector<IdealLattice> sublattices_of_norm(const MaximalOrder& R, const IdealLattice& I, i64 n) {
    std::vector<IdealLattice> cur{I};
    i64 m = n;
    for (i64 q = 2; m > 1; ++q) {
        if (m % q) continue;
        int k = 0;
        while (m % q == 0) {
            m /= q;
            ++k;
        }
        // every J of norm q^k nr(I) is an index-q sublattice of one of norm q^{k-1} nr(I)
        std::vector<IdealLattice> next;
        for (const auto& A : cur) {
            std::map<IMat4, IdealLattice> layer{{A.L.rows, A}};
            for (int j = 0; j < k; ++j) {
                std::map<IMat4, IdealLattice> deeper;
                for (const auto& [key, B] : layer)
                    for (auto& J : neighbors(R, B, q)) deeper.emplace(J.L.rows, std::move(J));
                layer = std::move(deeper);
            }
            for (auto& [key, J] : layer) next.push_back(std::move(J));
        }
        cur = std::move(next);
    }
    return cur;
}

IntMatrix hecke_on_paths(const PathSpace& Y, int L, i64 n) {
    const auto& G = Y.graph();
    const auto& R = Y.order();
    if (n < 1 || std::gcd(n, G.p * R.discriminant()) != 1)
        throw DomainError("hecke_on_paths: n must be coprime to pD");
    const auto& lev = Y.level(L);
    const size_t sz = lev.paths.size();
    // Hecke images of every class representative, with their transports
    std::vector<std::vector<std::pair<IdealLattice, Transport>>> nb(size_t(G.h()));
    for (int i = 0; i < G.h(); ++i)
        for (auto& J : sublattices_of_norm(R, G.classes[size_t(i)].ideal, n)) {
            Transport t;
            if (classify(R, G.classes, J, t) < 0)
                throw ClassificationFailure("hecke_on_paths: Hecke image in no known class");
            nb[size_t(i)].push_back({std::move(J), t});
        }
    const i64 pL = ipow(G.p, L);
    IntMatrix T(sz, std::vector<i64>(sz, 0));
    for (size_t x = 0; x < sz; ++x) {
        const auto& P = lev.paths[x];
        for (const auto& [J, t] : nb[size_t(P.start)]) {
            // J away from p, X at p
            const IdealLattice E = sum(scaled(J, pL), scaled(P.end, n), checked(__int128(P.end.norm) * n));
            ++T[x][size_t(Y.locate(L, t.target, left_transport(R, t.g, t.d, E)))];
        }
    }
    return T;
}

ShiftPair shift_operators(const PathSpace& Y, int L) {
    const auto& G = Y.graph();
    const auto& R = Y.order();
    const auto& lev = Y.level(L);
    const size_t n = lev.paths.size();
    const i64 p = G.p;
    ShiftPair out{IntMatrix(n, std::vector<i64>(n, 0)), IntMatrix(n, std::vector<i64>(n, 0))};
    for (size_t x = 0; x < n; ++x) {
        const auto& P = lev.paths[x];
        const auto& nb = G.neighbor_lattices[size_t(P.start)];
        // back extensions: J ranges over the neighbors of I_0 other than I_1
        const IdealLattice I1 = L > 0 ? Y.chain_member(L, int(x), 1) : IdealLattice{};
        const IdealLattice tail = L > 0 ? scaled(Y.chain_member(L, int(x), L - 1), p) : IdealLattice{};
        for (size_t s = 0; s < nb.size(); ++s) {
            if (L > 0 && nb[s].L == I1.L) continue;
            const Transport& t = G.neighbor_transport[size_t(P.start)][s];
            const IdealLattice end = L > 0 ? left_transport(R, t.g, t.d, tail) : G.classes[size_t(t.target)].ideal;
            ++out.shift[x][size_t(Y.locate(L, t.target, end))];
        }
        // forward extensions, then drop the first edge
        for (const auto& X : Y.forward_ends(L, int(x))) {
            if (L == 0) {
                size_t s = 0;
                while (!(nb[s].L == X.L)) ++s;
                ++out.forward[x][size_t(G.neighbor_transport[size_t(P.start)][s].target)];
                continue;
            }
            size_t s = 0;
            while (s < nb.size() && !(nb[s].L == I1.L)) ++s;
            const Transport& t = G.neighbor_transport[size_t(P.start)][s];
            ++out.forward[x][size_t(Y.locate(L, t.target, left_transport(R, t.g, t.d, X)))];
        }
    }
    return out;
}

IntMatrix pullback_matrix(const std::vector<int>& proj, size_t target_size) {
    IntMatrix M(proj.size(), std::vector<i64>(target_size, 0));
    for (size_t x = 0; x < proj.size(); ++x) M[x][size_t(proj[x])] = 1;
    return M;
}

}  // namespace plab
