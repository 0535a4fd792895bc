#include <numeric>

#include <json.hpp>

#include "plab/quaternion.hpp"

namespace plab {

Q eichler_mass(i64 D) {
    Q m(1, 24);
    i64 n = D;
    for (i64 q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            m *= Q(q - 1);
            n /= q;
            if (n % q == 0) throw DomainError("eichler_mass: D must be squarefree");
        }
    if (n > 1) m *= Q(n - 1);
    return m;
}

Q ClassGraph::mass() const {
    Q m = 0;
    for (const auto& c : classes) m += Q(1, c.units);
    return m;
}

std::string ClassGraph::json() const {
    nlohmann::json v = nlohmann::json::array(), e = nlohmann::json::array();
    for (size_t i = 0; i < classes.size(); ++i)
        v.push_back({{"id", i},
                     {"weight", classes[i].weight()},
                     {"units", classes[i].units},
                     {"norm", classes[i].ideal.norm},
                     {"basis", classes[i].ideal.L.rows},
                     {"theta_prefix", classes[i].theta}});
    for (const auto& x : edges)
        e.push_back({{"id", x.id},
                     {"from", x.from},
                     {"to", x.to},
                     {"reverse_id", x.reverse_id},
                     {"mult", x.mult}});
    return nlohmann::json{{"version", 1},
                          {"disc", disc},
                          {"prime", p},
                          {"edge_pairing", "orbits of directed neighbors under the unit group; "
                                           "reverse of I > J is J > pI"},
                          {"vertices", v},
                          {"edges", e}}
        .dump();
}

int classify(const MaximalOrder& R, const std::vector<RightIdealClass>& classes,
             const IdealLattice& J, Transport& t) {
    const RightIdealClass probe = make_class(R, J);
    for (size_t k = 0; k < classes.size(); ++k) {
        if (classes[k].theta != probe.theta || classes[k].units != probe.units) continue;
        if (auto tr = find_equivalence(R, J, classes[k], int(k))) {
            t = *tr;
            return int(k);
        }
    }
    return -1;
}

ClassGraph ideal_class_graph(const MaximalOrder& R, i64 p) {
    if (!is_prime(p)) throw DomainError("ideal_class_graph: p must be prime");
    if (R.discriminant() % p == 0)
        throw DomainError("ideal_class_graph: p divides the discriminant");
    ClassGraph G{R.discriminant(), p, {}, {}, {}, {}, {}};
    IdealLattice O{hnf_mod({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 1), 1};
    G.classes.push_back(make_class(R, O));
    for (size_t i = 0; i < G.classes.size(); ++i) {
        auto nb = neighbors(R, G.classes[i].ideal, p);
        std::vector<Transport> tr;
        for (const auto& J : nb) {
            Transport t;
            if (classify(R, G.classes, J, t) < 0) {
                G.classes.push_back(make_class(R, J));
                t = *find_equivalence(R, J, G.classes.back(), int(G.classes.size()) - 1);
            }
            tr.push_back(t);
        }
        G.neighbor_lattices.push_back(std::move(nb));
        G.neighbor_transport.push_back(std::move(tr));
    }
    const int h = G.h();
    // edges: orbits of the p + 1 neighbors under O_L(I_i)^x
    G.neighbor_edge.assign(size_t(h), std::vector<int>(size_t(p + 1), -1));
    for (int i = 0; i < h; ++i) {
        const auto& C = G.classes[size_t(i)];
        const auto& nb = G.neighbor_lattices[size_t(i)];
        for (size_t s = 0; s < nb.size(); ++s) {
            if (G.neighbor_edge[size_t(i)][s] >= 0) continue;
            const int id = int(G.edges.size());
            int mult = 0;
            for (const auto& beta : C.unit_betas) {
                const IdealLattice u = left_transport(R, beta, C.ideal.norm, nb[s]);
                for (size_t t = 0; t < nb.size(); ++t)
                    if (nb[t].L == u.L && G.neighbor_edge[size_t(i)][t] < 0) {
                        G.neighbor_edge[size_t(i)][t] = id;
                        ++mult;
                    }
            }
            G.edges.push_back({id, i, G.neighbor_transport[size_t(i)][s].target, -1, mult});
        }
    }
    // reverse of (I_i > N) is (N > p I_i), carried back to the representative of N's class
    for (auto& e : G.edges) {
        size_t s = 0;
        while (G.neighbor_edge[size_t(e.from)][s] != e.id) ++s;
        const Transport& t = G.neighbor_transport[size_t(e.from)][s];
        IdealLattice pI = G.classes[size_t(e.from)].ideal;
        for (auto& r : pI.L.rows) r = scale(r, p);
        pI.L = hnf_mod(pI.basis(), pI.norm * p * p);
        pI.norm *= p * p;
        const IdealLattice back = left_transport(R, t.g, t.d, pI);
        const auto& nbj = G.neighbor_lattices[size_t(t.target)];
        for (size_t u = 0; u < nbj.size(); ++u)
            if (nbj[u].L == back.L) e.reverse_id = G.neighbor_edge[size_t(t.target)][u];
        if (e.reverse_id < 0) throw DomainError("ideal_class_graph: reverse edge not found");
    }
    // |Stab(e)| = units_from / mult must agree on e and its reverse
    for (const auto& e : G.edges) {
        const auto& r = G.edges[size_t(e.reverse_id)];
        if (r.reverse_id != e.id || r.from != e.to || r.to != e.from)
            throw InconsistentWeights("ideal_class_graph: reversal is not an involution");
        if (i64(G.classes[size_t(e.from)].units) * r.mult !=
            i64(G.classes[size_t(e.to)].units) * e.mult)
            throw InconsistentWeights("ideal_class_graph: edge stabilizers disagree");
    }
    for (int i = 0; i < h; ++i) {
        int deg = 0;
        for (const auto& e : G.edges)
            if (e.from == i) deg += e.mult;
        if (deg != p + 1) throw InconsistentWeights("ideal_class_graph: weighted degree != p + 1");
    }
    return G;
}

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
    const size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    IntMatrix c(n, std::vector<i64>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t)
            for (size_t j = 0; j < m; ++j) c[i][j] = checked(__int128(c[i][j]) + __int128(a[i][t]) * b[t][j]);
    return c;
}

std::vector<IntMatrix> brandt_matrices(const MaximalOrder& R,
                                       const std::vector<RightIdealClass>& classes, int nmax) {
    const size_t h = classes.size();
    std::vector<IntMatrix> B(size_t(nmax) + 1, IntMatrix(h, std::vector<i64>(h, 0)));
    for (size_t i = 0; i < h; ++i)
        for (size_t j = i; j < h; ++j) {
            const IdealLattice P = product_conj(R, classes[i].ideal, classes[j].ideal);
            const auto th = theta_counts(normalized_gram(R, P), 2 * i64(nmax));
            for (int n = 1; n <= nmax; ++n) {
                const i64 r = th[size_t(2 * n)];
                if (r % classes[j].units || r % classes[i].units)
                    throw DomainError("brandt_matrices: representation count not divisible");
                B[size_t(n)][i][j] = r / classes[j].units;
                B[size_t(n)][j][i] = r / classes[i].units;
            }
        }
    return B;
}

IntMatrix brandt_matrix(const MaximalOrder& R, const std::vector<RightIdealClass>& classes,
                        int n) {
    if (n < 1) throw DomainError("brandt_matrix: n must be positive");
    return brandt_matrices(R, classes, n)[size_t(n)];
}

}  // namespace plab
