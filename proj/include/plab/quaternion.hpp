#pragma once
// Definite quaternion algebras over Q, maximal orders, right ideal classes,
// the Brandt graph at p, Brandt matrices, the splitting at p and Hecke returns.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "plab/lattice.hpp"
#include "plab/locrep.hpp"

namespace plab {

using Q = boost::rational<i64>;

struct Quat {
    std::array<Q, 4> c{};  // coordinates on 1, i, j, k
    static Quat scalar(Q s) { Quat q; q.c[0] = s; return q; }
    Quat operator+(const Quat& o) const;
    Quat operator-(const Quat& o) const;
    Quat operator*(Q s) const;
    bool operator==(const Quat& o) const { return c == o.c; }
};

class QuaternionAlgebra {
public:
    QuaternionAlgebra(i64 a, i64 b);  // i^2 = a, j^2 = b, a, b < 0
    i64 a() const { return a_; }
    i64 b() const { return b_; }
    Quat mul(const Quat& x, const Quat& y) const;
    Quat conj(const Quat& x) const;
    Q nr(const Quat& x) const;
    Q trd(const Quat& x) const;
    std::vector<i64> ramified_primes() const;  // finite places, from Hilbert symbols
    i64 discriminant() const;

private:
    i64 a_, b_;
};

// Hilbert symbol (a, b)_p in {+1, -1}
int hilbert_symbol(i64 a, i64 b, i64 p);

struct InconsistentWeights : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoSplitting : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Elements are integer coordinate vectors on the order basis.
class MaximalOrder {
public:
    // built-in order for prime discriminant D
    static MaximalOrder for_prime(i64 D);
    // user basis; ring closure and det(trace Gram) = D^2 are verified
    static MaximalOrder from_basis(const QuaternionAlgebra& B, const std::array<Quat, 4>& basis);

    const QuaternionAlgebra& algebra() const { return B_; }
    const std::array<Quat, 4>& basis() const { return basis_; }
    i64 discriminant() const { return D_; }
    // trd(e_i conj(e_j)); nr(x) = x^T G x / 2
    const Gram4& trace_gram() const { return gram_; }

    IVec4 mul(const IVec4& x, const IVec4& y) const;
    IVec4 conj(const IVec4& x) const;
    i64 nr(const IVec4& x) const;
    i64 trd(const IVec4& x) const;
    IVec4 one() const { return one_; }
    Quat to_quat(const IVec4& x) const;
    std::optional<IVec4> from_quat(const Quat& q) const;  // nullopt when not in the order
    // matrix of y -> x y on coordinates (rows: images of the basis)
    IMat4 left_mult(const IVec4& x) const;
    IMat4 right_mult(const IVec4& x) const;
    const std::array<std::array<IVec4, 4>, 4>& structure_constants() const { return mult_; }

private:
    MaximalOrder(QuaternionAlgebra B, std::array<Quat, 4> basis);
    QuaternionAlgebra B_;
    std::array<Quat, 4> basis_;
    std::array<std::array<Q, 4>, 4> to_order_{};  // (1,i,j,k) coordinates -> order coordinates
    std::array<std::array<IVec4, 4>, 4> mult_{};
    IMat4 conj_{};
    Gram4 gram_{};
    IVec4 one_{};
    i64 D_ = 0;
};

// {alpha in R : nr(alpha) = n}
std::vector<IVec4> norm_enumerate(const MaximalOrder& R, i64 n);

// Lattices inside the order (coordinates on the order basis).
struct IdealLattice {
    Lattice4 L;
    i64 norm = 1;  // gcd of nr over the lattice
    std::vector<IVec4> basis() const { return {L.rows.begin(), L.rows.end()}; }
};
// Gram of nr(x) / norm with the factor 2: Q(x) = 2 nr(x) / norm
Gram4 normalized_gram(const MaximalOrder& R, const IdealLattice& I);
// the product lattice A * conj(B), of norm nr(A) nr(B)
IdealLattice product_conj(const MaximalOrder& R, const IdealLattice& A, const IdealLattice& B);
bool is_right_ideal(const MaximalOrder& R, const IdealLattice& I);
// the ell + 1 sublattices J with ell I <= J <= I, nr(J) = ell nr(I)
std::vector<IdealLattice> neighbors(const MaximalOrder& R, const IdealLattice& I, i64 ell);
// alpha * E / d (exact); throws when d does not divide
IdealLattice left_transport(const MaximalOrder& R, const IVec4& alpha, i64 d,
                            const IdealLattice& E);

// J = gamma I_target; gamma^{-1} X = g X / d
struct Transport {
    int target = -1;
    IVec4 g{};
    i64 d = 1;
};

struct RightIdealClass {
    IdealLattice ideal;
    std::array<i64, 12> theta{};  // #{x in I : nr(x) = k nr(I)}, k = 0..11
    int units = 2;                // #O_L(I)^x
    int weight() const { return units / 2; }
    // beta in I conj(I) with nr = nr(I)^2; u = beta / nr(I) runs over O_L(I)^x
    std::vector<IVec4> unit_betas;
};

// equivalence test: transport with J = gamma I (nullopt if inequivalent)
std::optional<Transport> find_equivalence(const MaximalOrder& R, const IdealLattice& J,
                                          const RightIdealClass& I, int index_of_I);
RightIdealClass make_class(const MaximalOrder& R, const IdealLattice& I);
// index of the class of J among classes (with its transport), or -1
int classify(const MaximalOrder& R, const std::vector<RightIdealClass>& classes,
             const IdealLattice& J, Transport& t);

struct GraphEdge {
    int id, from, to, reverse_id;
    int mult;  // orbit size of directed neighbors under O_L(I_from)^x
};

struct ClassGraph {
    i64 disc, p;
    std::vector<RightIdealClass> classes;
    // neighbors[i][s]: the s-th p-neighbor of the representative of class i
    std::vector<std::vector<IdealLattice>> neighbor_lattices;
    std::vector<std::vector<Transport>> neighbor_transport;
    std::vector<std::vector<int>> neighbor_edge;  // edge id of each neighbor
    std::vector<GraphEdge> edges;
    int h() const { return int(classes.size()); }
    Q mass() const;  // sum 1 / (2 w_i)
    std::string json() const;
};

ClassGraph ideal_class_graph(const MaximalOrder& R, i64 p);
// sum_i 1/|O_i^x| by the mass formula: prod_{q | D} (q - 1) / 24
Q eichler_mass(i64 D);

using IntMatrix = std::vector<std::vector<i64>>;
// B(n) for n = 0..nmax (index 0 unused); B(n)_{ij} = #{J <= I_i, nr(J) = n nr(I_i), J ~ I_j}
std::vector<IntMatrix> brandt_matrices(const MaximalOrder& R,
                                       const std::vector<RightIdealClass>& classes, int nmax);
IntMatrix brandt_matrix(const MaximalOrder& R, const std::vector<RightIdealClass>& classes, int n);
IntMatrix matmul(const IntMatrix& a, const IntMatrix& b);

// 2x2 matrices over Z / p^M, row-major
using Mat2 = std::array<i64, 4>;

struct SplittingEmbedding {
    i64 p;
    int M;
    i64 mod;
    std::array<Mat2, 4> images;  // iota(e_k)
    Mat2 apply(const IVec4& x) const;
    Mat2 mul(const Mat2& x, const Mat2& y) const;
    i64 det(const Mat2& x) const;
    i64 tr(const Mat2& x) const;
};
SplittingEmbedding split_embed(const MaximalOrder& R, i64 p, int M);

struct BallParams {
    i64 p;
    int c_depth = 0;  // C = 1 + p^c Z_p, or Z_p^x when 0
    int e = 1;        // epsilon = p^{-e}
    std::vector<GL2Element> omega;
    BallParams(i64 p, int c_depth, int e, std::vector<GL2Element> omega);
    double epsilon() const;
};

struct ReturnsResult {
    i64 n;
    i64 count;
    i64 bound;  // 6 prod (k + 1)
    i64 candidates;
};
// #(M_n cap z(m) x B(C, eps) x^{-1}); m = m_num / m_den coprime to p
ReturnsResult hecke_returns_count(const MaximalOrder& R, const SplittingEmbedding& iota,
                                  const GL2Element& x, const BallParams& ball, i64 n,
                                  i64 m_num = 1, i64 m_den = 1);
i64 returns_bound(i64 n);

}  // namespace plab
