#pragma once
// Rank-4 integer lattices: Hermite normal form, LLL on an integral Gram
// matrix, and Fincke-Pohst enumeration of short vectors.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "plab/padic.hpp"

namespace plab {

using IVec4 = std::array<i64, 4>;
using IMat4 = std::array<IVec4, 4>;

// Upper-triangular row HNF: pivot rows[c][c] > 0, 0 <= rows[r][c] < rows[c][c] for r < c.
struct Lattice4 {
    IMat4 rows{};
    i64 index() const;  // [Z^4 : L]
    bool contains(const IVec4& v) const;
    bool operator==(const Lattice4& o) const { return rows == o.rows; }
    bool operator<(const Lattice4& o) const { return rows < o.rows; }
    std::string key() const;
};

// HNF of the lattice spanned by gens together with M Z^4 (M > 0).
Lattice4 hnf_mod(const std::vector<IVec4>& gens, i64 M);
// HNF of a full-rank lattice; throws DomainError when gens do not span rank 4
Lattice4 hnf(const std::vector<IVec4>& gens);
Lattice4 lattice_sum(const Lattice4& a, const Lattice4& b);

IVec4 add(const IVec4& a, const IVec4& b);
IVec4 scale(const IVec4& a, i64 s);
i64 checked(__int128 v);  // throws DomainError outside i64

// Integral Gram matrix G of Q(x) = x^T G x on the lattice coordinates.
using Gram4 = IMat4;

// LLL-reduces G in place, returning the unimodular U with G_new = U G U^T
IMat4 lll_reduce(Gram4& G);

// Calls f(x, Q(x)) for every nonzero x in Z^4 with Q(x) <= bound (both signs).
void enumerate_short(const Gram4& G, i64 bound, const std::function<void(const IVec4&, i64)>& f);
// counts[k] = #{x : Q(x) = k} for 0 <= k <= bound (counts[0] = 1)
std::vector<i64> theta_counts(const Gram4& G, i64 bound);

IVec4 mat_vec_left(const IVec4& x, const IMat4& U);  // x^T U
i64 quad(const Gram4& G, const IVec4& x);

}  // namespace plab
