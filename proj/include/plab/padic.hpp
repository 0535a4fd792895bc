#pragma once
// Finite-precision arithmetic in Q_p, characters of Q_p^x and Q_p, Gauss sums.

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace plab {

using i64 = std::int64_t;
using cplx = std::complex<double>;

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- integer helpers -------------------------------------------------------
i64 ipow(i64 base, int e);  // throws DomainError on overflow
int val_p(i64 n, i64 p);    // n != 0
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 a, i64 e, i64 m);
i64 inv_mod(i64 a, i64 m);  // throws DomainError if not invertible
i64 posmod(i64 a, i64 m);
bool is_prime(i64 n);

struct Rational {
    i64 num = 0;
    i64 den = 1;
    Rational() = default;
    Rational(i64 n, i64 d = 1);
    double value() const { return double(num) / double(den); }
    Rational frac() const;  // representative in [0,1)
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const { return Rational(-num, den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    std::string str() const;
};

// e^{2 pi i k/n}
cplx root_of_unity(i64 k, i64 n);
// cached table of all n-th roots of unity (n <= 2^22)
std::shared_ptr<const std::vector<cplx>> roots_table(i64 n);
cplx turn(const Rational& r);

// -- PAdicNumber -----------------------------------------------------------
class PAdicNumber {
public:
    static constexpr int kZeroValuation = 1 << 28;

    static PAdicNumber zero(i64 p, int M);
    static PAdicNumber from_int(i64 n, i64 p, int M);
    static PAdicNumber from_rational(i64 num, i64 den, i64 p, int M);
    // p^v * u with u a unit residue (reduced mod p^M)
    static PAdicNumber from_parts(i64 p, int v, i64 u, int M);

    i64 prime() const { return p_; }
    bool is_zero() const { return zero_; }
    int valuation() const { return v_; }
    i64 unit() const { return u_; }
    int precision() const { return M_; }
    i64 modulus() const { return mod_; }
    // unit residue mod p^k; requires k <= M
    i64 unit_mod(int k) const;
    // |x|_p
    double abs() const;

    PAdicNumber operator*(const PAdicNumber& o) const;
    PAdicNumber operator/(const PAdicNumber& o) const;
    PAdicNumber operator+(const PAdicNumber& o) const;
    PAdicNumber operator-(const PAdicNumber& o) const;
    PAdicNumber operator-() const;
    PAdicNumber inverse() const;
    PAdicNumber with_precision(int M) const;  // only lowers
    bool operator==(const PAdicNumber& o) const;
    bool operator!=(const PAdicNumber& o) const { return !(*this == o); }
    std::string str() const;

private:
    i64 p_ = 2;
    bool zero_ = true;
    int v_ = kZeroValuation;
    i64 u_ = 0;
    int M_ = 1;
    i64 mod_ = 2;
};

// x - r in Z_p with r in [0,1) of denominator p^{max(0,-v)}
Rational frac_part(const PAdicNumber& x);
cplx psi_eval(const PAdicNumber& x);

// -- unit-group structure ---------------------------------------------------
// discrete logarithms mod p^c; for p odd relative to the smallest primitive
// root mod p^2, for p = 2 as (sign, exponent of 5)
struct DlogTable {
    i64 p;
    int c;
    i64 mod;
    i64 order;                 // #(Z/p^c)^x
    std::vector<std::int32_t> a;  // p odd: exponent; p = 2: exponent of 5
    std::vector<std::int8_t> s;   // p = 2: 1 if u = -5^a
};
std::shared_ptr<const DlogTable> dlog_table(i64 p, int c);
i64 smallest_primitive_root_p2(i64 p);

class UnitCharacter {
public:
    UnitCharacter() = default;
    static UnitCharacter trivial(i64 p);
    // p odd: omega(g) = e^{2 pi i r}, r * (p-1)p^{c-1} integral
    static UnitCharacter odd(i64 p, int c, Rational r);
    // p = 2: omega(-1) = e^{2 pi i r_minus1}, omega(5) = e^{2 pi i r_five}
    static UnitCharacter two(int c, Rational r_minus1, Rational r_five);
    // a character of exact conductor c: p odd, angle k/#(Z/p^c)^x on the generator;
    // p = 2, omega(-1) = -1 at c = 2 and omega(5) = e^{2 pi i k/2^{c-2}} for c >= 3
    static UnitCharacter primitive(i64 p, int c, i64 k = 1);
    // every character of exact conductor c (deterministic order)
    static std::vector<UnitCharacter> all_of_conductor(i64 p, int c);

    i64 prime() const { return p_; }
    int conductor() const { return c_; }
    Rational angle() const { return r_; }
    Rational angle_minus1() const { return r1_; }
    Rational angle_five() const { return r5_; }

    // omega(u) as a turn fraction; u a unit residue mod p^k, k >= c
    Rational phase(i64 u) const;
    // omega(u) = e^{2 pi i phase_num(u)/phase_den()}
    i64 phase_den() const { return den_; }
    i64 phase_num(i64 u) const;
    cplx eval(i64 u) const { return turn(phase(u)); }
    cplx eval(const PAdicNumber& u) const;
    bool is_trivial() const { return c_ == 0; }

    UnitCharacter operator*(const UnitCharacter& o) const;
    UnitCharacter inverse() const;
    UnitCharacter pow(i64 k) const;
    bool operator==(const UnitCharacter& o) const;
    std::string json() const;

private:
    void normalize();
    i64 p_ = 2;
    int c_ = 0;
    Rational r_{0};
    Rational r1_{0};
    Rational r5_{0};
    i64 den_ = 1;
    std::shared_ptr<const DlogTable> tab_;
};

class MultCharacter {
public:
    MultCharacter() = default;
    MultCharacter(UnitCharacter omega, Rational angle_at_p);
    static MultCharacter trivial(i64 p) { return {UnitCharacter::trivial(p), Rational(0)}; }

    const UnitCharacter& unit_part() const { return omega_; }
    Rational angle_at_p() const { return ap_; }
    cplx value_at_p() const { return turn(ap_); }
    i64 prime() const { return omega_.prime(); }
    int conductor() const { return omega_.conductor(); }

    // chi(p^v u) as a turn fraction
    Rational phase(int v, i64 u) const;
    cplx eval(int v, i64 u) const { return turn(phase(v, u)); }
    cplx eval(const PAdicNumber& x) const;

    MultCharacter operator*(const MultCharacter& o) const;
    MultCharacter inverse() const;
    bool operator==(const MultCharacter& o) const;

private:
    UnitCharacter omega_;
    Rational ap_{0};
};

struct AdditiveCharacter {
    i64 p;
    cplx operator()(const PAdicNumber& x) const { return psi_eval(x); }
};

struct OpenUnitSubgroup {
    i64 p;
    int m;  // 0: all units, m >= 1: 1 + p^m Z_p
    i64 index() const;
    bool contains(i64 u, int k) const;  // u unit residue mod p^k, k >= m
    // residues mod p^d of the elements of the subgroup
    std::vector<i64> representatives(int d) const;
};

cplx char_eval(const MultCharacter& chi, const PAdicNumber& x);
int conductor_product_bound(const MultCharacter& a, const MultCharacter& b);

// H(t, omega, U1) = E_{u in U1} omega(ut) psi(ut). The average runs over
// U1 mod p^e with e = max(c, -v, m, 1), the depth at which the integrand is
// constant on cosets; extra_depth enumerates deeper (stability checks).
cplx gauss_sum(const PAdicNumber& t, const UnitCharacter& omega,
               const OpenUnitSubgroup& U1, int extra_depth = 0);
// same, from valuation and unit residue mod p^max(c,-v,1)
cplx gauss_sum_raw(int v, i64 unit, const UnitCharacter& omega,
                   const OpenUnitSubgroup& U1, int extra_depth = 0);
int gauss_depth(int v, const UnitCharacter& omega, const OpenUnitSubgroup& U1);

}  // namespace plab
