#include "plab/padic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "plab/kernels.hpp"

namespace plab {

// -- integers ---------------------------------------------------------------

i64 ipow(i64 base, int e) {
    if (e < 0) throw DomainError("ipow: negative exponent");
    __int128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= base;
        if (r > (__int128(1) << 62) || r < -(__int128(1) << 62))
            throw DomainError("ipow: overflow");
    }
    return static_cast<i64>(r);
}

int val_p(i64 n, i64 p) {
    if (n == 0) throw DomainError("val_p(0)");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

i64 posmod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>((static_cast<__int128>(posmod(a, m)) * posmod(b, m)) % m);
}

i64 powmod(i64 a, i64 e, i64 m) {
    i64 r = 1 % m, b = posmod(a, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = posmod(a, m);
    while (a1 != 0) {
        i64 q = g / a1;
        std::tie(g, a1) = std::make_tuple(a1, g - q * a1);
        std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
    }
    if (g != 1) throw DomainError("inv_mod: not invertible");
    return posmod(x, m);
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// -- Rational ---------------------------------------------------------------

Rational::Rational(i64 n, i64 d) {
    if (d == 0) throw DomainError("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i64 g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

Rational Rational::frac() const { return Rational(posmod(num, den), den); }

Rational Rational::operator+(const Rational& o) const {
    i64 g = std::gcd(den, o.den);
    return Rational(num * (o.den / g) + o.num * (den / g), den / g * o.den);
}
Rational Rational::operator-(const Rational& o) const { return *this + (-o); }
Rational Rational::operator*(const Rational& o) const {
    i64 g1 = std::gcd(num < 0 ? -num : num, o.den), g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational((num / g1) * (o.num / g2), (den / g2) * (o.den / g1));
}
bool Rational::operator<(const Rational& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}
std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

cplx root_of_unity(i64 k, i64 n) {
    k = posmod(k, n);
    if (k == 0) return {1.0, 0.0};
    if (2 * k == n) return {-1.0, 0.0};
    if (4 * k == n) return {0.0, 1.0};
    if (4 * k == 3 * n) return {0.0, -1.0};
    double a = 2.0 * std::numbers::pi * double(k) / double(n);
    return {std::cos(a), std::sin(a)};
}

cplx turn(const Rational& r) { return root_of_unity(r.num, r.den); }

std::shared_ptr<const std::vector<cplx>> roots_table(i64 n) {
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<const std::vector<cplx>>> cache;
    if (n <= 0 || n > (1 << 22)) throw DomainError("roots_table: bad order");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<std::vector<cplx>>(n);
    for (i64 k = 0; k < n; ++k) (*t)[k] = root_of_unity(k, n);
    cache.emplace(n, t);
    return t;
}

// -- PAdicNumber ------------------------------------------------------------

PAdicNumber PAdicNumber::zero(i64 p, int M) {
    PAdicNumber z;
    z.p_ = p;
    z.M_ = M;
    z.mod_ = ipow(p, M);
    return z;
}

PAdicNumber PAdicNumber::from_parts(i64 p, int v, i64 u, int M) {
    if (M < 1) throw DomainError("precision must be >= 1");
    PAdicNumber x;
    x.p_ = p;
    x.M_ = M;
    x.mod_ = ipow(p, M);
    x.u_ = posmod(u, x.mod_);
    if (x.u_ % p == 0) throw DomainError("from_parts: unit divisible by p");
    x.v_ = v;
    x.zero_ = false;
    return x;
}

PAdicNumber PAdicNumber::from_int(i64 n, i64 p, int M) { return from_rational(n, 1, p, M); }

PAdicNumber PAdicNumber::from_rational(i64 num, i64 den, i64 p, int M) {
    if (den == 0) throw DomainError("from_rational: zero denominator");
    if (num == 0) return zero(p, M);
    int a = val_p(num, p), b = val_p(den, p);
    i64 n = num, d = den;
    for (int i = 0; i < a; ++i) n /= p;
    for (int i = 0; i < b; ++i) d /= p;
    i64 mod = ipow(p, M);
    return from_parts(p, a - b, mulmod(posmod(n, mod), inv_mod(posmod(d, mod), mod), mod), M);
}

i64 PAdicNumber::unit_mod(int k) const {
    if (zero_) throw DomainError("unit_mod of zero");
    if (k > M_) throw PrecisionError("unit_mod: need " + std::to_string(k) + " digits, have " +
                                     std::to_string(M_));
    return u_ % ipow(p_, k);
}

double PAdicNumber::abs() const { return zero_ ? 0.0 : std::pow(double(p_), -double(v_)); }

PAdicNumber PAdicNumber::operator*(const PAdicNumber& o) const {
    if (p_ != o.p_) throw DomainError("prime mismatch");
    int M = std::min(M_, o.M_);
    if (zero_ || o.zero_) return zero(p_, M);
    i64 mod = ipow(p_, M);
    return from_parts(p_, v_ + o.v_, mulmod(u_, o.u_, mod), M);
}

PAdicNumber PAdicNumber::inverse() const {
    if (zero_) throw DomainError("inverse of zero");
    return from_parts(p_, -v_, inv_mod(u_, mod_), M_);
}

PAdicNumber PAdicNumber::operator/(const PAdicNumber& o) const { return *this * o.inverse(); }

PAdicNumber PAdicNumber::operator-() const {
    if (zero_) return *this;
    return from_parts(p_, v_, mod_ - u_, M_);
}

PAdicNumber PAdicNumber::operator+(const PAdicNumber& o) const {
    if (p_ != o.p_) throw DomainError("prime mismatch");
    if (zero_) return o;
    if (o.zero_) return *this;
    const PAdicNumber& x = v_ <= o.v_ ? *this : o;
    const PAdicNumber& y = v_ <= o.v_ ? o : *this;
    int shift = y.v_ - x.v_;
    int Mr = std::min(x.M_, shift + y.M_);
    i64 mod = ipow(p_, Mr);
    i64 t = x.u_ % mod;
    if (shift < Mr) t = posmod(t + mulmod(ipow(p_, shift), y.u_, mod), mod);
    if (t == 0)
        throw PrecisionError("addition cancels all " + std::to_string(Mr) + " known digits");
    int k = val_p(t, p_);
    i64 u = t;
    for (int i = 0; i < k; ++i) u /= p_;
    return from_parts(p_, x.v_ + k, u, Mr - k);
}

PAdicNumber PAdicNumber::operator-(const PAdicNumber& o) const { return *this + (-o); }

PAdicNumber PAdicNumber::with_precision(int M) const {
    if (M > M_) throw PrecisionError("with_precision cannot invent digits");
    if (zero_) return zero(p_, M);
    return from_parts(p_, v_, u_, M);
}

bool PAdicNumber::operator==(const PAdicNumber& o) const {
    if (p_ != o.p_) return false;
    if (zero_ || o.zero_) return zero_ == o.zero_;
    if (v_ != o.v_) return false;
    i64 mod = ipow(p_, std::min(M_, o.M_));
    return u_ % mod == o.u_ % mod;
}

std::string PAdicNumber::str() const {
    std::ostringstream os;
    if (zero_)
        os << "0 (p=" << p_ << ")";
    else
        os << p_ << "^" << v_ << "*" << u_ << " + O(p^" << (v_ + M_) << ")";
    return os.str();
}

Rational frac_part(const PAdicNumber& x) {
    if (x.is_zero() || x.valuation() >= 0) return Rational(0);
    int k = -x.valuation();
    if (k > x.precision())
        throw PrecisionError("frac_part: need " + std::to_string(k) + " digits, have " +
                             std::to_string(x.precision()));
    return Rational(x.unit_mod(k), ipow(x.prime(), k));
}

cplx psi_eval(const PAdicNumber& x) { return turn(frac_part(x)); }

// -- unit groups ------------------------------------------------------------

i64 smallest_primitive_root_p2(i64 p) {
    i64 m = p * p, order = p * (p - 1);
    std::vector<i64> qs;
    i64 n = order;
    for (i64 q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            qs.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) qs.push_back(n);
    for (i64 g = 2; g < m; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (i64 q : qs)
            if (powmod(g, order / q, m) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw DomainError("no primitive root");
}

std::shared_ptr<const DlogTable> dlog_table(i64 p, int c) {
    static std::mutex mu;
    static std::map<std::pair<i64, int>, std::shared_ptr<const DlogTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, c);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<DlogTable>();
    t->p = p;
    t->c = c;
    t->mod = ipow(p, c);
    if (t->mod > 4'000'000) throw DomainError("dlog table too large");
    t->a.assign(t->mod, -1);
    if (c == 0) {
        t->order = 1;
        t->a[0] = 0;
    } else if (p != 2) {
        t->order = (p - 1) * ipow(p, c - 1);
        i64 g = smallest_primitive_root_p2(p), x = 1;
        for (i64 k = 0; k < t->order; ++k) {
            t->a[x] = static_cast<std::int32_t>(k);
            x = mulmod(x, g, t->mod);
        }
    } else {
        t->order = ipow(2, c - 1);
        t->s.assign(t->mod, 0);
        i64 n5 = c >= 2 ? ipow(2, c - 2) : 1, x = 1 % t->mod;
        for (i64 k = 0; k < n5; ++k) {
            i64 y = posmod(-x, t->mod);
            t->a[x] = static_cast<std::int32_t>(k);
            if (y != x) {
                t->a[y] = static_cast<std::int32_t>(k);
                t->s[y] = 1;
            }
            x = mulmod(x, 5, t->mod);
        }
    }
    cache.emplace(key, t);
    return t;
}

namespace {
int conductor_odd(i64 p, const Rational& r) {
    if (r.den == 1) return 0;
    if ((p - 1) % r.den == 0) return 1;
    return val_p(r.den, p) + 1;
}
int conductor_two(const Rational& r1, const Rational& r5) {
    if (r5.den > 1) return val_p(r5.den, 2) + 2;
    if (r1.den > 1) return 2;
    return 0;
}
}  // namespace

void UnitCharacter::normalize() {
    r_ = r_.frac();
    r1_ = r1_.frac();
    r5_ = r5_.frac();
    c_ = p_ == 2 ? conductor_two(r1_, r5_) : conductor_odd(p_, r_);
    den_ = p_ == 2 ? std::lcm(r1_.den, r5_.den) : r_.den;
    tab_ = dlog_table(p_, c_);
}

UnitCharacter UnitCharacter::trivial(i64 p) {
    UnitCharacter w;
    w.p_ = p;
    w.normalize();
    return w;
}

UnitCharacter UnitCharacter::odd(i64 p, int c, Rational r) {
    if (p == 2 || !is_prime(p)) throw DomainError("UnitCharacter::odd needs an odd prime");
    i64 order = c == 0 ? 1 : (p - 1) * ipow(p, c - 1);
    if ((r * Rational(order)).den != 1)
        throw DomainError("angle " + r.str() + " is not a character mod p^" + std::to_string(c));
    UnitCharacter w;
    w.p_ = p;
    w.r_ = r;
    w.normalize();
    if (w.c_ != c)
        throw DomainError("non-minimal conductor: requested " + std::to_string(c) + ", actual " +
                          std::to_string(w.c_));
    return w;
}

UnitCharacter UnitCharacter::two(int c, Rational r_minus1, Rational r_five) {
    if ((r_minus1 * Rational(2)).den != 1) throw DomainError("omega(-1) must be +-1");
    i64 n5 = c >= 2 ? ipow(2, c - 2) : 1;
    if ((r_five * Rational(n5)).den != 1) throw DomainError("omega(5) angle too fine for level");
    UnitCharacter w;
    w.p_ = 2;
    w.r1_ = r_minus1;
    w.r5_ = r_five;
    w.normalize();
    if (w.c_ != c)
        throw DomainError("non-minimal conductor: requested " + std::to_string(c) + ", actual " +
                          std::to_string(w.c_));
    return w;
}

UnitCharacter UnitCharacter::primitive(i64 p, int c, i64 k) {
    if (c == 0) return trivial(p);
    if (p != 2) return odd(p, c, Rational(k, (p - 1) * ipow(p, c - 1)).frac());
    if (c == 1) throw DomainError("no character of conductor 1 at p = 2");
    if (c == 2) return two(2, Rational(1, 2), Rational(0));
    return two(c, Rational(0), Rational(k, ipow(2, c - 2)).frac());
}

std::vector<UnitCharacter> UnitCharacter::all_of_conductor(i64 p, int c) {
    std::vector<UnitCharacter> out;
    if (p != 2) {
        i64 order = c == 0 ? 1 : (p - 1) * ipow(p, c - 1);
        for (i64 s = 0; s < order; ++s) {
            Rational r(s, order);
            if (conductor_odd(p, r) == c) out.push_back(odd(p, c, r));
        }
    } else {
        i64 n5 = c >= 2 ? ipow(2, c - 2) : 1;
        for (int s1 = 0; s1 < 2; ++s1)
            for (i64 s5 = 0; s5 < n5; ++s5) {
                Rational r1(s1, 2), r5(s5, n5);
                if (conductor_two(r1, r5) == c) out.push_back(two(c, r1, r5));
            }
    }
    return out;
}

Rational UnitCharacter::phase(i64 u) const {
    if (c_ == 0) return Rational(0);
    i64 x = posmod(u, tab_->mod);
    i64 a = tab_->a[x];
    if (a < 0) throw DomainError("character evaluated at a non-unit");
    if (p_ != 2) return (r_ * Rational(a)).frac();
    return (r5_ * Rational(a) + r1_ * Rational(tab_->s[x])).frac();
}

cplx UnitCharacter::eval(const PAdicNumber& u) const {
    if (u.is_zero() || u.valuation() != 0) throw DomainError("unit character needs a unit");
    return eval(u.unit_mod(std::min(u.precision(), std::max(c_, 1))));
}

i64 UnitCharacter::phase_num(i64 u) const {
    if (c_ == 0) return 0;
    i64 x = posmod(u, tab_->mod);
    i64 a = tab_->a[x];
    if (a < 0) throw DomainError("character evaluated at a non-unit");
    if (p_ != 2) return mulmod(r_.num, a, den_);
    return posmod(mulmod(r5_.num * (den_ / r5_.den), a, den_) +
                      (tab_->s[x] ? r1_.num * (den_ / r1_.den) : 0),
                  den_);
}

UnitCharacter UnitCharacter::operator*(const UnitCharacter& o) const {
    if (p_ != o.p_) throw DomainError("prime mismatch");
    UnitCharacter w = *this;
    w.r_ = r_ + o.r_;
    w.r1_ = r1_ + o.r1_;
    w.r5_ = r5_ + o.r5_;
    w.normalize();
    return w;
}

UnitCharacter UnitCharacter::inverse() const {
    UnitCharacter w = *this;
    w.r_ = -r_;
    w.r1_ = -r1_;
    w.r5_ = -r5_;
    w.normalize();
    return w;
}

UnitCharacter UnitCharacter::pow(i64 k) const {
    UnitCharacter w = *this;
    w.r_ = r_ * Rational(k);
    w.r1_ = r1_ * Rational(k);
    w.r5_ = r5_ * Rational(k);
    w.normalize();
    return w;
}

bool UnitCharacter::operator==(const UnitCharacter& o) const {
    return p_ == o.p_ && r_ == o.r_ && r1_ == o.r1_ && r5_ == o.r5_;
}

std::string UnitCharacter::json() const {
    std::ostringstream os;
    os << "{\"p\":" << p_ << ",\"c\":" << c_ << ",\"angles\":[";
    if (p_ != 2)
        os << "[" << r_.num << "," << r_.den << "]";
    else
        os << "[" << r1_.num << "," << r1_.den << "],[" << r5_.num << "," << r5_.den << "]";
    os << "]}";
    return os.str();
}

MultCharacter::MultCharacter(UnitCharacter omega, Rational angle_at_p)
    : omega_(std::move(omega)), ap_(angle_at_p.frac()) {}

Rational MultCharacter::phase(int v, i64 u) const {
    return (ap_ * Rational(v) + omega_.phase(u)).frac();
}

cplx MultCharacter::eval(const PAdicNumber& x) const {
    if (x.is_zero()) throw DomainError("character evaluated at 0");
    int c = omega_.conductor();
    if (x.precision() < c)
        throw PrecisionError("char_eval: need " + std::to_string(c) + " digits");
    return eval(x.valuation(), x.unit_mod(std::max(1, std::min(x.precision(), std::max(c, 1)))));
}

MultCharacter MultCharacter::operator*(const MultCharacter& o) const {
    return {omega_ * o.omega_, ap_ + o.ap_};
}
MultCharacter MultCharacter::inverse() const { return {omega_.inverse(), -ap_}; }
bool MultCharacter::operator==(const MultCharacter& o) const {
    return omega_ == o.omega_ && ap_ == o.ap_;
}

i64 OpenUnitSubgroup::index() const { return m == 0 ? 1 : (p - 1) * ipow(p, m - 1); }

bool OpenUnitSubgroup::contains(i64 u, int k) const {
    if (m == 0) return posmod(u, p) != 0;
    if (k < m) throw PrecisionError("subgroup membership needs more digits");
    return posmod(u - 1, ipow(p, m)) == 0;
}

std::vector<i64> OpenUnitSubgroup::representatives(int d) const {
    std::vector<i64> out;
    i64 mod = ipow(p, d);
    if (m == 0) {
        out.reserve(mod - mod / p);
        for (i64 u = 1; u < mod; ++u)
            if (u % p) out.push_back(u);
    } else {
        if (d < m) throw PrecisionError("representatives below subgroup depth");
        i64 step = ipow(p, m);
        for (i64 u = 1; u < mod; u += step) out.push_back(u);
    }
    return out;
}

cplx char_eval(const MultCharacter& chi, const PAdicNumber& x) { return chi.eval(x); }

int conductor_product_bound(const MultCharacter& a, const MultCharacter& b) {
    int c = (a.unit_part() * b.unit_part()).conductor();
    if (c > a.conductor() + b.conductor()) throw std::logic_error("conductor bound violated");
    return c;
}

int gauss_depth(int v, const UnitCharacter& omega, const OpenUnitSubgroup& U1) {
    return std::max({omega.conductor(), -v, U1.m, 1});
}

cplx gauss_sum_raw(int v, i64 unit, const UnitCharacter& omega, const OpenUnitSubgroup& U1,
                   int extra_depth) {
    const i64 p = omega.prime();
    const int e = gauss_depth(v, omega, U1) + extra_depth;
    const int need = std::max({omega.conductor(), -v, 1});
    const i64 modn = ipow(p, need);
    const i64 tu = posmod(unit, modn);
    const int k = std::max(0, -v);
    const i64 pk = ipow(p, k);
    const i64 n = omega.phase_den();
    const i64 L = std::lcm(n, pk);
    const auto roots = roots_table(L);
    const i64 fn = L / n, fk = L / pk;
    std::vector<i64> reps = U1.representatives(e);
    std::vector<double> re(reps.size()), im(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) {
        i64 w = mulmod(tu, reps[i], modn);
        i64 idx = omega.phase_num(w) * fn + (w % pk) * fk;
        const cplx& z = (*roots)[idx % L];
        re[i] = z.real();
        im[i] = z.imag();
    }
    double sr, si;
    kernels::csum(re.data(), im.data(), nullptr, reps.size(), &sr, &si);
    return cplx(sr, si) / double(reps.size());
}

cplx gauss_sum(const PAdicNumber& t, const UnitCharacter& omega, const OpenUnitSubgroup& U1,
               int extra_depth) {
    if (t.is_zero()) throw DomainError("gauss_sum at t = 0");
    int need = std::max({omega.conductor(), -t.valuation(), 1});
    if (t.precision() < need + 1)
        throw PrecisionError("gauss_sum: precision " + std::to_string(t.precision()) +
                             " below required " + std::to_string(need + 1));
    return gauss_sum_raw(t.valuation(), t.unit_mod(need), omega, U1, extra_depth);
}

}  // namespace plab
