#include <doctest.h>

#include <random>
#include <vector>

#include "plab/kernels.hpp"

using namespace plab::kernels;

namespace {
std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}
}  // namespace

TEST_CASE("every kernel variant agrees with the scalar reference") {
    const Table* simd = avx2_table();
    if (!simd) {
        MESSAGE("no AVX2 on this host; only the scalar table is exercised");
        return;
    }
    const Table& ref = scalar_table();
    std::mt19937_64 rng(7);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u}) {
        auto a = random_vec(rng, n), b = random_vec(rng, n), c = random_vec(rng, n),
             d = random_vec(rng, n), w = random_vec(rng, n);
        double r1, i1, r2, i2;
        ref.csum(a.data(), b.data(), w.data(), n, &r1, &i1);
        simd->csum(a.data(), b.data(), w.data(), n, &r2, &i2);
        CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
        CHECK(i1 == doctest::Approx(i2).epsilon(1e-12));
        ref.csum(a.data(), b.data(), nullptr, n, &r1, &i1);
        simd->csum(a.data(), b.data(), nullptr, n, &r2, &i2);
        CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
        ref.cdot(a.data(), b.data(), c.data(), d.data(), n, &r1, &i1);
        simd->cdot(a.data(), b.data(), c.data(), d.data(), n, &r2, &i2);
        CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
        CHECK(i1 == doctest::Approx(i2).epsilon(1e-12));
        CHECK(ref.abs_diff(a.data(), b.data(), n) ==
              doctest::Approx(simd->abs_diff(a.data(), b.data(), n)).epsilon(1e-12));
        CHECK(ref.wdot(w.data(), a.data(), b.data(), n) ==
              doctest::Approx(simd->wdot(w.data(), a.data(), b.data(), n)).epsilon(1e-12));
    }
    for (std::size_t rows : {1u, 5u, 33u}) {
        std::size_t cols = rows + 3;
        auto A = random_vec(rng, rows * cols), x = random_vec(rng, cols);
        std::vector<double> y1(rows), y2(rows);
        ref.gemv(A.data(), x.data(), y1.data(), rows, cols);
        simd->gemv(A.data(), x.data(), y2.data(), rows, cols);
        for (std::size_t r = 0; r < rows; ++r) CHECK(y1[r] == doctest::Approx(y2[r]).epsilon(1e-12));
    }
}

TEST_CASE("dispatch picks a table") {
    CHECK((active().isa == Isa::Scalar || active().isa == Isa::Avx2));
    CHECK(isa_name(Isa::Avx2) == "avx2");
}
