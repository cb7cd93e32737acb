#include <doctest.h>

#include <cmath>
#include <random>

#include "mpcsm/fft.hpp"
#include "mpcsm/oracles.hpp"

using namespace mpcsm;

namespace {

double max_err(const ComplexVector& a, const ComplexVector& b) {
    REQUIRE(a.size() == b.size());
    double e = 0;
    for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
    return e;
}

double l1(const ComplexVector& a) {
    double s = 0;
    for (const auto& v : a) s += std::abs(v);
    return s;
}

ComplexVector random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    ComplexVector v(n);
    for (auto& c : v) c = {u(g), u(g)};
    return v;
}

}  // namespace

TEST_CASE("naive transform, positive exponent") {
    const Complex I(0, 1);
    CHECK(max_err(dft_naive({1, 0, 0, 0}), {1, 1, 1, 1}) < 1e-12);
    CHECK(max_err(dft_naive({1, 1, 1, 1}), {4, 0, 0, 0}) < 1e-12);
    CHECK(max_err(dft_naive({0, 1, 0, 0}), {1, I, -1.0, -I}) < 1e-12);
    const auto a = random_vec(12, 1);
    CHECK(max_err(idft_naive(dft_naive(a)), a) < 1e-12);
}

TEST_CASE("local fft") {
    CHECK(fft_local({Complex(2, 3)}) == ComplexVector{Complex(2, 3)});
    CHECK(max_err(fft_local({1, 2, 3, 4}), dft_naive({1, 2, 3, 4})) < 1e-9);
    const auto a = random_vec(256, 2);
    CHECK(max_err(fft_local(a), dft_naive(a)) <= 1e-6 * l1(a));
    CHECK(max_err(ifft_local(fft_local(a)), a) < 1e-9);
}

TEST_CASE("bit reversal") {
    CHECK(bit_reversal_perm(8) == std::vector<std::size_t>{0, 4, 2, 6, 1, 5, 3, 7});
    CHECK(bit_reversal_perm(2) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("distributed fft") {
    SUBCASE("delta on a 4 x 4 grid") {
        MpcContext ctx(MpcConfig{16, 0.5});
        REQUIRE(ctx.machines() == 4);
        ComplexVector d(16);
        d[0] = 1;
        CHECK(max_err(mpc_fft(ctx, d), ComplexVector(16, 1)) < 1e-12);
        CHECK(ctx.metrics().rounds == 3);
    }
    SUBCASE("random 16") {
        MpcContext ctx(MpcConfig{16, 0.5});
        const auto a = random_vec(16, 3);
        CHECK(max_err(mpc_fft(ctx, a), dft_naive(a)) <= 1e-6 * l1(a));
        CHECK(ctx.metrics().rounds == 3);
    }
    SUBCASE("4096 on 64 machines, strict") {
        MpcContext ctx(MpcConfig{4096, 0.5});
        const auto a = random_vec(4096, 4);
        FftLayoutTrace tr;
        const auto out = mpc_fft(ctx, a, &tr);
        CHECK(tr.shape.machines * tr.shape.per_machine == 4096);
        CHECK(max_err(out, fft_local(a)) <= 1e-6 * l1(a));
        CHECK(ctx.metrics().violations.empty());
    }
    SUBCASE("non power of two pads with zeros") {
        MpcContext ctx(MpcConfig{1000, 0.5});
        const auto a = random_vec(1000, 5);
        const auto out = mpc_fft(ctx, a);
        ComplexVector padded = a;
        padded.resize(out.size());
        CHECK(max_err(out, fft_local(padded)) <= 1e-6 * l1(a));
    }
}

TEST_CASE("shape") {
    for (std::size_t len : {1u, 2u, 5u, 16u, 1000u, 4096u}) {
        const auto sh = fft_shape(len, 64);
        CHECK(sh.n >= len);
        CHECK(sh.n == sh.machines * sh.per_machine);
        CHECK(sh.machines <= sh.per_machine);
        CHECK(is_power_of_two(sh.machines));
        CHECK(is_power_of_two(sh.per_machine));
    }
    CHECK(next_power_of_two(1000) == 1024);
}

TEST_CASE("convolution") {
    MpcContext small(MpcConfig{3, 0.5});
    const auto c = mpc_convolution(small, {1, 2}, {3, 4});
    REQUIRE(c.size() == 3);
    CHECK(max_err(c, {3, 10, 8}) < 1e-9);

    std::mt19937_64 g(6);
    std::vector<std::int64_t> a(1000), b(1000);
    for (auto& v : a) v = static_cast<std::int64_t>(g() % 1001);
    for (auto& v : b) v = static_cast<std::int64_t>(g() % 1001);
    const auto want = oracle::naive_convolution(a, b);

    MpcContext ctx(MpcConfig{1999, 0.5});
    ComplexVector ca(a.begin(), a.end()), cb(b.begin(), b.end());
    const auto got = mpc_convolution(ctx, ca, cb);
    CHECK(ctx.metrics().rounds == 4);
    REQUIRE(got.size() == want.size());
    bool exact = true;
    for (std::size_t k = 0; k < want.size(); ++k) exact = exact && std::llround(got[k].real()) == want[k];
    CHECK(exact);

    MpcContext nt(MpcConfig{1999, 0.5});
    std::vector<Word> wa(a.begin(), a.end()), wb(b.begin(), b.end());
    const auto gw = mpc_ntt_convolution(nt, wa, wb);
    CHECK(nt.metrics().rounds == 4);
    REQUIRE(gw.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) REQUIRE(gw[k] == static_cast<Word>(want[k]));
}

TEST_CASE("ntt") {
    std::vector<Word> a{1, 2, 3, 4, 0, 0, 0, 0};
    CHECK(ntt_local(ntt_local(a, false), true) == a);
    CHECK(ntt_convolution_local({1, 2}, {3, 4}) == std::vector<Word>{3, 10, 8});
}

TEST_CASE("batched summed convolution") {
    MpcContext ctx(MpcConfig{64, 0.5});
    VectorPairs<Word> pairs{{{1, 2, 3}, {1, 1}}, {{0, 1}, {5}}};
    const auto d = mpc_convolve_ntt_in_place(ctx, pairs, true);
    CHECK(d.outputs == 1);
    const auto out = gather_ntt(ctx, d).at(0);
    // (1,3,5,3) + (0,5) = (1,8,5,3)
    REQUIRE(out.size() >= 4);
    CHECK(std::vector<Word>(out.begin(), out.begin() + 4) == std::vector<Word>{1, 8, 5, 3});
    CHECK(ctx.metrics().rounds == 4);
}
