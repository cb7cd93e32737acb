#include "mpcsm/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mpcsm {

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::uint64_t next_power_of_two(std::uint64_t v) {
    std::uint64_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

namespace {

Word nmul(Word a, Word b) { return static_cast<Word>(static_cast<unsigned __int128>(a) * b % kNttPrime); }
Word nadd(Word a, Word b) {
    Word s = a + b;
    return s >= kNttPrime ? s - kNttPrime : s;
}
Word nsub(Word a, Word b) { return a >= b ? a - b : a + kNttPrime - b; }
Word npow(Word b, std::uint64_t e) {
    Word r = 1;
    while (e) {
        if (e & 1) r = nmul(r, b);
        b = nmul(b, b);
        e >>= 1;
    }
    return r;
}

Complex unit_root(std::size_t n, std::int64_t e) {
    std::int64_t r = e % static_cast<std::int64_t>(n);
    if (r < 0) r += static_cast<std::int64_t>(n);
    double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

struct ComplexField {
    using T = Complex;
    static constexpr std::size_t W = 2;
    static T zero() { return {0.0, 0.0}; }
    static T add(T a, T b) { return a + b; }
    static T sub(T a, T b) { return a - b; }
    static T mul(T a, T b) { return a * b; }
    static T scale_inv(T a, std::size_t n) { return a / static_cast<double>(n); }
    // w[j] = omega_n^{sign * step * j}
    static std::vector<T> powers(std::size_t n, std::int64_t sign, std::size_t step, std::size_t count) {
        std::vector<T> w(count);
        for (std::size_t j = 0; j < count; ++j)
            w[j] = unit_root(n, sign * static_cast<std::int64_t>((step * j) % n));
        return w;
    }
    static void put(std::vector<Word>& out, const T& v) {
        out.push_back(std::bit_cast<Word>(v.real()));
        out.push_back(std::bit_cast<Word>(v.imag()));
    }
    static T get(const Word* p) { return {std::bit_cast<double>(p[0]), std::bit_cast<double>(p[1])}; }
};

struct NttField {
    using T = Word;
    static constexpr std::size_t W = 1;
    static T zero() { return 0; }
    static T add(T a, T b) { return nadd(a, b); }
    static T sub(T a, T b) { return nsub(a, b); }
    static T mul(T a, T b) { return nmul(a, b); }
    static T scale_inv(T a, std::size_t n) { return nmul(a, npow(n % kNttPrime, kNttPrime - 2)); }
    static T root(std::size_t n, std::int64_t sign) {
        if ((kNttPrime - 1) % n != 0) throw std::invalid_argument("NTT length exceeds 2^33");
        Word w = npow(kNttGenerator, (kNttPrime - 1) / n);
        return sign > 0 ? w : npow(w, kNttPrime - 2);
    }
    static std::vector<T> powers(std::size_t n, std::int64_t sign, std::size_t step, std::size_t count) {
        std::vector<T> w(count);
        Word base = npow(root(n, sign), step % n);
        Word cur = 1;
        for (std::size_t j = 0; j < count; ++j) {
            w[j] = cur;
            cur = nmul(cur, base);
        }
        return w;
    }
    static void put(std::vector<Word>& out, const T& v) { out.push_back(v); }
    static T get(const Word* p) { return p[0]; }
};

template <class F>
void transform(std::vector<typename F::T>& a, std::int64_t sign) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("transform length must be a power of two");
    if (n == 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        auto w = F::powers(len, sign, 1, len / 2);
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t j = 0; j < len / 2; ++j) {
                auto u = a[i + j];
                auto v = F::mul(a[i + j + len / 2], w[j]);
                a[i + j] = F::add(u, v);
                a[i + j + len / 2] = F::sub(u, v);
            }
    }
}

std::uint64_t nlogn(std::size_t n) {
    return n * static_cast<std::uint64_t>(std::bit_width(n));
}

}  // namespace

ComplexVector dft_naive(const ComplexVector& a) {
    const std::size_t n = a.size();
    ComplexVector out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex s{0, 0};
        for (std::size_t j = 0; j < n; ++j) s += a[j] * unit_root(n, static_cast<std::int64_t>((j * k) % n));
        out[k] = s;
    }
    return out;
}

ComplexVector idft_naive(const ComplexVector& a) {
    const std::size_t n = a.size();
    ComplexVector out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex s{0, 0};
        for (std::size_t j = 0; j < n; ++j) s += a[j] * unit_root(n, -static_cast<std::int64_t>((j * k) % n));
        out[k] = s / static_cast<double>(n);
    }
    return out;
}

ComplexVector fft_local(ComplexVector a) {
    transform<ComplexField>(a, +1);
    return a;
}

ComplexVector ifft_local(ComplexVector a) {
    transform<ComplexField>(a, -1);
    for (auto& v : a) v /= static_cast<double>(a.size());
    return a;
}

std::vector<std::size_t> bit_reversal_perm(std::size_t m) {
    if (!is_power_of_two(m)) throw std::invalid_argument("bit reversal needs a power of two");
    const int bits = std::countr_zero(m);
    std::vector<std::size_t> p(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        p[i] = r;
    }
    return p;
}

std::vector<Word> ntt_local(std::vector<Word> a, bool inverse) {
    transform<NttField>(a, inverse ? -1 : +1);
    if (inverse)
        for (auto& v : a) v = NttField::scale_inv(v, a.size());
    return a;
}

std::vector<Word> ntt_convolution_local(const std::vector<Word>& a, const std::vector<Word>& b) {
    if (a.empty() || b.empty()) return {};
    std::size_t len = a.size() + b.size() - 1;
    std::size_t n = next_power_of_two(len);
    std::vector<Word> fa(n, 0), fb(n, 0);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i] % kNttPrime;
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i] % kNttPrime;
    fa = ntt_local(std::move(fa), false);
    fb = ntt_local(std::move(fb), false);
    for (std::size_t i = 0; i < n; ++i) fa[i] = nmul(fa[i], fb[i]);
    fa = ntt_local(std::move(fa), true);
    fa.resize(len);
    return fa;
}

FftShape fft_shape(std::size_t length, std::size_t available_machines) {
    FftShape s;
    s.n = next_power_of_two(std::max<std::size_t>(length, 1));
    std::size_t m = std::bit_floor(std::max<std::size_t>(available_machines, 1));
    std::size_t root = std::size_t{1} << (std::countr_zero(s.n) / 2);  // largest power of two with root^2 <= n
    s.machines = std::min(m, root);
    s.per_machine = s.n / s.machines;
    return s;
}

namespace {

std::string vec_name(const char* prefix, std::size_t k) { return std::string(prefix) + std::to_string(k); }

template <class F>
std::vector<typename F::T> decode(const std::vector<Word>& w, std::size_t off, std::size_t count) {
    std::vector<typename F::T> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = F::get(&w[(off + i) * F::W]);
    return out;
}

template <class F>
void encode_into(std::vector<Word>& out, const std::vector<typename F::T>& v) {
    out.clear();
    out.reserve(v.size() * F::W);
    for (const auto& x : v) F::put(out, x);
}

// Scatter V vectors (padded to shape.n) as contiguous blocks of per_machine entries.
template <class F>
void scatter_vectors(MpcContext& ctx, const FftShape& sh, const std::vector<std::vector<typename F::T>>& vs) {
    for (std::size_t k = 0; k < vs.size(); ++k) {
        std::vector<Word> words;
        words.reserve(sh.n * F::W);
        for (std::size_t i = 0; i < sh.n; ++i) F::put(words, i < vs[k].size() ? vs[k][i] : F::zero());
        ctx.scatter_input(words, vec_name("fin", k), sh.per_machine * F::W);
    }
}

// Round 1 program: send entry j of each input to machine j mod machines.
template <class F>
Program permute_to_residues(const FftShape& sh, std::size_t V) {
    return [sh, V](Machine& me) {
        const std::size_t Mf = sh.machines, C = sh.per_machine / Mf;
        if (me.id() >= Mf) return;
        std::vector<std::vector<Word>> out(Mf);
        for (std::size_t k = 0; k < V; ++k) {
            const auto& blk = me.state().at(vec_name("fin", k));
            for (std::size_t z = 0; z < Mf; ++z)
                for (std::size_t u = 0; u < C; ++u) {
                    std::size_t r = z + Mf * u;
                    out[z].insert(out[z].end(), blk.begin() + r * F::W, blk.begin() + (r + 1) * F::W);
                }
            me.state().erase(vec_name("fin", k));
        }
        for (std::size_t z = 0; z < Mf; ++z) me.send(z, 0, std::move(out[z]));
    };
}

// Round 2 program: local per_machine-point transforms of the residue class, twiddles, transpose.
template <class F>
Program local_then_transpose(const FftShape& sh, std::size_t V) {
    return [sh, V](Machine& me) {
        const std::size_t Mf = sh.machines, Sf = sh.per_machine, C = Sf / Mf;
        const std::size_t z = me.id();
        if (z >= Mf) return;
        std::vector<std::vector<Word>> out(Mf);
        for (std::size_t k = 0; k < V; ++k) {
            std::vector<typename F::T> phi(Sf);
            for (const auto& msg : me.inbox()) {
                const std::size_t i = msg.src;
                auto vals = decode<F>(msg.payload, k * C, C);
                for (std::size_t u = 0; u < C; ++u) phi[i * C + u] = vals[u];
            }
            transform<F>(phi, +1);
            auto tw = F::powers(sh.n, +1, z, Sf);
            for (std::size_t j = 0; j < Sf; ++j) phi[j] = F::mul(phi[j], tw[j]);
            for (std::size_t w = 0; w < Mf; ++w)
                for (std::size_t u = 0; u < C; ++u) F::put(out[w], phi[w * C + u]);
            me.add_work(nlogn(Sf) + Sf);
        }
        for (std::size_t w = 0; w < Mf; ++w) me.send(w, 0, std::move(out[w]));
    };
}

// Column block held by machine w after the transpose: cols[k][u][z].
template <class F>
std::vector<std::vector<std::vector<typename F::T>>> read_columns(const Machine& me, const FftShape& sh,
                                                                  std::size_t V) {
    const std::size_t Mf = sh.machines, C = sh.per_machine / Mf;
    std::vector<std::vector<std::vector<typename F::T>>> cols(
        V, std::vector<std::vector<typename F::T>>(C, std::vector<typename F::T>(Mf)));
    for (const auto& msg : me.inbox()) {
        const std::size_t z = msg.src;
        for (std::size_t k = 0; k < V; ++k) {
            auto vals = decode<F>(msg.payload, k * C, C);
            for (std::size_t u = 0; u < C; ++u) cols[k][u][z] = vals[u];
        }
    }
    return cols;
}

}  // namespace

ComplexVector mpc_fft(MpcContext& ctx, const ComplexVector& a, FftLayoutTrace* trace) {
    using F = ComplexField;
    const FftShape sh = fft_shape(a.size(), ctx.machines());
    if (sh.machines > sh.per_machine) throw PreconditionError("mpc_fft needs M <= S");
    const std::size_t Mf = sh.machines, Sf = sh.per_machine, C = Sf / Mf;
    scatter_vectors<F>(ctx, sh, {a});

    ctx.run_round(permute_to_residues<F>(sh, 1));
    ctx.exchange();
    ctx.run_round(local_then_transpose<F>(sh, 1));
    ctx.exchange();

    if (trace) {
        trace->shape = sh;
        trace->held.assign(ctx.machines(), {});
        for (std::size_t w = 0; w < Mf; ++w)
            for (const auto& msg : ctx.inbox(w))
                for (std::size_t u = 0; u < C; ++u) trace->held[w].emplace_back(msg.src, w * C + u);
    }

    ctx.run_round([&](Machine& me) {
        const std::size_t w = me.id();
        if (w >= Mf) return;
        auto cols = read_columns<F>(me, sh, 1);
        std::vector<std::vector<Word>> out(Mf);
        for (std::size_t u = 0; u < C; ++u) {
            transform<F>(cols[0][u], +1);  // cols[0][u][q] = a*_{q*Sf + w*C + u}
            me.add_work(nlogn(Mf));
        }
        for (std::size_t q = 0; q < Mf; ++q)
            for (std::size_t u = 0; u < C; ++u) F::put(out[q], cols[0][u][q]);
        for (std::size_t q = 0; q < Mf; ++q) me.send(q, 0, std::move(out[q]));
    });
    ctx.exchange();

    ctx.run_round([&](Machine& me) {
        const std::size_t q = me.id();
        if (q >= Mf) return;
        std::vector<Word> block(Sf * F::W);
        for (const auto& msg : me.inbox())
            std::copy(msg.payload.begin(), msg.payload.end(), block.begin() + msg.src * C * F::W);
        me.state().buf("fft") = std::move(block);
    });

    auto words = gather(ctx, "fft");
    for (std::size_t i = 0; i < ctx.machines(); ++i) ctx.state(i).erase("fft");
    return decode<F>(words, 0, sh.n);
}

namespace {

template <class F>
DistributedConvolution convolve_in_place(MpcContext& ctx, const VectorPairs<typename F::T>& input, bool summed) {
    using T = typename F::T;
    VectorPairs<T> pairs = input;
    if (pairs.empty()) pairs.push_back({{F::zero()}, {F::zero()}});
    std::size_t out_len = 1;
    for (auto& [a, b] : pairs) {
        if (a.empty()) a.push_back(F::zero());
        if (b.empty()) b.push_back(F::zero());
        out_len = std::max(out_len, a.size() + b.size() - 1);
    }
    const FftShape sh = fft_shape(out_len, ctx.machines());
    const std::size_t Mf = sh.machines, Sf = sh.per_machine, C = Sf / Mf, N = sh.n;
    const std::size_t P = pairs.size(), V = 2 * P, O = summed ? 1 : P;

    std::vector<std::vector<T>> vs;
    for (auto& [a, b] : pairs) {
        vs.push_back(a);
        vs.push_back(b);
    }
    scatter_vectors<F>(ctx, sh, vs);
    vs.clear();

    ctx.run_round(permute_to_residues<F>(sh, V));
    ctx.exchange();
    ctx.run_round(local_then_transpose<F>(sh, V));
    ctx.exchange();

    // Column machine: finish forward transforms, multiply, start the inverse, transpose back.
    ctx.run_round([&](Machine& me) {
        const std::size_t w = me.id();
        if (w >= Mf) return;
        auto cols = read_columns<F>(me, sh, V);
        std::vector<std::vector<Word>> out(Mf);
        std::vector<std::vector<std::vector<T>>> psi(O, std::vector<std::vector<T>>(C));
        for (std::size_t u = 0; u < C; ++u) {
            const std::size_t jj = w * C + u;
            for (std::size_t k = 0; k < V; ++k) transform<F>(cols[k][u], +1);
            for (std::size_t o = 0; o < O; ++o) psi[o][u].assign(Mf, F::zero());
            for (std::size_t p = 0; p < P; ++p) {
                auto& dst = psi[summed ? 0 : p][u];
                for (std::size_t q = 0; q < Mf; ++q)
                    dst[q] = F::add(dst[q], F::mul(cols[2 * p][u][q], cols[2 * p + 1][u][q]));
            }
            auto tw = F::powers(N, -1, jj, Mf);
            for (std::size_t o = 0; o < O; ++o) {
                transform<F>(psi[o][u], -1);
                for (std::size_t z = 0; z < Mf; ++z) psi[o][u][z] = F::mul(psi[o][u][z], tw[z]);
            }
            me.add_work((V + O) * nlogn(Mf) + P * Mf);
        }
        for (std::size_t z = 0; z < Mf; ++z) {
            for (std::size_t o = 0; o < O; ++o)
                for (std::size_t u = 0; u < C; ++u) F::put(out[z], psi[o][u][z]);
            me.send(z, 0, std::move(out[z]));
        }
    });
    ctx.exchange();

    // Residue machine z: inverse per_machine-point transform gives c_{z + Mf t}; route to contiguous owners.
    ctx.run_round([&](Machine& me) {
        const std::size_t z = me.id();
        if (z >= Mf) return;
        std::vector<std::vector<Word>> out(Mf);
        for (std::size_t o = 0; o < O; ++o) {
            std::vector<T> col(Sf);
            for (const auto& msg : me.inbox()) {
                auto vals = decode<F>(msg.payload, o * C, C);
                for (std::size_t u = 0; u < C; ++u) col[msg.src * C + u] = vals[u];
            }
            transform<F>(col, -1);
            for (auto& v : col) v = F::scale_inv(v, N);
            for (std::size_t q = 0; q < Mf; ++q)
                for (std::size_t u = 0; u < C; ++u) F::put(out[q], col[q * C + u]);
            me.add_work(nlogn(Sf) + Sf);
        }
        for (std::size_t q = 0; q < Mf; ++q) me.send(q, 0, std::move(out[q]));
    });
    ctx.exchange();

    ctx.run_round([&](Machine& me) {
        const std::size_t q = me.id();
        if (q >= Mf) return;
        std::vector<std::vector<Word>> blocks(O, std::vector<Word>(Sf * F::W));
        for (const auto& msg : me.inbox()) {
            const std::size_t z = msg.src;
            for (std::size_t o = 0; o < O; ++o)
                for (std::size_t u = 0; u < C; ++u) {
                    const std::size_t pos = z + Mf * u;  // index inside this machine's block
                    for (std::size_t t = 0; t < F::W; ++t)
                        blocks[o][pos * F::W + t] = msg.payload[(o * C + u) * F::W + t];
                }
        }
        for (std::size_t o = 0; o < O; ++o) me.state().buf(vec_name("conv", o)) = std::move(blocks[o]);
    });

    return DistributedConvolution{sh, O, out_len};
}

template <class F>
std::vector<std::vector<typename F::T>> gather_outputs(const MpcContext& ctx, const DistributedConvolution& d) {
    std::vector<std::vector<typename F::T>> res;
    for (std::size_t o = 0; o < d.outputs; ++o) {
        auto words = gather(ctx, vec_name("conv", o));
        auto v = decode<F>(words, 0, d.shape.n);
        v.resize(d.out_length);
        res.push_back(std::move(v));
    }
    return res;
}

}  // namespace

DistributedConvolution mpc_convolve_complex_in_place(MpcContext& ctx, const VectorPairs<Complex>& pairs,
                                                     bool summed) {
    return convolve_in_place<ComplexField>(ctx, pairs, summed);
}

DistributedConvolution mpc_convolve_ntt_in_place(MpcContext& ctx, const VectorPairs<Word>& pairs, bool summed) {
    VectorPairs<Word> reduced = pairs;
    for (auto& [a, b] : reduced) {
        for (auto& v : a) v %= kNttPrime;
        for (auto& v : b) v %= kNttPrime;
    }
    return convolve_in_place<NttField>(ctx, reduced, summed);
}

std::vector<ComplexVector> gather_complex(const MpcContext& ctx, const DistributedConvolution& d) {
    return gather_outputs<ComplexField>(ctx, d);
}

std::vector<std::vector<Word>> gather_ntt(const MpcContext& ctx, const DistributedConvolution& d) {
    return gather_outputs<NttField>(ctx, d);
}

ComplexVector mpc_convolution(MpcContext& ctx, const ComplexVector& a, const ComplexVector& b) {
    auto d = mpc_convolve_complex_in_place(ctx, {{a, b}}, false);
    auto out = gather_complex(ctx, d)[0];
    out.resize(a.empty() || b.empty() ? 0 : a.size() + b.size() - 1);
    return out;
}

std::vector<Word> mpc_ntt_convolution(MpcContext& ctx, const std::vector<Word>& a, const std::vector<Word>& b) {
    auto d = mpc_convolve_ntt_in_place(ctx, {{a, b}}, false);
    auto out = gather_ntt(ctx, d)[0];
    out.resize(a.empty() || b.empty() ? 0 : a.size() + b.size() - 1);
    return out;
}

}  // namespace mpcsm
