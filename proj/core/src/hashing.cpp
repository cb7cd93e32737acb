#include "mpcsm/hashing.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

namespace mpcsm {

CharMap byte_plus_one_map() {
    CharMap m{};
    for (std::size_t c = 0; c < 256; ++c) m[c] = c + 1;
    return m;
}

CharMap letter_index_map() {
    CharMap m{};
    for (int c = 'a'; c <= 'z'; ++c) m[c] = static_cast<Word>(c - 'a' + 1);
    return m;
}

Word mul_mod(Word a, Word b, Word r) {
    if (r == kMersenne61) {
        unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
        Word lo = static_cast<Word>(z) & kMersenne61;
        Word hi = static_cast<Word>(z >> 61);
        Word s = lo + hi;
        if (s >= kMersenne61) s -= kMersenne61;
        return s;
    }
    return static_cast<Word>(static_cast<unsigned __int128>(a) * b % r);
}

Word pow_mod(Word base, std::uint64_t e, Word r) {
    Word result = 1 % r;
    base %= r;
    while (e) {
        if (e & 1) result = mul_mod(result, base, r);
        base = mul_mod(base, base, r);
        e >>= 1;
    }
    return result;
}

bool is_prime(Word n) {
    if (n < 2) return false;
    for (Word p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    Word d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (Word a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        Word x = static_cast<Word>([&] {
            unsigned __int128 res = 1, b = a % n;
            Word e = d;
            while (e) {
                if (e & 1) res = res * b % n;
                b = b * b % n;
                e >>= 1;
            }
            return res;
        }());
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = static_cast<Word>(static_cast<unsigned __int128>(x) * x % n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

HashParams HashParams::make(Word r, Word b, const CharMap& map) {
    if (!is_prime(r)) throw std::invalid_argument("hash modulus must be prime");
    if (b < 2 || b >= r) throw std::invalid_argument("hash base must satisfy 2 <= b < r");
    if (std::gcd(b, r) != 1) throw std::invalid_argument("hash base and modulus must be coprime");
    std::vector<bool> seen(256, false);
    for (Word v : map) {
        if (v == 0) continue;
        if (v >= r) throw std::invalid_argument("char_map value must be below the modulus");
        if (v < seen.size() && seen[v]) throw std::invalid_argument("char_map must be injective");
        if (v < seen.size()) seen[v] = true;
    }
    return HashParams{r, b, map};
}

HashParams HashParams::seeded(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Word> dist(Word{1} << 20, kMersenne61 - 2);
    return HashParams{kMersenne61, dist(rng), byte_plus_one_map()};
}

Word HashParams::map(unsigned char c) const {
    Word v = char_map[c];
    if (v == 0) throw std::invalid_argument(std::string("symbol outside the hash alphabet: ") +
                                            static_cast<char>(c));
    return v;
}

Word hash_string(const HashParams& p, std::string_view s) {
    Word h = 0;
    for (unsigned char c : s) {
        h = mul_mod(h, p.b, p.r) + p.map(c);
        if (h >= p.r) h -= p.r;
    }
    return h;
}

Word merge_hash(const HashParams& p, Word h1, Word h2, std::uint64_t len2) {
    Word h = mul_mod(h1, pow_mod(p.b, len2, p.r), p.r) + h2;
    return h >= p.r ? h - p.r : h;
}

Word roll(const HashParams& p, Word h, unsigned char out, unsigned char in, std::uint64_t m) {
    Word lead = mul_mod(p.map(out), pow_mod(p.b, m - 1, p.r), p.r);
    Word t = h >= lead ? h - lead : h + p.r - lead;
    t = mul_mod(t, p.b, p.r) + p.map(in);
    return t >= p.r ? t - p.r : t;
}

PrefixHashTable::PrefixHashTable(const HashParams& p, std::string_view s) : p_(p) {
    prefix_.resize(s.size() + 1);
    pow_.resize(s.size() + 1);
    prefix_[0] = 0;
    pow_[0] = 1 % p.r;
    for (std::size_t i = 0; i < s.size(); ++i) {
        Word h = mul_mod(prefix_[i], p.b, p.r) + p.map(static_cast<unsigned char>(s[i]));
        prefix_[i + 1] = h >= p.r ? h - p.r : h;
        pow_[i + 1] = mul_mod(pow_[i], p.b, p.r);
    }
}

Word PrefixHashTable::substring_hash(std::uint64_t l, std::uint64_t r) const {
    if (l < 1 || l > r || r > length()) throw std::out_of_range("substring_hash indices out of range");
    Word sub = mul_mod(prefix_[l - 1], pow_[r - l + 1], p_.r);
    Word h = prefix_[r];
    return h >= sub ? h - sub : h + p_.r - sub;
}

DoubleHash DoubleHash::seeded(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x9e3779b9u};
    std::mt19937_64 rng(seq);
    DoubleHash d;
    d.first = HashParams::seeded(rng());
    // Second modulus: the largest prime below 2^61 - 1 keeps both fingerprints single-word.
    Word r2 = kMersenne61 - 2;
    while (!is_prime(r2)) r2 -= 2;
    std::uniform_int_distribution<Word> dist(Word{1} << 20, r2 - 2);
    d.second = HashParams{r2, dist(rng), byte_plus_one_map()};
    return d;
}

std::pair<Word, Word> DoubleHash::hash(std::string_view s) const {
    return {hash_string(first, s), hash_string(second, s)};
}

DistributedPrefix distributed_prefix_hashes(MpcContext& ctx, const HashParams& p,
                                            const BlockLayout& layout, const std::string& buffer) {
    DistributedPrefix out{layout, 0};
    const std::size_t agg = out.aggregator;

    ctx.run_round([&](Machine& m) {
        const auto& sym = m.state().buf(buffer);
        auto& ph = m.state().buf("phash");
        ph.assign(sym.size() + 1, 0);
        for (std::size_t i = 0; i < sym.size(); ++i) {
            Word h = mul_mod(ph[i], p.b, p.r) + p.map(static_cast<unsigned char>(sym[i]));
            ph[i + 1] = h >= p.r ? h - p.r : h;
        }
        m.add_work(sym.size());
        m.send(agg, 0, {ph.back(), static_cast<Word>(sym.size())});
    });
    ctx.exchange();

    ctx.run_round([&](Machine& m) {
        if (m.id() != agg) return;
        auto& running = m.state().buf("block_prefix");
        running.assign(m.machines(), 0);
        Word acc = 0;
        for (const auto& msg : m.inbox()) {
            m.send(msg.src, 1, {acc});
            acc = merge_hash(p, acc, msg.payload[0], msg.payload[1]);
            running[msg.src] = acc;
        }
        m.add_work(m.machines());
    });
    ctx.exchange();

    ctx.run_round([&](Machine& m) {
        auto& g = m.state().buf("gbefore");
        g.assign(1, 0);
        for (const auto& msg : m.inbox()) g[0] = msg.payload[0];
    });
    return out;
}

}  // namespace mpcsm
