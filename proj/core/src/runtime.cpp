#include "mpcsm/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mpcsm {

namespace {

std::string describe(const Violation& v) {
    std::ostringstream os;
    os << (v.kind == ViolationKind::memory ? "memory" : "receive") << " violation on machine "
       << v.machine << " in round " << v.round << ": " << v.amount << " words";
    return os.str();
}

}  // namespace

void validate(const MpcConfig& cfg) {
    if (cfg.n == 0) throw std::invalid_argument("n must be positive");
    if (!(cfg.x > 0.0) || cfg.x > 0.5) throw std::invalid_argument("x must lie in (0, 1/2]");
    if (!(cfg.slack_c >= 1.0)) throw std::invalid_argument("slack_c must be >= 1");
    if (cfg.slack_log_exp < 0) throw std::invalid_argument("slack_log_exp must be >= 0");
}

std::size_t derived_machines(const MpcConfig& cfg) {
    validate(cfg);
    double v = std::pow(static_cast<double>(cfg.n), cfg.x);
    auto m = static_cast<std::size_t>(std::ceil(v - 1e-9));
    return std::max<std::size_t>(m, 1);
}

std::uint64_t derived_capacity(const MpcConfig& cfg) {
    validate(cfg);
    double n = static_cast<double>(cfg.n);
    double v = cfg.slack_c * std::pow(n, 1.0 - cfg.x) *
               std::pow(std::log2(n + 2.0), static_cast<double>(cfg.slack_log_exp));
    auto s = static_cast<std::uint64_t>(std::ceil(v - 1e-9));
    return std::max<std::uint64_t>(s, 1);
}

BudgetViolation::BudgetViolation(const Violation& v) : std::runtime_error(describe(v)), v_(v) {}

const std::vector<Word>& MachineState::at(const std::string& name) const {
    auto it = bufs_.find(name);
    if (it == bufs_.end()) throw std::out_of_range("no buffer named " + name);
    return it->second;
}

std::uint64_t MachineState::words() const {
    std::uint64_t w = 0;
    for (const auto& [_, b] : bufs_) w += b.size();
    return w;
}

std::size_t Machine::machines() const { return ctx_->machines(); }
std::uint64_t Machine::capacity() const { return ctx_->capacity(); }

void Machine::send(std::size_t dst, Word tag, std::vector<Word> payload) {
    if (dst >= ctx_->machines()) throw std::out_of_range("message to nonexistent machine");
    Message m{id_, dst, tag, std::move(payload)};
    out_words_ += m.words();
    out_.push_back(std::move(m));
}

MpcContext::MpcContext(const MpcConfig& cfg)
    : cfg_(cfg), M_(derived_machines(cfg)), S_(derived_capacity(cfg)) {
    states_.resize(M_);
    inboxes_.resize(M_);
    pending_.resize(M_);
}

void MpcContext::report(const Violation& v) {
    if (cfg_.enforce == Enforce::strict) throw BudgetViolation(v);
    metrics_.violations.push_back(v);
}

void MpcContext::note_memory(std::size_t machine, std::uint64_t words) {
    metrics_.peak_machine_memory_words = std::max(metrics_.peak_machine_memory_words, words);
    if (words > S_) report({round_, machine, ViolationKind::memory, words});
}

void MpcContext::scatter_input(std::span<const Word> data, const std::string& buffer,
                               std::uint64_t block) {
    if (block == 0) block = S_;
    if (data.size() > static_cast<std::uint64_t>(M_) * block) {
        Violation v{round_, M_ - 1, ViolationKind::memory, data.size() - (M_ - 1) * block};
        report(v);
        block = (data.size() + M_ - 1) / M_;
    }
    for (std::size_t i = 0; i < M_; ++i) {
        std::uint64_t lo = std::min<std::uint64_t>(i * block, data.size());
        std::uint64_t hi = std::min<std::uint64_t>(lo + block, data.size());
        auto& b = states_[i].buf(buffer);
        b.assign(data.begin() + lo, data.begin() + hi);
        note_memory(i, states_[i].words());
    }
}

void MpcContext::run_round(const Program& program) {
    for (std::size_t i = 0; i < M_; ++i) {
        std::uint64_t in_words = 0;
        for (const auto& m : inboxes_[i]) in_words += m.words();
        std::uint64_t before = states_[i].words() + in_words;

        Machine view(*this, i, states_[i], inboxes_[i]);
        program(view);

        std::uint64_t after = states_[i].words() + view.out_words_;
        note_memory(i, std::max(before, after));
        metrics_.total_work_ops += view.work_ + in_words + view.out_words_;
        for (auto& m : view.out_) pending_[m.dst].push_back(std::move(m));
        inboxes_[i].clear();
    }
}

void MpcContext::exchange() {
    std::uint64_t sent = 0, received = 0;
    for (const auto& q : pending_)
        for (const auto& m : q) sent += m.words();
    for (std::size_t d = 0; d < M_; ++d) {
        std::uint64_t w = 0;
        for (const auto& m : pending_[d]) w += m.words();
        received += w;
        metrics_.peak_round_receive_words = std::max(metrics_.peak_round_receive_words, w);
        if (w > S_) report({round_, d, ViolationKind::receive, w});
    }
    for (std::size_t d = 0; d < M_; ++d) {
        std::stable_sort(pending_[d].begin(), pending_[d].end(),
                         [](const Message& a, const Message& b) { return a.src < b.src; });
        for (auto& m : pending_[d]) {
            if (log_messages_) log_.push_back(m);
            inboxes_[d].push_back(std::move(m));
        }
        pending_[d].clear();
    }
    last_sent_ = sent;
    last_received_ = received;
    ++round_;
}

MetricsReport MpcContext::metrics() const {
    MetricsReport r = metrics_;
    r.rounds = round_;
    return r;
}

BlockLayout BlockLayout::balanced(std::uint64_t length, std::size_t machines) {
    BlockLayout l;
    l.length = length;
    l.machines = machines;
    l.block = std::max<std::uint64_t>(1, (length + machines - 1) / machines);
    return l;
}

std::uint64_t BlockLayout::begin(std::size_t i) const {
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(i) * block, length);
}

std::uint64_t BlockLayout::end(std::size_t i) const {
    return std::min<std::uint64_t>(begin(i) + block, length);
}

BlockLayout scatter_balanced(MpcContext& ctx, std::span<const Word> data, const std::string& buffer) {
    auto layout = BlockLayout::balanced(data.size(), ctx.machines());
    ctx.scatter_input(data, buffer, layout.block);
    return layout;
}

std::vector<Word> gather(const MpcContext& ctx, const std::string& buffer) {
    std::vector<Word> out;
    for (std::size_t i = 0; i < ctx.machines(); ++i) {
        if (!ctx.state(i).has(buffer)) continue;
        const auto& b = ctx.state(i).at(buffer);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

namespace {

using Rec = std::span<const Word>;

bool rec_less(const Word* a, const Word* b, std::size_t w) {
    return std::lexicographical_compare(a, a + w, b, b + w);
}

void sort_records(std::vector<Word>& data, std::size_t w) {
    std::size_t n = data.size() / w;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return rec_less(&data[a * w], &data[b * w], w); });
    std::vector<Word> out;
    out.reserve(data.size());
    for (auto i : idx) out.insert(out.end(), data.begin() + i * w, data.begin() + (i + 1) * w);
    data.swap(out);
}

}  // namespace

void sample_sort(MpcContext& ctx, const std::string& buffer, std::size_t w) {
    const std::size_t M = ctx.machines();
    const std::uint64_t S = ctx.capacity();
    // Samples per machine, bounded so machine 0 never receives more than about S/2 words.
    const std::size_t per = std::max<std::size_t>(
        1, std::min<std::size_t>(M - 1 == 0 ? 1 : M - 1, S / (2 * M * (w + kRoutingWords))));
    // The splitters go to every machine, so their number is bounded the same way. Bucket b lands
    // on machine b * M / buckets; machines in between stay empty.
    const std::size_t buckets = per + 1 > M ? M : per + 1;
    auto bucket_home = [&](std::size_t b) { return b * M / buckets; };

    ctx.run_round([&](Machine& m) {
        auto& d = m.state().buf(buffer);
        sort_records(d, w);
        std::size_t n = d.size() / w;
        m.add_work(n * (1 + static_cast<std::uint64_t>(std::log2(n + 1))));
        if (n == 0) return;
        std::vector<Word> samples;
        for (std::size_t k = 0; k < per; ++k) {
            std::size_t r = (k * n) / per;
            samples.insert(samples.end(), d.begin() + r * w, d.begin() + (r + 1) * w);
        }
        m.send(0, 0, std::move(samples));
    });
    ctx.exchange();

    ctx.run_round([&](Machine& m) {
        if (m.id() != 0) return;
        std::vector<Word> all;
        for (const auto& msg : m.inbox()) all.insert(all.end(), msg.payload.begin(), msg.payload.end());
        sort_records(all, w);
        std::size_t n = all.size() / w;
        std::vector<Word> splitters;
        for (std::size_t k = 1; k <= buckets - 1 && n > 0; ++k) {
            std::size_t r = (k * n) / buckets;
            splitters.insert(splitters.end(), all.begin() + r * w, all.begin() + (r + 1) * w);
        }
        for (std::size_t dst = 0; dst < M; ++dst) m.send(dst, 0, splitters);
    });
    ctx.exchange();

    ctx.run_round([&](Machine& m) {
        const auto& sp = m.inbox().empty() ? std::vector<Word>{} : m.inbox()[0].payload;
        std::size_t nsp = sp.size() / w;
        auto& d = m.state().buf(buffer);
        std::size_t n = d.size() / w;
        std::vector<std::vector<Word>> out(M);
        std::size_t bucket = 0;
        for (std::size_t r = 0; r < n; ++r) {
            const Word* rec = &d[r * w];
            while (bucket < nsp && !rec_less(rec, &sp[bucket * w], w)) ++bucket;
            auto& o = out[bucket_home(bucket)];
            o.insert(o.end(), rec, rec + w);
        }
        d.clear();
        for (std::size_t dst = 0; dst < M; ++dst)
            if (!out[dst].empty()) m.send(dst, 0, std::move(out[dst]));
    });
    ctx.exchange();

    ctx.run_round([&](Machine& m) {
        auto& d = m.state().buf(buffer);
        for (const auto& msg : m.inbox()) d.insert(d.end(), msg.payload.begin(), msg.payload.end());
        sort_records(d, w);
    });
}

}  // namespace mpcsm
