#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpcsm {

using Word = std::uint64_t;

// Every message carries one routing word on top of its payload.
inline constexpr std::uint64_t kRoutingWords = 1;

enum class Enforce { strict, record_only };

struct MpcConfig {
    std::uint64_t n = 1;
    double x = 0.5;
    double slack_c = 4.0;
    int slack_log_exp = 2;
    Enforce enforce = Enforce::strict;
};

// M = ceil(n^x), S = ceil(slack_c * n^(1-x) * log2(n+2)^slack_log_exp).
std::size_t derived_machines(const MpcConfig& cfg);
std::uint64_t derived_capacity(const MpcConfig& cfg);
void validate(const MpcConfig& cfg);

enum class ViolationKind { memory, receive };

struct Violation {
    std::uint64_t round = 0;
    std::size_t machine = 0;
    ViolationKind kind = ViolationKind::memory;
    std::uint64_t amount = 0;
    bool operator==(const Violation&) const = default;
};

struct MetricsReport {
    std::uint64_t rounds = 0;
    std::uint64_t peak_machine_memory_words = 0;
    std::uint64_t peak_round_receive_words = 0;
    std::uint64_t total_work_ops = 0;
    std::vector<Violation> violations;
    bool operator==(const MetricsReport&) const = default;
};

std::string to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const std::string& text);

// A mode or algorithm precondition does not hold (bad sizes, malformed pattern, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class BudgetViolation : public std::runtime_error {
public:
    explicit BudgetViolation(const Violation& v);
    const Violation& violation() const noexcept { return v_; }

private:
    Violation v_;
};

struct Message {
    std::size_t src = 0;
    std::size_t dst = 0;
    Word tag = 0;
    std::vector<Word> payload;
    std::uint64_t words() const { return payload.size() + kRoutingWords; }
    bool operator==(const Message&) const = default;
};

// Named word buffers; resident size is the sum of all buffer lengths.
class MachineState {
public:
    std::vector<Word>& buf(const std::string& name) { return bufs_[name]; }
    const std::vector<Word>& at(const std::string& name) const;
    bool has(const std::string& name) const { return bufs_.count(name) != 0; }
    void erase(const std::string& name) { bufs_.erase(name); }
    void clear() { bufs_.clear(); }
    std::uint64_t words() const;
    bool operator==(const MachineState&) const = default;

private:
    std::map<std::string, std::vector<Word>> bufs_;
};

class MpcContext;

// What a program sees during one round: its own state and inbox, nothing else.
class Machine {
public:
    std::size_t id() const { return id_; }
    std::size_t machines() const;
    std::uint64_t capacity() const;
    MachineState& state() { return *state_; }
    const std::vector<Message>& inbox() const { return *inbox_; }
    void send(std::size_t dst, Word tag, std::vector<Word> payload);
    void add_work(std::uint64_t ops) { work_ += ops; }

private:
    friend class MpcContext;
    Machine(const MpcContext& ctx, std::size_t id, MachineState& st, const std::vector<Message>& inbox)
        : ctx_(&ctx), id_(id), state_(&st), inbox_(&inbox) {}
    const MpcContext* ctx_;
    std::size_t id_;
    MachineState* state_;
    const std::vector<Message>* inbox_;
    std::vector<Message> out_;
    std::uint64_t out_words_ = 0;
    std::uint64_t work_ = 0;
};

using Program = std::function<void(Machine&)>;

class MpcContext {
public:
    explicit MpcContext(const MpcConfig& cfg);

    const MpcConfig& config() const { return cfg_; }
    std::size_t machines() const { return M_; }
    std::uint64_t capacity() const { return S_; }
    std::uint64_t round() const { return round_; }

    // Machine i receives words [i*block, (i+1)*block). block = 0 means S.
    // Not a round: only exchange barriers are counted.
    void scatter_input(std::span<const Word> data, const std::string& buffer = "input",
                       std::uint64_t block = 0);

    void run_round(const Program& program);
    void exchange();

    MetricsReport metrics() const;

    MachineState& state(std::size_t i) { return states_.at(i); }
    const MachineState& state(std::size_t i) const { return states_.at(i); }
    const std::vector<Message>& inbox(std::size_t i) const { return inboxes_.at(i); }

    void set_message_logging(bool on) { log_messages_ = on; }
    const std::vector<Message>& message_log() const { return log_; }
    std::uint64_t last_sent_words() const { return last_sent_; }
    std::uint64_t last_received_words() const { return last_received_; }

private:
    void note_memory(std::size_t machine, std::uint64_t words);
    void report(const Violation& v);

    MpcConfig cfg_;
    std::size_t M_;
    std::uint64_t S_;
    std::uint64_t round_ = 0;
    std::vector<MachineState> states_;
    std::vector<std::vector<Message>> inboxes_;
    std::vector<std::vector<Message>> pending_;
    MetricsReport metrics_;
    bool log_messages_ = false;
    std::vector<Message> log_;
    std::uint64_t last_sent_ = 0;
    std::uint64_t last_received_ = 0;
};

// Contiguous equal blocks of ceil(length / machines) items.
struct BlockLayout {
    std::uint64_t length = 0;
    std::uint64_t block = 1;
    std::size_t machines = 1;

    static BlockLayout balanced(std::uint64_t length, std::size_t machines);
    std::size_t owner(std::uint64_t pos0) const { return static_cast<std::size_t>(pos0 / block); }
    std::uint64_t begin(std::size_t i) const;
    std::uint64_t end(std::size_t i) const;
    std::uint64_t size(std::size_t i) const { return end(i) - begin(i); }
};

BlockLayout scatter_balanced(MpcContext& ctx, std::span<const Word> data, const std::string& buffer);
std::vector<Word> gather(const MpcContext& ctx, const std::string& buffer);

// Distributed sort of fixed-width records (lexicographic on all words).
// Regular-sampling sample sort: samples to machine 0, splitters broadcast, buckets routed.
// Exactly 3 exchanges. On return the buckets are spread over the machines in order: every
// record on machine i precedes every record on machine j > i. Some machines may be empty.
void sample_sort(MpcContext& ctx, const std::string& buffer, std::size_t record_words);

}  // namespace mpcsm
