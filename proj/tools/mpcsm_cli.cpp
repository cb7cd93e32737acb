// Command-line front end: match, gen, bench, fft, oracle.
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpus.hpp"
#include "mpcsm/exact_match.hpp"
#include "mpcsm/fft.hpp"
#include "mpcsm/oracles.hpp"
#include "mpcsm/plus.hpp"
#include "mpcsm/question.hpp"
#include "mpcsm/star.hpp"

using json = nlohmann::ordered_json;
using namespace mpcsm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitMismatch = 3;

struct RunSpec {
    std::string mode = "exact";
    std::string text_file;
    std::string text_inline;
    bool have_inline = false;
    std::string pattern;
    double x = 0.5;
    double slack_c = 4.0;
    int slack_log_exp = 2;
    bool strict = false;
    bool verify = false;
    std::uint64_t seed = 1;
    std::string json_path;
    std::string q_backend = "ntt";
    std::string plus_pipeline = "direct";
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << body;
}

std::string load_text(const RunSpec& s) {
    if (s.have_inline) return s.text_inline;
    if (s.text_file.empty()) throw UsageError("one of --text or --text-inline is required");
    return read_file(s.text_file);
}

MpcConfig make_config(const RunSpec& s, std::uint64_t n) {
    MpcConfig cfg;
    cfg.n = std::max<std::uint64_t>(1, n);
    cfg.x = s.x;
    cfg.slack_c = s.slack_c;
    cfg.slack_log_exp = s.slack_log_exp;
    cfg.enforce = s.strict ? Enforce::strict : Enforce::record_only;
    try {
        validate(cfg);
    } catch (const std::exception& e) {
        throw PreconditionError(e.what());
    }
    return cfg;
}

json positions(const MatchSet& ms) { return json(ms.positions); }

json spans_json(const SpanSet& s) {
    json a = json::array();
    for (const auto& [b, e] : s) a.push_back({b, e});
    return a;
}

// Runs the brute-force matcher for whatever wildcard class the pattern uses.
json oracle_result(const std::string& text, const std::string& pattern) {
    const Pattern p = parse_pattern(pattern);
    json out;
    if (contains(p, TokenKind::star)) {
        out["decision"] = oracle::naive_star(text, p);
    } else if (contains(p, TokenKind::plus)) {
        out["spans"] = spans_json(oracle::naive_plus_spans(text, p));
    } else {
        out["matches"] = positions(oracle::naive_question(text, p));
    }
    return out;
}

json run_match(const RunSpec& s, std::uint64_t* rounds = nullptr) {
    const std::string text = load_text(s);
    if (s.pattern.empty()) throw UsageError("--pattern is required");
    const Pattern p = parse_pattern(s.pattern);
    json rep;
    rep["mode"] = s.mode;
    rep["n"] = text.size();
    rep["m"] = p.size();
    rep["pattern"] = s.pattern;

    if (s.mode == "oracle") {
        const json res = oracle_result(text, s.pattern);
        for (const auto& [k, v] : res.items()) rep[k] = v;
        if (s.verify) rep["oracle_checked"] = true;
        return rep;
    }

    MpcContext ctx(make_config(s, text.size()));
    rep["config"] = {{"x", s.x},
                     {"slack_c", s.slack_c},
                     {"slack_log_exp", s.slack_log_exp},
                     {"strict", s.strict},
                     {"seed", s.seed},
                     {"machines", ctx.machines()},
                     {"capacity", ctx.capacity()}};
    bool ok = true;
    if (s.mode == "exact" || s.mode == "exact-small") {
        const std::string lit = literal_bytes(p);
        const MatchSet ms = s.mode == "exact" ? match_large_pattern(ctx, text, lit, HashParams::seeded(s.seed))
                                              : match_small_pattern(ctx, text, lit);
        rep["matches"] = positions(ms);
        if (s.verify) ok = ms == oracle::naive_exact(text, lit);
    } else if (s.mode == "q") {
        QuestionOptions opt;
        if (s.q_backend == "float") opt.mode = QuestionMode::reciprocal;
        else if (s.q_backend != "ntt") throw UsageError("--q-backend must be ntt or float");
        const MatchSet ms = match_question(ctx, text, p, opt);
        rep["matches"] = positions(ms);
        if (s.verify) ok = ms == oracle::naive_question(text, p);
    } else if (s.mode == "plus") {
        PlusPipeline pl = PlusPipeline::direct_subset;
        if (s.plus_pipeline == "gtm") pl = PlusPipeline::letters_counts_gtm;
        else if (s.plus_pipeline != "direct") throw UsageError("--plus-pipeline must be direct or gtm");
        const PlusMatchReport r = match_plus(ctx, text, p, pl);
        rep["alignments"] = json::parse(to_json(r));
        if (s.verify) ok = r.spans() == oracle::naive_plus_spans(text, p);
    } else if (s.mode == "star-dp" || s.mode == "star-nonprefix") {
        const StarPattern sp = split_subpatterns(p);
        const bool d = s.mode == "star-dp" ? star_match_dp(ctx, text, sp)
                                           : star_match_nonprefix(ctx, text, sp, HashParams::seeded(s.seed));
        rep["decision"] = d;
        if (s.verify) ok = d == oracle::naive_star(text, p);
    } else {
        throw UsageError("unknown mode: " + s.mode);
    }
    rep["metrics"] = json::parse(to_json(ctx.metrics()));
    if (rounds) *rounds = ctx.metrics().rounds;
    if (s.verify) {
        rep["oracle_checked"] = true;
        rep["oracle_agrees"] = ok;
    }
    return rep;
}

void add_run_flags(CLI::App* cmd, RunSpec& s, bool with_mode) {
    if (with_mode)
        cmd->add_option("--mode", s.mode, "Matcher")
            ->check(CLI::IsMember({"exact", "exact-small", "q", "plus", "star-dp", "star-nonprefix", "oracle"}));
    auto* tf = cmd->add_option("--text", s.text_file, "Text file (raw bytes)");
    auto* ti = cmd->add_option("--text-inline", s.text_inline, "Text given on the command line");
    ti->excludes(tf);
    cmd->add_option("--pattern", s.pattern, "Pattern; escape wildcards as \\? \\+ \\* \\\\");
    cmd->add_option("--x", s.x, "Memory exponent: M = n^x machines")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--slack-c", s.slack_c, "Capacity constant");
    cmd->add_option("--slack-log-exp", s.slack_log_exp, "Exponent of the log factor in the capacity");
    cmd->add_flag("--strict", s.strict, "Abort on the first memory or receive violation");
    cmd->add_flag("--verify", s.verify, "Check the result against the brute-force oracle");
    cmd->add_option("--seed", s.seed, "Seed for hash parameters");
    cmd->add_option("--json", s.json_path, "Write the report here instead of stdout");
    cmd->add_option("--q-backend", s.q_backend, "'?' matcher arithmetic: ntt or float");
    cmd->add_option("--plus-pipeline", s.plus_pipeline, "'+' matcher reduction: direct or gtm");
}

ComplexVector read_complex(std::istream& in) {
    ComplexVector v;
    double re = 0, im = 0;
    while (in >> re) {
        if (!(in >> im)) throw UsageError("odd number of values in complex input");
        v.emplace_back(re, im);
    }
    if (!in.eof()) throw UsageError("malformed complex input");
    return v;
}

ComplexVector read_complex_file(const std::string& path) {
    if (path.empty() || path == "-") return read_complex(std::cin);
    std::istringstream ss(read_file(path));
    return read_complex(ss);
}

std::string format_complex(const ComplexVector& v) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (const auto& c : v) os << c.real() << ' ' << c.imag() << '\n';
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MPC string matching simulator"};
    app.require_subcommand(1);

    RunSpec match_spec;
    auto* match = app.add_subcommand("match", "Run one matcher and print a JSON report");
    add_run_flags(match, match_spec, true);

    RunSpec oracle_spec;
    oracle_spec.mode = "oracle";
    auto* orc = app.add_subcommand("oracle", "Brute-force answer for a text and pattern");
    add_run_flags(orc, oracle_spec, false);

    std::string gen_kind = "random", gen_out;
    std::uint64_t gen_n = 64, gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "Generate a deterministic corpus");
    gen->add_option("--kind", gen_kind)->check(
        CLI::IsMember({"random", "periodic", "adversarial-plus", "prefix-free-star"}));
    gen->add_option("--n", gen_n)->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_out, "Writes <out>.text and <out>.pattern; stdout gets JSON otherwise");

    std::vector<std::string> bench_modes;
    std::vector<std::uint64_t> bench_ns;
    std::vector<double> bench_xs{0.5};
    std::string bench_csv;
    RunSpec bench_spec;
    auto* bench = app.add_subcommand("bench", "Run a grid of matchers and print CSV");
    bench->add_option("--mode", bench_modes)->check(
        CLI::IsMember({"exact", "exact-small", "q", "plus", "star-dp", "star-nonprefix"}));
    bench->add_option("--n", bench_ns);
    bench->add_option("--x", bench_xs);
    bench->add_option("--slack-c", bench_spec.slack_c);
    bench->add_option("--slack-log-exp", bench_spec.slack_log_exp);
    bench->add_flag("--strict", bench_spec.strict);
    bench->add_option("--seed", bench_spec.seed);
    bench->add_option("--csv", bench_csv, "Output file (default stdout)");

    std::string fft_in, fft_out, fft_with;
    RunSpec fft_spec;
    auto* fft = app.add_subcommand("fft", "Distributed transform of whitespace-separated (re, im) pairs");
    fft->add_option("--input", fft_in, "Input file (default stdin)");
    fft->add_option("--output", fft_out, "Output file (default stdout)");
    fft->add_option("--convolve", fft_with, "Second input: print the convolution instead");
    fft->add_option("--x", fft_spec.x);
    fft->add_option("--slack-c", fft_spec.slack_c);
    fft->add_option("--slack-log-exp", fft_spec.slack_log_exp);
    fft->add_flag("--strict", fft_spec.strict);
    fft->add_option("--json", fft_spec.json_path, "Metrics report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*match || *orc) {
            RunSpec& s = *match ? match_spec : oracle_spec;
            s.have_inline = (*match ? match : orc)->count("--text-inline") > 0;
            const json rep = run_match(s);
            write_output(s.json_path, rep.dump(2) + "\n");
            if (rep.contains("oracle_agrees") && !rep["oracle_agrees"].get<bool>()) {
                std::cerr << "verification failed: result differs from the oracle\n";
                return kExitMismatch;
            }
        } else if (*gen) {
            const auto in = corpus::generate(corpus::parse_kind(gen_kind), gen_n, gen_seed);
            if (gen_out.empty()) {
                write_output("", json{{"kind", gen_kind}, {"n", gen_n}, {"seed", gen_seed},
                                      {"text", in.text}, {"pattern", in.pattern}}.dump(2) + "\n");
            } else {
                write_output(gen_out + ".text", in.text);
                write_output(gen_out + ".pattern", in.pattern);
            }
        } else if (*bench) {
            std::ostringstream csv;
            csv << "mode,n,x,rounds,peak_memory,peak_receive,wall_time\n";
            for (const auto& mode : bench_modes)
                for (auto n : bench_ns)
                    for (double x : bench_xs) {
                        RunSpec s = bench_spec;
                        s.mode = mode;
                        s.x = x;
                        s.have_inline = true;
                        s.text_inline = corpus::random_text(n, 4, s.seed + n);
                        s.pattern = corpus::pattern_for_mode(mode, s.text_inline, s.seed + n);
                        const auto t0 = std::chrono::steady_clock::now();
                        const json rep = run_match(s);
                        const double secs =
                            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                        const auto& mt = rep["metrics"];
                        csv << mode << ',' << n << ',' << x << ',' << mt["rounds"] << ','
                            << mt["peak_machine_memory_words"] << ',' << mt["peak_round_receive_words"] << ','
                            << secs << '\n';
                    }
            write_output(bench_csv, csv.str());
        } else if (*fft) {
            const ComplexVector a = read_complex_file(fft_in);
            if (a.empty()) throw UsageError("empty input");
            ComplexVector out;
            std::uint64_t n = a.size();
            ComplexVector b;
            if (!fft_with.empty()) {
                b = read_complex_file(fft_with);
                if (b.empty()) throw UsageError("empty second input");
                n = a.size() + b.size() - 1;
            }
            MpcContext ctx(make_config(fft_spec, n));
            out = fft_with.empty() ? mpc_fft(ctx, a) : mpc_convolution(ctx, a, b);
            write_output(fft_out, format_complex(out));
            if (!fft_spec.json_path.empty()) write_output(fft_spec.json_path, to_json(ctx.metrics()) + "\n");
        }
    } catch (const BudgetViolation& e) {
        std::cerr << "budget violation: " << e.what() << "\n";
        return kExitBudget;
    } catch (const PrecisionError& e) {
        std::cerr << "precision: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
