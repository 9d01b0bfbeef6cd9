// One line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "markovforge/classifier.hpp"
#include "markovforge/graph.hpp"
#include "markovforge/oracle.hpp"
#include "markovforge/spectrum_file.hpp"

using namespace markovforge;

namespace {

const char* const kBetas[] = {"2", "3", "exp(7/10)", "8"};
constexpr Bits kBits = 256;

Rational ten_to_minus(int e) { return Rational(BigInt(1), BigInt(10) * [&] { BigInt t = 1; for (int i = 1; i < e; ++i) t *= 10; return t; }()); }

struct Outcome {
    bool passed = true;
    std::vector<std::string> failures;
    std::vector<std::string> info;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            failures.push_back(what);
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mid(const CReal& x) { return mpfr_get_d(x.midpoint().get(), MPFR_RNDN); }

bool within(const CReal& value, const CReal& target, const Rational& tol) {
    return value.overlaps(target) && certainly_less(value.width(), tol) && certainly_less(target.width(), tol);
}

LoopSpectrum build(const std::string& beta, std::size_t n = 64) { return build_spectrum(BetaValue::parse(beta), n); }

Outcome criterion1() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    for (const std::string beta : kBetas) {
        const LoopSpectrum s = build(beta);
        const CReal b = eval_beta(BetaValue::parse(beta), kBits);
        const CReal one = CReal::from_integer(1L, kBits);
        const CReal c = (b - one) * (b - one);
        out.require(s.a[1] == 1, beta + ": a(1) != 1");
        const CReal sum = partial_sum(s, one / b) + s.meta.tail_mass;
        out.require(sum.contains(Rational(1)), beta + ": sum does not contain 1");
        out.require(certainly_less(sum.width(), ten_to_minus(30)), beta + ": sum width >= 1e-30");
        for (unsigned long n = 2; n <= 8; ++n) {
            const CReal lower = c * pow(b, n * n - n);
            const CReal a = CReal::from_integer(s.a[n * n], kBits);
            if (!certainly_less_equal(lower, a)) out.require(false, beta + ": c beta^(n^2-n) > a(n^2) at n = " + std::to_string(n));
            if (!certainly_less_equal(a, lower + s.meta.M)) out.require(false, beta + ": a(n^2) > c beta^(n^2-n) + M at n = " + std::to_string(n));
        }
        for (std::size_t n = 2; n <= 64; ++n) {
            const auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
            if (r * r == n) continue;
            out.require(certainly_less_equal(CReal::from_integer(s.a[n], kBits), s.meta.M),
                        beta + ": a(" + std::to_string(n) + ") > M");
        }
    }
    const double elapsed = seconds_since(t0);
    out.require(elapsed < 10, "runtime " + std::to_string(elapsed) + " s");
    out.info.push_back("runtime " + std::to_string(elapsed).substr(0, 5) + " s");
    return out;
}

Outcome criterion2() {
    Outcome out;
    const LoopSpectrum s = build("2", 16);
    out.require(s.meta.c.is_exact() && s.meta.c.contains(Rational(1)), "c != 1");
    out.require(s.meta.delta.is_exact() && s.meta.delta.contains(Rational(0)), "delta != 0");
    out.require(s.meta.k == 0, "k != 0");
    out.require(s.a[4] == 4, "a(4) != 4");
    out.require(s.a[9] == 64, "a(9) != 64");
    for (std::size_t n = 2; n <= 16; ++n)
        if (n != 4 && n != 9) out.require(s.a[n] == 0, "a(" + std::to_string(n) + ") = " + s.a[n].get_str() + ", expected 0");
    return out;
}

Outcome criterion3() {
    Outcome out;
    for (const std::string beta : kBetas) {
        const LoopSpectrum s = build(beta);
        const ClassificationReport r = classify(s);
        const CReal b = eval_beta(BetaValue::parse(beta), kBits);
        out.require(r.verdict == Verdict::PositiveRecurrent, beta + ": verdict " + to_string(r.verdict));
        out.require(r.R && r.R->overlaps(CReal::from_integer(1L, kBits) / b), beta + ": R does not enclose 1/beta");
        out.require(r.entropy && within(*r.entropy, log(b), ten_to_minus(20)), beta + ": entropy not log beta within 1e-20");
        out.require(r.has_mme == true, beta + ": has_mme != true");
    }
    return out;
}

Outcome criterion4() {
    Outcome out;
    for (const std::string beta : kBetas) {
        const LoopSpectrum s = delete_loop(build(beta));
        const ClassificationReport r = classify(s);
        const CReal b = eval_beta(BetaValue::parse(beta), kBits);
        const CReal L = CReal::from_integer(1L, kBits) / b;
        const std::size_t n0 = *s.meta.deleted_loop;
        out.require(r.verdict == Verdict::Transient, beta + ": verdict " + to_string(r.verdict));
        out.require(r.F_at_L && certainly_less(*r.F_at_L, Rational(1)), beta + ": F(L) not certainly < 1");
        out.require(r.F_at_L && within(*r.F_at_L, CReal::from_integer(1L, kBits) - pow(L, n0), ten_to_minus(20)),
                    beta + ": F(L) != 1 - L^n0 within 1e-20");
        out.require(r.R && r.R->overlaps(L), beta + ": R != L");
        out.require(r.entropy && within(*r.entropy, log(b), ten_to_minus(20)), beta + ": entropy changed");
        out.require(r.has_mme == false, beta + ": has_mme != false");
    }
    return out;
}

Outcome criterion5() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const double h = std::log(2.0);
    for (const std::size_t p : {1, 2, 3, 5}) {
        const LoopSpectrum s = build_spectrum(cli::beta_from_entropy("ln2", p), 64);
        // Largest loop length keeping the realized lift small.
        std::size_t n = 12;
        while (realized_vertex_count(s, n) * static_cast<unsigned long>(p) > BigInt(200000)) --n;
        const ExplicitGraph g = lift_period(realize(s, n), p);
        const auto counts = count_paths(g, g.root(), g.root(), n * p);
        out.require(period(g) == p && support_gcd(counts) == p, "p = " + std::to_string(p) + ": period " + std::to_string(period(g)));
        const PathCountTable table = table_from_spectrum(s, 64 * p, p);
        const GrowthEstimate growth = growth_rate(table.p, 1);
        const double estimate = mid(growth.last);
        out.require(std::abs(estimate - h) < 0.05, "p = " + std::to_string(p) + ": growth " + std::to_string(estimate));
        out.info.push_back("p=" + std::to_string(p) + " growth " + std::to_string(estimate).substr(0, 6));
    }
    const double elapsed = seconds_since(t0);
    out.require(elapsed < 30, "runtime " + std::to_string(elapsed) + " s");
    return out;
}

Outcome criterion6() {
    Outcome out;
    std::vector<std::pair<std::string, ExplicitGraph>> graphs;
    for (const std::string beta : {"2", "3", "exp(7/10)"}) {
        const LoopSpectrum s = build(beta, 16);
        graphs.emplace_back(beta, realize(s, 12));
        graphs.emplace_back(beta + " deleted", realize(delete_loop(s), 12));
    }
    const LoopSpectrum b2 = build("2", 16);
    graphs.emplace_back("2 lift 2", lift_period(realize(b2, 12), 2));
    graphs.emplace_back("2 lift 3", lift_period(realize(b2, 12), 3));
    graphs.emplace_back("support {2,4}", realize(LoopSpectrum::from_counts({0, 1, 0, 1}, GrowthModel::Finite), 4));
    graphs.emplace_back("a = (1,2,0,3)", realize(LoopSpectrum::from_counts({1, 2, 0, 3}, GrowthModel::Finite), 4));
    for (const auto& [name, g] : graphs) {
        const std::size_t depth = 12;
        const auto dp = count_paths(g, g.root(), g.root(), depth);
        const auto first = count_first_returns(g, g.root(), depth);
        std::vector<BigInt> walked;
        try {
            walked = enumerate_paths(g, g.root(), g.root(), depth);
        } catch (const GraphTooLarge&) {
            out.require(false, name + ": enumeration over the cap");
            continue;
        }
        out.require(walked == dp, name + ": enumeration != DP");
        out.require(renewal_convolve(first, depth) == dp, name + ": renewal != DP");
        const LoopSpectrum& s = *g.source_spectrum();
        out.require(first == lifted_first_returns(s, depth, g.period_lift()), name + ": first returns != spectrum");
    }
    out.info.push_back(std::to_string(graphs.size()) + " graphs");
    return out;
}

Outcome criterion7() {
    Outcome out;
    const PathCountTable t = table_from_spectrum(build("2"), 64);
    const double h = std::log(2.0);
    double previous = 1e9;
    std::ostringstream trail;
    for (const std::size_t n : {8, 16, 32, 64}) {
        const double est = std::log(t.p[n].get_d()) / static_cast<double>(n);
        const double dev = std::abs(est - h);
        trail << " n=" << n << ":" << est;
        out.require(dev <= previous, "deviation grows at n = " + std::to_string(n));
        previous = dev;
    }
    out.require(previous < 0.05, "deviation at 64 is " + std::to_string(previous));
    out.info.push_back(trail.str().substr(1));
    return out;
}

Outcome criterion8() {
    Outcome out;
    const LoopSpectrum s = build("2");
    const auto scaled = [](const PathCountTable& t, std::size_t n) -> Rational {
        return Rational(t.p[n]) / Rational(BigInt(1) << static_cast<unsigned long>(n));
    };
    const PathCountTable pr = table_from_spectrum(s, 64);
    Rational lo = scaled(pr, 32), hi = lo;
    for (std::size_t n = 32; n <= 64; ++n) {
        lo = std::min(lo, scaled(pr, n));
        hi = std::max(hi, scaled(pr, n));
    }
    out.require(lo > 0 && hi <= 2 * lo, "positive recurrent band exceeds a factor 2");
    out.info.push_back("recurrent in [" + std::to_string(lo.get_d()).substr(0, 6) + ", " + std::to_string(hi.get_d()).substr(0, 6) + "]");

    const PathCountTable tr = table_from_spectrum(delete_loop(s), 64);
    std::string rises;
    for (std::size_t n = 33; n <= 64; ++n)
        if (scaled(tr, n) >= scaled(tr, n - 1)) rises += (rises.empty() ? "" : ",") + std::to_string(n);
    out.require(rises.empty(), "transient window not decreasing; rises at n = " + rises);
    out.info.push_back("transient " + std::to_string(scaled(tr, 32).get_d()).substr(0, 6) + " -> " +
                       std::to_string(scaled(tr, 64).get_d()).substr(0, 6));
    return out;
}

Outcome criterion9() {
    Outcome out;
    for (const std::string beta : {"2", "exp(7/10)"}) {
        SpectrumFile file;
        file.spectrum = build(beta);
        const std::string text = write_spectrum_file(file);
        const SpectrumFile back = read_spectrum_file(text);
        out.require(back == file, beta + ": spectrum file does not read back equal");
        out.require(write_spectrum_file(back) == text, beta + ": spectrum file bytes differ after round trip");
        SpectrumFile again;
        again.spectrum = build(beta);
        out.require(write_spectrum_file(again) == text, beta + ": two builds differ");

        const SpectrumFile transient{1, delete_loop(file.spectrum), {}, 1};
        out.require(read_spectrum_file(write_spectrum_file(transient)) == transient, beta + ": deleted variant round trip");

        for (const std::size_t p : {1, 3}) {
            const ExplicitGraph g = lift_period(realize(file.spectrum, 9), p);
            const std::string json = export_graph(g, ExportFormat::Json);
            const ExplicitGraph g2 = import_graph_json(json);
            out.require(g2 == g && export_graph(g2, ExportFormat::Json) == json, beta + ": graph JSON round trip");
            out.require(export_graph(g2, ExportFormat::Dot) == export_graph(g, ExportFormat::Dot), beta + ": DOT differs");
            out.require(export_graph(lift_period(realize(again.spectrum, 9), p), ExportFormat::Dot) ==
                            export_graph(g, ExportFormat::Dot),
                        beta + ": two exports differ");
        }
        std::ostringstream r1, r2, err;
        const std::string path = "/tmp/markovforge_acceptance_" + std::to_string(std::hash<std::string>{}(beta)) + ".json";
        save_spectrum_file(file, path);
        cli::cmd_classify({path}, r1, err);
        cli::cmd_classify({path}, r2, err);
        out.require(r1.str() == r2.str() && !r1.str().empty(), beta + ": classify output differs between runs");
        std::remove(path.c_str());
    }
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 construction properties (beta in 2, 3, e^0.7, 8; N = 64)", criterion1},
        {"2 beta = 2 exact values", criterion2},
        {"3 positive recurrent side", criterion3},
        {"4 transient side after deleting a loop", criterion4},
        {"5 period lifts p = 1, 2, 3, 5 at h = ln 2", criterion5},
        {"6 oracle equivalence at N = 12", criterion6},
        {"7 entropy convergence for beta = 2", criterion7},
        {"8 p(n) 2^-n trend over n = 32..64", criterion8},
        {"9 round trip and determinism", criterion9},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.passed = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << name;
        std::string detail;
        for (const auto& f : o.failures) detail += (detail.empty() ? "" : "; ") + f;
        for (const auto& i : o.info) detail += (detail.empty() ? "" : "; ") + i;
        if (!detail.empty()) std::cout << " | " << detail;
        std::cout << "\n";
        failed += o.passed ? 0 : 1;
    }
    std::cout << (9 - failed) << "/9 criteria pass\n";
    return failed == 0 ? 0 : 1;
}
