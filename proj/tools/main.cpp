// Command-line front end for the synaptic-algebra toolkit.
//
// Commands operate on JSON pair documents {"dim": n, "p": [[...]], "e": [[...]],
// "tol": {...}} and print deterministic JSON (fixed key order, 17 significant
// digits, no timing fields) or a human-readable text summary.
//
// Exit codes: 0 success, 1 violated invariant or failed check, 2 invalid
// input or usage.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "synalg/cbs.hpp"
#include "synalg/commutator.hpp"
#include "synalg/effect.hpp"
#include "synalg/errors.hpp"
#include "synalg/infimum.hpp"
#include "synalg/json_io.hpp"
#include "synalg/lattice.hpp"
#include "synalg/verify.hpp"

namespace {

using namespace synalg;

// ---------------------------------------------------------------- utilities

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string short_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// Deterministic JSON object writer: insertion order, no whitespace.
struct JsonObj {
    std::string s = "{";
    bool first = true;

    void key(std::string_view k) {
        if (!first) s += ',';
        first = false;
        s += '"';
        s += json_escape(k);
        s += "\":";
    }
    void raw(std::string_view k, std::string_view payload) {
        key(k);
        s += payload;
    }
    void str(std::string_view k, std::string_view v) {
        key(k);
        s += '"';
        s += json_escape(v);
        s += '"';
    }
    void num(std::string_view k, double v) { raw(k, format_double(v)); }
    void integer(std::string_view k, long long v) { raw(k, std::to_string(v)); }
    void boolean(std::string_view k, bool v) { raw(k, v ? "true" : "false"); }
    std::string done() {
        s += '}';
        return std::move(s);
    }
};

std::string tol_to_json(const ToleranceConfig& tol) {
    JsonObj o;
    o.num("rank_eps", tol.rank_eps);
    o.num("comm_eps", tol.comm_eps);
    o.num("psd_eps", tol.psd_eps);
    o.num("eig_off_eps", tol.eig_off_eps);
    return o.done();
}

template <class T>
std::string array_to_json(const std::vector<T>& items, std::string (*render)(const T&)) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ',';
        s += render(items[i]);
    }
    return s + "]";
}

std::string doubles_to_json(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s + "]";
}

void emit_pair_echo(JsonObj& o, const Projection& p, const Effect& e,
                    const ToleranceConfig& tol) {
    o.integer("dim", static_cast<long long>(p.mat().dim()));
    o.raw("p", matrix_to_json(p.mat()));
    o.raw("e", matrix_to_json(e.mat()));
    o.raw("tol", tol_to_json(tol));
}

// ---------------------------------------------------------------- documents

std::string decompose_doc(const char* cmd, const Projection& p, const Effect& e,
                          const ToleranceConfig& tol) {
    const CBSDecomposition d = cbs_decompose(p, e, tol);
    const Matrix recon = sym(d.c.mat() * d.c.mat() * p.mat()).mat() +
                         sym(d.b.mat() * d.k.mat()).mat() +
                         sym(d.s.mat() * d.s.mat() * ortho(p).mat()).mat();
    JsonObj o;
    if (cmd) o.str("command", cmd);
    emit_pair_echo(o, p, e, tol);
    o.raw("c", matrix_to_json(d.c.mat()));
    o.raw("s", matrix_to_json(d.s.mat()));
    o.raw("j", matrix_to_json(d.j.mat()));
    o.raw("b", matrix_to_json(d.b.mat()));
    o.raw("k", matrix_to_json(d.k.mat()));
    o.raw("z", matrix_to_json(d.z.mat()));
    o.raw("t", matrix_to_json(d.t.mat()));
    o.raw("offdiag", matrix_to_json(d.offdiag.mat()));
    o.raw("carrier_c", matrix_to_json(d.carrier_c.mat()));
    o.raw("carrier_s", matrix_to_json(d.carrier_s.mat()));
    o.raw("carrier_j", matrix_to_json(d.carrier_j.mat()));
    o.raw("carrier_b", matrix_to_json(d.carrier_b.mat()));
    JsonObj ranks;
    ranks.integer("p", static_cast<long long>(p.rank()));
    ranks.integer("z", static_cast<long long>(d.z.rank()));
    ranks.integer("t", static_cast<long long>(d.t.rank()));
    ranks.integer("carrier_c", static_cast<long long>(d.carrier_c.rank()));
    ranks.integer("carrier_s", static_cast<long long>(d.carrier_s.rank()));
    ranks.integer("carrier_j", static_cast<long long>(d.carrier_j.rank()));
    ranks.integer("carrier_b", static_cast<long long>(d.carrier_b.rank()));
    o.raw("ranks", ranks.done());
    o.num("reconstruction_residual", max_abs_diff(recon, e.mat()));
    o.boolean("projection_free", is_projection_free(e, tol));
    return o.done();
}

std::string commutator_doc(const char* cmd, const Projection& p, const Effect& e,
                           const ToleranceConfig& tol) {
    const PairCommutatorReport rep = inequality_chain(p, e, tol);
    const Projection closure = pair_commutator_via_closure(p, e, tol);
    const SplitReport split = split_by_commutator(p, e, tol);
    const bool closure_agrees =
        closure.rank() == rep.r.rank() && projections_equal(closure, rep.r, 1e-7);
    JsonObj o;
    if (cmd) o.str("command", cmd);
    emit_pair_echo(o, p, e, tol);
    o.raw("r", matrix_to_json(rep.r.mat()));
    o.integer("rank_r", static_cast<long long>(rep.r.rank()));
    o.integer("rank_b_carrier", static_cast<long long>(rep.b_carrier.rank()));
    o.integer("rank_cs_meet", static_cast<long long>(rep.cs_meet.rank()));
    o.raw("b_carrier", matrix_to_json(rep.b_carrier.mat()));
    o.raw("cs_meet", matrix_to_json(rep.cs_meet.mat()));
    o.boolean("closure_agrees", closure_agrees);
    o.boolean("chain_ok", rep.chain_ok);
    o.boolean("b_carrier_equals_r", projections_equal(rep.b_carrier, rep.r, 1e-7));
    o.boolean("e_commutes_b_carrier", commutes(e.element(), rep.b_carrier.element(), tol));
    o.boolean("totally_noncompatible", rep.totally_noncompatible);
    o.boolean("generic_position", rep.generic_position);
    o.num("commuting_corner_residual", split.commuting_corner_residual);
    o.boolean("noncompat_corner_is_unit", split.noncompat_corner_is_unit);
    return o.done();
}

std::string infimum_atom_doc(const char* cmd, const Projection& p, const Effect& e,
                             const ToleranceConfig& tol) {
    const AtomInfimumRecord rec = inf_with_atom_complement(e, p, tol);
    JsonObj o;
    if (cmd) o.str("command", cmd);
    o.str("mode", "atom-complement");
    emit_pair_echo(o, p, e, tol);
    o.num("alpha", rec.alpha);
    o.str("branch",
          rec.branch == AtomInfimumRecord::Branch::alpha_zero ? "alpha-zero" : "general");
    o.raw("infimum", matrix_to_json(rec.infimum.mat()));
    o.boolean("below_e", psd_leq(rec.infimum.element(), e.element(), tol));
    o.boolean("below_target", psd_leq(rec.infimum.element(), ortho(p).element(), tol));
    return o.done();
}

std::string infimum_projection_doc(const char* cmd, const Projection& p, const Effect& e,
                                   const Projection& q, const ToleranceConfig& tol) {
    const Effect m = inf_with_projection(e, q, tol);
    JsonObj o;
    if (cmd) o.str("command", cmd);
    o.str("mode", "projection");
    emit_pair_echo(o, p, e, tol);
    o.raw("q", matrix_to_json(q.mat()));
    o.raw("infimum", matrix_to_json(m.mat()));
    o.boolean("below_e", psd_leq(m.element(), e.element(), tol));
    o.boolean("below_q", psd_leq(m.element(), q.element(), tol));
    return o.done();
}

std::string matrix_render(const Projection& p) { return matrix_to_json(p.mat()); }

std::string spectral_doc(const char* cmd, const Projection& p, const Effect& e,
                         const ToleranceConfig& tol) {
    const SpectralResolution sr = spectral_resolution(e.element(), tol);
    const SubprojectionPair sp = largest_subprojections(e, tol);
    JsonObj o;
    if (cmd) o.str("command", cmd);
    emit_pair_echo(o, p, e, tol);
    o.raw("thresholds", doubles_to_json(sr.thresholds));
    std::string ranks = "[";
    for (std::size_t i = 0; i < sr.cuts.size(); ++i) {
        if (i) ranks += ',';
        ranks += std::to_string(sr.cuts[i].rank());
    }
    o.raw("cut_ranks", ranks + "]");
    o.raw("cuts", array_to_json(sr.cuts, matrix_render));
    o.raw("carrier", matrix_to_json(carrier(e.element(), tol).mat()));
    o.raw("z", matrix_to_json(sp.z.mat()));
    o.raw("t", matrix_to_json(sp.t.mat()));
    o.boolean("projection_free", is_projection_free(e, tol));
    return o.done();
}

std::string verify_doc(const VerificationReport& report) {
    JsonObj o;
    o.str("command", "verify");
    o.integer("seed", static_cast<long long>(report.options.seed));
    o.integer("trials", report.options.trials);
    o.integer("dim_lo", static_cast<long long>(report.options.dim_lo));
    o.integer("dim_hi", static_cast<long long>(report.options.dim_hi));
    o.str("filter", report.options.filter);
    o.raw("tol", tol_to_json(report.options.tol));
    std::string checks = "[";
    for (std::size_t i = 0; i < report.results.size(); ++i) {
        const CheckResult& r = report.results[i];
        if (i) checks += ',';
        JsonObj c;
        c.str("id", r.id);
        c.str("summary", r.summary);
        c.integer("trials", r.trials_run);
        c.integer("failures", r.trials_failed);
        c.num("worst_residual", r.worst_residual);
        if (r.first_failure) {
            JsonObj f;
            f.integer("dim", static_cast<long long>(r.first_failure->dim));
            f.integer("trial", r.first_failure->trial);
            f.str("detail", r.first_failure->detail);
            if (r.first_failure->replay_json.empty())
                f.raw("replay", "null");
            else
                f.raw("replay", r.first_failure->replay_json);
            c.raw("first_failure", f.done());
        } else {
            c.raw("first_failure", "null");
        }
        checks += c.done();
    }
    o.raw("checks", checks + "]");
    o.integer("total_trials", report.total_trials());
    o.integer("total_failures", report.total_failures());
    o.boolean("all_passed", report.all_passed());
    return o.done();
}

std::string example_doc(const Projection& p, const Effect& e, const ToleranceConfig& tol) {
    JsonObj o;
    o.str("command", "example-r3");
    emit_pair_echo(o, p, e, tol);
    o.raw("decomposition", decompose_doc(nullptr, p, e, tol));
    o.raw("commutator", commutator_doc(nullptr, p, e, tol));
    o.raw("infimum", infimum_atom_doc(nullptr, p, e, tol));
    o.raw("spectral", spectral_doc(nullptr, p, e, tol));
    return o.done();
}

// ---------------------------------------------------------------- text mode

void print_decompose_text(const Projection& p, const Effect& e, const ToleranceConfig& tol,
                          double elapsed) {
    const CBSDecomposition d = cbs_decompose(p, e, tol);
    const Matrix recon = sym(d.c.mat() * d.c.mat() * p.mat()).mat() +
                         sym(d.b.mat() * d.k.mat()).mat() +
                         sym(d.s.mat() * d.s.mat() * ortho(p).mat()).mat();
    std::cout << "decomposition in dimension " << p.mat().dim() << "\n"
              << "  rank p = " << p.rank() << ", rank z = " << d.z.rank()
              << ", rank t = " << d.t.rank() << "\n"
              << "  projection-free: " << (is_projection_free(e, tol) ? "yes" : "no") << "\n"
              << "  carriers: c = " << d.carrier_c.rank() << ", s = " << d.carrier_s.rank()
              << ", j = " << d.carrier_j.rank() << ", b = " << d.carrier_b.rank() << "\n"
              << "  |b| = " << short_double(d.b.element().frobenius_norm())
              << ", |j| = " << short_double(d.j.element().frobenius_norm()) << "\n"
              << "  reconstruction residual = " << short_double(max_abs_diff(recon, e.mat()))
              << "\n"
              << "  elapsed " << short_double(elapsed) << " s\n";
}

void print_commutator_text(const Projection& p, const Effect& e, const ToleranceConfig& tol,
                           double elapsed) {
    const PairCommutatorReport rep = inequality_chain(p, e, tol);
    const Projection closure = pair_commutator_via_closure(p, e, tol);
    const SplitReport split = split_by_commutator(p, e, tol);
    std::cout << "pair commutator in dimension " << p.mat().dim() << "\n"
              << "  rank [p,e] = " << rep.r.rank() << " (closure route: " << closure.rank()
              << ")\n"
              << "  rank b carrier = " << rep.b_carrier.rank()
              << ", rank c carrier ^ s carrier = " << rep.cs_meet.rank() << "\n"
              << "  chain b <= b carrier <= [p,e] <= carrier meet: "
              << (rep.chain_ok ? "holds" : "violated") << "\n"
              << "  totally noncompatible: " << (rep.totally_noncompatible ? "yes" : "no")
              << ", generic position: " << (rep.generic_position ? "yes" : "no") << "\n"
              << "  commuting corner residual = "
              << short_double(split.commuting_corner_residual) << "\n"
              << "  elapsed " << short_double(elapsed) << " s\n";
}

void print_infimum_atom_text(const Projection& p, const Effect& e, const ToleranceConfig& tol,
                             double elapsed) {
    const AtomInfimumRecord rec = inf_with_atom_complement(e, p, tol);
    std::cout << "infimum of e with the complement of a rank-one projection\n"
              << "  alpha = " << format_double(rec.alpha) << " (branch: "
              << (rec.branch == AtomInfimumRecord::Branch::alpha_zero ? "alpha-zero" : "general")
              << ")\n"
              << "  trace of infimum = " << format_double(rec.infimum.element().trace()) << "\n"
              << "  below e: " << (psd_leq(rec.infimum.element(), e.element(), tol) ? "yes" : "no")
              << ", below p': "
              << (psd_leq(rec.infimum.element(), ortho(p).element(), tol) ? "yes" : "no") << "\n"
              << "  elapsed " << short_double(elapsed) << " s\n";
}

void print_infimum_projection_text(const Effect& e, const Projection& q,
                                   const ToleranceConfig& tol, double elapsed) {
    const Effect m = inf_with_projection(e, q, tol);
    std::cout << "infimum of e with a projection (rank " << q.rank() << ")\n"
              << "  trace of infimum = " << format_double(m.element().trace()) << "\n"
              << "  below e: " << (psd_leq(m.element(), e.element(), tol) ? "yes" : "no")
              << ", below q: " << (psd_leq(m.element(), q.element(), tol) ? "yes" : "no") << "\n"
              << "  elapsed " << short_double(elapsed) << " s\n";
}

void print_spectral_text(const Effect& e, const ToleranceConfig& tol, double elapsed) {
    const SpectralResolution sr = spectral_resolution(e.element(), tol);
    const SubprojectionPair sp = largest_subprojections(e, tol);
    std::cout << "spectral resolution in dimension " << e.mat().dim() << "\n";
    for (std::size_t i = 0; i < sr.thresholds.size(); ++i)
        std::cout << "  threshold " << format_double(sr.thresholds[i]) << " -> cut rank "
                  << sr.cuts[i].rank() << "\n";
    std::cout << "  rank z = " << sp.z.rank() << ", rank t = " << sp.t.rank()
              << ", projection-free: " << (is_projection_free(e, tol) ? "yes" : "no") << "\n"
              << "  elapsed " << short_double(elapsed) << " s\n";
}

void print_verify_text(const VerificationReport& report) {
    std::cout << "verification battery: seed=" << report.options.seed
              << " trials=" << report.options.trials << " dims=" << report.options.dim_lo << ".."
              << report.options.dim_hi << " checks=" << report.results.size() << "\n";
    for (const CheckResult& r : report.results) {
        std::string id = r.id;
        if (id.size() < 26) id.resize(26, ' ');
        std::cout << "  " << (r.passed() ? "PASS " : "FAIL ") << id << " trials="
                  << r.trials_run;
        if (!r.passed()) std::cout << " failures=" << r.trials_failed;
        std::cout << " worst=" << short_double(r.worst_residual) << "\n";
        if (r.first_failure) {
            std::cout << "       first failure: dim=" << r.first_failure->dim
                      << " trial=" << r.first_failure->trial << ": " << r.first_failure->detail
                      << "\n";
            if (!r.first_failure->replay_json.empty())
                std::cout << "       replay: " << r.first_failure->replay_json << "\n";
        }
    }
    std::cout << "total: " << report.total_trials() << " trials, " << report.total_failures()
              << " failures, elapsed " << short_double(report.elapsed_seconds) << " s\n"
              << "RESULT: " << (report.all_passed() ? "PASS" : "FAIL") << "\n";
}

// ---------------------------------------------------------------- golden diff

bool json_close(const nlohmann::json& a, const nlohmann::json& b, const std::string& path,
                std::string& diff) {
    if (a.is_number() && b.is_number()) {
        const double x = a.get<double>();
        const double y = b.get<double>();
        if (std::fabs(x - y) <= 1e-9 * (1.0 + std::max(std::fabs(x), std::fabs(y)))) return true;
        diff = path + ": " + format_double(x) + " vs " + format_double(y);
        return false;
    }
    if (a.type() != b.type()) {
        diff = path + ": type mismatch";
        return false;
    }
    if (a.is_object()) {
        if (a.size() != b.size()) {
            diff = path + ": different key sets";
            return false;
        }
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key())) {
                diff = path + ": missing key \"" + it.key() + "\"";
                return false;
            }
            if (!json_close(it.value(), b.at(it.key()), path + "/" + it.key(), diff)) return false;
        }
        return true;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            diff = path + ": different array lengths";
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!json_close(a[i], b[i], path + "/" + std::to_string(i), diff)) return false;
        return true;
    }
    if (a != b) {
        diff = path + ": value mismatch";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------- dispatch

struct CliConfig {
    std::string input;
    std::string q_file;
    std::string output = "json";
    std::string golden;
    std::string report_file;
    std::string check;
    std::string dims = "2..5";
    std::uint64_t seed = 42;
    int trials = 50;
    double tol_rank = -1.0;
    double tol_comm = -1.0;
};

void apply_tol_overrides(ToleranceConfig& tol, const CliConfig& cfg) {
    if (cfg.tol_rank >= 0.0) tol.rank_eps = cfg.tol_rank;
    if (cfg.tol_comm >= 0.0) tol.comm_eps = cfg.tol_comm;
    tol.validate();
}

std::pair<std::size_t, std::size_t> parse_dims(const std::string& s) {
    const auto parse_one = [](const std::string& part) {
        std::size_t idx = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(part, &idx);
        } catch (...) {
            throw std::invalid_argument("--dims expects A..B with integer bounds");
        }
        if (idx != part.size())
            throw std::invalid_argument("--dims expects A..B with integer bounds");
        return static_cast<std::size_t>(v);
    };
    const std::size_t pos = s.find("..");
    if (pos == std::string::npos) {
        const std::size_t v = parse_one(s);
        return {v, v};
    }
    return {parse_one(s.substr(0, pos)), parse_one(s.substr(pos + 2))};
}

PairInput load_pair(const CliConfig& cfg) {
    if (cfg.input.empty()) throw std::invalid_argument("--input is required");
    PairInput in = parse_pair_input(read_text(cfg.input));
    apply_tol_overrides(in.tol, cfg);
    return in;
}

void emit(const std::string& doc) { std::cout << doc << "\n"; }

int run_pair_command(const std::string& name, const CliConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const PairInput in = load_pair(cfg);
    const bool json = cfg.output == "json";
    if (name == "decompose") {
        if (json) {
            emit(decompose_doc("decompose", in.p, in.e, in.tol));
        } else {
            const double el =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            print_decompose_text(in.p, in.e, in.tol, el);
        }
        return 0;
    }
    if (name == "commutator") {
        if (json) {
            emit(commutator_doc("commutator", in.p, in.e, in.tol));
        } else {
            const double el =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            print_commutator_text(in.p, in.e, in.tol, el);
        }
        return 0;
    }
    if (name == "infimum") {
        if (!cfg.q_file.empty()) {
            const Projection q = parse_projection_input(read_text(cfg.q_file), in.dim, in.tol);
            if (json) {
                emit(infimum_projection_doc("infimum", in.p, in.e, q, in.tol));
            } else {
                const double el =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                print_infimum_projection_text(in.e, q, in.tol, el);
            }
            return 0;
        }
        if (in.p.rank() != 1)
            throw std::invalid_argument(
                "infimum without --q needs a rank-one p (computes e ^ p'); pass --q for a "
                "general projection");
        if (json) {
            emit(infimum_atom_doc("infimum", in.p, in.e, in.tol));
        } else {
            const double el =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            print_infimum_atom_text(in.p, in.e, in.tol, el);
        }
        return 0;
    }
    // spectral
    if (json) {
        emit(spectral_doc("spectral", in.p, in.e, in.tol));
    } else {
        const double el =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        print_spectral_text(in.e, in.tol, el);
    }
    return 0;
}

int run_verify(const CliConfig& cfg) {
    BatteryOptions opt;
    opt.seed = cfg.seed;
    opt.trials = cfg.trials;
    const auto [lo, hi] = parse_dims(cfg.dims);
    opt.dim_lo = lo;
    opt.dim_hi = hi;
    opt.filter = cfg.check;
    apply_tol_overrides(opt.tol, cfg);
    const VerificationReport report = run_battery(opt);
    if (!cfg.report_file.empty()) {
        std::ofstream out(cfg.report_file, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write \"" + cfg.report_file + "\"");
        out << verify_doc(report) << "\n";
    }
    if (cfg.output == "json")
        emit(verify_doc(report));
    else
        print_verify_text(report);
    return report.all_passed() ? 0 : 1;
}

int run_example(const CliConfig& cfg) {
    const double third = 1.0 / 3.0;
    Matrix pm(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) pm(i, j) = third;
    ToleranceConfig tol;
    apply_tol_overrides(tol, cfg);
    const Projection p = Projection::checked(SymmetricElement::symmetrized(pm), tol);
    const std::vector<double> diag{0.25, 0.5, 0.75};
    const Effect e = Effect::checked(SymmetricElement::diagonal(diag), tol);
    const std::string doc = example_doc(p, e, tol);
    if (cfg.output == "json")
        emit(doc);
    else {
        const PairCommutatorReport rep = inequality_chain(p, e, tol);
        const AtomInfimumRecord rec = inf_with_atom_complement(e, p, tol);
        std::cout << "built-in example: p projects onto the diagonal line of R^3, "
                  << "e = diag(1/4, 1/2, 3/4)\n"
                  << "  rank [p,e] = " << rep.r.rank() << ", rank b carrier = "
                  << rep.b_carrier.rank() << "\n"
                  << "  alpha = " << format_double(rec.alpha)
                  << ", trace of e ^ p' = " << format_double(rec.infimum.element().trace())
                  << "\n";
    }
    if (!cfg.golden.empty()) {
        const nlohmann::json computed = nlohmann::json::parse(doc);
        nlohmann::json expected;
        try {
            expected = nlohmann::json::parse(read_text(cfg.golden));
        } catch (const nlohmann::json::parse_error& ex) {
            throw std::invalid_argument(std::string("golden file is not valid JSON: ") +
                                        ex.what());
        }
        std::string diff;
        if (!json_close(computed, expected, "", diff)) {
            std::cerr << "golden mismatch at " << diff << "\n";
            return 1;
        }
        std::cerr << "golden comparison: match\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional synaptic algebra toolkit"};
    app.require_subcommand(1);
    CliConfig cfg;

    const auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output", cfg.output, "output format: json or text")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--tol-rank", cfg.tol_rank, "override the rank threshold");
        sub->add_option("--tol-comm", cfg.tol_comm, "override the commutation threshold");
    };
    const auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "pair document (JSON file, or - for stdin)")
            ->required();
    };

    CLI::App* dec = app.add_subcommand("decompose", "CBS decomposition of e relative to p");
    add_input(dec);
    add_output(dec);
    CLI::App* com = app.add_subcommand("commutator", "pair commutator [p,e] and the split");
    add_input(com);
    add_output(com);
    CLI::App* inf = app.add_subcommand("infimum", "closed-form infima with projections");
    add_input(inf);
    add_output(inf);
    inf->add_option("--q", cfg.q_file, "projection document for e ^ q");
    CLI::App* spc = app.add_subcommand("spectral", "spectral cuts and subprojections of e");
    add_input(spc);
    add_output(spc);
    CLI::App* ver = app.add_subcommand("verify", "randomized verification battery");
    add_output(ver);
    ver->add_option("--seed", cfg.seed, "base seed for the derived random streams");
    ver->add_option("--trials", cfg.trials, "trials per check");
    ver->add_option("--dims", cfg.dims, "dimension range A..B swept inside every trial");
    ver->add_option("--check", cfg.check, "substring filter on check ids");
    ver->add_option("--report", cfg.report_file, "also write the JSON report to this file");
    CLI::App* ex = app.add_subcommand("example-r3", "built-in three-dimensional example");
    add_output(ex);
    ex->add_option("--golden", cfg.golden, "compare against a golden JSON document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (ver->parsed()) return run_verify(cfg);
        if (ex->parsed()) return run_example(cfg);
        if (dec->parsed()) return run_pair_command("decompose", cfg);
        if (com->parsed()) return run_pair_command("commutator", cfg);
        if (inf->parsed()) return run_pair_command("infimum", cfg);
        return run_pair_command("spectral", cfg);
    } catch (const std::invalid_argument& ex2) {
        std::cerr << "error: " << ex2.what() << "\n";
        return 2;
    } catch (const resource_limit_exceeded& ex2) {
        std::cerr << "error: " << ex2.what() << "\n";
        return 2;
    } catch (const std::exception& ex2) {
        std::cerr << "error: " << ex2.what() << "\n";
        return 1;
    }
}
