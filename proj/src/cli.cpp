#include "framekit/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "framekit/error.hpp"
#include "framekit/generate.hpp"
#include "framekit/io.hpp"
#include "framekit/version.hpp"

namespace framekit {

namespace {

using io::Json;

struct Options {
    std::string in;
    std::string out;
    std::uint64_t seed = 1;
    double tol = Tolerance{}.eq_tol;
    double rank_tol = Tolerance{}.rel_rank_tol;
    double angle_tol = kDefaultAngleTol;
    double c_max = kDefaultCMax;
    std::size_t atoms = 4;
    std::size_t dim = 4;
    std::size_t gens = 3;
    std::string family = "in-duality";
    double delta = 0.1;
    double epsilon = 1e-6;
    std::string group = "z4";
    std::size_t subgroup_gen = 2;
    std::string signal = "delta0";
    std::string function;
    std::string format = "json";
    bool riesz = false;

    Tolerance tolerance() const {
        Tolerance t{rank_tol, tol};
        t.validate();
        return t;
    }
};

Json read_json(const std::string& path) {
    if (path.empty()) throw DomainError("missing --in");
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open '" + path + "'");
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw DomainError("malformed JSON in '" + path + "': " + e.what());
    }
}

Json envelope(const std::string& command, const Options& o, Json result) {
    return {{"tool", "framekit"},
            {"version", kVersion},
            {"command", command},
            {"seed", o.seed},
            {"tolerances",
             {{"rel_rank_tol", o.rank_tol}, {"eq_tol", o.tol}, {"angle_tol", o.angle_tol}, {"c_max", o.c_max}}},
            {"result", std::move(result)}};
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw DomainError("cannot write '" + o.out + "'");
    f << text;
}

void emit_json(const Json& j, const Options& o, std::ostream& out) { emit(j.dump(2) + "\n", o, out); }

void require_json_format(const Options& o, const std::string& command) {
    if (o.format != "json") throw DomainError(command + ": --format " + o.format + " is not available");
}

const FiberedSystem& require_b(const io::SystemFile& f, const std::string& command) {
    if (!f.b) throw DomainError(command + ": input needs a 'B' system at every atom");
    return *f.b;
}

void cmd_gen(const Options& o, std::ostream& out) {
    require_json_format(o, "gen");
    GenParams p;
    p.family = parse_family(o.family);
    p.atoms = o.atoms;
    p.dim = o.dim;
    p.gens = o.gens;
    p.delta = o.delta;
    p.epsilon = o.epsilon;
    p.seed = o.seed;
    p.riesz = o.riesz;
    const InstancePair inst = generate_pair(p);
    Json j = io::system_file_to_json(inst.a, &inst.b);
    j["meta"] = {{"tool", "framekit"},
                 {"version", kVersion},
                 {"family", o.family},
                 {"seed", o.seed},
                 {"delta", o.delta},
                 {"epsilon", o.epsilon},
                 {"special_atom", inst.a.measure().id(inst.special_atom)}};
    emit_json(j, o, out);
}

void cmd_angles(const Options& o, std::ostream& out) {
    require_json_format(o, "angles");
    const auto file = io::system_file_from_json(read_json(o.in));
    const FiberedSystem& b = require_b(file, "angles");
    const Tolerance tol = o.tolerance();
    Json atoms = Json::array();
    for (std::size_t k = 0; k < file.a.atoms(); ++k) {
        const Subspace ja = Subspace::span_of(file.a.fiber(k).synthesis(), tol);
        const Subspace jb = Subspace::span_of(b.fiber(k).synthesis(), tol);
        atoms.push_back({{"atom", file.a.measure().id(k)},
                         {"dimJA", ja.dim()},
                         {"dimJB", jb.dim()},
                         {"R_AB", inf_cos(ja, jb)},
                         {"R_BA", inf_cos(jb, ja)},
                         {"S_AB", sup_cos(ja, jb)},
                         {"direct_sum_AB", direct_sum_test(ja, jb, tol)},
                         {"direct_sum_BA", direct_sum_test(jb, ja, tol)}});
    }
    Json result{{"R_AB", global_inf_cos(file.a, b, tol)}, {"R_BA", global_inf_cos(b, file.a, tol)}, {"atoms", atoms}};
    emit_json(envelope("angles", o, std::move(result)), o, out);
}

struct DualOutcome {
    std::optional<FiberedSystem> dual;
    Json infeasible;  ///< atom and reason when no oblique dual exists
};

// Oblique dual from B when present, canonical dual otherwise.
DualOutcome fiberwise_dual(const io::SystemFile& file, const Tolerance& tol) {
    std::vector<FiberSystem> duals;
    for (std::size_t k = 0; k < file.a.atoms(); ++k) {
        if (!file.b) {
            duals.push_back(canonical_dual(file.a.fiber(k), tol));
            continue;
        }
        const FiberSystem& fb = file.b->fiber(k);
        const std::size_t r = std::max(file.a.count(), fb.count());
        try {
            duals.push_back(dualise(file.a.fiber(k).padded(r), fb.padded(r), tol));
        } catch (const InfeasibleError& e) {
            return {std::nullopt, {{"atom", file.a.measure().id(k)}, {"reason", e.what()}}};
        }
    }
    return {FiberedSystem(file.a.measure(), file.a.fiber_dim(), std::move(duals)), nullptr};
}

// No oblique dual is a result, reported with exit code 0.
bool emit_if_infeasible(const DualOutcome& d, const std::string& command, const Options& o, std::ostream& out) {
    if (d.dual) return false;
    Json result{{"method", "oblique"}, {"feasible", false}, {"infeasible", d.infeasible}};
    emit_json(envelope(command, o, std::move(result)), o, out);
    return true;
}

void cmd_dual(const Options& o, std::ostream& out) {
    require_json_format(o, "dual");
    const auto file = io::system_file_from_json(read_json(o.in));
    const Tolerance tol = o.tolerance();
    const DualOutcome outcome = fiberwise_dual(file, tol);
    if (emit_if_infeasible(outcome, "dual", o, out)) return;
    const FiberedSystem& dual = *outcome.dual;
    double forward = 0.0;
    double backward = 0.0;
    for (std::size_t k = 0; k < dual.atoms(); ++k) {
        const FiberSystem a = file.a.fiber(k).padded(dual.count());
        forward = std::max(forward, alternate_dual_residual(a, dual.fiber(k)));
        backward = std::max(backward, alternate_dual_residual(dual.fiber(k), a));
    }
    Json result{{"method", file.b ? "oblique" : "canonical"},
                {"feasible", true},
                {"residual_forward", forward},
                {"residual_backward", backward},
                {"dual", io::system_file_to_json(dual)}};
    emit_json(envelope("dual", o, std::move(result)), o, out);
}

void cmd_verify_thm1(const Options& o, std::ostream& out) {
    if (o.format != "json" && o.format != "csv") throw DomainError("--format must be json or csv");
    const auto file = io::system_file_from_json(read_json(o.in));
    const FiberedSystem& b = require_b(file, "verify-thm1");
    VerifyOptions opts;
    opts.angle_tol = o.angle_tol;
    opts.c_max = o.c_max;
    opts.probe_seed = o.seed;
    const EquivalenceReport rep = verify_theorem1(file.a, b, o.tolerance(), opts);
    if (o.format == "csv") {
        emit(io::diagnostics_csv(rep), o, out);
        return;
    }
    emit_json(envelope("verify-thm1", o, io::equivalence_report_to_json(rep, file.a.measure())), o, out);
}

void cmd_verify_thm2(const Options& o, std::ostream& out) {
    require_json_format(o, "verify-thm2");
    const auto file = io::system_file_from_json(read_json(o.in));
    const FiberedSystem& b = require_b(file, "verify-thm2");
    const Tolerance tol = o.tolerance();
    std::vector<Subspace> w;
    for (const auto& f : b.fibers()) w.push_back(Subspace::span_of(f.synthesis(), tol));
    // Unmet hypotheses are a result here, not an input error.
    for (std::size_t k = 0; k < file.a.atoms(); ++k) {
        std::string reason;
        if (!is_riesz(file.a.fiber(k), tol)) reason = "A is not a Riesz sequence";
        else if (w[k].dim() != file.a.count()) reason = "dim span(B) differs from the generator count of A";
        if (reason.empty()) continue;
        Json result{{"success", false},
                    {"precondition_failed", {{"atom", file.a.measure().id(k)}, {"reason", reason}}}};
        emit_json(envelope("verify-thm2", o, std::move(result)), o, out);
        return;
    }
    const BiorthReport rep = verify_theorem2(file.a, w, tol, o.angle_tol);
    emit_json(envelope("verify-thm2", o, io::biorth_report_to_json(rep, file.a.measure())), o, out);
}

GroupSignal load_signal(const ZakPlan& plan, const std::string& source) {
    if (std::filesystem::exists(source)) return io::signal_from_json(read_json(source));
    return named_signal(plan, source);
}

void cmd_zak_demo(const Options& o, std::ostream& out) {
    require_json_format(o, "zak-demo");
    const ZakPlan plan = build_plan(group_from_name(o.group), o.subgroup_gen);
    const GroupSignal f = load_signal(plan, o.signal);
    if (f.size() != plan.group.order()) {
        throw ShapeError("signal has length " + std::to_string(f.size()) + ", group order is " +
                         std::to_string(plan.group.order()));
    }
    const FiberedFunction zf = zak_forward(plan, f);
    double f2 = 0.0;
    for (const auto& z : f) f2 += std::norm(z);
    const double z2 = std::pow(weighted_norm(character_measure(plan), zf), 2);
    const double round_trip = distance(zak_inverse(plan, zf), f);
    Json inter = Json::array();
    double worst = 0.0;
    for (auto gamma : plan.subgroup) {
        const double dev = verify_intertwine(plan, f, gamma);
        worst = std::max(worst, dev);
        inter.push_back({{"gamma", gamma}, {"deviation", dev}});
    }
    Json result{{"plan", io::plan_to_json(plan)},
                {"subgroup", plan.subgroup},
                {"section", plan.section},
                {"signal", io::signal_to_json(f)},
                {"zak", io::fibered_function_to_json(zf)},
                {"unitarity_residual", std::abs(z2 - f2)},
                {"round_trip_residual", round_trip},
                {"intertwine", inter},
                {"intertwine_max_deviation", worst}};
    emit_json(envelope("zak-demo", o, std::move(result)), o, out);
}

void cmd_reconstruct(const Options& o, std::ostream& out) {
    require_json_format(o, "reconstruct");
    const auto file = io::system_file_from_json(read_json(o.in));
    const Tolerance tol = o.tolerance();
    const DualOutcome outcome = fiberwise_dual(file, tol);
    if (emit_if_infeasible(outcome, "reconstruct", o, out)) return;
    const FiberedSystem& dual = *outcome.dual;
    const FiberedSystem a = file.a.padded(dual.count());
    FiberedFunction f = FiberedFunction::zeros(a.atoms(), a.fiber_dim());
    if (!o.function.empty()) {
        f = io::fibered_function_from_json(read_json(o.function));
    } else {
        std::mt19937_64 rng(o.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t k = 0; k < a.atoms(); ++k) {
            CVector c(a.count());
            for (auto& z : c) {
                const double re = normal(rng);
                const double im = normal(rng);
                z = {re, im};
            }
            f.at(k) = a.fiber(k).synthesis() * std::span<const Complex>(c);
        }
    }
    const Reconstruction rec = reconstruct(a, dual, f);
    Json result{{"method", file.b ? "oblique" : "canonical"},
                {"feasible", true},
                {"rel_residual", rec.rel_residual},
                {"function", io::fibered_function_to_json(f)},
                {"reconstruction", io::fibered_function_to_json(rec.value)}};
    emit_json(envelope("reconstruct", o, std::move(result)), o, out);
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "Report path (default stdout)");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--tol", o.tol, "Equality tolerance");
    cmd->add_option("--rank-tol", o.rank_tol, "Relative rank tolerance");
    cmd->add_option("--angle-tol", o.angle_tol, "Threshold for a positive angle");
    cmd->add_option("--cmax", o.c_max, "Bound on the mixed Gramian pseudo-inverse norm");
    cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"framekit: dual frames and oblique duals for multiplication-invariant spaces", "framekit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate a random instance pair");
    add_common(gen, o);
    gen->add_option("--family", o.family, "in-duality | orthogonal-failure | near-threshold");
    gen->add_option("--atoms", o.atoms, "Number of atoms");
    gen->add_option("--dim", o.dim, "Fiber dimension");
    gen->add_option("--gens", o.gens, "Maximum generator count");
    gen->add_option("--delta", o.delta, "Lower bound on principal cosines (in-duality)");
    gen->add_option("--epsilon", o.epsilon, "Principal cosine at the special atom (near-threshold)");
    gen->add_flag("--riesz", o.riesz, "Make every fiber a basis of its span");

    std::vector<std::pair<CLI::App*, void (*)(const Options&, std::ostream&)>> commands{{gen, cmd_gen}};
    const auto with_input = [&](const char* name, const char* help, void (*fn)(const Options&, std::ostream&)) {
        auto* c = app.add_subcommand(name, help);
        add_common(c, o);
        c->add_option("--in", o.in, "Input system file")->required();
        commands.emplace_back(c, fn);
        return c;
    };
    with_input("angles", "Fiber and global infimum cosine angles", cmd_angles);
    with_input("dual", "Oblique (with B) or canonical dual, fiberwise", cmd_dual);
    with_input("verify-thm1", "Check the four equivalent duality conditions", cmd_verify_thm1);
    with_input("verify-thm2", "Biorthogonal Riesz duals inside W = span(B)", cmd_verify_thm2);
    with_input("reconstruct", "Reconstruct a function from a dual pair", cmd_reconstruct)
        ->add_option("--function", o.function, "Function file (default: random span element)");

    auto* zak = app.add_subcommand("zak-demo", "Zak transform, unitarity and intertwining on a finite group");
    add_common(zak, o);
    zak->add_option("--group", o.group, "z<N> or d<n>");
    zak->add_option("--subgroup-gen", o.subgroup_gen, "Generator of the cyclic subgroup");
    zak->add_option("--signal", o.signal, "delta<g>, ones, or a signal JSON file");
    commands.emplace_back(zak, cmd_zak_demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "framekit: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        o.tolerance();
        if (!(o.angle_tol > 0.0 && o.angle_tol < 1.0)) throw DomainError("--angle-tol must lie in (0, 1)");
        if (!(o.c_max > 0.0) || !std::isfinite(o.c_max)) throw DomainError("--cmax must be positive and finite");
        for (const auto& [cmd, fn] : commands)
            if (cmd->parsed()) fn(o, out);
        return kExitOk;
    } catch (const NumericalFailure& e) {
        err << "framekit: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "framekit: " << e.what() << "\n";
        return kExitInput;
    } catch (const Json::exception& e) {
        err << "framekit: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "framekit: " << e.what() << "\n";
        return kExitInput;
    }
}

} // namespace framekit
