// qem.cpp
// Command-line front end. Every command is deterministic given its flags
// and seed; randomized commands require an explicit --seed. Exit codes:
// 0 success, 1 I/O, 2 validation, 3 numerical failure, 4 budget exceeded.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qem/compare.hpp"
#include "qem/errors.hpp"
#include "qem/inference.hpp"
#include "qem/info_measures.hpp"
#include "qem/machine_io.hpp"
#include "qem/processes.hpp"
#include "qem/quantum_model.hpp"
#include "qem/quantum_sim.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qem::io_error("cannot open output file: " + path);
    out << text;
    if (!out) throw qem::io_error("error writing output file: " + path);
}

ordered_json witness_json(const qem::EpsilonMachine& m,
                          const std::optional<qem::IrreversibilityWitness>& w) {
    if (!w) return nullptr;
    ordered_json j;
    j["j"] = m.state_names[w->j];
    j["k"] = m.state_names[w->k];
    j["l"] = m.state_names[w->l];
    j["r"] = m.alphabet.symbols[w->r];
    return j;
}

ordered_json report_json(const qem::EpsilonMachine& m, const qem::TheoremCheck& check) {
    ordered_json j;
    j["c_mu"] = check.c_mu;
    j["e"] = check.e.value;
    j["e_converged"] = check.e.converged;
    j["e_horizon"] = check.e.horizon_used;
    j["e_approximate"] = check.e.approximate;
    j["c_q"] = check.c_q;
    j["eigenvalues"] = check.eigenvalues;
    j["witness"] = witness_json(m, check.witness);
    j["theorem_holds"] = check.theorem_holds;
    return j;
}

struct AnalyzeOptions {
    std::string machine_path;
    std::string trace_path;
    double tol = 1e-10;
    int t_max = 20;
};

void run_analyze(const AnalyzeOptions& opt) {
    const auto machine = qem::load_machine(opt.machine_path);
    qem::ExcessEntropyOptions e_opts;
    e_opts.tol = opt.tol;
    e_opts.t_max = opt.t_max;
    const auto check = qem::theorem_check(machine, e_opts);
    if (!opt.trace_path.empty()) {
        std::ostringstream csv;
        csv << "t,h_bits\n";
        for (const auto& [t, h] : check.e.trace) csv << t << "," << fmt12(h) << "\n";
        write_text(opt.trace_path, csv.str());
    }
    std::cout << report_json(machine, check).dump(2) << "\n";
}

struct SweepOptions {
    std::string parameter = "p";
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    std::string out_path;
    std::string columns = "p,c_mu,e,c_q";
    double tol = 1e-10;
    int t_max = 20;
};

void run_sweep(const SweepOptions& opt) {
    if (opt.parameter != "p")
        throw qem::validation_error("sweep: only the perturbed-coin parameter 'p' is supported");
    if (!(opt.start < opt.stop)) throw qem::validation_error("sweep: start must be < stop");
    if (!(opt.step > 0.0)) throw qem::validation_error("sweep: step must be > 0");

    std::vector<std::string> columns;
    {
        std::stringstream ss(opt.columns);
        std::string item;
        const std::set<std::string> known{"p", "c_mu", "e", "c_q"};
        while (std::getline(ss, item, ',')) {
            if (!known.count(item))
                throw qem::validation_error("sweep: unknown column '" + item + "'");
            columns.push_back(item);
        }
        if (columns.empty()) throw qem::validation_error("sweep: no columns selected");
    }

    qem::ExcessEntropyOptions e_opts;
    e_opts.tol = opt.tol;
    e_opts.t_max = opt.t_max;

    std::ostringstream csv;
    for (std::size_t i = 0; i < columns.size(); ++i)
        csv << (i ? "," : "") << columns[i];
    csv << "\n";

    const int rows = static_cast<int>((opt.stop - opt.start) / opt.step + 1e-9) + 1;
    for (int i = 0; i < rows; ++i) {
        const double p = opt.start + i * opt.step;
        if (p > opt.stop + 1e-12) break;
        const auto machine = qem::perturbed_coin(p);
        const auto check = qem::theorem_check(machine, e_opts);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) csv << ",";
            if (columns[c] == "p") csv << fmt12(p);
            else if (columns[c] == "c_mu") csv << fmt12(check.c_mu);
            else if (columns[c] == "e") csv << fmt12(check.e.value);
            else csv << fmt12(check.c_q);
        }
        csv << "\n";
    }
    write_text(opt.out_path, csv.str());
}

struct SimulateOptions {
    std::string machine_path;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    std::string initial;
    std::string out_path;
};

std::string render_sequence(const qem::EpsilonMachine& m, const std::vector<int>& symbols) {
    bool single_char = true;
    for (const auto& s : m.alphabet.symbols)
        if (s.size() != 1) single_char = false;
    std::ostringstream os;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i && !single_char) os << " ";
        os << m.alphabet.symbols[symbols[i]];
    }
    os << "\n";
    return os.str();
}

void run_simulate(const SimulateOptions& opt) {
    const auto machine = qem::load_machine(opt.machine_path);
    int initial = 0;
    if (!opt.initial.empty()) {
        initial = machine.state_index(opt.initial);
        if (initial < 0)
            throw qem::validation_error("simulate: unknown state '" + opt.initial + "'");
    }
    const auto seq = qem::simulate(machine, initial, opt.steps, opt.seed);
    write_text(opt.out_path, render_sequence(machine, seq.symbols));
}

struct ProtocolOptions {
    std::string machine_path;
    std::string mode = "constant-entropy";
    int steps = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string init = "stationary";
    std::string out_path;
};

void run_protocol(const ProtocolOptions& opt) {
    const auto machine = qem::load_machine(opt.machine_path);
    qem::ProtocolMode mode;
    if (opt.mode == "constant-entropy") mode = qem::ProtocolMode::constant_entropy;
    else if (opt.mode == "measure-prepare") mode = qem::ProtocolMode::measure_prepare;
    else throw qem::validation_error("protocol: mode must be constant-entropy or measure-prepare");
    if (mode == qem::ProtocolMode::measure_prepare && !opt.seed_given)
        throw qem::validation_error("protocol: --seed is required for measure-prepare mode");

    qem::ProtocolInit init = qem::ProtocolInit::stationary_mixture();
    if (opt.init != "stationary") {
        const int idx = machine.state_index(opt.init);
        if (idx < 0) throw qem::validation_error("protocol: unknown state '" + opt.init + "'");
        init = qem::ProtocolInit::pure_state(idx);
    }

    const auto state = qem::run_protocol(machine, opt.steps, mode, opt.seed, init);
    std::ostringstream csv;
    csv << "step,entropy_bits\n";
    for (const auto& [step, h] : state.entropy_log) csv << step << "," << fmt12(h) << "\n";
    write_text(opt.out_path, csv.str());
}

struct InferOptions {
    std::string data_path;
    int history_length = 1;
    int future_length = 1;
    double tol = 0.05;
    long long min_count = 10;
    std::string out_path;
};

void run_infer(const InferOptions& opt) {
    std::ifstream in(opt.data_path);
    if (!in) throw qem::io_error("cannot open data file: " + opt.data_path);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw qem::io_error("error reading data file: " + opt.data_path);

    // one ASCII symbol per character, newline-insensitive
    std::set<char> distinct;
    std::string cleaned;
    for (char c : raw) {
        if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        cleaned.push_back(c);
        distinct.insert(c);
    }
    qem::Alphabet alphabet;
    for (char c : distinct) alphabet.symbols.push_back(std::string(1, c));
    std::vector<int> symbols;
    symbols.reserve(cleaned.size());
    for (char c : cleaned) symbols.push_back(alphabet.index_of(std::string(1, c)));

    qem::InferenceConfig config;
    config.history_length = opt.history_length;
    config.future_length = opt.future_length;
    config.merge_tolerance = opt.tol;
    config.min_count = opt.min_count;

    const auto result = qem::infer_machine(symbols, alphabet, config);
    qem::save_machine(result.machine, opt.out_path);

    ordered_json j;
    j["clusters"] = result.diagnostics.cluster_count;
    j["histories_seen"] = result.diagnostics.histories_seen;
    j["histories_kept"] = result.diagnostics.histories_kept;
    j["occupancy"] = result.diagnostics.cluster_occupancy;
    j["repairs"] = result.diagnostics.repairs;
    j["dropped"] = result.diagnostics.dropped;
    j["warnings"] = result.diagnostics.warnings;
    std::cout << j.dump(2) << "\n";
}

struct CompareOptions {
    std::string gen_a = "classical";
    std::string gen_b = "quantum";
    std::string machine_path;
    std::uint64_t n_samples = 100000;
    int block_length = 3;
    double threshold = 0.02;
    std::uint64_t seed = 0;
    std::uint64_t seed_b = 0;
    bool seed_b_given = false;
};

qem::SequenceGenerator make_generator(const std::string& kind, const qem::EpsilonMachine& m) {
    if (kind == "classical") return qem::classical_generator(m);
    if (kind == "quantum") return qem::quantum_generator(m);
    throw qem::validation_error("compare: generator must be classical or quantum");
}

void run_compare(const CompareOptions& opt) {
    const auto machine = qem::load_machine(opt.machine_path);
    const auto gen_a = make_generator(opt.gen_a, machine);
    const auto gen_b = make_generator(opt.gen_b, machine);
    // independent stream for side b unless the caller pinned one
    const std::uint64_t seed_b =
        opt.seed_b_given ? opt.seed_b : opt.seed * 6364136223846793005ull + 1442695040888963407ull;
    const auto result = qem::equivalence_test(gen_a, gen_b, opt.n_samples, opt.block_length,
                                              opt.threshold, opt.seed, seed_b);
    ordered_json j;
    j["pass"] = result.pass;
    j["distance"] = result.distance;
    j["n"] = result.n_samples;
    j["block_length"] = result.block_length;
    j["threshold"] = opt.threshold;
    j["seed_a"] = opt.seed;
    j["seed_b"] = seed_b;
    std::cout << j.dump(2) << "\n";
}

void run_catalog() {
    for (const auto& spec : qem::process_catalog())
        std::cout << spec.name << "  [" << spec.params << "]  " << spec.description << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"epsilon-machine analysis, quantum models and protocol simulation"};
    app.require_subcommand(1);

    AnalyzeOptions analyze_opt;
    auto* analyze = app.add_subcommand("analyze", "print the complexity report for a machine");
    analyze->add_option("--machine", analyze_opt.machine_path, "machine JSON file")->required();
    analyze->add_option("--trace", analyze_opt.trace_path,
                        "write the excess-entropy trace as CSV to this file");
    analyze->add_option("--tol", analyze_opt.tol, "excess-entropy convergence tolerance");
    analyze->add_option("--t-max", analyze_opt.t_max, "excess-entropy horizon cap");
    analyze->callback([&] { run_analyze(analyze_opt); });

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "perturbed-coin parameter sweep to CSV");
    sweep->add_option("--param", sweep_opt.parameter, "swept parameter (only 'p')");
    sweep->add_option("--start", sweep_opt.start, "first parameter value")->required();
    sweep->add_option("--stop", sweep_opt.stop, "last parameter value")->required();
    sweep->add_option("--step", sweep_opt.step, "parameter increment")->required();
    sweep->add_option("--out", sweep_opt.out_path, "output CSV file")->required();
    sweep->add_option("--columns", sweep_opt.columns, "comma-separated subset of p,c_mu,e,c_q");
    sweep->add_option("--tol", sweep_opt.tol, "excess-entropy convergence tolerance");
    sweep->add_option("--t-max", sweep_opt.t_max, "excess-entropy horizon cap");
    sweep->callback([&] { run_sweep(sweep_opt); });

    SimulateOptions sim_opt;
    auto* simulate = app.add_subcommand("simulate", "emit a symbol sequence from a machine");
    simulate->add_option("--machine", sim_opt.machine_path, "machine JSON file")->required();
    simulate->add_option("--steps", sim_opt.steps, "number of symbols")->required();
    simulate->add_option("--seed", sim_opt.seed, "RNG seed")->required();
    simulate->add_option("--initial", sim_opt.initial, "initial state name (default: first)");
    simulate->add_option("--out", sim_opt.out_path, "output file (default: stdout)");
    simulate->callback([&] { run_simulate(sim_opt); });

    ProtocolOptions proto_opt;
    auto* protocol = app.add_subcommand("protocol", "run a quantum prediction protocol");
    protocol->add_option("--machine", proto_opt.machine_path, "machine JSON file")->required();
    protocol->add_option("--mode", proto_opt.mode, "constant-entropy or measure-prepare");
    protocol->add_option("--steps", proto_opt.steps, "number of protocol rounds")->required();
    protocol->add_option("--seed", proto_opt.seed, "RNG seed (measure-prepare only)")
        ->each([&](const std::string&) { proto_opt.seed_given = true; });
    protocol->add_option("--init", proto_opt.init, "'stationary' or a state name");
    protocol->add_option("--out", proto_opt.out_path, "output CSV file (default: stdout)");
    protocol->callback([&] { run_protocol(proto_opt); });

    InferOptions infer_opt;
    auto* infer = app.add_subcommand("infer", "reconstruct a machine from observed symbols");
    infer->add_option("--data", infer_opt.data_path, "symbol file, one ASCII char per symbol")
        ->required();
    infer->add_option("-L,--history", infer_opt.history_length, "history length");
    infer->add_option("-F,--future", infer_opt.future_length, "future length");
    infer->add_option("--tol", infer_opt.tol, "cluster merge tolerance (L1)");
    infer->add_option("--min-count", infer_opt.min_count, "minimum history occurrences");
    infer->add_option("--out", infer_opt.out_path, "output machine JSON file")->required();
    infer->callback([&] { run_infer(infer_opt); });

    CompareOptions cmp_opt;
    auto* compare = app.add_subcommand("compare", "statistical equivalence of two generators");
    // spelled --a / --b on the command line; main() rewrites those tokens
    // because CLI11 cannot hold "--b" and "-b" in one subcommand
    compare->add_option("--gen-a", cmp_opt.gen_a, "first generator: classical or quantum");
    compare->add_option("--gen-b", cmp_opt.gen_b, "second generator: classical or quantum");
    compare->add_option("--machine", cmp_opt.machine_path, "machine JSON file")->required();
    compare->add_option("-n,--samples", cmp_opt.n_samples, "sequence length per side");
    compare->add_option("-b,--block", cmp_opt.block_length, "block length");
    compare->add_option("--threshold", cmp_opt.threshold, "L1 pass threshold");
    compare->add_option("--seed", cmp_opt.seed, "RNG seed for side a")->required();
    compare->add_option("--seed-b", cmp_opt.seed_b, "RNG seed for side b (default: derived)")
        ->each([&](const std::string&) { cmp_opt.seed_b_given = true; });
    compare->callback([&] { run_compare(cmp_opt); });

    auto* make = app.add_subcommand("make", "write a catalog machine to JSON");
    make->require_subcommand(1);
    struct MakeArgs {
        double p = 0.25;
        double q = 0.5;
        int k = 2;
        std::string out_path;
    } make_args;
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", make_args.out_path, "output machine JSON file")->required();
    };
    auto* mk_coin = make->add_subcommand("perturbed-coin", "two-state perturbed coin");
    mk_coin->add_option("--p", make_args.p, "flip probability")->required();
    add_out(mk_coin);
    mk_coin->callback([&] { qem::save_machine(qem::perturbed_coin(make_args.p), make_args.out_path); });
    auto* mk_lattice = make->add_subcommand("coin-lattice", "K independent perturbed coins");
    mk_lattice->add_option("--k", make_args.k, "number of coins")->required();
    mk_lattice->add_option("--p", make_args.p, "flip probability")->required();
    add_out(mk_lattice);
    mk_lattice->callback(
        [&] { qem::save_machine(qem::coin_lattice(make_args.k, make_args.p), make_args.out_path); });
    auto* mk_alt = make->add_subcommand("alternating-switches", "deterministic alternation");
    add_out(mk_alt);
    mk_alt->callback([&] { qem::save_machine(qem::alternating_switches(), make_args.out_path); });
    auto* mk_iid = make->add_subcommand("iid-coin", "single-state i.i.d. coin");
    mk_iid->add_option("--q", make_args.q, "probability of emitting 1")->required();
    add_out(mk_iid);
    mk_iid->callback([&] { qem::save_machine(qem::iid_coin(make_args.q), make_args.out_path); });

    auto* catalog = app.add_subcommand("catalog", "list the built-in process catalog");
    catalog->callback([&] { run_catalog(); });

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--a") arg = "--gen-a";
        else if (arg == "--b") arg = "--gen-b";
        args.push_back(std::move(arg));
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back

    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const qem::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const qem::budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const qem::validation_error& e) {
        if (!e.violations.empty()) {
            ordered_json j;
            j["violations"] = ordered_json::array();
            for (const auto& v : e.violations)
                j["violations"].push_back({{"invariant", v.invariant}, {"detail", v.detail}});
            std::cout << j.dump(2) << "\n";
        }
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qem::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
