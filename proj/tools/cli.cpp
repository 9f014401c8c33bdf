#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asqkd/analysis.hpp"
#include "asqkd/attack_search.hpp"
#include "asqkd/protocol.hpp"

namespace asqkd::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = ASQKD_VERSION;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::size_t n = 8;
    std::size_t m = 8;
    std::size_t trials = 1000;
    std::uint64_t seed = 42;
    std::string attack = "honest";
    double p_attack = 1.0;
    std::string slots;
    std::string keys = "fresh";
    std::string collective_params;
    double epsilon = 0.0;
    std::size_t restarts = 20;
    std::size_t iters = 500;
    double step = 0.1;
    std::size_t ancilla = 2;
    std::string family = "general";
    std::string out;
    std::string format = "json";
    std::string trials_out;
    std::string vary;
    std::string values;
    bool lock_m = false;
};

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = item.find_last_not_of(" \t");
        items.push_back(item.substr(first, last - first + 1));
    }
    return items;
}

double parse_real(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a nonnegative integer: '" + s + "'");
    }
    return v;
}

AttackFamily parse_family(const std::string& name) {
    if (name == "general") return AttackFamily::General;
    if (name == "z-preserving") return AttackFamily::ZPreserving;
    throw std::invalid_argument("unknown attack family '" + name + "'");
}

std::string family_name(AttackFamily f) { return f == AttackFamily::General ? "general" : "z-preserving"; }

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file << text;
    file.close();
    if (!file) throw IoError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

SessionConfig session_config(const Options& o) {
    SessionConfig c{o.n, o.m, o.seed};
    validate_config(c);
    return c;
}

SearchParams search_params(const Options& o) {
    SearchParams p;
    p.ancilla_qubits = o.ancilla;
    p.epsilon = o.epsilon;
    p.family = parse_family(o.family);
    p.restarts = o.restarts;
    p.max_iters = o.iters;
    p.step = o.step;
    p.seed = o.seed;
    return p;
}

Collective load_collective(const Options& o) {
    if (o.collective_params.empty()) return copy_attack(o.ancilla);
    Json report;
    try {
        report = Json::parse(read_text(o.collective_params));
        const auto params = report.at("parameter_vector").get<std::vector<double>>();
        const auto ancilla = report.at("ancilla_qubits").get<std::size_t>();
        const auto family = parse_family(report.at("family").get<std::string>());
        return attack_from_parameters(params, family, ancilla);
    } catch (const Json::exception& e) {
        throw std::invalid_argument("malformed collective parameter file: " + std::string(e.what()));
    }
}

AttackModel attack_model(const Options& o) {
    AttackModel model;
    if (o.attack == "honest") {
        model = HonestChannel{};
    } else if (o.attack == "intercept-z") {
        model = InterceptResend{Basis::Z, o.p_attack};
    } else if (o.attack == "intercept-x") {
        model = InterceptResend{Basis::X, o.p_attack};
    } else if (o.attack == "bitflip") {
        BitFlip flip;
        for (const auto& s : split_list(o.slots)) flip.slots.insert(parse_count(s));
        if (flip.slots.empty()) throw std::invalid_argument("--attack bitflip needs --slots");
        model = std::move(flip);
    } else if (o.attack == "collective") {
        model = load_collective(o);
    } else {
        throw std::invalid_argument("unknown attack '" + o.attack + "'");
    }
    validate_attack(model);
    return model;
}

BatchOptions batch_options(const Options& o) {
    BatchOptions b;
    if (o.keys == "fresh") {
        b.key_policy = KeyPolicy::FreshPerTrial;
    } else if (o.keys == "fixed") {
        b.key_policy = KeyPolicy::Fixed;
    } else {
        throw std::invalid_argument("--keys must be fresh or fixed");
    }
    return b;
}

Json stats_json(const BatchStats& s) {
    return Json{
        {"trials", s.trials},
        {"detection_rate", s.detection_rate},
        {"bob_hash_fail_rate", s.bob_hash_fail_rate},
        {"key_agreement_rate", s.key_agreement_rate},
        {"recycled_rate", s.recycled_rate},
        {"wilson_halfwidth", s.wilson_halfwidth},
        {"decoy_checks", s.decoy_checks},
        {"decoy_failures", s.decoy_failures},
        {"per_decoy_detection_rate", s.per_decoy_detection_rate},
    };
}

const std::vector<std::string> kStatsColumns{
    "trials",       "detection_rate", "bob_hash_fail_rate", "key_agreement_rate",      "recycled_rate",
    "wilson_halfwidth", "decoy_checks", "decoy_failures",   "per_decoy_detection_rate",
};

std::string stats_csv_cells(const BatchStats& s) {
    std::ostringstream os;
    os << s.trials << ',' << format_number(s.detection_rate) << ',' << format_number(s.bob_hash_fail_rate) << ','
       << format_number(s.key_agreement_rate) << ',' << format_number(s.recycled_rate) << ','
       << format_number(s.wilson_halfwidth) << ',' << s.decoy_checks << ',' << s.decoy_failures << ','
       << format_number(s.per_decoy_detection_rate);
    return os.str();
}

std::string join(const std::vector<std::string>& cols) {
    std::string s;
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
    return s;
}

Json config_json(const Options& o, const std::string& command) {
    return Json{
        {"command", command}, {"n", o.n},          {"m", o.m},       {"trials", o.trials},
        {"seed", o.seed},     {"attack", o.attack}, {"p_attack", o.p_attack}, {"slots", o.slots},
        {"keys", o.keys},     {"ancilla", o.ancilla},
    };
}

int cmd_run(const Options& o, std::ostream& out) {
    const SessionConfig config = session_config(o);
    const AttackModel attack = attack_model(o);
    if (o.trials < 1) throw std::invalid_argument("--trials must be >= 1");
    std::vector<TrialRecord> records;
    const BatchStats stats = run_batch(config, batch_options(o), attack, o.trials, o.trials_out.empty() ? nullptr : &records);
    const Rational eff = qubit_efficiency(o.n, o.m);

    if (o.format == "json") {
        Json j{{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"config", config_json(o, "run")},
               {"stats", stats_json(stats)},       {"qubit_efficiency", eff.to_string()}};
        write_text(o.out, j.dump(2) + "\n", out);
    } else {
        std::ostringstream os;
        os << "n,m,seed,attack,p_attack," << join(kStatsColumns) << ",qubit_efficiency\n";
        os << o.n << ',' << o.m << ',' << o.seed << ',' << o.attack << ',' << format_number(o.p_attack) << ','
           << stats_csv_cells(stats) << ',' << eff.to_string() << '\n';
        write_text(o.out, os.str(), out);
    }

    if (!o.trials_out.empty()) {
        std::ostringstream os;
        os << "trial_index,alice_pass,bob_pass,key_match,recycled\n";
        for (const auto& r : records) {
            os << r.trial_index << ',' << int{r.alice_pass} << ',' << int{r.bob_pass} << ',' << int{r.key_match} << ','
               << int{r.recycled} << '\n';
        }
        write_text(o.trials_out, os.str(), out);
    }
    return kExitOk;
}

Json search_json(const AttackSearchReport& r) {
    return Json{
        {"epsilon", r.epsilon},
        {"ancilla_qubits", r.ancilla_qubits},
        {"family", family_name(r.family)},
        {"best_detection_prob", r.best_detection_prob},
        {"best_eve_info", r.best_eve_info},
        {"iterations", r.iterations},
        {"parameter_vector", r.parameter_vector},
    };
}

std::string search_csv_row(const AttackSearchReport& r) {
    std::ostringstream os;
    os << format_number(r.epsilon) << ',' << r.ancilla_qubits << ',' << family_name(r.family) << ','
       << format_number(r.best_detection_prob) << ',' << format_number(r.best_eve_info) << ',' << r.iterations << ',';
    for (std::size_t i = 0; i < r.parameter_vector.size(); ++i) {
        os << (i ? ";" : "") << format_number(r.parameter_vector[i]);
    }
    return os.str();
}

const char* kSearchCsvHeader =
    "epsilon,ancilla_qubits,family,best_detection_prob,best_eve_info,iterations,parameter_vector\n";

int cmd_attack_search(const Options& o, std::ostream& out) {
    const SearchParams params = search_params(o);
    const AttackSearchReport report = constrained_attack_search(params);
    if (o.format == "json") {
        Json j{{"schema_version", kSchemaVersion},
               {"tool_version", kToolVersion},
               {"command", "attack-search"},
               {"seed", o.seed},
               {"restarts", params.restarts},
               {"max_iters", params.max_iters},
               {"step", params.step},
               {"penalty", params.penalty}};
        j.update(search_json(report));
        write_text(o.out, j.dump(2) + "\n", out);
    } else {
        write_text(o.out, std::string(kSearchCsvHeader) + search_csv_row(report) + "\n", out);
    }
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const std::string vary = o.vary == "p-attack" ? "p_attack" : o.vary;
    if (vary != "n" && vary != "m" && vary != "p_attack" && vary != "epsilon") {
        throw std::invalid_argument("--vary must be one of n, m, p_attack, epsilon");
    }
    const auto items = split_list(o.values);
    if (items.empty()) throw std::invalid_argument("--values must list at least one value");
    std::vector<double> values;
    for (const auto& s : items) values.push_back(parse_real(s));

    Json rows = Json::array();
    std::ostringstream csv;

    if (vary == "epsilon") {
        const auto frontier = epsilon_frontier(search_params(o), values);
        csv << kSearchCsvHeader;
        for (const auto& r : frontier) {
            rows.push_back(search_json(r));
            csv << search_csv_row(r) << '\n';
        }
    } else {
        const AttackModel base_attack = attack_model(o);
        const Rng root(o.seed);
        csv << "row,n,m,p_attack,seed,qubit_efficiency," << join(kStatsColumns) << '\n';
        for (std::size_t row = 0; row < values.size(); ++row) {
            Options ro = o;
            ro.seed = root.split(row).seed();
            AttackModel attack = base_attack;
            if (vary == "p_attack") {
                auto* ir = std::get_if<InterceptResend>(&attack);
                if (!ir) throw std::invalid_argument("--vary p_attack needs an intercept attack");
                ir->p_attack = values[row];
                ro.p_attack = values[row];
                validate_attack(attack);
            } else {
                const double v = values[row];
                if (v < 1 || v != std::floor(v)) throw std::invalid_argument("n and m values must be positive integers");
                const auto count = static_cast<std::size_t>(v);
                if (vary == "n") {
                    ro.n = count;
                    if (o.lock_m) ro.m = count;
                } else {
                    ro.m = count;
                }
            }
            const SessionConfig config = session_config(ro);
            const BatchStats stats = run_batch(config, batch_options(ro), attack, ro.trials);
            const Rational eff = qubit_efficiency(ro.n, ro.m);
            rows.push_back(Json{{"row", row},
                                {"n", ro.n},
                                {"m", ro.m},
                                {"p_attack", ro.p_attack},
                                {"seed", ro.seed},
                                {"qubit_efficiency", eff.to_string()},
                                {"stats", stats_json(stats)}});
            csv << row << ',' << ro.n << ',' << ro.m << ',' << format_number(ro.p_attack) << ',' << ro.seed << ','
                << eff.to_string() << ',' << stats_csv_cells(stats) << '\n';
        }
    }

    if (o.format == "json") {
        Json j{{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"config", config_json(o, "sweep")},
               {"vary", vary},                     {"values", values},            {"rows", rows}};
        write_text(o.out, j.dump(2) + "\n", out);
    } else {
        write_text(o.out, csv.str(), out);
    }
    return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
    const auto rows = comparison_table(o.n, o.m);
    out << "Comparison at n=" << o.n << ", m=" << o.m << '\n';
    for (const auto& r : rows) {
        out << "  " << r.protocol_name << '\n'
            << "    classical capabilities : " << r.classical_capabilities << '\n'
            << "    quantum resource       : " << r.quantum_resource << '\n'
            << "    qubit efficiency       : " << r.qubit_efficiency.to_string() << '\n'
            << "    pre-shared key bits    : " << r.pre_shared_bits_formula.to_string() << " = " << r.pre_shared_bits
            << '\n'
            << "    classical channel      : " << r.classical_channel << '\n'
            << "    hash function          : " << r.hash_function << '\n';
    }
    if (o.out.empty()) return kExitOk;

    if (o.format == "json") {
        Json arr = Json::array();
        for (const auto& r : rows) {
            arr.push_back(Json{{"protocol", r.protocol_name},
                               {"classical_capabilities", r.classical_capabilities},
                               {"quantum_resource", r.quantum_resource},
                               {"qubit_efficiency", r.qubit_efficiency.to_string()},
                               {"pre_shared_bits_formula", r.pre_shared_bits_formula.to_string()},
                               {"pre_shared_bits", r.pre_shared_bits},
                               {"classical_channel", r.classical_channel},
                               {"hash_function", r.hash_function}});
        }
        Json j{{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"n", o.n}, {"m", o.m}, {"rows", arr}};
        write_text(o.out, j.dump(2) + "\n", out);
    } else {
        std::ostringstream os;
        os << "protocol,classical_capabilities,quantum_resource,qubit_efficiency,pre_shared_bits_formula,"
              "pre_shared_bits,classical_channel,hash_function\n";
        for (const auto& r : rows) {
            os << '"' << r.protocol_name << "\",\"" << r.classical_capabilities << "\",\"" << r.quantum_resource
               << "\"," << r.qubit_efficiency.to_string() << ',' << r.pre_shared_bits_formula.to_string() << ','
               << r.pre_shared_bits << ",\"" << r.classical_channel << "\",\"" << r.hash_function << "\"\n";
        }
        write_text(o.out, os.str(), out);
    }
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulator and attack analysis for a decoy-checked semi-quantum key distribution protocol", "asqkd"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value file; keys are flag names without dashes");

    Options o;
    app.add_option("--n", o.n, "Key bits per session")->check(CLI::PositiveNumber);
    app.add_option("--m", o.m, "Hash bits per session")->check(CLI::Range(1, 32));
    app.add_option("--trials", o.trials, "Sessions per batch");
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--attack", o.attack, "honest | intercept-z | intercept-x | bitflip | collective")
        ->check(CLI::IsMember({"honest", "intercept-z", "intercept-x", "bitflip", "collective"}));
    app.add_option("--p-attack", o.p_attack, "Per-photon interception probability")->check(CLI::Range(0.0, 1.0));
    app.add_option("--slots", o.slots, "Comma-separated slot indices for bitflip");
    app.add_option("--keys", o.keys, "Key policy: fresh | fixed")->check(CLI::IsMember({"fresh", "fixed"}));
    app.add_option("--collective-params", o.collective_params, "attack-search JSON report used by --attack collective");
    app.add_option("--epsilon", o.epsilon, "Detection budget for attack-search")->check(CLI::NonNegativeNumber);
    app.add_option("--restarts", o.restarts, "Search restarts");
    app.add_option("--iters", o.iters, "Maximum iterations per restart")->check(CLI::PositiveNumber);
    app.add_option("--step", o.step, "Initial ascent step")->check(CLI::PositiveNumber);
    app.add_option("--ancilla", o.ancilla, "Eve ancilla qubits")->check(CLI::Range(1, 4));
    app.add_option("--family", o.family, "general | z-preserving")->check(CLI::IsMember({"general", "z-preserving"}));
    app.add_option("--out", o.out, "Output file (stdout when omitted)");
    app.add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--trials-out", o.trials_out, "Per-trial CSV for run");
    app.add_option("--vary", o.vary, "Sweep parameter: n | m | p_attack | epsilon");
    app.add_option("--values", o.values, "Comma-separated sweep values");
    app.add_flag("--lock-m", o.lock_m, "Keep m equal to n when sweeping n");

    auto* run_cmd = app.add_subcommand("run", "Run a batch of sessions")->fallthrough();
    auto* sweep_cmd = app.add_subcommand("sweep", "Run one batch or search per parameter value")->fallthrough();
    auto* search_cmd = app.add_subcommand("attack-search", "Search for the most informative collective attack")
                           ->fallthrough();
    auto* compare_cmd = app.add_subcommand("compare", "Print the protocol comparison table")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::FileError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(o, out);
        if (sweep_cmd->parsed()) return cmd_sweep(o, out);
        if (search_cmd->parsed()) return cmd_attack_search(o, out);
        if (compare_cmd->parsed()) return cmd_compare(o, out);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}

}  // namespace asqkd::cli
