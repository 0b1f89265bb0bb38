// Copyright 2026 The tcqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "tcqkd/correlation.hpp"
#include "tcqkd/netsim.hpp"
#include "tcqkd/protocols.hpp"
#include "tcqkd/report.hpp"

namespace tcqkd::cli {
namespace {

const std::vector<std::string> kVerbs{"tables", "run", "attack", "bench", "network"};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Options shared by run and attack.
struct SessionOptions {
    std::string protocol = "GHZ1";
    std::size_t num_states = 10000;
    double loss = 0.0;
    std::uint64_t seed = 0;
    double check_fraction = 0.1;
    double threshold = 0.0;
    double epsilon = kDefaultEpsilon;
    std::string out;
    std::string summary_csv;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--protocol", protocol, "GHZ1, GHZ2, GHZ3, BELL4 or BELL5");
        cmd.add_option("--num-states", num_states, "Entangled states to distribute");
        cmd.add_option("--loss", loss, "Per-particle loss probability on each leg");
        cmd.add_option("--seed", seed, "RNG seed");
        cmd.add_option("--check-fraction", check_fraction, "Fraction of kept positions disclosed for checking");
        cmd.add_option("--threshold", threshold, "Check error rate above which the session aborts");
        cmd.add_option("--epsilon", epsilon, "Privacy amplification security parameter");
        cmd.add_option("--out", out, "Write the transcript JSON here");
        cmd.add_option("--summary-csv", summary_csv, "Append a summary row to this CSV file");
    }

    SessionConfig config() const {
        SessionConfig c;
        c.protocol = parse_protocol(protocol);
        c.num_states = num_states;
        c.loss_probability = loss;
        c.rng_seed = seed;
        c.check_fraction = check_fraction;
        c.qber_abort_threshold = threshold;
        c.epsilon = epsilon;
        return c;
    }
};

void append_summary(const std::string& path, const SessionTranscript& t) {
    if (path.empty()) return;
    bool fresh = true;
    if (std::ifstream existing(path); existing) fresh = existing.peek() == std::ifstream::traits_type::eof();
    std::ofstream f(path, std::ios::binary | std::ios::app);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    if (fresh) f << transcript_csv_header();
    f << transcript_csv_row(t);
}

int cmd_tables(const std::string& scenario, const std::string& format, const std::string& out_path,
               std::ostream& out) {
    std::vector<TableScenario> scenarios;
    if (scenario == "all") {
        scenarios = {TableScenario::Bell, TableScenario::Mixed, TableScenario::Ghz};
    } else {
        scenarios = {parse_table_scenario(scenario)};
    }
    std::vector<CorrelationTable> tables;
    for (auto s : scenarios) tables.push_back(derive_correlation_table(s));

    std::string text;
    if (format == "csv") {
        text = render_csv(tables);
    } else if (format == "text") {
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i > 0) text += "\n";
            text += render_text(tables[i]);
        }
    } else {
        throw UsageError("unknown format '" + format + "' (expected text or csv)");
    }
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
    return kOk;
}

int cmd_run(const SessionOptions& opt, std::ostream& out) {
    const auto config = opt.config();
    config.validate();
    const auto t = run_session(config);
    if (!opt.out.empty()) write_file(opt.out, transcript_json(t));
    append_summary(opt.summary_csv, t);
    out << transcript_summary(t) << "\n";
    return t.check.aborted ? kAborted : kOk;
}

int cmd_attack(const SessionOptions& opt, const std::string& spec, const std::string& target,
               const std::optional<double>& coupling, std::ostream& out) {
    auto config = opt.config();
    config.attack = parse_attack_spec(spec);
    if (auto* ir = std::get_if<InterceptResend>(&config.attack); ir && !target.empty()) {
        ir->target = parse_party(target);
    }
    if (auto* an = std::get_if<AncillaEntangle>(&config.attack); an && coupling) an->coupling = *coupling;
    config.validate();
    const auto t = run_session(config);
    if (!opt.out.empty()) write_file(opt.out, transcript_json(t));
    append_summary(opt.summary_csv, t);

    const auto prediction = predict_attack(config.protocol, config.attack);
    const double p = prediction.detection_rate;
    const double n = static_cast<double>(t.check.checked);
    const double sigma = n > 0 ? std::sqrt(p * (1.0 - p) / n) : 0.0;
    out << "protocol=" << to_string(config.protocol) << " attack=" << attack_spec(config.attack)
        << " states=" << config.num_states << " seed=" << config.rng_seed << "\n";
    out << "kept=" << t.kept_count() << " checked=" << t.check.checked << " check_errors=" << t.check.errors
        << "\n";
    out << "detection_rate predicted=" << fixed(p) << " observed=" << fixed(t.check.error_rate())
        << " sigma=" << fixed(sigma) << "\n";
    for (Basis a : basis_pool(config.protocol)) {
        for (Basis b : basis_pool(config.protocol)) {
            const auto observed = t.check.error_rate(a, b);
            if (!observed) continue;
            const double predicted = prediction.detection_by_bases[static_cast<std::size_t>(a)]
                                                                  [static_cast<std::size_t>(b)];
            out << "check_error_rate bases=" << to_string(a) << to_string(b)
                << " checked=" << t.check.by_bases[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][0]
                << " predicted=" << (std::isnan(predicted) ? std::string("n/a") : fixed(predicted))
                << " observed=" << fixed(*observed) << "\n";
        }
    }
    out << "aborted=" << (t.check.aborted ? "yes" : "no") << " threshold=" << fixed(config.qber_abort_threshold)
        << "\n";
    if (t.adversary) {
        const auto& adv = *t.adversary;
        out << "eve_agreement predicted=" << fixed(prediction.eve_agreement) << " observed="
            << (adv.observed_eve_agreement ? fixed(*adv.observed_eve_agreement) : std::string("n/a"))
            << " guesses=" << adv.eve_guesses << "\n";
    }
    if (const auto* an = std::get_if<AncillaEntangle>(&config.attack)) {
        out << "ancilla_guess_probability=" << fixed(ancilla_guess_probability(an->coupling)) << "\n";
    }
    return t.check.aborted ? kAborted : kOk;
}

int cmd_bench(const std::string& protocols, const std::string& loss_grid, const SessionOptions& opt,
              std::ostream& out) {
    std::vector<ProtocolId> ids;
    if (protocols == "all") {
        ids.assign(kAllProtocols.begin(), kAllProtocols.end());
    } else {
        for (const auto& p : split_list(protocols)) ids.push_back(parse_protocol(p));
    }
    std::vector<double> losses;
    for (const auto& l : split_list(loss_grid)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(l, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != l.size()) throw UsageError("bad loss value '" + l + "'");
        losses.push_back(v);
    }

    std::ostringstream csv;
    csv << "protocol,loss,num_states,seed,kept_fraction,qber,aborted,final_key_bits,efficiency_measured,"
           "efficiency_bound,baseline\n";
    for (auto id : ids) {
        for (double loss : losses) {
            SessionConfig c = opt.config();
            c.protocol = id;
            c.loss_probability = loss;
            c.validate();
            const auto t = run_session(c);
            csv << to_string(id) << ',' << fixed(loss, 4) << ',' << c.num_states << ',' << c.rng_seed << ','
                << fixed(t.kept_fraction()) << ',' << fixed(t.check.error_rate()) << ','
                << (t.check.aborted ? "true" : "false") << ',' << t.distillation.alice_final.bits.size() << ','
                << fixed(t.efficiency_measured) << ',' << fixed(t.efficiency_bound) << ','
                << fixed(kTimeReservedBaseline) << '\n';
        }
    }
    if (opt.out.empty()) {
        out << csv.str();
    } else {
        write_file(opt.out, csv.str());
    }
    return kOk;
}

int cmd_network(const std::string& scenario_path, const std::string& out_path, const std::string& csv_path,
                bool parallel, unsigned threads, std::ostream& out) {
    if (scenario_path.empty()) throw UsageError("network needs a scenario file");
    const auto scenario = parse_scenario_json(read_file(scenario_path));
    const auto report =
        run_network_scenario(scenario, parallel ? Execution::Parallel : Execution::Sequential, threads);
    if (!out_path.empty()) write_file(out_path, network_report_json(report));
    if (!csv_path.empty()) write_file(csv_path, network_report_csv(report));

    bool any_aborted = false;
    for (const auto& r : report.sessions) {
        out << "session " << r.index << ' ' << r.requester << "->" << r.responder << ' ' << to_string(r.protocol)
            << ": ";
        if (r.error) {
            out << "error: " << *r.error << "\n";
        } else {
            out << transcript_summary(*r.transcript) << "\n";
            any_aborted = any_aborted || r.aborted();
        }
    }
    out << "sessions=" << report.sessions.size() << "\n";
    return any_aborted ? kAborted : kOk;
}

// Splits out --config, then places the file's arguments right after the verb
// so that explicit flags, which come later, win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config_path.empty()) return rest;
    const auto verb = std::find_first_of(rest.begin(), rest.end(), kVerbs.begin(), kVerbs.end());
    if (verb == rest.end()) throw UsageError("--config requires a command");
    const auto extra = config_file_args(config_path);
    rest.insert(verb + 1, extra.begin(), extra.end());
    return rest;
}

}  // namespace

std::vector<std::string> config_file_args(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(f, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(number) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        out.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trusted-center quantum key distribution simulator", "tcqkd"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.add_option("--config", "Flat key=value file with option defaults");

    auto* tables = app.add_subcommand("tables", "Derive the correlation tables from the state algebra");
    std::string table_scenario = "all";
    std::string table_format = "text";
    std::string table_out;
    tables->add_option("SCENARIO", table_scenario, "bell, mixed, ghz or all");
    tables->add_option("FORMAT", table_format, "text or csv");
    tables->add_option("--scenario", table_scenario, "bell, mixed, ghz or all");
    tables->add_option("--format", table_format, "text or csv");
    tables->add_option("--out", table_out, "Write to this file instead of stdout");

    auto* run_cmd = app.add_subcommand("run", "Run one attack-free session");
    SessionOptions run_opt;
    run_cmd->add_option("PROTOCOL", run_opt.protocol);
    run_cmd->add_option("NUM_STATES", run_opt.num_states);
    run_cmd->add_option("LOSS", run_opt.loss);
    run_cmd->add_option("SEED", run_opt.seed);
    run_opt.add_to(*run_cmd);

    auto* attack = app.add_subcommand("attack", "Run a session under attack and compare with the oracle");
    SessionOptions attack_opt;
    std::string attack_name = "intercept-resend";
    std::string target;
    std::optional<double> coupling;
    attack->add_option("PROTOCOL", attack_opt.protocol);
    attack->add_option("ATTACK", attack_name);
    attack_opt.add_to(*attack);
    attack->add_option("--attack", attack_name,
                       "intercept-resend[:alice|bob], cheating-center-x|y|z, ancilla[:coupling]");
    attack->add_option("--target", target, "alice or bob (intercept-resend)");
    attack->add_option("--coupling", coupling, "Probe coupling in [0, 1] (ancilla)");

    auto* bench = app.add_subcommand("bench", "Sweep measured efficiency over protocols and loss");
    SessionOptions bench_opt;
    std::string bench_protocols = "all";
    std::string bench_losses = "0";
    bench_opt.add_to(*bench);
    bench->get_option("--out")->description("Write the CSV here instead of stdout");
    bench->add_option("--protocols", bench_protocols, "Comma-separated protocol list or 'all'");
    bench->add_option("--loss-grid", bench_losses, "Comma-separated loss probabilities");

    auto* network = app.add_subcommand("network", "Execute a network scenario file");
    std::string scenario_path;
    std::string network_out;
    std::string network_csv;
    bool parallel = false;
    unsigned threads = 0;
    network->add_option("SCENARIO", scenario_path);
    network->add_option("--scenario", scenario_path, "Scenario JSON file");
    network->add_option("--out", network_out, "Write the report JSON here");
    network->add_option("--csv", network_csv, "Write per-session CSV rows here");
    network->add_flag("--parallel", parallel, "Run sessions on worker threads");
    network->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

    try {
        auto expanded = expand_config(args);
        std::reverse(expanded.begin(), expanded.end());
        app.parse(expanded);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*tables) return cmd_tables(table_scenario, table_format, table_out, out);
        if (*run_cmd) return cmd_run(run_opt, out);
        if (*attack) return cmd_attack(attack_opt, attack_name, target, coupling, out);
        if (*bench) return cmd_bench(bench_protocols, bench_losses, bench_opt, out);
        if (*network) return cmd_network(scenario_path, network_out, network_csv, parallel, threads, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace tcqkd::cli
