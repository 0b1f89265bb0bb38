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

#include "tcqkd/report.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tcqkd {
namespace {

using nlohmann::ordered_json;

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Fixed-precision rendering keeps CSV and summary output stable and readable.
std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

ordered_json attack_json(const AttackModel& attack) {
    ordered_json j;
    j["kind"] = std::string(attack_kind(attack));
    if (const auto* ir = std::get_if<InterceptResend>(&attack)) {
        j["target"] = std::string(to_string(ir->target));
        auto pool = ordered_json::array();
        for (Basis b : ir->basis_pool) pool.push_back(std::string(to_string(b)));
        j["basis_pool"] = pool;
    } else if (const auto* cc = std::get_if<CheatingCenterMeasureAll>(&attack)) {
        j["basis"] = std::string(to_string(cc->basis));
    } else if (const auto* an = std::get_if<AncillaEntangle>(&attack)) {
        j["coupling"] = an->coupling;
    }
    return j;
}

AttackModel attack_from_json(const ordered_json& j) {
    if (j.is_string()) return parse_attack_spec(j.get<std::string>());
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "None") return NoAttack{};
    if (kind == "InterceptResend") {
        InterceptResend a;
        if (j.contains("target")) a.target = parse_party(j["target"].get<std::string>());
        if (j.contains("basis_pool")) {
            for (const auto& b : j["basis_pool"]) a.basis_pool.push_back(parse_basis(b.get<std::string>()));
        }
        return a;
    }
    if (kind == "CheatingCenterMeasureAll") {
        return CheatingCenterMeasureAll{parse_basis(j.value("basis", std::string("x")))};
    }
    if (kind == "AncillaEntangle") return AncillaEntangle{j.value("coupling", 0.0)};
    throw std::invalid_argument("unknown attack kind '" + kind + "'");
}

ordered_json config_json(const SessionConfig& c) {
    ordered_json j;
    j["protocol"] = std::string(to_string(c.protocol));
    j["num_states"] = c.num_states;
    j["check_fraction"] = c.check_fraction;
    j["qber_abort_threshold"] = c.qber_abort_threshold;
    j["loss_probability"] = c.loss_probability;
    j["rng_seed"] = c.rng_seed;
    j["epsilon"] = c.epsilon;
    j["attack"] = attack_json(c.attack);
    return j;
}

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json check_json(const CheckReport& c) {
    ordered_json j;
    j["checked"] = c.checked;
    j["errors"] = c.errors;
    j["error_rate"] = c.error_rate();
    j["aborted"] = c.aborted;
    j["empty_check"] = c.empty_check;
    auto cells = ordered_json::array();
    for (Basis a : {Basis::X, Basis::Y, Basis::Z}) {
        for (Basis b : {Basis::X, Basis::Y, Basis::Z}) {
            const auto& cell = c.by_bases[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (cell[0] == 0) continue;
            cells.push_back({{"alice_basis", std::string(to_string(a))},
                             {"bob_basis", std::string(to_string(b))},
                             {"checked", cell[0]},
                             {"errors", cell[1]}});
        }
    }
    j["by_bases"] = cells;
    return j;
}

ordered_json positions_json(const std::vector<PositionRecord>& positions) {
    auto arr = ordered_json::array();
    for (const auto& p : positions) {
        ordered_json j;
        j["i"] = p.index;
        j["lost"] = p.lost;
        j["center"] = p.announcement ? ordered_json(to_string(*p.announcement)) : ordered_json(nullptr);
        j["alice"] = p.alice_outcome ? ordered_json(to_string(BasisOutcome{p.alice_basis, *p.alice_outcome}))
                                     : ordered_json(std::string(to_string(p.alice_basis)) + "?");
        j["bob"] = p.bob_outcome ? ordered_json(to_string(BasisOutcome{p.bob_basis, *p.bob_outcome}))
                                 : ordered_json(std::string(to_string(p.bob_basis)) + "?");
        j["kept"] = p.kept;
        j["check"] = p.used_for_check;
        arr.push_back(std::move(j));
    }
    return arr;
}

ordered_json adversary_json(const AdversaryReport& a) {
    ordered_json j;
    j["attack"] = attack_json(a.attack);
    j["predicted_detection_rate"] = optional_json(a.predicted_detection_rate);
    j["observed_detection_rate"] = a.observed_detection_rate;
    j["predicted_eve_agreement"] = optional_json(a.predicted_eve_agreement);
    j["observed_eve_agreement"] = optional_json(a.observed_eve_agreement);
    j["eve_guesses"] = a.eve_guesses;
    auto recs = ordered_json::array();
    for (const auto& r : a.records) {
        recs.push_back({{"position", r.position},
                        {"basis", to_string(r.basis_used)},
                        {"outcome", std::string(to_string(r.outcome))},
                        {"inferred_bit", r.inferred_bit ? ordered_json(*r.inferred_bit) : ordered_json(nullptr)}});
    }
    j["records"] = recs;
    return j;
}

ordered_json transcript_object(const SessionTranscript& t) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_json(t.config);
    j["legs"] = {{"alice_loss", t.legs.alice}, {"bob_loss", t.legs.bob}};
    const auto& d = t.distillation;
    j["summary"] = {
        {"kept", t.kept_count()},
        {"lost", t.lost_count()},
        {"kept_fraction", t.kept_fraction()},
        {"raw_key_bits", t.alice_raw_key.size()},
        {"qber", d.qber},
        {"block_size", d.block_size},
        {"leaked_bits", d.leaked_bits},
        {"residual_errors", d.residual_errors},
        {"final_key_bits", d.alice_final.bits.size()},
        {"keys_agree", d.alice_final.bits == d.bob_final.bits},
        {"efficiency_measured", t.efficiency_measured},
        {"efficiency_bound", t.efficiency_bound},
        {"efficiency_baseline", kTimeReservedBaseline},
    };
    j["check"] = check_json(t.check);
    j["keys"] = {{"alice_final", bits_to_hex(d.alice_final.bits)}, {"bob_final", bits_to_hex(d.bob_final.bits)}};
    j["adversary"] = t.adversary ? adversary_json(*t.adversary) : ordered_json(nullptr);
    j["positions"] = positions_json(t.positions);
    return j;
}

ordered_json aggregate_json(const Aggregate& a) {
    return {{"sessions", a.sessions},
            {"completed", a.completed},
            {"aborted", a.aborted},
            {"failed", a.failed},
            {"mean_kept_fraction", a.mean_kept_fraction},
            {"mean_qber", a.mean_qber},
            {"mean_efficiency", a.mean_efficiency},
            {"final_key_bits", a.final_key_bits}};
}

SessionConfig config_from_json(const ordered_json& j, bool& explicit_seed) {
    SessionConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "protocol") {
            c.protocol = parse_protocol(value.get<std::string>());
        } else if (key == "num_states") {
            c.num_states = value.get<std::size_t>();
        } else if (key == "check_fraction") {
            c.check_fraction = value.get<double>();
        } else if (key == "qber_abort_threshold") {
            c.qber_abort_threshold = value.get<double>();
        } else if (key == "loss_probability") {
            c.loss_probability = value.get<double>();
        } else if (key == "rng_seed") {
            c.rng_seed = value.get<std::uint64_t>();
            explicit_seed = true;
        } else if (key == "epsilon") {
            c.epsilon = value.get<double>();
        } else if (key == "attack") {
            c.attack = attack_from_json(value);
        } else {
            throw std::invalid_argument("unknown session config field '" + key + "'");
        }
    }
    return c;
}

}  // namespace

std::string transcript_json(const SessionTranscript& transcript) {
    return transcript_object(transcript).dump(2) + "\n";
}

std::string transcript_summary(const SessionTranscript& t) {
    std::ostringstream os;
    os << "protocol=" << to_string(t.config.protocol) << " states=" << t.config.num_states
       << " kept_fraction=" << fixed(t.kept_fraction()) << " qber=" << fixed(t.check.error_rate())
       << " checked=" << t.check.checked << " aborted=" << (t.check.aborted ? "yes" : "no")
       << " final_bits=" << t.distillation.alice_final.bits.size()
       << " efficiency=" << fixed(t.efficiency_measured) << " bound=" << fixed(t.efficiency_bound);
    return os.str();
}

std::string transcript_csv_header() {
    return "protocol,num_states,loss,attack,kept_fraction,qber,aborted,key_bits,efficiency_measured,"
           "efficiency_bound\n";
}

std::string transcript_csv_row(const SessionTranscript& t) {
    std::ostringstream os;
    os << to_string(t.config.protocol) << ',' << t.config.num_states << ',' << fixed(t.config.loss_probability)
       << ',' << attack_spec(t.config.attack) << ',' << fixed(t.kept_fraction()) << ','
       << fixed(t.check.error_rate()) << ',' << (t.check.aborted ? "true" : "false") << ','
       << t.distillation.alice_final.bits.size() << ',' << fixed(t.efficiency_measured) << ','
       << fixed(t.efficiency_bound) << '\n';
    return os.str();
}

std::string network_report_json(const NetworkReport& report) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    auto sessions = ordered_json::array();
    for (const auto& r : report.sessions) {
        ordered_json s;
        s["index"] = r.index;
        s["requester"] = r.requester;
        s["responder"] = r.responder;
        s["protocol"] = std::string(to_string(r.protocol));
        s["seed"] = r.seed;
        s["latency_ticks"] = r.latency_ticks;
        s["error"] = r.error ? ordered_json(*r.error) : ordered_json(nullptr);
        if (r.transcript) {
            auto t = transcript_object(*r.transcript);
            t.erase("schema_version");
            t.erase("positions");
            s["transcript"] = std::move(t);
        } else {
            s["transcript"] = nullptr;
        }
        sessions.push_back(std::move(s));
    }
    j["sessions"] = sessions;
    ordered_json by_protocol = ordered_json::object();
    for (const auto& [p, agg] : report.by_protocol) by_protocol[std::string(to_string(p))] = aggregate_json(agg);
    j["by_protocol"] = by_protocol;
    ordered_json by_user = ordered_json::object();
    for (const auto& [u, agg] : report.by_user) by_user[u] = aggregate_json(agg);
    j["by_user"] = by_user;
    return j.dump(2) + "\n";
}

std::string network_report_csv(const NetworkReport& report) {
    std::ostringstream os;
    os << "index,requester,responder,protocol,seed,status,kept_fraction,qber,checked,final_key_bits,"
          "efficiency_measured,efficiency_bound,keys_agree\n";
    for (const auto& r : report.sessions) {
        os << r.index << ',' << r.requester << ',' << r.responder << ',' << to_string(r.protocol) << ','
           << r.seed << ',';
        if (!r.transcript) {
            os << "error,,,,,,,\n";
            continue;
        }
        const auto& t = *r.transcript;
        os << (t.check.aborted ? "aborted" : "ok") << ',' << fixed(t.kept_fraction()) << ','
           << fixed(t.check.error_rate()) << ',' << t.check.checked << ','
           << t.distillation.alice_final.bits.size() << ',' << fixed(t.efficiency_measured) << ','
           << fixed(t.efficiency_bound) << ','
           << (t.distillation.alice_final.bits == t.distillation.bob_final.bits ? "true" : "false") << '\n';
    }
    return os.str();
}

NetworkScenario parse_scenario_json(std::string_view text) {
    try {
        const auto j = ordered_json::parse(text);
        NetworkScenario s;
        s.seed = j.value("seed", std::uint64_t{0});
        for (const auto& u : j.at("users")) s.users.push_back(u.get<std::string>());
        if (j.contains("channels")) {
            for (const auto& [id, ch] : j["channels"].items()) {
                s.channels[id] = ChannelModel{ch.value("loss_probability", 0.0),
                                              ch.value("latency_ticks", std::uint64_t{0})};
            }
        }
        if (j.contains("sessions")) {
            for (const auto& sj : j["sessions"]) {
                SessionRequest req;
                req.requester = sj.at("requester").get<std::string>();
                req.responder = sj.at("responder").get<std::string>();
                if (sj.contains("config")) req.config = config_from_json(sj["config"], req.explicit_seed);
                s.sessions.push_back(std::move(req));
            }
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed scenario: ") + e.what());
    }
}

AttackModel parse_attack_spec(std::string_view spec) {
    const std::string s = lower(spec);
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "none" && arg.empty()) return NoAttack{};
    if (head == "intercept-resend") {
        InterceptResend a;
        if (!arg.empty()) a.target = parse_party(arg);
        return a;
    }
    if (head.rfind("cheating-center-", 0) == 0 && arg.empty()) {
        return CheatingCenterMeasureAll{parse_basis(head.substr(16))};
    }
    if (head == "ancilla") {
        AncillaEntangle a;
        if (!arg.empty()) {
            std::size_t used = 0;
            try {
                a.coupling = std::stod(arg, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != arg.size()) throw std::invalid_argument("bad ancilla coupling '" + arg + "'");
        }
        return a;
    }
    throw std::invalid_argument("unknown attack spec '" + std::string(spec) + "'");
}

std::string attack_spec(const AttackModel& attack) {
    if (const auto* ir = std::get_if<InterceptResend>(&attack)) {
        return "intercept-resend:" + lower(to_string(ir->target));
    }
    if (const auto* cc = std::get_if<CheatingCenterMeasureAll>(&attack)) {
        return "cheating-center-" + std::string(to_string(cc->basis));
    }
    if (const auto* an = std::get_if<AncillaEntangle>(&attack)) {
        std::ostringstream os;
        os << "ancilla:" << an->coupling;
        return os.str();
    }
    return "none";
}

}  // namespace tcqkd
