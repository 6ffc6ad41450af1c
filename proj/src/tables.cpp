#include "spire/tables.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tables_data.hpp"

namespace spire {

namespace {

constexpr double kSumTolerance = 1e-9;

EncounterTable table_from_json(const nlohmann::json& j, const std::string& name) {
    EncounterTable t;
    if (!j.contains("labels") || !j.contains("probs")) {
        throw InvalidTable("table '" + name + "' needs 'labels' and 'probs'");
    }
    t.outcomes = j.at("labels").get<std::vector<std::string>>();
    t.probabilities = j.at("probs").get<std::vector<double>>();
    if (t.outcomes.size() != t.probabilities.size()) {
        throw InvalidTable("table '" + name + "': labels/probs length mismatch");
    }
    t.validate();
    return t;
}

}  // namespace

void EncounterTable::validate() const {
    if (probabilities.empty()) throw InvalidTable("empty probability table");
    double sum = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidTable("probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw InvalidTable("probabilities sum to " + std::to_string(sum) + ", expected 1");
    }
}

void UnknownTables::validate() const {
    double sum = 0.0;
    for (double p : initial) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidTable("unknown initial probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) throw InvalidTable("unknown initial vector does not sum to 1");
    for (const auto& row : transition) {
        double rsum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0 && p <= 1.0)) throw InvalidTable("unknown transition probability outside [0,1]");
            rsum += p;
        }
        if (std::abs(rsum - 1.0) > kSumTolerance) {
            throw InvalidTable("unknown transition row does not sum to 1");
        }
    }
}

EncounterTables EncounterTables::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidTable(std::string("tables file is not valid JSON: ") + e.what());
    }

    try {
        EncounterTables t;
        t.version = j.at("version").get<std::string>();
        for (int act = 1; act <= 3; ++act) {
            const auto& m = j.at("monster").at("act" + std::to_string(act));
            MonsterTables& mt = t.monster[static_cast<std::size_t>(act - 1)];
            mt.first_visits = m.at("first_visits").get<int>();
            if (mt.first_visits < 1) throw InvalidTable("first_visits must be >= 1");
            mt.first = table_from_json(m.at("first"), "monster act" + std::to_string(act) + " first");
            mt.rest = table_from_json(m.at("rest"), "monster act" + std::to_string(act) + " rest");
        }
        t.elite_first = table_from_json(j.at("elite").at("first"), "elite first");
        t.elite_rest = table_from_json(j.at("elite").at("rest"), "elite rest");
        t.boss = table_from_json(j.at("boss"), "boss");
        t.treasure = table_from_json(j.at("treasure"), "treasure");
        t.shop = table_from_json(j.at("shop"), "shop");
        t.rest_site = table_from_json(j.at("rest_site"), "rest_site");

        const auto& u = j.at("unknown");
        auto states = u.at("states").get<std::vector<std::string>>();
        auto initial = u.at("initial").get<std::vector<double>>();
        auto transition = u.at("transition").get<std::vector<std::vector<double>>>();
        if (states.size() != 5 || initial.size() != 5 || transition.size() != 5) {
            throw InvalidTable("unknown-room model must have exactly 5 states");
        }
        for (std::size_t i = 0; i < 5; ++i) {
            t.unknown.states[i] = states[i];
            t.unknown.initial[i] = initial[i];
            if (transition[i].size() != 5) throw InvalidTable("unknown transition row must have 5 entries");
            for (std::size_t k = 0; k < 5; ++k) t.unknown.transition[i][k] = transition[i][k];
        }
        t.unknown.validate();
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidTable(std::string("tables file is missing fields: ") + e.what());
    }
}

EncounterTables EncounterTables::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidTable("cannot open tables file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

const std::string& EncounterTables::bundled_json_text() {
    static const std::string text = kEncounterTablesJson;
    return text;
}

const EncounterTables& EncounterTables::bundled() {
    static const EncounterTables tables = from_json_text(bundled_json_text());
    return tables;
}

}  // namespace spire
