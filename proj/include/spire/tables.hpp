#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace spire {

struct InvalidTable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A discrete outcome distribution for one room encounter.
struct EncounterTable {
    std::vector<std::string> outcomes;
    std::vector<double> probabilities;

    // Throws InvalidTable unless every p is in [0,1] and the sum is 1 +- 1e-9.
    void validate() const;
};

// Markov model of Unknown-room contents: an initial distribution over
// {Monster, Treasure, Shop, Elite, Event} and a row-stochastic transition
// matrix conditioning each visit on the previous one.
struct UnknownTables {
    std::array<std::string, 5> states;
    std::array<double, 5> initial;
    std::array<std::array<double, 5>, 5> transition;  // transition[from][to]

    void validate() const;
};

struct MonsterTables {
    int first_visits = 0;  // how many leading monster fights draw from `first`
    EncounterTable first;
    EncounterTable rest;
};

// The full probability dataset powering entropy scoring. Ships as a JSON
// data file so encounter corrections never require a rebuild; a copy of the
// bundled file is compiled in as the default.
struct EncounterTables {
    std::string version;
    std::array<MonsterTables, 3> monster;  // index 0 -> act 1
    EncounterTable elite_first;
    EncounterTable elite_rest;
    EncounterTable boss;
    EncounterTable treasure;
    EncounterTable shop;
    EncounterTable rest_site;
    UnknownTables unknown;

    const MonsterTables& monster_for_act(int act) const {
        return monster.at(static_cast<std::size_t>(act - 1));
    }

    static EncounterTables from_json_text(const std::string& text);
    static EncounterTables load(const std::string& path);
    // The copy of data/encounter_tables.json embedded at build time.
    static const EncounterTables& bundled();
    static const std::string& bundled_json_text();
};

}  // namespace spire
