#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "doctest.h"
#include "spire/entropy.hpp"
#include "spire/tables.hpp"

namespace {

using namespace spire;
using nlohmann::json;

// Reference values computed independently (high-precision sympy evaluation
// of -sum(p*log2(p)) over the distributions in data/encounter_tables.json),
// frozen here. A change in the data file must consciously update both.
constexpr double kAct1MonsterFirst = 2.0;
constexpr double kAct1MonsterRest = 3.265319531114783;
constexpr double kAct2MonsterFirst = 2.321928094887362;
constexpr double kAct2MonsterRest = 2.8764450655653073;
constexpr double kAct3MonsterFirst = 1.584962500721156;
constexpr double kAct3MonsterRest = 3.0;
constexpr double kEliteFirst = 1.584962500721156;
constexpr double kEliteRest = 1.0;
constexpr double kBoss = 1.584962500721156;
constexpr double kTreasure = 1.462409352486515;
constexpr double kUnknownInitial = 1.4651898078183858;

json bundled_json() { return json::parse(EncounterTables::bundled_json_text()); }

TEST_CASE("bundled tables parse and validate") {
    const EncounterTables& t = EncounterTables::bundled();
    CHECK(t.version == "1.0.0");
    CHECK(t.monster_for_act(1).first_visits == 3);
    CHECK(t.monster_for_act(2).first_visits == 2);
    CHECK(t.monster_for_act(3).first_visits == 2);
    CHECK(t.elite_rest.probabilities.size() == 3);
    CHECK(t.unknown.states[0] == "Monster");
}

TEST_CASE("bundled text matches the data file on disk") {
    std::ifstream in(std::string(SPIRE_TEST_DIR) + "/../data/encounter_tables.json",
                     std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(EncounterTables::bundled_json_text() == buf.str());
}

TEST_CASE("per-table entropies match frozen reference values") {
    const EncounterTables& t = EncounterTables::bundled();
    CHECK(table_entropy(t.monster_for_act(1).first) == doctest::Approx(kAct1MonsterFirst).epsilon(1e-12));
    CHECK(table_entropy(t.monster_for_act(1).rest) == doctest::Approx(kAct1MonsterRest).epsilon(1e-12));
    CHECK(table_entropy(t.monster_for_act(2).first) == doctest::Approx(kAct2MonsterFirst).epsilon(1e-12));
    CHECK(table_entropy(t.monster_for_act(2).rest) == doctest::Approx(kAct2MonsterRest).epsilon(1e-12));
    CHECK(table_entropy(t.monster_for_act(3).first) == doctest::Approx(kAct3MonsterFirst).epsilon(1e-12));
    CHECK(table_entropy(t.monster_for_act(3).rest) == doctest::Approx(kAct3MonsterRest).epsilon(1e-12));
    CHECK(table_entropy(t.elite_first) == doctest::Approx(kEliteFirst).epsilon(1e-12));
    CHECK(table_entropy(t.elite_rest) == doctest::Approx(kEliteRest).epsilon(1e-12));
    CHECK(table_entropy(t.boss) == doctest::Approx(kBoss).epsilon(1e-12));
    CHECK(table_entropy(t.treasure) == doctest::Approx(kTreasure).epsilon(1e-12));
    CHECK(table_entropy(t.shop) == 0.0);
    CHECK(table_entropy(t.rest_site) == 0.0);
    CHECK(entropy_bits(t.unknown.initial) == doctest::Approx(kUnknownInitial).epsilon(1e-12));
}

TEST_CASE("invalid tables are rejected") {
    SUBCASE("not JSON at all") {
        CHECK_THROWS_AS(EncounterTables::from_json_text("nope{"), InvalidTable);
    }
    SUBCASE("missing top-level field") {
        json j = bundled_json();
        j.erase("boss");
        CHECK_THROWS_AS(EncounterTables::from_json_text(j.dump()), InvalidTable);
    }
    SUBCASE("labels/probs length mismatch") {
        json j = bundled_json();
        j["treasure"]["labels"].push_back("extra");
        CHECK_THROWS_AS(EncounterTables::from_json_text(j.dump()), InvalidTable);
    }
    SUBCASE("probabilities must sum to one") {
        json j = bundled_json();
        j["boss"]["probs"][0] = 0.9;
        CHECK_THROWS_AS(EncounterTables::from_json_text(j.dump()), InvalidTable);
    }
    SUBCASE("negative probability") {
        json j = bundled_json();
        j["elite"]["rest"]["probs"] = {1.5, -0.5, 0.0};
        CHECK_THROWS_AS(EncounterTables::from_json_text(j.dump()), InvalidTable);
    }
    SUBCASE("first_visits below one") {
        json j = bundled_json();
        j["monster"]["act1"]["first_visits"] = 0;
        CHECK_THROWS_AS(EncounterTables::from_json_text(j.dump()), InvalidTable);
    }
    SUBCASE("unknown transition row out of balance") {
        json j = bundled_json();
        j["unknown"]["transition"][2][0] = 0.9;
        j["unknown"]["transition"][2][1] = 0.9;
        CHECK_THROWS_AS(EncounterTables::from_json_text(j.dump()), InvalidTable);
    }
    SUBCASE("wrong unknown state count") {
        json j = bundled_json();
        j["unknown"]["states"] = {"a", "b"};
        CHECK_THROWS_AS(EncounterTables::from_json_text(j.dump()), InvalidTable);
    }
}

TEST_CASE("load reads a file and rejects missing paths") {
    CHECK_NOTHROW(EncounterTables::load(std::string(SPIRE_TEST_DIR) +
                                        "/../data/encounter_tables.json"));
    CHECK_THROWS_AS(EncounterTables::load("/nonexistent/tables.json"), InvalidTable);
}

}  // namespace
