#include <doctest.h>

#include <algorithm>
#include <random>

#include "golden_tables.hpp"
#include "kz/model.hpp"

using namespace kz;

namespace {

ProfileSet random_profile_set(std::mt19937& rng) {
    std::uniform_int_distribution<int> researcher_count(0, 6);
    std::uniform_int_distribution<int> publication_count(0, 12);
    std::uniform_int_distribution<int> year(1900, 2023);
    std::uniform_int_distribution<long> citations(0, 5000);

    ProfileSet set;
    const int n = researcher_count(rng);
    for (int i = 0; i < n; ++i) {
        ResearcherProfile profile;
        profile.id = "R" + std::to_string(i + 1);
        const int pubs = publication_count(rng);
        for (int j = 0; j < pubs; ++j) {
            profile.publications.push_back(Publication{year(rng), citations(rng)});
        }
        set.researchers.push_back(std::move(profile));
    }
    return set;
}

} // namespace

TEST_CASE("parse_profiles_json: minimal document") {
    const auto set = parse_profiles_json(
        R"({"researchers":[{"id":"R1","publications":[{"year":2014,"citations":40}]}]})");
    REQUIRE(set.researchers.size() == 1);
    CHECK(set.researchers[0].id == "R1");
    REQUIRE(set.researchers[0].publications.size() == 1);
    CHECK(set.researchers[0].publications[0] == Publication{2014, 40});
}

TEST_CASE("parse_profiles_json: empty researcher list") {
    const auto set = parse_profiles_json(R"({"researchers":[]})");
    CHECK(set.researchers.empty());
}

TEST_CASE("parse_profiles_json: first case-study researcher") {
    const auto& c = kz::testing::golden_cases()[0];
    const ProfileSet expected{{kz::testing::profile_of(c)}, ""};
    const auto set = parse_profiles_json(serialize_profiles_json(expected));
    REQUIRE(set.researchers.size() == 1);

    auto counts = set.researchers[0].citation_counts();
    std::sort(counts.begin(), counts.end());
    CHECK(counts == std::vector<long>{0, 0, 1, 1, 1, 3, 10, 24, 30, 40});
}

TEST_CASE("parse_profiles_json: error positions and paths") {
    CHECK_THROWS_WITH_AS(parse_profiles_json("{\"researchers\":["), // truncated
                         doctest::Contains("malformed JSON"), ParseError);
    CHECK_THROWS_WITH_AS(parse_profiles_json(R"({"researchers":[{"id":"R1"}]})"),
                         doctest::Contains("/researchers/0/publications"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_profiles_json(
            R"({"researchers":[{"id":"R1","publications":[{"year":2014}]}]})"),
        doctest::Contains("/researchers/0/publications/0/citations"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_profiles_json(
            R"({"researchers":[{"id":"R1","publications":[{"year":"x","citations":1}]}]})"),
        doctest::Contains("expected integer"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_profiles_json(
            R"({"researchers":[{"id":"R1","publications":[{"year":2014,"citations":-1}]}]})"),
        doctest::Contains("non-negative"), ParseError);
}

TEST_CASE("parse_profiles_json: duplicate id names the id") {
    const char* doc = R"({"researchers":[
        {"id":"R1","publications":[]},
        {"id":"R1","publications":[]}]})";
    CHECK_THROWS_WITH_AS(parse_profiles_json(doc), doctest::Contains("duplicate researcher id"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_profiles_json(doc), doctest::Contains("R1"), ParseError);
}

TEST_CASE("parse_profiles_csv: single row and header-only") {
    const auto set = parse_profiles_csv("researcher_id,year,citations\nR1,2014,40\n");
    REQUIRE(set.researchers.size() == 1);
    CHECK(set.researchers[0].publications ==
          std::vector<Publication>{Publication{2014, 40}});

    const auto empty = parse_profiles_csv("researcher_id,year,citations\n");
    CHECK(empty.researchers.empty());
}

TEST_CASE("parse_profiles_csv: case-study rows group by researcher") {
    std::string csv = "researcher_id,year,citations\r\n"; // CRLF accepted
    const auto& cases = kz::testing::golden_cases();
    for (const auto* c : {&cases[0], &cases[1]}) {
        for (const auto& row : c->rows) {
            csv += c->id + "," + std::to_string(row.year) + "," + std::to_string(row.citations) +
                   "\r\n";
        }
    }
    const auto set = parse_profiles_csv(csv);
    REQUIRE(set.researchers.size() == 2);
    for (const auto& profile : set.researchers) {
        CHECK(profile.publications.size() == 10);
        long total = 0;
        for (const auto& pub : profile.publications) total += pub.citations;
        CHECK(total == 110);
    }
}

TEST_CASE("parse_profiles_csv: errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_profiles_csv("id,year,citations\nR1,2014,1\n"),
                         doctest::Contains("bad header"), ParseError);
    CHECK_THROWS_WITH_AS(parse_profiles_csv(""), doctest::Contains("missing header"), ParseError);
    CHECK_THROWS_WITH_AS(parse_profiles_csv("researcher_id,year,citations\nR1,20x4,1\n"),
                         doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_profiles_csv("researcher_id,year,citations\nR1,2014,1\nR2,2014,-3\n"),
                         doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_WITH_AS(parse_profiles_csv("researcher_id,year,citations\nR1,2014,-3\n"),
                         doctest::Contains("non-negative"), ParseError);
    CHECK_THROWS_WITH_AS(parse_profiles_csv("researcher_id,year,citations\nR1,2014\n"),
                         doctest::Contains("expected 3 fields"), ParseError);
}

TEST_CASE("csv quoting survives commas and quotes in ids") {
    ProfileSet set;
    set.researchers.push_back(
        ResearcherProfile{"Smith, J. \"K\"", {Publication{2001, 3}, Publication{2002, 0}}});
    const auto reparsed = parse_profiles_csv(serialize_profiles_csv(set));
    CHECK(reparsed == set);
}

TEST_CASE("duplicate (year, citations) rows stay distinct publications") {
    const auto set = parse_profiles_csv(
        "researcher_id,year,citations\nR1,2014,40\nR1,2014,40\n");
    REQUIRE(set.researchers.size() == 1);
    CHECK(set.researchers[0].publications.size() == 2);
}

TEST_CASE("validate: case-study data passes at evaluation year 2023") {
    const auto set = kz::testing::golden_profile_set();
    CHECK_NOTHROW(validate(set, EvaluationContext{kz::testing::kGoldenEvaluationYear}));
}

TEST_CASE("validate: future-dated publication names researcher and year") {
    ProfileSet set;
    set.researchers.push_back(ResearcherProfile{"R9", {Publication{2024, 0}}});
    CHECK_THROWS_WITH_AS(validate(set, EvaluationContext{2023}), doctest::Contains("R9"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(validate(set, EvaluationContext{2023}), doctest::Contains("2024"),
                         ValidationError);
}

TEST_CASE("validate: years below the sanity bound are rejected") {
    ProfileSet set;
    set.researchers.push_back(ResearcherProfile{"R1", {Publication{1499, 0}}});
    CHECK_THROWS_AS(validate(set, EvaluationContext{2023}), ValidationError);
    set.researchers[0].publications[0].year = 1500;
    CHECK_NOTHROW(validate(set, EvaluationContext{2023}));
}

TEST_CASE("validate: empty publication lists pass") {
    ProfileSet set;
    set.researchers.push_back(ResearcherProfile{"R1", {}});
    CHECK_NOTHROW(validate(set, EvaluationContext{2023}));
}

TEST_CASE("property: mutated inputs fail as ParseError, never anything else") {
    std::mt19937 rng(424242);
    const std::string seed_json =
        R"({"researchers":[{"id":"R1","publications":[{"year":2014,"citations":40}]}]})";
    const std::string seed_csv = "researcher_id,year,citations\nR1,2014,40\nR2,2015,3\n";
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> op(0, 2);

    for (int iter = 0; iter < 400; ++iter) {
        std::string text = iter % 2 == 0 ? seed_json : seed_csv;
        for (int m = 0; m <= iter % 5 && !text.empty(); ++m) {
            std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
            switch (op(rng)) {
                case 0: text[pos(rng)] = static_cast<char>(byte(rng)); break;
                case 1: text.erase(pos(rng), 1); break;
                default: text.insert(pos(rng), 1, static_cast<char>(byte(rng)));
            }
        }
        try {
            (void)parse_profiles_json(text);
        } catch (const ParseError&) {
        }
        try {
            (void)parse_profiles_csv(text);
        } catch (const ParseError&) {
        }
        // Anything but success or ParseError propagates and fails the case.
    }
}

TEST_CASE("property: serialize/parse round trip, both encodings, idempotent validate") {
    std::mt19937 rng(20230414);
    for (int iter = 0; iter < 50; ++iter) {
        const ProfileSet set = random_profile_set(rng);

        const auto via_json = parse_profiles_json(serialize_profiles_json(set));
        CHECK(via_json == set);
        // Parse of the same serialization is stable.
        CHECK(parse_profiles_json(serialize_profiles_json(via_json)) == via_json);

        const auto via_csv = parse_profiles_csv(serialize_profiles_csv(set));
        // CSV cannot carry publication-less researchers; compare after dropping them.
        ProfileSet without_empty;
        for (const auto& profile : set.researchers) {
            if (!profile.publications.empty()) without_empty.researchers.push_back(profile);
        }
        CHECK(via_csv == without_empty);

        const EvaluationContext ctx{2123};
        const auto validated = validate(set, ctx);
        CHECK(validated == set);
        CHECK(validate(validated, ctx) == validated);
    }
}
