#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "golden_tables.hpp"
#include "kz/metrics.hpp"

using namespace kz;
using kz::testing::golden_cases;
using kz::testing::kGoldenEvaluationYear;
using kz::testing::profile_of;

namespace {

constexpr double kPrintTolerance = 5e-4 + 1e-12; // reference values carry 3-4 decimals

// Definitional oracles: enumerate every candidate value.
int h_index_oracle(std::vector<long> counts) {
    int best = 0;
    for (int h = 0; h <= static_cast<int>(counts.size()); ++h) {
        long at_least = 0;
        for (long c : counts) {
            if (c >= h) ++at_least;
        }
        if (at_least >= h) best = h;
    }
    return best;
}

int g_index_oracle(std::vector<long> counts) {
    std::sort(counts.begin(), counts.end(), std::greater<>());
    int best = 0;
    for (int g = 0; g <= static_cast<int>(counts.size()); ++g) {
        long top_sum = 0;
        for (int i = 0; i < g; ++i) top_sum += counts[static_cast<std::size_t>(i)];
        if (top_sum >= static_cast<long>(g) * g) best = g;
    }
    return best;
}

ResearcherProfile random_profile(std::mt19937& rng, int max_pubs = 20) {
    std::uniform_int_distribution<int> n_dist(1, max_pubs);
    std::uniform_int_distribution<int> year_dist(1990, 2023);
    std::uniform_int_distribution<long> cite_dist(0, 400);
    ResearcherProfile profile;
    profile.id = "R";
    const int n = n_dist(rng);
    for (int i = 0; i < n; ++i) {
        profile.publications.push_back(Publication{year_dist(rng), cite_dist(rng)});
    }
    return profile;
}

} // namespace

TEST_CASE("paper_impact: reference anchors") {
    CHECK(std::fabs(paper_impact(40, 4) - 2.2921) < kPrintTolerance);
    CHECK(std::fabs(paper_impact(500, 4) - 3.8614) < kPrintTolerance);
    CHECK(std::fabs(paper_impact(250, 3) - 3.9829) < kPrintTolerance);
    CHECK(paper_impact(0, 4) == 0.0);
    CHECK(paper_impact(1, 4) == 0.0);
    CHECK(paper_impact(0, 0) == 0.0); // uncited papers are fine at h = 0
}

TEST_CASE("paper_impact: domain errors") {
    CHECK_THROWS_AS(paper_impact(2, 0), DomainError);
    CHECK_THROWS_AS(paper_impact(-1, 3), DomainError);
    CHECK_THROWS_AS(paper_impact(5, -1), DomainError);
}

TEST_CASE("paper_impact: defining inequality holds with equality") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> cite_dist(2, 1000000);
    std::uniform_int_distribution<int> h_dist(1, 120);
    for (int i = 0; i < 1000; ++i) {
        const long c = cite_dist(rng);
        const int h = h_dist(rng);
        const double k = paper_impact(c, h);
        const double reconstructed = std::pow(h + 1.0, k);
        CHECK(std::fabs(reconstructed - static_cast<double>(c)) <= 1e-12 * static_cast<double>(c));
    }
}

TEST_CASE("paper_impact: monotone in citations, antitone in h") {
    for (long c = 1; c < 200; ++c) {
        CHECK(paper_impact(c + 1, 5) > paper_impact(c, 5));
    }
    for (int h = 1; h < 60; ++h) {
        CHECK(paper_impact(123, h + 1) < paper_impact(123, h));
    }
}

TEST_CASE("publication_age: clamped difference") {
    CHECK(publication_age(2014, 2023) == 9);
    CHECK(publication_age(2022, 2023) == 1);
    CHECK(publication_age(2023, 2023) == 1);
    CHECK_THROWS_AS(publication_age(2024, 2023), ValidationError);
}

TEST_CASE("h_index and g_index: reference anchors") {
    const std::vector<long> table1{40, 30, 0, 3, 24, 1, 1, 1, 0, 10};
    CHECK(h_index(table1) == 4);

    const std::vector<long> worked{350, 35, 10, 2, 2, 0, 0, 0, 0, 0};
    CHECK(h_index(worked) == 3);
    CHECK(g_index(worked) == 10); // capped at N

    CHECK(h_index({}) == 0);
    CHECK(g_index({}) == 0);

    const std::vector<long> ones{1, 1, 1};
    CHECK(g_index(ones) == 1);
}

TEST_CASE("h_index/g_index agree with definitional oracles") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> n_dist(0, 12);
    std::uniform_int_distribution<long> cite_dist(0, 30);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<long> counts(static_cast<std::size_t>(n_dist(rng)));
        for (auto& c : counts) c = cite_dist(rng);
        CHECK(h_index(counts) == h_index_oracle(counts));
        CHECK(g_index(counts) == g_index_oracle(counts));
    }
}

TEST_CASE("kz_breakdown: case-study rows reproduce printed columns") {
    const EvaluationContext ctx{kGoldenEvaluationYear};
    for (const auto& c : golden_cases()) {
        const auto rows = kz_breakdown(profile_of(c), ctx);
        REQUIRE(rows.size() == c.rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CAPTURE(c.id);
            CAPTURE(i);
            CHECK(rows[i].age == c.rows[i].printed_age);
            const double tolerance =
                kz::testing::exact_power_cell(c.rows[i].printed_impact) ? 2e-4 : kPrintTolerance;
            CHECK(std::fabs(rows[i].impact - c.rows[i].printed_impact) <= tolerance);
            CHECK(std::fabs(rows[i].weighted_impact - c.rows[i].printed_weighted) <=
                  kPrintTolerance);
            CHECK(rows[i].weighted_impact == rows[i].impact / rows[i].age);
        }
    }
}

TEST_CASE("kz_breakdown: single uncited publication") {
    const ResearcherProfile profile{"R1", {Publication{2022, 0}}};
    const auto rows = kz_breakdown(profile, EvaluationContext{2023});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].impact == 0.0);
    CHECK(rows[0].age == 1);
    CHECK(rows[0].weighted_impact == 0.0);
}

TEST_CASE("kz_breakdown: empty profile is an error") {
    CHECK_THROWS_AS(kz_breakdown(ResearcherProfile{"R1", {}}, EvaluationContext{2023}),
                    InsufficientDataError);
    CHECK_THROWS_AS(kz_score(ResearcherProfile{"R1", {}}, EvaluationContext{2023}),
                    InsufficientDataError);
    CHECK_THROWS_AS(career_length(ResearcherProfile{"R1", {}}, EvaluationContext{2023}),
                    InsufficientDataError);
}

TEST_CASE("kz_score: case-study totals within print tolerance") {
    const EvaluationContext ctx{kGoldenEvaluationYear};
    for (const auto& c : golden_cases()) {
        CAPTURE(c.id);
        CHECK(std::fabs(kz_score(profile_of(c), ctx) - c.printed_kz) <= 5e-3);
    }
}

TEST_CASE("kz_score: zero iff every publication has at most one citation") {
    const EvaluationContext ctx{2023};
    const ResearcherProfile low{"L", {Publication{2019, 1}, Publication{2020, 0},
                                      Publication{2021, 1}}};
    CHECK(kz_score(low, ctx) == 0.0);

    std::mt19937 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        const auto profile = random_profile(rng);
        const bool all_low = std::all_of(profile.publications.begin(),
                                         profile.publications.end(),
                                         [](const Publication& p) { return p.citations <= 1; });
        CHECK((kz_score(profile, ctx) == 0.0) == all_low);
    }
}

TEST_CASE("kz_score: equals its breakdown column sum") {
    std::mt19937 rng(13);
    const EvaluationContext ctx{2023};
    for (int iter = 0; iter < 200; ++iter) {
        const auto profile = random_profile(rng);
        const auto rows = kz_breakdown(profile, ctx);
        double naive = 0.0;
        for (const auto& row : rows) naive += row.weighted_impact;
        const double score = kz_score(profile, ctx);
        CHECK(std::fabs(score - naive) <= 1e-12 * std::max(1.0, std::fabs(naive)));
    }
}

TEST_CASE("kz_score: invariant under publication permutation (bitwise)") {
    std::mt19937 rng(17);
    const EvaluationContext ctx{2023};
    for (int iter = 0; iter < 100; ++iter) {
        auto profile = random_profile(rng);
        const double base = kz_score(profile, ctx);
        const int base_h = h_index(profile.citation_counts());
        const int base_g = g_index(profile.citation_counts());
        for (int shuffle = 0; shuffle < 3; ++shuffle) {
            std::shuffle(profile.publications.begin(), profile.publications.end(), rng);
            CHECK(kz_score(profile, ctx) == base);
            CHECK(h_index(profile.citation_counts()) == base_h);
            CHECK(g_index(profile.citation_counts()) == base_g);
        }
    }
}

TEST_CASE("kz_score: weakly decreasing as the evaluation year advances") {
    std::mt19937 rng(19);
    for (int iter = 0; iter < 100; ++iter) {
        const auto profile = random_profile(rng);
        double previous = kz_score(profile, EvaluationContext{2023});
        for (int y = 2024; y <= 2033; ++y) {
            const double next = kz_score(profile, EvaluationContext{y});
            CHECK(next <= previous + 1e-15);
            previous = next;
        }
    }
}

TEST_CASE("career_length and zones") {
    const EvaluationContext ctx{2023};
    CHECK(career_length(profile_of(golden_cases()[0]), ctx) == 9);

    const ResearcherProfile fresh{"F", {Publication{2023, 0}}};
    CHECK(career_length(fresh, ctx) == 0);

    const ResearcherProfile mid{"M", {Publication{2003, 5}, Publication{2020, 1}}};
    CHECK(career_length(mid, ctx) == 20);
    CHECK(career_zone(career_length(mid, ctx)) == CareerZone::mid);

    CHECK(career_zone(0) == CareerZone::early);
    CHECK(career_zone(10) == CareerZone::early);
    CHECK(career_zone(11) == CareerZone::mid);
    CHECK(career_zone(20) == CareerZone::mid);
    CHECK(career_zone(21) == CareerZone::advanced);
}

TEST_CASE("metric_report: case-study digests") {
    const EvaluationContext ctx{kGoldenEvaluationYear};

    const auto r1 = metric_report(profile_of(golden_cases()[0]), ctx);
    CHECK(r1.publication_count == 10);
    CHECK(r1.total_citations == 110);
    CHECK(r1.h_index == 4);
    CHECK(std::fabs(r1.kz - 2.459) <= 5e-3);
    CHECK(r1.kz_display == doctest::Approx(2.459).epsilon(1e-9)); // printed convention
    CHECK(r1.career_length == 9);
    CHECK(r1.career_zone == CareerZone::early);
    CHECK_FALSE(r1.empty_profile);

    const auto t4r2 = metric_report(profile_of(golden_cases()[7]), ctx);
    CHECK(t4r2.publication_count == 10);
    CHECK(t4r2.total_citations == 452);
    CHECK(t4r2.h_index == 4);
    CHECK(std::fabs(t4r2.kz - 4.969) <= 5e-3);
}

TEST_CASE("metric_report: degenerate single-paper and empty profiles") {
    const EvaluationContext ctx{2023};
    const auto single = metric_report(ResearcherProfile{"S", {Publication{2023, 0}}}, ctx);
    CHECK(single.publication_count == 1);
    CHECK(single.total_citations == 0);
    CHECK(single.h_index == 0);
    CHECK(single.g_index == 0);
    CHECK(single.career_length == 0);
    CHECK(single.kz == 0.0);
    CHECK(single.career_zone == CareerZone::early);

    const auto empty = metric_report(ResearcherProfile{"E", {}}, ctx);
    CHECK(empty.empty_profile);
    CHECK(empty.publication_count == 0);
    CHECK(empty.kz == 0.0);
}

TEST_CASE("h <= g <= N for every profile") {
    std::mt19937 rng(23);
    for (int iter = 0; iter < 300; ++iter) {
        const auto profile = random_profile(rng);
        const auto counts = profile.citation_counts();
        const int h = h_index(counts);
        const int g = g_index(counts);
        CHECK(h <= g);
        CHECK(g <= static_cast<int>(counts.size()));
    }
}
