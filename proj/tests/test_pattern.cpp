#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace degpat;
using namespace testsupport;

namespace {

std::pair<std::uint32_t, std::uint32_t> xy(const Pattern& p, const std::string& a,
                                           const std::string& b) {
    auto find = [&](const std::vector<std::string>& v, const std::string& s) {
        for (std::uint32_t i = 0; i < v.size(); ++i)
            if (v[i] == s) return static_cast<int>(i);
        return -1;
    };
    int xi = find(p.x_labels(), a), yi = find(p.y_labels(), b);
    REQUIRE(xi >= 0);
    REQUIRE(yi >= 0);
    return {static_cast<std::uint32_t>(xi), static_cast<std::uint32_t>(yi)};
}

} // namespace

TEST_CASE("built-in constructors") {
    SECTION("co-matching t=2") {
        Pattern p = make_comatching(2);
        auto [a1, b2] = xy(p, "a1", "b2");
        auto [a2, b1] = xy(p, "a2", "b1");
        CHECK(p.color(a1, b2) == EdgeColor::Black);
        CHECK(p.color(a2, b1) == EdgeColor::Black);
        CHECK(p.color(xy(p, "a1", "b1").first, xy(p, "a1", "b1").second) == EdgeColor::Red);
        CHECK(p.color(xy(p, "a2", "b2").first, xy(p, "a2", "b2").second) == EdgeColor::Red);
        CHECK_FALSE(p.has_white_cross());
    }
    SECTION("ladder t=2: black a2b1, red elsewhere") {
        Pattern p = make_ladder(2);
        CHECK(p.black_pairs() == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 0}});
        CHECK(p.red_pairs().size() == 3);
    }
    SECTION("semi-ladder keeps whites above the diagonal") {
        Pattern p = make_semiladder(3);
        CHECK(p.black_pairs().size() == 3);
        CHECK(p.red_pairs().size() == 3);
        CHECK(p.has_white_cross());
    }
    SECTION("shattered t=1") {
        Pattern p = make_shattered(1);
        REQUIRE(p.size_y() == 2);
        CHECK(p.color(0, 0) == EdgeColor::Red);   // w0 (empty trace)
        CHECK(p.color(0, 1) == EdgeColor::Black); // w1
    }
    SECTION("size guards") {
        CHECK_THROWS_AS(make_biclique(0, 2), DomainError);
        CHECK_THROWS_AS(make_ladder(0), DomainError);
        CHECK_THROWS_AS(make_shattered(0), DomainError);
        CHECK_THROWS_AS(make_shattered(21), CapacityError);
    }
}

TEST_CASE("signatures") {
    SECTION("K23, Z = X side: every witness sees everything") {
        Pattern p = make_biclique(2, 3);
        std::vector<std::uint32_t> zo{0, 1};
        CHECK(signature_of(p, zo) == Signature{3, 3, 3});
    }
    SECTION("co-matching t=2") {
        Pattern p = make_comatching(2);
        std::vector<std::uint32_t> zo{0, 1}; // (x1, x2)
        CHECK(signature_of(p, zo) == Signature{1, 2}); // {b1 sees x2}=2, {b2 sees x1}=1
    }
    SECTION("ladder t=3, Z=(a1,a2,a3)") {
        Pattern p = make_ladder(3);
        std::vector<std::uint32_t> zo{0, 1, 2};
        CHECK(signature_of(p, zo) == Signature{0, 4, 6}); // {}, {a3}, {a2,a3}
    }
    SECTION("mixed or partial side orderings rejected") {
        Pattern p = make_biclique(2, 2);
        std::vector<std::uint32_t> mixed{0, 2};
        CHECK_THROWS_AS(signature_of(p, mixed), DomainError);
        std::vector<std::uint32_t> partial{0};
        CHECK_THROWS_AS(signature_of(p, partial), DomainError);
    }
    SECTION("relabeling the witness side keeps the signature") {
        Pattern p = make_comatching(3);
        std::vector<std::uint32_t> zo{0, 1, 2};
        auto s = signature_of(p, zo);
        CHECK(s == Signature{3, 5, 6}); // all 2-subsets of [3]
    }
}

TEST_CASE("left cover number of concrete orderings") {
    Pattern k22 = make_biclique(2, 2);
    SECTION("x1 x2 y1 y2 -> 1") {
        OrderedPattern op{&k22, {0, 1, 2, 3}};
        CHECK(left_cover_number(op) == 1);
    }
    SECTION("a side of size 1 covers itself") {
        Pattern k12 = make_biclique(1, 2);
        OrderedPattern op{&k12, {0, 1, 2}};
        CHECK(left_cover_number(op) <= 1);
    }
    SECTION("worst co-matching ordering reaches 2") {
        Pattern m3 = make_comatching(3);
        std::uint32_t worst = 0;
        std::vector<std::uint32_t> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            OrderedPattern op{&m3, perm};
            worst = std::max(worst, left_cover_number(op));
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(worst == 2);
    }
}

TEST_CASE("analyze") {
    SECTION("bicliques: lc = 1, hoa = 1") {
        for (std::uint32_t t : {2u, 3u}) {
            auto a = analyze(make_biclique(t, t));
            CHECK(a.lc == 1);
            CHECK(a.hoa == 1);
            CHECK(a.sigs_x.size() <= a.hoa_x);
            CHECK(a.sigs_y.size() <= a.hoa_y);
        }
    }
    SECTION("co-matchings: lc = 2, hoa = 1, signature = (t-1)-subsets") {
        for (std::uint32_t t : {2u, 3u}) {
            auto a = analyze(make_comatching(t));
            CHECK(a.lc == 2);
            CHECK(a.hoa == 1);
            Signature want;
            std::uint32_t full = (1u << t) - 1;
            for (std::uint32_t i = 0; i < t; ++i) want.push_back(full ^ (1u << i));
            std::sort(want.begin(), want.end());
            REQUIRE(a.sigs_x.size() == 1);
            CHECK(*a.sigs_x.begin() == want);
        }
    }
    SECTION("shattered pattern: lc at most t") {
        auto a = analyze(make_shattered(2));
        CHECK(a.lc >= 1);
        CHECK(a.lc <= 2);
    }
    SECTION("ladder t=2: hoa is 2 on both sides") {
        auto a = analyze(make_ladder(2));
        CHECK(a.lc == 2);
        CHECK(a.hoa_x == 2);
        CHECK(a.hoa_y == 2);
    }
    SECTION("lc bounded by the smaller side") {
        for (const Pattern& p : {make_biclique(2, 3), make_comatching(3), make_ladder(3),
                                 make_shattered(2), make_semiladder(2)}) {
            auto a = analyze(p);
            CHECK(a.lc >= 1);
            CHECK(a.lc <= std::min(p.size_x(), p.size_y()));
        }
    }
    SECTION("memoized and plain sweeps agree") {
        for (const Pattern& p : {make_comatching(2), make_ladder(3), make_shattered(2)}) {
            auto a = analyze(p, 10, true);
            auto b = analyze(p, 10, false);
            CHECK(a.lc == b.lc);
            CHECK(a.sigs_x == b.sigs_x);
            CHECK(a.sigs_y == b.sigs_y);
            CHECK(a.hoa == b.hoa);
        }
    }
    SECTION("factorial guard") {
        CHECK_THROWS_AS(analyze(make_shattered(3)), CapacityError); // 11 vertices
        CHECK_THROWS_AS(analyze(make_biclique(6, 6)), CapacityError);
    }
}

TEST_CASE("pattern file round trip and validation") {
    Pattern lad = make_ladder(2);
    auto j = pattern_to_json(lad);
    Pattern back = pattern_from_json(j);
    CHECK(back.size_x() == lad.size_x());
    CHECK(back.black_pairs() == lad.black_pairs());
    CHECK(back.red_pairs() == lad.red_pairs());

    auto bad1 = nlohmann::json::parse(R"({"sideX":["a"],"sideY":["b"],"black":[["a","a"]]})");
    CHECK_THROWS_AS(pattern_from_json(bad1), DomainError);
    auto bad2 = nlohmann::json::parse(
        R"({"sideX":["a"],"sideY":["b"],"black":[["a","b"]],"red":[["b","a"]]})");
    CHECK_THROWS_AS(pattern_from_json(bad2), DomainError);
    auto bad3 = nlohmann::json::parse(R"({"sideX":["a","a"],"sideY":["b"]})");
    CHECK_THROWS_AS(pattern_from_json(bad3), DomainError);

    // endpoint order inside a pair does not matter
    auto ok = nlohmann::json::parse(R"({"sideX":["a"],"sideY":["b","c"],"black":[["b","a"]]})");
    Pattern p = pattern_from_json(ok);
    CHECK(p.color(0, 0) == EdgeColor::Black);
    CHECK(p.color(0, 1) == EdgeColor::White);
}

TEST_CASE("builtin pattern specs") {
    CHECK(parse_builtin_pattern("biclique:2,3").size() == 5);
    CHECK(parse_builtin_pattern("comatching:3").red_pairs().size() == 3);
    CHECK(parse_builtin_pattern("ladder:4").size() == 8);
    CHECK(parse_builtin_pattern("semiladder:2").has_white_cross());
    CHECK(parse_builtin_pattern("shattered:2").size_y() == 4);
    CHECK_THROWS_AS(parse_builtin_pattern("clique:3"), DomainError);
    CHECK_THROWS_AS(parse_builtin_pattern("biclique:2"), DomainError);
    CHECK_THROWS_AS(parse_builtin_pattern("ladder:x"), DomainError);
}
