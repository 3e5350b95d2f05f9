#include <doctest.h>

#include <map>
#include <set>
#include <thread>

#include "delpezzo/enumerate.hpp"
#include "oracle.hpp"

using namespace delpezzo;

namespace {

DivisorClass sorted_desc(const DivisorClass& c) {
    std::vector<Coeff> v = c.coeffs();
    std::sort(v.begin() + 1, v.end(), std::greater<Coeff>());
    return DivisorClass(std::move(v));
}

std::set<DivisorClass> sorted_reps(const ClassCatalog& cat) {
    std::set<DivisorClass> out;
    for (const auto& c : cat.classes) out.insert(sorted_desc(c));
    return out;
}

}  // namespace

TEST_CASE("conic counts per delta") {
    const std::map<int, std::size_t> expected{{2, 2}, {3, 3}, {4, 5}, {5, 10},
                                              {6, 27}, {7, 126}, {8, 2160}};
    for (const auto& [delta, count] : expected)
        CHECK(conic_classes(LatticeContext::blowup_plane(delta)).size() == count);
}

TEST_CASE("exceptional class counts per delta") {
    const std::map<int, std::size_t> expected{{1, 1}, {2, 3}, {3, 6}, {4, 10},
                                              {5, 16}, {6, 27}, {7, 56}, {8, 240}};
    for (const auto& [delta, count] : expected)
        CHECK(exceptional_classes(LatticeContext::blowup_plane(delta)).size() == count);

    auto d1 = LatticeContext::blowup_plane(1);
    REQUIRE(exceptional_classes(d1).size() == 1);
    CHECK(exceptional_classes(d1).classes[0] == exceptional_basis_class(d1, 1));
}

TEST_CASE("delta 8 conic types: the fifteen sorted representatives") {
    auto d8 = LatticeContext::blowup_plane(8);
    const std::set<DivisorClass> expected{
        DivisorClass({1, 1, 0, 0, 0, 0, 0, 0, 0}),  DivisorClass({2, 1, 1, 1, 1, 0, 0, 0, 0}),
        DivisorClass({3, 2, 1, 1, 1, 1, 1, 0, 0}),  DivisorClass({4, 2, 2, 2, 1, 1, 1, 1, 0}),
        DivisorClass({5, 2, 2, 2, 2, 2, 2, 1, 0}),  DivisorClass({4, 3, 1, 1, 1, 1, 1, 1, 1}),
        DivisorClass({5, 3, 2, 2, 2, 1, 1, 1, 1}),  DivisorClass({6, 3, 3, 2, 2, 2, 2, 1, 1}),
        DivisorClass({7, 3, 3, 3, 3, 2, 2, 2, 1}),  DivisorClass({7, 4, 3, 2, 2, 2, 2, 2, 2}),
        DivisorClass({8, 4, 3, 3, 3, 3, 2, 2, 2}),  DivisorClass({8, 3, 3, 3, 3, 3, 3, 3, 1}),
        DivisorClass({9, 4, 4, 3, 3, 3, 3, 3, 2}),  DivisorClass({10, 4, 4, 4, 4, 3, 3, 3, 3}),
        DivisorClass({11, 4, 4, 4, 4, 4, 4, 4, 3})};
    CHECK(sorted_reps(conic_classes(d8)) == expected);
    CHECK(conic_classes(d8).contains(DivisorClass({11, 4, 4, 4, 4, 4, 4, 4, 3})));
}

TEST_CASE("delta 8 exceptional types: the seven sorted representatives") {
    auto d8 = LatticeContext::blowup_plane(8);
    const std::set<DivisorClass> expected{
        DivisorClass({0, 0, 0, 0, 0, 0, 0, 0, -1}), DivisorClass({1, 1, 1, 0, 0, 0, 0, 0, 0}),
        DivisorClass({2, 1, 1, 1, 1, 1, 0, 0, 0}),  DivisorClass({3, 2, 1, 1, 1, 1, 1, 1, 0}),
        DivisorClass({4, 2, 2, 2, 1, 1, 1, 1, 1}),  DivisorClass({5, 2, 2, 2, 2, 2, 2, 1, 1}),
        DivisorClass({6, 3, 2, 2, 2, 2, 2, 2, 2})};
    CHECK(sorted_reps(exceptional_classes(d8)) == expected);
    CHECK(exceptional_classes(d8).contains(DivisorClass({6, 3, 2, 2, 2, 2, 2, 2, 2})));
}

TEST_CASE("delta 2 conic catalog is exactly the two line classes") {
    auto d2 = LatticeContext::blowup_plane(2);
    const auto& cat = conic_classes(d2);
    REQUIRE(cat.size() == 2);
    CHECK(cat.classes[0] == DivisorClass({1, 0, 1}));
    CHECK(cat.classes[1] == DivisorClass({1, 1, 0}));
}

TEST_CASE("naive box-scan oracle agrees for delta <= 5") {
    for (int delta = 0; delta <= 5; ++delta) {
        auto ctx = LatticeContext::blowup_plane(delta);
        for (auto [d, s] : std::vector<std::pair<Coeff, Coeff>>{{1, -1}, {2, 0}, {1, 1}, {3, 1}}) {
            ClassCatalog cat = enumerate_classes({ctx, d, s});
            std::vector<DivisorClass> naive = testing::naive_enumerate(delta, d, s);
            CHECK(cat.classes == naive);
        }
    }
}

TEST_CASE("catalog members satisfy their defining equations") {
    for (int delta : {3, 6, 8}) {
        auto ctx = LatticeContext::blowup_plane(delta);
        for (const auto& c : conic_classes(ctx).classes) {
            CHECK(self_intersection(ctx, c) == 0);
            CHECK(anticanonical_degree(ctx, c) == 2);
            CHECK(profile(ctx, c).arithmetic_genus == 0);
        }
        for (const auto& c : exceptional_classes(ctx).classes) {
            CHECK(self_intersection(ctx, c) == -1);
            CHECK(profile(ctx, c).arithmetic_genus == 0);
        }
    }
}

TEST_CASE("erasing a zero maps the delta 8 conics onto the delta 7 conics") {
    auto d8 = LatticeContext::blowup_plane(8);
    auto d7 = LatticeContext::blowup_plane(7);
    std::set<DivisorClass> dropped;
    for (const auto& c : conic_classes(d8).classes) {
        DivisorClass s = sorted_desc(c);
        if (s[8] != 0) continue;  // descending sort puts a zero last iff one exists
        std::vector<Coeff> v(s.coeffs().begin(), s.coeffs().end() - 1);
        dropped.insert(DivisorClass(std::move(v)));
    }
    CHECK(dropped == sorted_reps(conic_classes(d7)));
}

TEST_CASE("degree-one queries: parity and the lone square-one class") {
    auto d8 = LatticeContext::blowup_plane(8);
    ClassCatalog s1 = enumerate_classes({d8, 1, 1});
    REQUIRE(s1.size() == 1);
    CHECK(s1.classes[0] == anticanonical_class(d8));
    CHECK(enumerate_classes({d8, 1, 0}).size() == 0);
    CHECK(enumerate_classes({d8, 1, -2}).size() == 0);
    for (const auto& c : exceptional_classes(d8).classes)
        CHECK(self_intersection(d8, c) % 2 != 0);
}

TEST_CASE("enumeration query validation") {
    auto d8 = LatticeContext::blowup_plane(8);
    CHECK_THROWS_AS(enumerate_classes({d8, 1, 2}), std::invalid_argument);   // unbounded
    CHECK_THROWS_AS(enumerate_classes({d8, 0, 0}), std::invalid_argument);   // degree < 1
    CHECK_THROWS_AS(enumerate_classes({LatticeContext::quadric(), 2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(conic_classes(LatticeContext::quadric()), std::invalid_argument);
}

TEST_CASE("memoized catalogs are safe under concurrent access") {
    auto d6 = LatticeContext::blowup_plane(6);
    std::vector<std::thread> workers;
    std::vector<const ClassCatalog*> seen(8, nullptr);
    for (int t = 0; t < 8; ++t)
        workers.emplace_back([&, t] { seen[static_cast<std::size_t>(t)] = &conic_classes(d6); });
    for (auto& w : workers) w.join();
    for (const ClassCatalog* p : seen) {
        REQUIRE(p != nullptr);
        CHECK(p == seen[0]);
        CHECK(p->size() == 27);
    }
}

TEST_CASE("catalogs are memoized and deterministic") {
    auto d6 = LatticeContext::blowup_plane(6);
    const ClassCatalog* first = &conic_classes(d6);
    const ClassCatalog* second = &conic_classes(d6);
    CHECK(first == second);
    ClassCatalog a = enumerate_classes({d6, 2, 0});
    ClassCatalog b = enumerate_classes({d6, 2, 0});
    CHECK(a.classes == b.classes);
    CHECK(std::is_sorted(a.classes.begin(), a.classes.end()));
    CHECK(std::adjacent_find(a.classes.begin(), a.classes.end()) == a.classes.end());
}

TEST_CASE("named conics") {
    auto d8 = LatticeContext::blowup_plane(8);
    CHECK(named_conic(d8, "A_1") == DivisorClass({1, 1, 0, 0, 0, 0, 0, 0, 0}));
    CHECK(named_conic(d8, "B_{1234}") == DivisorClass({2, 1, 1, 1, 1, 0, 0, 0, 0}));
    CHECK(named_conic(d8, "D_{234}^1") == DivisorClass({4, 0, 2, 2, 2, 1, 1, 1, 1}));
    CHECK(named_conic(d8, "E_1^8") == DivisorClass({5, 1, 2, 2, 2, 2, 2, 2, 0}));
    CHECK(named_conic(d8, "I'_1") == DivisorClass({8, 1, 3, 3, 3, 3, 3, 3, 3}));
    CHECK(named_conic(d8, "L_3") == DivisorClass({11, 4, 4, 3, 4, 4, 4, 4, 4}));
    CHECK(named_conic(d8, "H'_1^2") == DivisorClass({7, 4, 3, 2, 2, 2, 2, 2, 2}));

    // Every named class is in the catalog.
    for (const char* name : {"A_5", "C_1^{23}", "D'_8", "F_2^{345}", "G_{12}^{34}", "H_{123}^4",
                             "I_1^{234}", "J_{12}^3", "K_{5678}"})
        CHECK(conic_classes(d8).contains(named_conic(d8, name)));

    // Names restrict to smaller delta exactly when the erased entries vanish.
    auto d6 = LatticeContext::blowup_plane(6);
    CHECK(named_conic(d6, "C_1^{78}") == DivisorClass({3, 2, 1, 1, 1, 1, 1}));
    CHECK(named_conic(LatticeContext::blowup_plane(3), "A_2") == DivisorClass({1, 0, 1, 0}));

    CHECK_THROWS_AS(named_conic(d8, "A_12"), std::invalid_argument);     // wrong arity
    CHECK_THROWS_AS(named_conic(d8, "B_{1123}"), std::invalid_argument); // repeated index
    CHECK_THROWS_AS(named_conic(d8, "Z_1"), std::invalid_argument);
    CHECK_THROWS_AS(named_conic(LatticeContext::blowup_plane(2), "A_3"), std::invalid_argument);
    CHECK_THROWS_AS(named_conic(LatticeContext::blowup_plane(6), "C_1^{23}"), std::invalid_argument);
}
