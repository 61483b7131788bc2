#include "doctest.h"

#include "tunelab/space.hpp"

#include <set>
#include <stdexcept>
#include <vector>

using namespace tunelab;

namespace {

DiscreteSpace make_space(const std::vector<int>& counts) {
    std::vector<ValueGrid> grids;
    for (const int m : counts) grids.push_back(ValueGrid::linear(0.0, static_cast<double>(m - 1), m));
    return DiscreteSpace(std::move(grids));
}

IndexVector iv_of(const std::vector<int>& v) {
    IndexVector iv(static_cast<Eigen::Index>(v.size()));
    for (std::size_t j = 0; j < v.size(); ++j) iv(static_cast<Eigen::Index>(j)) = v[j];
    return iv;
}

}  // namespace

TEST_SUITE("space") {

TEST_CASE("linear grids hit both endpoints exactly") {
    const ValueGrid g = ValueGrid::linear(-512.0, 512.0, 30);
    CHECK(g.count() == 30);
    CHECK(g.value(0) == -512.0);
    CHECK(g.value(29) == 512.0);
    for (int k = 0; k + 1 < 30; ++k) CHECK(g.value(k) < g.value(k + 1));

    const ValueGrid tiny = ValueGrid::linear(0.1, 0.7, 7);
    CHECK(tiny.value(0) == 0.1);
    CHECK(tiny.value(6) == 0.7);
    CHECK(tiny.lower() == 0.1);
    CHECK(tiny.upper() == 0.7);

    const ValueGrid two = ValueGrid::linear(-1.0, 3.0, 2);
    CHECK(two.value(0) == -1.0);
    CHECK(two.value(1) == 3.0);
}

TEST_CASE("linear grid midpoints are evenly spaced") {
    const ValueGrid g = ValueGrid::linear(0.0, 10.0, 5);
    CHECK(g.value(1) == doctest::Approx(2.5));
    CHECK(g.value(2) == doctest::Approx(5.0));
    CHECK(g.value(3) == doctest::Approx(7.5));
}

TEST_CASE("grid construction rejects bad inputs") {
    CHECK_THROWS_AS(ValueGrid::linear(0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(ValueGrid::linear(1.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(ValueGrid::linear(2.0, 1.0, 3), std::invalid_argument);
    Eigen::ArrayXd one(1);
    one << 4.0;
    CHECK_THROWS_AS(ValueGrid::from_values(one), std::invalid_argument);
    Eigen::ArrayXd repeated(3);
    repeated << 1.0, 1.0, 2.0;
    CHECK_THROWS_AS(ValueGrid::from_values(repeated), std::invalid_argument);
    Eigen::ArrayXd decreasing(3);
    decreasing << 1.0, 3.0, 2.0;
    CHECK_THROWS_AS(ValueGrid::from_values(decreasing), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteSpace({}), std::invalid_argument);
}

TEST_CASE("from_values keeps explicit irregular grids") {
    Eigen::ArrayXd v(4);
    v << -3.0, -0.5, 0.25, 11.0;
    const ValueGrid g = ValueGrid::from_values(v);
    CHECK(g.count() == 4);
    CHECK(g.value(0) == -3.0);
    CHECK(g.value(2) == 0.25);
    CHECK(g.upper() == 11.0);
}

TEST_CASE("cardinality multiplies per-variable counts") {
    CHECK(cardinality(make_space({3, 3})) == 9);
    CHECK(cardinality(make_space({2, 5, 7})) == 70);
    CHECK(cardinality(make_space({6, 5, 3, 3, 3, 9, 3})) == 21870);
    CHECK(cardinality(make_space({2})) == 2);
}

TEST_CASE("cardinality overflow is detected") {
    // (10^5)^4 = 10^20 > 2^64.
    const DiscreteSpace huge = make_space({100000, 100000, 100000, 100000});
    CHECK_THROWS_AS(cardinality(huge), std::overflow_error);
}

TEST_CASE("snap rounds half up and clamps") {
    const DiscreteSpace space = make_space({10});
    const auto snap1 = [&](double x) {
        Genotype g(1);
        g << x;
        return snap(g, space)(0);
    };
    CHECK(snap1(1.4999) == 1);
    CHECK(snap1(1.5) == 2);
    CHECK(snap1(2.5) == 3);
    CHECK(snap1(0.5) == 1);
    CHECK(snap1(-0.3) == 0);
    CHECK(snap1(-5.0) == 0);
    CHECK(snap1(9.2) == 9);
    CHECK(snap1(9.7) == 9);
    CHECK(snap1(1234.0) == 9);
    CHECK(snap1(0.0) == 0);
}

TEST_CASE("snap of an embedded index vector is the identity") {
    const DiscreteSpace space = make_space({4, 7, 2, 9});
    Xoshiro256 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        IndexVector iv(4);
        for (int j = 0; j < 4; ++j) iv(j) = rng.below(space.grid(j).count());
        const IndexVector back = snap(embed(iv), space);
        CHECK((back == iv).all());
    }
}

TEST_CASE("decode looks up grid values") {
    std::vector<ValueGrid> grids;
    Eigen::ArrayXd a(3), b(2);
    a << -1.0, 0.5, 2.0;
    b << 10.0, 20.0;
    grids.push_back(ValueGrid::from_values(a));
    grids.push_back(ValueGrid::from_values(b));
    const DiscreteSpace space(std::move(grids));
    const Eigen::ArrayXd values = decode(iv_of({2, 0}), space);
    CHECK(values(0) == 2.0);
    CHECK(values(1) == 10.0);
}

TEST_CASE("random genotypes live in [0, count-1) per coordinate") {
    const DiscreteSpace space = make_space({5, 2, 12});
    Xoshiro256 rng(4);
    for (int trial = 0; trial < 2000; ++trial) {
        const Genotype g = random_genotype(space, rng);
        for (int j = 0; j < 3; ++j) {
            CHECK(g(j) >= 0.0);
            CHECK(g(j) < static_cast<double>(space.grid(j).count() - 1));
        }
    }
}

TEST_CASE("snapped random genotypes cover every index") {
    const DiscreteSpace space = make_space({4, 3});
    Xoshiro256 rng(21);
    std::set<std::uint64_t> seen;
    for (int trial = 0; trial < 4000; ++trial)
        seen.insert(linear_index(snap(random_genotype(space, rng), space), space));
    CHECK(seen.size() == cardinality(space));
}

TEST_CASE("linear_index is row major with the last variable fastest") {
    const DiscreteSpace space = make_space({2, 5, 7});
    CHECK(linear_index(iv_of({0, 0, 0}), space) == 0);
    CHECK(linear_index(iv_of({0, 0, 1}), space) == 1);
    CHECK(linear_index(iv_of({0, 1, 0}), space) == 7);
    CHECK(linear_index(iv_of({1, 0, 0}), space) == 35);
    CHECK(linear_index(iv_of({1, 4, 6}), space) == 69);
}

TEST_CASE("linear_index round-trips through index_from_linear") {
    const DiscreteSpace space = make_space({2, 5, 7});
    for (std::uint64_t rank = 0; rank < 70; ++rank) {
        const IndexVector iv = index_from_linear(rank, space);
        CHECK(linear_index(iv, space) == rank);
    }
    CHECK_THROWS_AS(index_from_linear(70, space), std::invalid_argument);
}

TEST_CASE("linear_index names the offending variable") {
    const DiscreteSpace space = make_space({2, 5, 7});
    try {
        (void)linear_index(iv_of({0, 5, 0}), space);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("variable 2") != std::string::npos);
        CHECK(what.find("5") != std::string::npos);
    }
    CHECK_THROWS_AS(linear_index(iv_of({-1, 0, 0}), space), std::invalid_argument);
}

TEST_CASE("next_index enumerates the space in linear order") {
    const DiscreteSpace space = make_space({2, 3, 4});
    IndexVector iv = IndexVector::Zero(3);
    std::uint64_t rank = 0;
    do {
        CHECK(linear_index(iv, space) == rank);
        ++rank;
    } while (next_index(iv, space));
    CHECK(rank == cardinality(space));
    CHECK((iv == IndexVector::Zero(3)).all());  // odometer wrapped back
}

}  // TEST_SUITE
