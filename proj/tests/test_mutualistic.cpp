#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "ecolotrade/mutualistic.hpp"
#include "ecolotrade/rng.hpp"

using namespace ecolotrade;

namespace {

std::vector<std::string> labels(char prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

BinaryMatrix make_bits(std::vector<std::vector<int>> rows) {
    BinaryMatrix q;
    q.row_labels = labels('r', rows.size());
    q.col_labels = labels('c', rows.empty() ? 0 : rows[0].size());
    for (const auto& row : rows)
        for (int v : row) q.cells.push_back(static_cast<std::uint8_t>(v));
    return q;
}

Matrix random_normalized(std::size_t np, std::size_t nc, std::uint64_t seed) {
    Matrix m(np, nc);
    Rng rng(seed);
    for (auto& v : m.data()) v = rng.uniform01();
    return m;
}

} // namespace

TEST_SUITE_BEGIN("mutualistic");

TEST_CASE("threshold binarizes and transposes to countries x products") {
    Matrix m(2, 3); // products x countries
    m(0, 0) = 0.5;
    m(0, 1) = 1e-3;
    m(1, 2) = 0.2;
    auto q = threshold(m, {"331", "332"}, {"AAA", "BBB", "CCC"}, 1e-3, Flow::Import);

    CHECK(q.rows() == 3);
    CHECK(q.cols() == 2);
    CHECK(q.row_labels == std::vector<std::string>{"AAA", "BBB", "CCC"});
    CHECK(q.col_labels == std::vector<std::string>{"331", "332"});
    CHECK(q.at(0, 0) == 1);       // 0.5 well above mu
    CHECK(q.at(1, 0) == 1);       // exactly mu counts as present
    CHECK(q.at(2, 1) == 1);
    CHECK(q.at(2, 0) == 0);       // zero element stays absent
    CHECK(q.mu == 1e-3);
    CHECK(q.flow == Flow::Import);
}

TEST_CASE("threshold rejects mu outside (0,1)") {
    Matrix m(1, 1);
    for (double mu : {0.0, 1.0, -0.5, 2.0})
        CHECK_THROWS_AS(threshold(m, {"p"}, {"c"}, mu, Flow::Import), std::invalid_argument);
}

TEST_CASE("fill_fraction counts ones") {
    CHECK(fill_fraction(make_bits({{1, 0}, {0, 0}})) == 0.25);
    CHECK(fill_fraction(make_bits({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}})) == 1.0);
    CHECK(fill_fraction(make_bits({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}})) == 0.0);
    CHECK_THROWS_AS(fill_fraction(BinaryMatrix{}), std::invalid_argument);
}

TEST_CASE("trim_empty removes zero lines and reports them") {
    auto r = trim_empty(make_bits({{1, 0}, {0, 0}}));
    CHECK(r.matrix.rows() == 1);
    CHECK(r.matrix.cols() == 1);
    CHECK(r.matrix.at(0, 0) == 1);
    CHECK(r.dropped_rows == std::vector<std::string>{"r1"});
    CHECK(r.dropped_cols == std::vector<std::string>{"c1"});
}

TEST_CASE("trim_empty keeps full matrices untouched") {
    auto q = make_bits({{1, 0}, {0, 1}});
    auto r = trim_empty(q);
    CHECK(r.matrix.cells == q.cells);
    CHECK(r.matrix.row_labels == q.row_labels);
    CHECK(r.dropped_rows.empty());
    CHECK(r.dropped_cols.empty());
}

TEST_CASE("trim_empty rejects all-zero matrices") {
    CHECK_THROWS_AS(trim_empty(make_bits({{0, 0}, {0, 0}})), std::runtime_error);
}

TEST_CASE("trim_empty is idempotent") {
    Rng rng(31);
    for (int round = 0; round < 20; ++round) {
        BinaryMatrix q;
        q.row_labels = labels('r', 5);
        q.col_labels = labels('c', 7);
        q.cells.assign(35, 0);
        for (auto& c : q.cells) c = rng.uniform01() < 0.2 ? 1 : 0;
        if (q.ones() == 0) q.cells[0] = 1;

        auto once = trim_empty(q);
        auto twice = trim_empty(once.matrix);
        CHECK(twice.matrix.cells == once.matrix.cells);
        CHECK(twice.dropped_rows.empty());
        CHECK(twice.dropped_cols.empty());
    }
}

TEST_CASE("raising mu can only clear cells") {
    const Matrix m = random_normalized(8, 10, 17);
    const auto products = labels('p', 8);
    const auto countries = labels('c', 10);
    double prev_fill = 1.0;
    for (double mu : {0.05, 0.2, 0.5, 0.9}) {
        auto q = threshold(m, products, countries, mu, Flow::Export);
        auto q_low = threshold(m, products, countries, mu / 2.0, Flow::Export);
        for (std::size_t i = 0; i < q.cells.size(); ++i)
            if (q.cells[i]) CHECK(q_low.cells[i] == 1); // ones(mu) subset of ones(mu/2)
        const double fill = fill_fraction(q);
        CHECK(fill <= prev_fill);
        prev_fill = fill;
    }
}

TEST_CASE("threshold commutes with permutations of the input") {
    const Matrix m = random_normalized(5, 6, 23);
    auto products = labels('p', 5);
    auto countries = labels('c', 6);

    std::vector<std::size_t> prow(5), pcol(6);
    std::iota(prow.begin(), prow.end(), 0);
    std::iota(pcol.begin(), pcol.end(), 0);
    Rng rng(3);
    rng.shuffle(prow);
    rng.shuffle(pcol);

    Matrix pm(5, 6);
    std::vector<std::string> pprod(5), pcountry(6);
    for (std::size_t i = 0; i < 5; ++i) {
        pprod[i] = products[prow[i]];
        for (std::size_t j = 0; j < 6; ++j) pm(i, j) = m(prow[i], pcol[j]);
    }
    for (std::size_t j = 0; j < 6; ++j) pcountry[j] = countries[pcol[j]];

    auto q = threshold(m, products, countries, 0.3, Flow::Import);
    auto qp = threshold(pm, pprod, pcountry, 0.3, Flow::Import);

    // same (country, product) label pair -> same bit
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(qp.at(j, i) == q.at(pcol[j], prow[i]));
}

TEST_CASE("flow names round-trip") {
    CHECK(flow_from_string("import") == Flow::Import);
    CHECK(flow_from_string("export") == Flow::Export);
    CHECK(std::string(to_string(Flow::Export)) == "export");
    CHECK_THROWS_AS(flow_from_string("sideways"), std::invalid_argument);
}

TEST_SUITE_END();
