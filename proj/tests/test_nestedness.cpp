#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecolotrade/nestedness.hpp"
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

BinaryMatrix random_bits(std::size_t R, std::size_t C, double fill, std::uint64_t seed) {
    BinaryMatrix q;
    q.row_labels = labels('r', R);
    q.col_labels = labels('c', C);
    q.cells.assign(R * C, 0);
    Rng rng(seed);
    for (auto& c : q.cells) c = rng.uniform01() < fill ? 1 : 0;
    return q;
}

/// Staircase whose cells are filled exactly when the cell center lies on the
/// presence side of the isocline for the requested fill.
BinaryMatrix staircase(std::size_t R, std::size_t C, double fill) {
    const double p = fill / (1.0 - fill);
    BinaryMatrix q;
    q.row_labels = labels('r', R);
    q.col_labels = labels('c', C);
    q.cells.assign(R * C, 0);
    for (std::size_t r = 0; r < R; ++r) {
        const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(R);
        for (std::size_t c = 0; c < C; ++c) {
            const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(C);
            if (y <= 1.0 - std::pow(x, p)) q.cells[r * C + c] = 1;
        }
    }
    return q;
}

// ---- test-local oracles ----------------------------------------------------

/// Tanh-sinh quadrature over [0,1]; handles the endpoint derivative
/// singularity of x^p without special casing.
double integrate01(double (*f)(double, double), double p) {
    const double h = 0.004;
    double sum = 0.0;
    for (int k = -875; k <= 875; ++k) {
        const double t = k * h;
        const double u = 0.5 * M_PI * std::sinh(t);
        if (std::abs(u) > 350.0) continue;
        const double w = 0.5 * M_PI * std::cosh(t) / (std::cosh(u) * std::cosh(u));
        const double x = 0.5 * (1.0 + std::tanh(u));
        sum += w * f(x, p);
    }
    return 0.5 * sum * h;
}

/// Oracle u computation: independent bisection plus the plain formula.
double oracle_u(std::size_t row, std::size_t col, std::size_t R, std::size_t C, bool present,
                double p) {
    const double x = (col + 0.5) / static_cast<double>(C);
    const double y = (row + 0.5) / static_cast<double>(R);
    const bool presence = y <= 1.0 - std::pow(x, p);
    if (present == presence) return 0.0;
    const double offset = y - x;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid + std::pow(mid, p) + offset - 1.0 < 0.0 ? lo : hi) = mid;
    }
    const double xi = 0.5 * (lo + hi);
    const double d_over_cap = (x - xi) / (1.0 - std::abs(offset));
    return d_over_cap * d_over_cap;
}

double oracle_temperature(const BinaryMatrix& q, const std::vector<std::size_t>& rp,
                          const std::vector<std::size_t>& cp) {
    const std::size_t R = q.rows(), C = q.cols();
    const double fill = static_cast<double>(q.ones()) / static_cast<double>(R * C);
    if (fill == 1.0) return 0.0;
    const double p = fill / (1.0 - fill);
    double sum = 0.0;
    for (std::size_t k = 0; k < R; ++k)
        for (std::size_t l = 0; l < C; ++l)
            sum += oracle_u(k, l, R, C, q.at(rp[k], cp[l]) != 0, p);
    return std::min(100.0, 100.0 / 0.04145 * sum / static_cast<double>(R * C));
}

/// Exhaustive minimum temperature over all row x column permutations, using
/// a per-cell table so the R! * C! enumeration stays cheap.
double exhaustive_min_temperature(const BinaryMatrix& q) {
    const std::size_t R = q.rows(), C = q.cols();
    const double fill = static_cast<double>(q.ones()) / static_cast<double>(R * C);
    if (fill == 1.0) return 0.0;
    const double p = fill / (1.0 - fill);

    std::vector<double> u_present(R * C), u_absent(R * C);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            u_present[r * C + c] = oracle_u(r, c, R, C, true, p);
            u_absent[r * C + c] = oracle_u(r, c, R, C, false, p);
        }

    std::vector<std::size_t> rp(R), cp(C);
    std::iota(rp.begin(), rp.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        std::iota(cp.begin(), cp.end(), 0);
        do {
            double sum = 0.0;
            for (std::size_t k = 0; k < R; ++k)
                for (std::size_t l = 0; l < C; ++l)
                    sum += q.at(rp[k], cp[l]) ? u_present[k * C + l] : u_absent[k * C + l];
            best = std::min(best, sum);
        } while (std::next_permutation(cp.begin(), cp.end()));
    } while (std::next_permutation(rp.begin(), rp.end()));
    return std::min(100.0, 100.0 / 0.04145 * best / static_cast<double>(R * C));
}

double presence_area(double x, double p) { return 1.0 - std::pow(x, p); }

} // namespace

TEST_SUITE_BEGIN("nestedness");

TEST_CASE("isocline_param matches its defining area") {
    CHECK(isocline_param(0.5) == 1.0);
    CHECK(isocline_param(0.2) == 0.25);
    for (double fill : {0.05, 0.2, 0.3, 0.5, 0.8, 0.95}) {
        const double area = integrate01(presence_area, isocline_param(fill));
        CHECK(std::abs(area - fill) <= 1e-9);
    }
    CHECK_THROWS_AS(isocline_param(0.0), std::domain_error);
    CHECK_THROWS_AS(isocline_param(1.0), std::domain_error);
}

TEST_CASE("cell_unexpectedness is zero on the correct side") {
    // top-left present cell, p = 1
    CHECK(cell_unexpectedness(0, 0, 4, 4, true, 1.0) == 0.0);
    // bottom-right absent cell
    CHECK(cell_unexpectedness(3, 3, 4, 4, false, 1.0) == 0.0);
}

TEST_CASE("cell_unexpectedness vanishes on the isocline") {
    // (row 0, col 3) of a 4x4 at p = 1 sits exactly on y = 1 - x
    CHECK(cell_unexpectedness(0, 3, 4, 4, false, 1.0) <= 1e-12);
    CHECK(cell_unexpectedness(0, 3, 4, 4, true, 1.0) <= 1e-12);
}

TEST_CASE("cell_unexpectedness agrees with the bisection oracle") {
    // center of a 1x1 grid with the isocline passing below it
    const double p = 0.25;
    const double expected = oracle_u(0, 0, 1, 1, true, p);
    CHECK(expected > 0.0);
    CHECK(cell_unexpectedness(0, 0, 1, 1, true, p) == doctest::Approx(expected).epsilon(1e-10));

    // a sweep of off-isocline cells in both states
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 5; ++c)
            for (bool present : {true, false})
                for (double pp : {0.3, 1.0, 2.5}) {
                    const double got = cell_unexpectedness(r, c, 6, 5, present, pp);
                    const double want = oracle_u(r, c, 6, 5, present, pp);
                    CHECK(got == doctest::Approx(want).epsilon(1e-10));
                }
}

TEST_CASE("temperature of an all-ones matrix is zero") {
    auto q = make_bits({{1, 1}, {1, 1}});
    auto t = temperature(q, Ordering::identity(2, 2));
    CHECK(t.temperature == 0.0);
    CHECK(t.unexpectedness.empty());
}

TEST_CASE("temperature of the 4x4 checkerboard matches the closed-form sum") {
    BinaryMatrix q;
    q.row_labels = labels('r', 4);
    q.col_labels = labels('c', 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) q.cells.push_back((r + c) % 2 == 0 ? 1 : 0);

    auto t = temperature(q, Ordering::identity(4, 4));
    // frozen from the independent per-cell computation: the six wrongly
    // placed cells contribute 0.28125 + 2/9 in total
    CHECK(t.temperature == doctest::Approx(75.915594424339901).epsilon(1e-9));
    CHECK(t.temperature ==
          doctest::Approx(oracle_temperature(q, {0, 1, 2, 3}, {0, 1, 2, 3})).epsilon(1e-12));

    double map_sum = 0.0;
    for (double u : t.unexpectedness.data()) {
        CHECK(u >= 0.0);
        map_sum += u;
    }
    CHECK(map_sum == doctest::Approx(0.28125 + 2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("temperature of a matched staircase stays below one") {
    auto q = staircase(10, 10, 0.5);
    auto t = temperature(q, Ordering::identity(10, 10));
    CHECK(t.temperature <= 1.0);
}

TEST_CASE("temperature rejects an all-zero matrix") {
    auto q = make_bits({{0, 0}, {0, 0}});
    CHECK_THROWS_AS(temperature(q, Ordering::identity(2, 2)), std::runtime_error);
}

TEST_CASE("temperature validates the ordering shape") {
    auto q = make_bits({{1, 0}, {0, 1}});
    CHECK_THROWS_AS(temperature(q, Ordering::identity(3, 2)), std::invalid_argument);
}

TEST_CASE("pack of an all-ones matrix returns identity at zero") {
    auto q = make_bits({{1, 1, 1}, {1, 1, 1}});
    auto r = pack(q, OptimizerBudget{}, 0);
    CHECK(r.temperature == 0.0);
    CHECK(r.eta == 1.0);
    CHECK(r.ordering == Ordering::identity(2, 3));
}

TEST_CASE("pack finds the exhaustive optimum on small matrices") {
    OptimizerBudget budget;
    std::uint64_t case_id = 0;

    SUBCASE("all 3x3 matrices") {
        for (unsigned bitsmask = 1; bitsmask < 512; ++bitsmask) {
            BinaryMatrix q;
            q.row_labels = labels('r', 3);
            q.col_labels = labels('c', 3);
            for (unsigned b = 0; b < 9; ++b) q.cells.push_back((bitsmask >> b) & 1u);
            const double want = exhaustive_min_temperature(q);
            const double got = pack(q, budget, 1000 + bitsmask).temperature;
            REQUIRE_MESSAGE(got == doctest::Approx(want).epsilon(1e-9),
                            "3x3 pattern ", bitsmask);
        }
    }
    SUBCASE("sampled 4x4 matrices") {
        Rng rng(404);
        for (int i = 0; i < 150; ++i) {
            const auto pattern = static_cast<unsigned>(rng.bounded(65534) + 1);
            BinaryMatrix q;
            q.row_labels = labels('r', 4);
            q.col_labels = labels('c', 4);
            for (unsigned b = 0; b < 16; ++b) q.cells.push_back((pattern >> b) & 1u);
            const double want = exhaustive_min_temperature(q);
            const double got = pack(q, budget, case_id++).temperature;
            REQUIRE_MESSAGE(got == doctest::Approx(want).epsilon(1e-9), "4x4 pattern ", pattern);
        }
    }
    SUBCASE("sampled 5x5 matrices") {
        for (int i = 0; i < 25; ++i) {
            auto q = random_bits(5, 5, 0.35, 900 + i);
            if (q.ones() == 0 || q.ones() == 25) continue;
            const double want = exhaustive_min_temperature(q);
            const double got = pack(q, budget, case_id++).temperature;
            REQUIRE_MESSAGE(got == doctest::Approx(want).epsilon(1e-9), "5x5 case ", i);
        }
    }
}

TEST_CASE("pack is deterministic for fixed inputs") {
    auto q = random_bits(12, 9, 0.3, 77);
    auto a = pack(q, OptimizerBudget{}, 5);
    auto b = pack(q, OptimizerBudget{}, 5);
    CHECK(a.temperature == b.temperature);
    CHECK(a.ordering == b.ordering);
    CHECK(a.unexpectedness == b.unexpectedness);
}

TEST_CASE("pack never loses to the plain degree sort") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto q = random_bits(10, 14, 0.25, 500 + seed);
        if (q.ones() == 0) continue;

        std::vector<std::size_t> row_deg(q.rows(), 0), col_deg(q.cols(), 0);
        for (std::size_t r = 0; r < q.rows(); ++r)
            for (std::size_t c = 0; c < q.cols(); ++c)
                if (q.at(r, c)) {
                    ++row_deg[r];
                    ++col_deg[c];
                }
        Ordering deg = Ordering::identity(q.rows(), q.cols());
        std::stable_sort(deg.row_perm.begin(), deg.row_perm.end(),
                         [&](std::size_t a, std::size_t b) { return row_deg[a] > row_deg[b]; });
        std::stable_sort(deg.col_perm.begin(), deg.col_perm.end(),
                         [&](std::size_t a, std::size_t b) { return col_deg[a] > col_deg[b]; });

        CHECK(pack(q, OptimizerBudget{}, seed).temperature <=
              temperature(q, deg).temperature + 1e-12);
    }
}

TEST_CASE("pack result is invariant under input permutation") {
    auto q = random_bits(8, 11, 0.3, 321);

    std::vector<std::size_t> prow(8), pcol(11);
    std::iota(prow.begin(), prow.end(), 0);
    std::iota(pcol.begin(), pcol.end(), 0);
    Rng rng(9);
    rng.shuffle(prow);
    rng.shuffle(pcol);

    BinaryMatrix shuffled;
    for (std::size_t i = 0; i < 8; ++i) shuffled.row_labels.push_back(q.row_labels[prow[i]]);
    for (std::size_t j = 0; j < 11; ++j) shuffled.col_labels.push_back(q.col_labels[pcol[j]]);
    shuffled.cells.assign(8 * 11, 0);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 11; ++j)
            shuffled.cells[i * 11 + j] = q.at(prow[i], pcol[j]);

    auto a = pack(q, OptimizerBudget{}, 4);
    auto b = pack(shuffled, OptimizerBudget{}, 4);
    CHECK(a.temperature == doctest::Approx(b.temperature).epsilon(1e-9));

    auto packed_labels = [](const BinaryMatrix& m, const Ordering& ord) {
        std::vector<std::string> rows, cols;
        for (auto k : ord.row_perm) rows.push_back(m.row_labels[k]);
        for (auto l : ord.col_perm) cols.push_back(m.col_labels[l]);
        return std::pair{rows, cols};
    };
    CHECK(packed_labels(q, a.ordering) == packed_labels(shuffled, b.ordering));
}

TEST_CASE("eta and temperature stay consistent") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto q = random_bits(7, 7, 0.4, 200 + seed);
        if (q.ones() == 0 || q.ones() == 49) continue;
        auto r = pack(q, OptimizerBudget{}, seed);
        CHECK(r.eta == 1.0 - r.temperature / 100.0);
        CHECK(100.0 * (1.0 - r.eta) == doctest::Approx(r.temperature).epsilon(1e-12));
        CHECK(r.temperature >= 0.0);
        CHECK(r.temperature <= 100.0);
    }
}

TEST_CASE("single-line matrices sort their long axis") {
    auto q = make_bits({{0, 1, 0, 1, 1}});
    auto r = pack(q, OptimizerBudget{}, 0);
    // ones first, zeros last
    CHECK(q.at(0, r.ordering.col_perm[0]) == 1);
    CHECK(q.at(0, r.ordering.col_perm[1]) == 1);
    CHECK(q.at(0, r.ordering.col_perm[2]) == 1);
    CHECK(q.at(0, r.ordering.col_perm[3]) == 0);
    CHECK(q.at(0, r.ordering.col_perm[4]) == 0);
    CHECK(r.temperature == doctest::Approx(exhaustive_min_temperature(q)).epsilon(1e-9));
}

TEST_CASE("analyze trims before packing") {
    auto with_empty = make_bits({{1, 1, 0}, {1, 0, 0}, {0, 0, 0}});
    auto a = analyze(with_empty, OptimizerBudget{}, 0);
    CHECK(a.dropped_rows == std::vector<std::string>{"r2"});
    CHECK(a.dropped_cols == std::vector<std::string>{"c2"});

    auto trimmed = make_bits({{1, 1}, {1, 0}});
    auto direct = pack(trimmed, OptimizerBudget{}, 0);
    CHECK(a.nested.temperature == doctest::Approx(direct.temperature).epsilon(1e-12));
}

TEST_CASE("empty lines do not change the temperature") {
    // perfectly nested 6x6 triangle
    std::vector<std::vector<int>> tri(6, std::vector<int>(6, 0));
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6 - r; ++c) tri[r][c] = 1;
    auto base = analyze(make_bits(tri), OptimizerBudget{}, 0);

    tri.push_back(std::vector<int>(6, 0)); // extra all-zero row
    auto padded = analyze(make_bits(tri), OptimizerBudget{}, 0);
    CHECK(padded.nested.temperature == doctest::Approx(base.nested.temperature).epsilon(1e-12));
    CHECK(padded.dropped_rows.size() == 1);
}

TEST_CASE("unexpectedness map is zero exactly off the wrong side") {
    auto q = random_bits(6, 6, 0.4, 11);
    if (q.ones() == 0 || q.ones() == 36) return;
    auto r = pack(q, OptimizerBudget{}, 0);
    const double p = r.isocline_p;
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t l = 0; l < 6; ++l) {
            const bool present = q.at(r.ordering.row_perm[k], r.ordering.col_perm[l]) != 0;
            const double u = r.unexpectedness(k, l);
            const double want = oracle_u(k, l, 6, 6, present, p);
            CHECK(u == doctest::Approx(want).epsilon(1e-10));
        }
}

TEST_SUITE_END();
