#include "ecolotrade/nestedness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ecolotrade/parallel.hpp"
#include "ecolotrade/rng.hpp"

namespace ecolotrade {

namespace {

// Normalization constant for the mean squared relative deviation; T of a
// maximally disordered arrangement lands near 100.
constexpr double kUnexpectednessNorm = 0.04145;

// Smallest population-size-times-cells for which the GA evaluates its
// population on worker threads; below this the spawn cost dominates.
constexpr std::size_t kParallelEvalCells = 4096;

constexpr int kPopulation = 30;
constexpr int kElitism = 3;
constexpr int kTournament = 3;
constexpr int kImmigrants = 2; // fresh random individuals injected per generation

// Up to this many cells every individual is hill-climbed after scoring; the
// sweep cost is negligible there and exact minima are expected of the search.
// Larger matrices polish only a freshly improved incumbent.
constexpr std::size_t kPolishAllCells = 2048;

/// Root of x + x^p = t on [0, 1]; the left side is strictly increasing from
/// 0 to 2, so plain bisection is safe for any p > 0.
double isocline_cross(double t, double p) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid + std::pow(mid, p) < t)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double wrong_side_u(double x, double y, double p) {
    const double offset = y - x;                       // slope-+1 line y = x + offset
    const double xi = isocline_cross(1.0 - offset, p); // crossing of line and isocline
    const double chord_x = 1.0 - std::abs(offset);     // chord spans this much in x
    const double ratio = (x - xi) / chord_x;           // (d/D) = |dx| / |Dx| along the line
    return ratio * ratio;
}

/// Per-cell u for both possible cell states at fixed matrix shape and
/// isocline. Lets the optimizer score an ordering with R*C table lookups.
struct UnexpectednessTable {
    std::size_t rows = 0, cols = 0;
    std::vector<double> u_present, u_absent;

    UnexpectednessTable(std::size_t R, std::size_t C, double p)
        : rows(R), cols(C), u_present(R * C), u_absent(R * C) {
        for (std::size_t r = 0; r < R; ++r) {
            const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(R);
            for (std::size_t c = 0; c < C; ++c) {
                const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(C);
                const bool presence_side = y <= 1.0 - std::pow(x, p);
                const double u = wrong_side_u(x, y, p);
                u_present[r * C + c] = presence_side ? 0.0 : u;
                u_absent[r * C + c] = presence_side ? u : 0.0;
            }
        }
    }
};

struct Individual {
    std::vector<std::size_t> rows, cols;
    double score = std::numeric_limits<double>::infinity();
};

/// Raw u-sum of the matrix `bits` (R x C, row-major) arranged by the
/// individual's permutations.
double score_ordering(const std::vector<std::uint8_t>& bits, const UnexpectednessTable& table,
                      const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    const std::size_t R = table.rows, C = table.cols;
    double sum = 0.0;
    for (std::size_t k = 0; k < R; ++k) {
        const std::uint8_t* row = bits.data() + rows[k] * C;
        const double* up = table.u_present.data() + k * C;
        const double* ua = table.u_absent.data() + k * C;
        for (std::size_t l = 0; l < C; ++l) sum += row[cols[l]] ? up[l] : ua[l];
    }
    return sum;
}

std::vector<std::size_t> sorted_by_degree(const std::vector<std::size_t>& degree) {
    std::vector<std::size_t> order(degree.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (degree[a] != degree[b]) return degree[a] > degree[b];
        return a < b;
    });
    return order;
}

/// Degree-descending order refined by the mean packed position of each
/// line's partners.
std::vector<std::size_t> sorted_by_degree_and_marginal(const std::vector<std::size_t>& degree,
                                                       const std::vector<double>& marginal) {
    std::vector<std::size_t> order(degree.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (degree[a] != degree[b]) return degree[a] > degree[b];
        if (marginal[a] != marginal[b]) return marginal[a] < marginal[b];
        return a < b;
    });
    return order;
}

/// Order-crossover: keep a random slice of p1 in place, fill the rest with
/// the missing values in p2's cyclic order.
std::vector<std::size_t> order_crossover(const std::vector<std::size_t>& p1,
                                         const std::vector<std::size_t>& p2, Rng& rng) {
    const std::size_t n = p1.size();
    std::size_t i = static_cast<std::size_t>(rng.bounded(n));
    std::size_t j = static_cast<std::size_t>(rng.bounded(n));
    if (i > j) std::swap(i, j);

    std::vector<std::size_t> child(n, n);
    std::vector<char> used(n, 0);
    for (std::size_t k = i; k <= j; ++k) {
        child[k] = p1[k];
        used[p1[k]] = 1;
    }
    std::size_t write = (j + 1) % n;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t v = p2[(j + 1 + k) % n];
        if (used[v]) continue;
        while (child[write] != n) write = (write + 1) % n;
        child[write] = v;
        used[v] = 1;
    }
    return child;
}

void swap_mutation(std::vector<std::size_t>& perm, Rng& rng) {
    const std::size_t n = perm.size();
    const double rate = 2.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform01() < rate) {
            std::size_t j = static_cast<std::size_t>(rng.bounded(n));
            std::swap(perm[i], perm[j]);
        }
    }
}

std::size_t tournament_pick(const std::vector<Individual>& pop, Rng& rng) {
    std::size_t best = static_cast<std::size_t>(rng.bounded(pop.size()));
    for (int t = 1; t < kTournament; ++t) {
        std::size_t cand = static_cast<std::size_t>(rng.bounded(pop.size()));
        if (pop[cand].score < pop[best].score || (pop[cand].score == pop[best].score && cand < best))
            best = cand;
    }
    return best;
}

/// Deterministic hill climbing over pairwise position swaps with O(line)
/// incremental deltas; sweeps rows then columns until a full sweep finds no
/// improving swap. The plain GA reliably reaches near-optimal orderings but
/// measurably misses exact minima on small matrices; polishing the incumbent
/// closes that gap while leaving the evolutionary parameters untouched.
void polish_individual(Individual& ind, const std::vector<std::uint8_t>& bits,
                       const UnexpectednessTable& table) {
    const std::size_t R = table.rows, C = table.cols;
    auto u_at = [&](std::size_t k, std::size_t l, std::uint8_t bit) {
        return bit ? table.u_present[k * C + l] : table.u_absent[k * C + l];
    };

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool improved = false;
        for (std::size_t k1 = 0; k1 + 1 < R; ++k1) {
            for (std::size_t k2 = k1 + 1; k2 < R; ++k2) {
                const std::uint8_t* row1 = bits.data() + ind.rows[k1] * C;
                const std::uint8_t* row2 = bits.data() + ind.rows[k2] * C;
                double delta = 0.0;
                for (std::size_t l = 0; l < C; ++l) {
                    const std::uint8_t b1 = row1[ind.cols[l]], b2 = row2[ind.cols[l]];
                    if (b1 == b2) continue;
                    delta += u_at(k1, l, b2) + u_at(k2, l, b1) - u_at(k1, l, b1) - u_at(k2, l, b2);
                }
                if (delta < 0.0) {
                    std::swap(ind.rows[k1], ind.rows[k2]);
                    improved = true;
                }
            }
        }
        for (std::size_t l1 = 0; l1 + 1 < C; ++l1) {
            for (std::size_t l2 = l1 + 1; l2 < C; ++l2) {
                const std::size_t c1 = ind.cols[l1], c2 = ind.cols[l2];
                double delta = 0.0;
                for (std::size_t k = 0; k < R; ++k) {
                    const std::uint8_t* row = bits.data() + ind.rows[k] * C;
                    const std::uint8_t b1 = row[c1], b2 = row[c2];
                    if (b1 == b2) continue;
                    delta += u_at(k, l1, b2) + u_at(k, l2, b1) - u_at(k, l1, b1) - u_at(k, l2, b2);
                }
                if (delta < 0.0) {
                    std::swap(ind.cols[l1], ind.cols[l2]);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
    ind.score = score_ordering(bits, table, ind.rows, ind.cols);
}

std::uint64_t genotype_key(const Individual& ind) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (std::size_t v : ind.rows) mix(v);
    mix(0xffffULL);
    for (std::size_t v : ind.cols) mix(v);
    return h;
}

Individual random_individual(std::size_t R, std::size_t C, Rng& rng) {
    Individual ind;
    ind.rows.resize(R);
    ind.cols.resize(C);
    std::iota(ind.rows.begin(), ind.rows.end(), 0);
    std::iota(ind.cols.begin(), ind.cols.end(), 0);
    rng.shuffle(ind.rows);
    rng.shuffle(ind.cols);
    return ind;
}

void forced_swap(std::vector<std::size_t>& perm, Rng& rng) {
    if (perm.size() < 2) return;
    const std::size_t i = static_cast<std::size_t>(rng.bounded(perm.size()));
    std::size_t j = static_cast<std::size_t>(rng.bounded(perm.size() - 1));
    if (j >= i) ++j;
    std::swap(perm[i], perm[j]);
}

/// Greedy construction: with the column order fixed, fill row positions top
/// to bottom with whichever unplaced row adds the least u; then redo the
/// columns the same way against the chosen rows.
Individual greedy_seed(const std::vector<std::uint8_t>& bits, const UnexpectednessTable& table,
                       const std::vector<std::size_t>& col_order) {
    const std::size_t R = table.rows, C = table.cols;
    Individual ind;
    ind.cols = col_order;

    std::vector<char> placed(R, 0);
    for (std::size_t k = 0; k < R; ++k) {
        std::size_t best_row = R;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < R; ++r) {
            if (placed[r]) continue;
            const std::uint8_t* row = bits.data() + r * C;
            const double* up = table.u_present.data() + k * C;
            const double* ua = table.u_absent.data() + k * C;
            double cost = 0.0;
            for (std::size_t l = 0; l < C; ++l) cost += row[ind.cols[l]] ? up[l] : ua[l];
            if (cost < best_cost) {
                best_cost = cost;
                best_row = r;
            }
        }
        placed[best_row] = 1;
        ind.rows.push_back(best_row);
    }

    std::vector<std::size_t> new_cols;
    std::vector<char> col_placed(C, 0);
    for (std::size_t l = 0; l < C; ++l) {
        std::size_t best_col = C;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < C; ++c) {
            if (col_placed[c]) continue;
            double cost = 0.0;
            for (std::size_t k = 0; k < R; ++k)
                cost += bits[ind.rows[k] * C + c] ? table.u_present[k * C + l]
                                                  : table.u_absent[k * C + l];
            if (cost < best_cost) {
                best_cost = cost;
                best_col = c;
            }
        }
        col_placed[best_col] = 1;
        new_cols.push_back(best_col);
    }
    ind.cols = new_cols;
    return ind;
}

} // namespace

Ordering Ordering::identity(std::size_t rows, std::size_t cols) {
    Ordering o;
    o.row_perm.resize(rows);
    o.col_perm.resize(cols);
    std::iota(o.row_perm.begin(), o.row_perm.end(), 0);
    std::iota(o.col_perm.begin(), o.col_perm.end(), 0);
    return o;
}

OptimizerBudget fast_null_budget() {
    return OptimizerBudget{50, 50};
}

double isocline_param(double fill) {
    if (!(fill > 0.0 && fill < 1.0))
        throw std::domain_error("isocline undefined for fill outside (0,1)");
    return fill / (1.0 - fill);
}

double cell_unexpectedness(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols,
                           bool present, double p) {
    const double x = (static_cast<double>(col) + 0.5) / static_cast<double>(cols);
    const double y = (static_cast<double>(row) + 0.5) / static_cast<double>(rows);
    const bool presence_side = y <= 1.0 - std::pow(x, p);
    if (present == presence_side) return 0.0;
    return wrong_side_u(x, y, p);
}

TemperatureResult temperature(const BinaryMatrix& q, const Ordering& ordering) {
    const std::size_t R = q.rows(), C = q.cols();
    if (ordering.row_perm.size() != R || ordering.col_perm.size() != C)
        throw std::invalid_argument("ordering does not match matrix shape");

    const std::size_t ones = q.ones();
    if (ones == 0) throw std::runtime_error("temperature undefined for all-zero matrix");

    TemperatureResult out;
    if (ones == R * C) return out; // fully filled: perfectly nested by definition

    const double fill = static_cast<double>(ones) / static_cast<double>(R * C);
    const UnexpectednessTable table(R, C, isocline_param(fill));

    out.unexpectedness = Matrix(R, C);
    double sum = 0.0;
    for (std::size_t k = 0; k < R; ++k) {
        for (std::size_t l = 0; l < C; ++l) {
            const bool present = q.at(ordering.row_perm[k], ordering.col_perm[l]) != 0;
            const double u = present ? table.u_present[k * C + l] : table.u_absent[k * C + l];
            out.unexpectedness(k, l) = u;
            sum += u;
        }
    }
    const double raw = 100.0 / kUnexpectednessNorm * sum / static_cast<double>(R * C);
    out.clamped = raw > 100.0;
    out.temperature = out.clamped ? 100.0 : raw;
    return out;
}

NestednessResult pack(const BinaryMatrix& q, const OptimizerBudget& budget, std::uint64_t seed) {
    const std::size_t R = q.rows(), C = q.cols();
    if (R == 0 || C == 0) throw std::invalid_argument("pack of empty matrix");
    const std::size_t ones = q.ones();
    if (ones == 0) throw std::runtime_error("pack undefined for all-zero matrix");

    NestednessResult result;
    result.fill = static_cast<double>(ones) / static_cast<double>(R * C);

    if (ones == R * C) {
        result.ordering = Ordering::identity(R, C);
        result.temperature = 0.0;
        result.eta = 1.0;
        result.isocline_p = 0.0;
        return result;
    }

    // Work in canonical label order so that ties, the RNG stream and hence
    // the result do not depend on how the caller happened to arrange the
    // input.
    std::vector<std::size_t> canon_rows(R), canon_cols(C);
    std::iota(canon_rows.begin(), canon_rows.end(), 0);
    std::iota(canon_cols.begin(), canon_cols.end(), 0);
    std::stable_sort(canon_rows.begin(), canon_rows.end(), [&](std::size_t a, std::size_t b) {
        return q.row_labels[a] < q.row_labels[b];
    });
    std::stable_sort(canon_cols.begin(), canon_cols.end(), [&](std::size_t a, std::size_t b) {
        return q.col_labels[a] < q.col_labels[b];
    });

    std::vector<std::uint8_t> bits(R * C);
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) bits[i * C + j] = q.at(canon_rows[i], canon_cols[j]);

    std::vector<std::size_t> row_deg(R, 0), col_deg(C, 0);
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j)
            if (bits[i * C + j]) {
                ++row_deg[i];
                ++col_deg[j];
            }

    const double p = isocline_param(result.fill);
    result.isocline_p = p;
    const UnexpectednessTable table(R, C, p);

    // Heuristic seed 1: plain degree sort.
    Individual h1;
    h1.rows = sorted_by_degree(row_deg);
    h1.cols = sorted_by_degree(col_deg);

    std::vector<Individual> population;

    if (R == 1 || C == 1) {
        // A single line: packing reduces to the degree sort of the long axis.
        population.push_back(h1);
    } else {
        // Heuristic seed 2: degree sort refined by the mean h1-position of
        // each line's partners.
        std::vector<std::size_t> col_pos(C), row_pos(R);
        for (std::size_t l = 0; l < C; ++l) col_pos[h1.cols[l]] = l;
        for (std::size_t k = 0; k < R; ++k) row_pos[h1.rows[k]] = k;
        std::vector<double> row_marginal(R, 0.0), col_marginal(C, 0.0);
        for (std::size_t i = 0; i < R; ++i) {
            if (!row_deg[i]) continue;
            double s = 0.0;
            for (std::size_t j = 0; j < C; ++j)
                if (bits[i * C + j]) s += static_cast<double>(col_pos[j]) + 0.5;
            row_marginal[i] = s / static_cast<double>(row_deg[i]);
        }
        for (std::size_t j = 0; j < C; ++j) {
            if (!col_deg[j]) continue;
            double s = 0.0;
            for (std::size_t i = 0; i < R; ++i)
                if (bits[i * C + j]) s += static_cast<double>(row_pos[i]) + 0.5;
            col_marginal[j] = s / static_cast<double>(col_deg[j]);
        }
        Individual h2;
        h2.rows = sorted_by_degree_and_marginal(row_deg, row_marginal);
        h2.cols = sorted_by_degree_and_marginal(col_deg, col_marginal);

        Individual h3 = greedy_seed(bits, table, h1.cols);

        population.push_back(h1);
        population.push_back(std::move(h2));
        population.push_back(std::move(h3));
    }

    Rng rng(seed);
    while (population.size() < static_cast<std::size_t>(kPopulation) && population.size() > 1)
        population.push_back(random_individual(R, C, rng));

    const bool eval_parallel = R * C * population.size() >= kParallelEvalCells;
    const bool polish_all = R * C <= kPolishAllCells;
    auto evaluate = [&](std::vector<Individual>& pop, std::size_t from) {
        parallel_for(
            pop.size() - from,
            [&](std::size_t i) {
                Individual& ind = pop[from + i];
                ind.score = score_ordering(bits, table, ind.rows, ind.cols);
                if (polish_all) polish_individual(ind, bits, table);
            },
            eval_parallel);
    };
    evaluate(population, 0);

    auto rank_indices = [](const std::vector<Individual>& pop) {
        std::vector<std::size_t> idx(pop.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return pop[a].score < pop[b].score; });
        return idx;
    };

    if (!polish_all) {
        const std::size_t top = rank_indices(population)[0];
        polish_individual(population[top], bits, table);
    }
    Individual best = population[rank_indices(population)[0]];

    if (population.size() > 1) {
        int stagnant = 0;
        for (int gen = 0; gen < budget.generations && stagnant < budget.stagnation; ++gen) {
            const auto ranked = rank_indices(population);
            std::vector<Individual> next;
            next.reserve(population.size());
            std::set<std::uint64_t> seen;
            for (int e = 0; e < kElitism && e < static_cast<int>(ranked.size()); ++e) {
                next.push_back(population[ranked[e]]);
                seen.insert(genotype_key(next.back()));
            }
            for (int m = 0; m < kImmigrants && next.size() < population.size(); ++m) {
                next.push_back(random_individual(R, C, rng));
                seen.insert(genotype_key(next.back()));
            }

            // All randomness is consumed here, before the parallel scoring
            // pass, so thread scheduling can never alter the outcome.
            while (next.size() < population.size()) {
                const std::size_t ia = tournament_pick(population, rng);
                std::size_t ib = tournament_pick(population, rng);
                if (ib == ia) ib = tournament_pick(population, rng);
                Individual child;
                child.rows = order_crossover(population[ia].rows, population[ib].rows, rng);
                child.cols = order_crossover(population[ia].cols, population[ib].cols, rng);
                swap_mutation(child.rows, rng);
                swap_mutation(child.cols, rng);
                // duplicates add nothing; nudge clones apart before accepting
                for (int attempt = 0; attempt < 4 && seen.count(genotype_key(child)); ++attempt) {
                    forced_swap(child.rows, rng);
                    forced_swap(child.cols, rng);
                }
                seen.insert(genotype_key(child));
                next.push_back(std::move(child));
            }
            evaluate(next, static_cast<std::size_t>(kElitism));
            population = std::move(next);

            const std::size_t top = rank_indices(population)[0];
            if (!polish_all && population[top].score < best.score)
                polish_individual(population[top], bits, table);
            if (population[top].score < best.score) {
                best = population[top];
                stagnant = 0;
            } else {
                ++stagnant;
            }
        }
    }

    // Map the canonical-space winner back onto the caller's indices.
    result.ordering.row_perm.resize(R);
    result.ordering.col_perm.resize(C);
    for (std::size_t k = 0; k < R; ++k) result.ordering.row_perm[k] = canon_rows[best.rows[k]];
    for (std::size_t l = 0; l < C; ++l) result.ordering.col_perm[l] = canon_cols[best.cols[l]];

    TemperatureResult t = temperature(q, result.ordering);
    result.temperature = t.temperature;
    result.eta = 1.0 - t.temperature / 100.0;
    result.unexpectedness = std::move(t.unexpectedness);
    result.clamped = t.clamped;
    return result;
}

AnalysisResult analyze(const BinaryMatrix& q, const OptimizerBudget& budget, std::uint64_t seed) {
    TrimResult trimmed = trim_empty(q);
    AnalysisResult out;
    out.nested = pack(trimmed.matrix, budget, seed);
    out.trimmed = std::move(trimmed.matrix);
    out.dropped_rows = std::move(trimmed.dropped_rows);
    out.dropped_cols = std::move(trimmed.dropped_cols);
    return out;
}

} // namespace ecolotrade
