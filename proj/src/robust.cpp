#include "imdp/robust.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace imdp {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr std::size_t kMaxVertexTargets = 8;

}  // namespace

double robust_extremum(const IntervalRow& row, const std::vector<double>& values, Direction dir,
                       Distribution& witness) {
    return robust_extremum(row, values, dir, witness, nullptr);
}

double robust_extremum(const IntervalRow& row, const std::vector<double>& values, Direction dir,
                       Distribution& witness, const std::vector<double>* tie) {
    const auto& es = row.entries;
    const std::size_t k = es.size();
    witness.resize(k);

    long double lower_sum = 0.0L, upper_sum = 0.0L;
    for (std::size_t i = 0; i < k; ++i) {
        witness[i] = es[i].lower;
        lower_sum += es[i].lower;
        upper_sum += es[i].upper;
    }
    if (lower_sum > 1.0L + kFeasTol || upper_sum < 1.0L - kFeasTol) {
        throw ContractError("infeasible interval row");
    }

    std::array<std::size_t, 16> small{};
    std::vector<std::size_t> large;
    std::size_t* order = small.data();
    if (k > small.size()) {
        large.resize(k);
        order = large.data();
    }
    std::iota(order, order + k, std::size_t{0});
    auto before = [&](std::size_t a, std::size_t b) {
        const double va = values[es[a].target], vb = values[es[b].target];
        if (va != vb) return dir == Direction::Min ? va < vb : va > vb;
        if (tie) {
            const double ta = (*tie)[es[a].target], tb = (*tie)[es[b].target];
            if (ta != tb) return dir == Direction::Min ? ta < tb : ta > tb;
        }
        return es[a].target < es[b].target;
    };
    std::sort(order, order + k, before);

    long double remaining = 1.0L - lower_sum;
    for (std::size_t j = 0; j < k && remaining > 0.0L; ++j) {
        const std::size_t i = order[j];
        const long double room = static_cast<long double>(es[i].upper) - es[i].lower;
        const long double add = std::min(room, remaining);
        witness[i] = static_cast<double>(es[i].lower + add);
        remaining -= add;
    }

    double value = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t i = order[j];
        value += witness[i] * values[es[i].target];
    }
    return value;
}

Extremum robust_extremum(const IntervalRow& row, const std::vector<double>& values, Direction dir) {
    Extremum out;
    out.value = robust_extremum(row, values, dir, out.witness);
    return out;
}

std::vector<Distribution> vertex_enumerate(const IntervalRow& row) {
    const auto& es = row.entries;
    const std::size_t k = es.size();
    if (k > kMaxVertexTargets) throw ContractError("vertex enumeration limited to 8 targets");
    std::vector<Distribution> out;
    if (k == 0) return out;
    for (std::size_t free = 0; free < k; ++free) {
        const std::size_t others = k - 1;
        for (std::size_t mask = 0; mask < (std::size_t{1} << others); ++mask) {
            Distribution p(k);
            long double sum = 0.0L;
            std::size_t bit = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (i == free) continue;
                p[i] = (mask >> bit++) & 1 ? es[i].upper : es[i].lower;
                sum += p[i];
            }
            const double pf = static_cast<double>(1.0L - sum);
            if (pf < es[free].lower - kFeasTol || pf > es[free].upper + kFeasTol) continue;
            p[free] = std::clamp(pf, es[free].lower, es[free].upper);
            const bool dup = std::any_of(out.begin(), out.end(), [&](const Distribution& q) {
                for (std::size_t i = 0; i < k; ++i) {
                    if (std::fabs(q[i] - p[i]) > 1e-12) return false;
                }
                return true;
            });
            if (!dup) out.push_back(std::move(p));
        }
    }
    return out;
}

bool is_feasible(const IntervalRow& row, const Distribution& p, double tol) {
    if (p.size() != row.entries.size()) return false;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < row.entries[i].lower - tol || p[i] > row.entries[i].upper + tol) return false;
        sum += p[i];
    }
    return std::fabs(static_cast<double>(sum - 1.0L)) <= tol;
}

}  // namespace imdp
