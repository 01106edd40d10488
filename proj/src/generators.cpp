#include "imdp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace imdp {

namespace {

struct Weight {
    double lo;
    double hi;
};

Weight cell_weight(int n, int x, int y) {
    const double c = (n - 1) / 2.0;
    const double d = std::max(std::fabs(x - c), std::fabs(y - c));
    if (d <= n / 10.0) return {3.0, 4.0};
    if (d <= n / 5.0) return {2.0, 2.0};
    return {1.0, 1.0};
}

std::string grid_cell(int r, int c) { return "g" + std::to_string(r) + "_" + std::to_string(c); }

void check_model(const Imdp& m) {
    const auto v = validate(m);
    if (!v.empty()) throw InputError("generated model invalid at (" + v[0].state + "," + v[0].action + "): " + v[0].rule);
}

}  // namespace

AntgConfig AntgConfig::default_layout(int n) {
    if (n != 14) throw InputError("the default closed layout is defined for n = 14 only");
    AntgConfig cfg;
    cfg.n = n;
    for (int y = 0; y <= 7; ++y) {
        cfg.closed.push_back({2, y, 2.0});
        cfg.closed.push_back({8, y, 16.0});
    }
    for (int y = 6; y <= 13; ++y) {
        cfg.closed.push_back({5, y, 4.0});
        cfg.closed.push_back({11, y, 64.0});
    }
    return cfg;
}

std::string antg_cell(int x, int y) { return "c" + std::to_string(x) + "_" + std::to_string(y); }

Imdp gen_antg(const AntgConfig& cfg) {
    const int n = cfg.n;
    if (n < 10) throw InputError("museum size n must be at least 10");
    std::map<std::pair<int, int>, double> penalty;
    for (const auto& c : cfg.closed) {
        if (c.x < 0 || c.y < 0 || c.x >= n || c.y >= n) throw InputError("closed cell out of range");
        if (c.penalty < 0.0) throw InputError("penalties must be non-negative");
        penalty[{c.x, c.y}] = c.penalty;
    }

    ModelBuilder b;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) b.state(antg_cell(x, y));
    b.state("sink");
    b.set_initial(antg_cell(0, 0));
    b.declare_reward("r_s");
    b.declare_reward("r_p");

    auto in = [n](int v) { return v >= 0 && v < n; };
    const struct {
        const char* name;
        int dx, dy;
    } moves[] = {{"ne", 1, 1}, {"se", 1, -1}, {"nw", -1, 1}, {"sw", -1, -1}};

    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            const std::string s = antg_cell(x, y);
            const auto pen = penalty.find({x, y});
            auto add_rewards = [&](const std::string& a) {
                b.reward("r_s", s, a, 1.0);
                if (pen != penalty.end() && pen->second != 0.0) b.reward("r_p", s, a, pen->second);
            };
            if (x == n - 1 && y == n - 1) {
                b.transition(s, "exit", "sink", 1.0, 1.0);
                add_rewards("exit");
                continue;
            }
            for (const auto& mv : moves) {
                const int x2 = x + mv.dx, y2 = y + mv.dy;
                const bool vert = in(y2), horiz = in(x2);
                if (!vert && !horiz) continue;
                if (vert && horiz) {
                    const Weight a = cell_weight(n, x, y2), c = cell_weight(n, x2, y);
                    b.transition(s, mv.name, antg_cell(x, y2), a.lo / (a.lo + c.hi), a.hi / (a.hi + c.lo));
                    b.transition(s, mv.name, antg_cell(x2, y), c.lo / (c.lo + a.hi), c.hi / (c.hi + a.lo));
                } else if (vert) {
                    b.transition(s, mv.name, antg_cell(x, y2), 1.0, 1.0);
                } else {
                    b.transition(s, mv.name, antg_cell(x2, y), 1.0, 1.0);
                }
                add_rewards(mv.name);
            }
        }
    }
    b.transition("sink", "stay", "sink", 1.0, 1.0);
    Imdp m = b.build();
    check_model(m);
    return m;
}

Imdp gen_grid(const GridConfig& cfg) {
    if (cfg.rows < 1 || cfg.cols < 1) throw InputError("grid needs at least one cell");
    if (!(cfg.slip >= 0.0 && cfg.slip < 1.0)) throw InputError("slip must lie in [0, 1)");
    if (!(cfg.interval_noise >= 0.0)) throw InputError("interval noise must be non-negative");
    if (!(cfg.min_lower > 0.0 && cfg.min_lower <= 1.0)) throw InputError("min_lower must lie in (0, 1]");
    auto inside = [&](std::pair<int, int> p) {
        return p.first >= 0 && p.second >= 0 && p.first < cfg.rows && p.second < cfg.cols;
    };
    std::set<std::pair<int, int>> blocked;
    for (const auto& o : cfg.obstacles) {
        if (!inside(o)) throw InputError("obstacle out of range");
        blocked.insert(o);
    }
    if (!inside(cfg.target)) throw InputError("target out of range");
    if (!inside(cfg.start)) throw InputError("start out of range");
    if (blocked.count(cfg.target)) throw InputError("target inside an obstacle");
    if (blocked.count(cfg.start)) throw InputError("start inside an obstacle");

    ModelBuilder b;
    for (int r = 0; r < cfg.rows; ++r)
        for (int c = 0; c < cfg.cols; ++c) b.state(grid_cell(r, c));
    b.state("crash");
    b.state("goal");
    b.set_initial(grid_cell(cfg.start.first, cfg.start.second));
    b.declare_reward("r_p");
    b.declare_reward("r_d");

    auto interval = [&](double p) -> std::pair<double, double> {
        if (cfg.interval_noise == 0.0) return {p, p};
        return {std::max(p - cfg.interval_noise, cfg.min_lower), std::min(p + cfg.interval_noise, 1.0)};
    };
    auto dest = [&](int r, int c) {
        return inside({r, c}) ? grid_cell(r, c) : std::string("crash");
    };
    const struct {
        const char* name;
        int dr, dc;
    } dirs[] = {{"north", 1, 0}, {"east", 0, 1}, {"south", -1, 0}, {"west", 0, -1}};

    for (int r = 0; r < cfg.rows; ++r) {
        for (int c = 0; c < cfg.cols; ++c) {
            const std::string s = grid_cell(r, c);
            if (blocked.count({r, c})) {
                b.transition(s, "stay", s, 1.0, 1.0);
                continue;
            }
            if (std::make_pair(r, c) == cfg.target) {
                b.transition(s, "enter", "goal", 1.0, 1.0);
                b.reward("r_p", s, "enter", 1.0);
                b.reward("r_d", s, "enter", 1.0);
                continue;
            }
            for (const auto& d : dirs) {
                std::map<std::string, double> nominal;
                nominal[dest(r + d.dr, c + d.dc)] += 1.0 - cfg.slip;
                if (cfg.slip > 0.0) {
                    // lateral neighbours are the two perpendicular directions
                    nominal[dest(r + d.dc, c + d.dr)] += cfg.slip / 2.0;
                    nominal[dest(r - d.dc, c - d.dr)] += cfg.slip / 2.0;
                }
                for (const auto& [t, p] : nominal) {
                    const auto [lo, hi] = interval(p);
                    b.transition(s, d.name, t, lo, hi);
                }
                b.reward("r_d", s, d.name, 1.0);
            }
        }
    }
    b.transition("crash", "stay", "crash", 1.0, 1.0);
    b.transition("goal", "stay", "goal", 1.0, 1.0);
    Imdp m = b.build();
    check_model(m);
    return m;
}

}  // namespace imdp
