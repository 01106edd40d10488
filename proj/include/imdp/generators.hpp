#pragma once

#include <string>
#include <utility>
#include <vector>

#include "imdp/model.hpp"

namespace imdp {

struct ClosedCell {
    int x = 0;
    int y = 0;
    double penalty = 0.0;
};

/// Museum grid with closed exhibitions; entrance (0,0), exit (n-1,n-1).
struct AntgConfig {
    int n = 14;
    std::vector<ClosedCell> closed;

    /// Closed columns 2 and 8 on rows 0-7, columns 5 and 11 on rows 6-13 (n = 14 only).
    static AntgConfig default_layout(int n = 14);
};

/// States "c<x>_<y>" per cell plus "sink"; structures "r_s" (steps) and "r_p" (penalty).
/// Each action leaving a closed cell carries its penalty, so every visit pays once.
Imdp gen_antg(const AntgConfig& config);

/// Cell state id used by gen_antg.
std::string antg_cell(int x, int y);

struct GridConfig {
    int rows = 1;
    int cols = 2;
    std::vector<std::pair<int, int>> obstacles;  ///< (row, col)
    std::pair<int, int> start{0, 0};
    std::pair<int, int> target{0, 1};
    double slip = 0.2;            ///< probability mass moved to the two lateral neighbours
    double interval_noise = 0.0;  ///< half-width of each interval around its nominal value
    double min_lower = 1e-3;      ///< clipping floor keeping lower bounds positive
};

/// Grid world with actions north/east/south/west, an absorbing "crash" state for moves
/// off the grid, absorbing obstacles and an absorbing "goal" entered from the target cell.
/// Structures: "r_p" pays 1 on the goal-entry action, "r_d" pays 1 on every non-self-loop action.
Imdp gen_grid(const GridConfig& config);

}  // namespace imdp
