#pragma once

#include <string>
#include <vector>

#include "habitsim/types.hpp"

namespace habitsim {

// Fixed 12-significant-digit decimal formatting so repeated runs are
// byte-identical and downstream plotters need no engine linkage.
std::string format_g12(double v);

// Header t,h,c1,c2,b,p,trade_balance,profit2; empty cells where a series is
// undefined in the segment's regime.
std::string trajectory_csv(const Trajectory& tr);

// A named point set for figure export.
struct PointSet {
    std::string name;               // column name
    std::vector<double> x;          // sorted abscissae
    std::vector<double> y;
};

// Point sets sharing an abscissa column written side by side; sets are
// padded with empty cells where they have no point.
std::string point_sets_csv(const std::string& x_name, const std::vector<PointSet>& sets);

void write_file(const std::string& path, const std::string& content);

}  // namespace habitsim
