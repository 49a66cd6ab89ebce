#include "habitsim/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "habitsim/errors.hpp"

namespace habitsim {

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream os;
    os << "t,h,c1,c2,b,p,trade_balance,profit2\n";
    auto cell = [&](const std::vector<double>& v, std::size_t i) {
        return i < v.size() ? format_g12(v[i]) : std::string();
    };
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        os << format_g12(tr.t[i]) << ',' << cell(tr.h, i) << ',' << cell(tr.c1, i) << ','
           << cell(tr.c2, i) << ',' << cell(tr.b, i) << ',' << cell(tr.p, i) << ','
           << cell(tr.trade_balance, i) << ',' << cell(tr.profit2, i) << '\n';
    }
    return os.str();
}

std::string point_sets_csv(const std::string& x_name, const std::vector<PointSet>& sets) {
    // Merge the abscissae; each set contributes its value where it has one.
    std::vector<double> xs;
    for (const auto& s : sets) xs.insert(xs.end(), s.x.begin(), s.x.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::ostringstream os;
    os << x_name;
    for (const auto& s : sets) os << ',' << s.name;
    os << '\n';
    std::vector<std::size_t> idx(sets.size(), 0);
    for (const double x : xs) {
        os << format_g12(x);
        for (std::size_t k = 0; k < sets.size(); ++k) {
            os << ',';
            auto& i = idx[k];
            if (i < sets[k].x.size() && sets[k].x[i] == x) {
                os << format_g12(sets[k].y[i]);
                ++i;
            }
        }
        os << '\n';
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write file: " + path);
    f << content;
}

}  // namespace habitsim
