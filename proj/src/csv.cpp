#include "drorder/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace drorder {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_orbit_csv(std::ostream& out, const Orbit& orbit) {
    const Index d = orbit.governing.empty() ? 0 : orbit.governing.front().size();
    out << "n";
    for (Index i = 1; i <= d; ++i)
        out << ",x_" << i;
    for (Index i = 1; i <= d; ++i)
        out << ",shadow_" << i;
    out << ",residual\n";
    for (std::size_t row = 0; row < orbit.governing.size(); ++row) {
        out << orbit.steps[row];
        for (Index i = 0; i < d; ++i)
            out << ',' << format_double(orbit.governing[row][i]);
        for (Index i = 0; i < d; ++i)
            out << ',' << format_double(orbit.shadow[row][i]);
        const double r =
            row < orbit.residuals.size() ? orbit.residuals[row] : orbit.final_residual;
        out << ',' << format_double(r) << '\n';
    }
}

void write_compare_csv(std::ostream& out, const Orbit& red, const Orbit& blue,
                       const std::vector<double>& residuals) {
    const Index d = red.governing.empty() ? 0 : red.governing.front().size();
    out << "n";
    for (Index i = 1; i <= d; ++i)
        out << ",red_" << i;
    for (Index i = 1; i <= d; ++i)
        out << ",blue_" << i;
    out << ",residual\n";
    const std::size_t rows =
        std::min({red.governing.size(), blue.governing.size(), residuals.size()});
    for (std::size_t row = 0; row < rows; ++row) {
        out << red.steps[row];
        for (Index i = 0; i < d; ++i)
            out << ',' << format_double(red.governing[row][i]);
        for (Index i = 0; i < d; ++i)
            out << ',' << format_double(blue.governing[row][i]);
        out << ',' << format_double(residuals[row]) << '\n';
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
            throw Error("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace drorder
