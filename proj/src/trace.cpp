#include "co2net/trace.hpp"

#include <fstream>
#include <ostream>

#include "co2net/errors.hpp"

namespace co2net {

namespace {

void write_value(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

} // namespace

void SimulationTrace::write_csv(std::ostream& os) const {
    os << "t";
    for (const auto& n : state_names) os << "," << n;
    for (const auto& n : flow_names) os << "," << n;
    for (const auto& n : input_names) os << "," << n;
    os << "\n";
    const auto rows_n = static_cast<Eigen::Index>(rows());
    for (Eigen::Index r = 0; r < rows_n; ++r) {
        write_value(os, times[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < states.cols(); ++c) {
            os << ",";
            write_value(os, states(r, c));
        }
        for (Eigen::Index c = 0; c < flows.cols(); ++c) {
            os << ",";
            write_value(os, flows(r, c));
        }
        for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
            os << ",";
            write_value(os, inputs(r, c));
        }
        os << "\n";
    }
}

void SimulationTrace::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write trace file: " + path);
    write_csv(out);
}

} // namespace co2net
