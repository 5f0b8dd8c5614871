#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace co2net {

/// Time-indexed record of a simulation: states plus optional flow and
/// input columns. Times are strictly increasing; all blocks share rows.
struct SimulationTrace {
    std::vector<double> times;
    Eigen::MatrixXd states;            // rows x state dim
    Eigen::MatrixXd flows;             // rows x flow dim (0 cols when unused)
    Eigen::MatrixXd inputs;            // rows x input dim (0 cols when unused)
    std::vector<std::string> state_names;
    std::vector<std::string> flow_names;
    std::vector<std::string> input_names;

    std::size_t rows() const { return times.size(); }

    /// `t,<state names>,<flow names>,<input names>`; full-precision floats.
    void write_csv(std::ostream& os) const;
    void save_csv(const std::string& path) const;
};

} // namespace co2net
