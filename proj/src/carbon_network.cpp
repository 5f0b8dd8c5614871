#include "co2net/carbon_network.hpp"

#include <cmath>
#include <ostream>
#include <set>

#include "co2net/errors.hpp"

namespace co2net::network {

NetworkGraph::NetworkGraph(std::vector<Compartment> compartments)
    : compartments_(std::move(compartments)) {
    std::set<int> ids;
    for (const auto& c : compartments_) {
        if (!ids.insert(c.id.k).second) {
            throw ConfigError("network: duplicate compartment index " + std::to_string(c.id.k));
        }
        if (c.id.is_vertex() && c.duct.has_value()) {
            throw ConfigError("network: vertex compartment " + std::to_string(c.id.k) + " carries duct geometry");
        }
    }
}

std::vector<Compartment> NetworkGraph::vertices() const {
    std::vector<Compartment> out;
    for (const auto& c : compartments_) {
        if (c.id.is_vertex()) out.push_back(c);
    }
    return out;
}

std::vector<Compartment> NetworkGraph::arcs() const {
    std::vector<Compartment> out;
    for (const auto& c : compartments_) {
        if (!c.id.is_vertex()) out.push_back(c);
    }
    return out;
}

bool NetworkGraph::has_arc(int from, int to) const {
    for (const auto& c : compartments_) {
        if (!c.id.is_vertex() && c.id.i == from && c.id.j == to) return true;
    }
    return false;
}

void NetworkGraph::write_edge_list(std::ostream& os) const {
    for (const auto& c : compartments_) {
        os << c.id.k << "," << c.id.i << "," << c.id.j << ","
           << (c.id.is_vertex() ? "vertex" : "arc") << "\n";
    }
}

NetworkGraph build_network() {
    std::vector<Compartment> cs;
    cs.push_back({{1, 1, 1}, "digester", std::nullopt});
    cs.push_back({{2, 2, 2}, "atmosphere", std::nullopt});
    cs.push_back({{3, 3, 3}, "cultivation", std::nullopt});
    cs.push_back({{4, 1, 2}, "duct_digester_atmosphere", VirtualDuct{}});
    cs.push_back({{5, 2, 3}, "duct_atmosphere_cultivation", VirtualDuct{}});
    return NetworkGraph(std::move(cs));
}

double atmosphere_rate(double m12, double m23, double vd, double vm) {
    if (!std::isfinite(m12) || !std::isfinite(m23) || !std::isfinite(vd) || !std::isfinite(vm)) {
        throw ConfigError("atmosphere_rate: non-finite input");
    }
    if (!(vd > 0.0)) throw ConfigError("atmosphere_rate: Vd must be positive");
    if (vm < 0.0) throw ConfigError("atmosphere_rate: Vm must be non-negative");
    return m12 * vd - m23 * vm;
}

CircularityResult circularity(double net_flow, double delta) {
    if (!(delta > 0.0)) throw ConfigError("circularity: delta must be positive");
    if (net_flow < 0.0) {
        throw ModelDomainError("circularity: net sustainable flow must be non-negative");
    }
    return {net_flow == 0.0 ? 0.0 : -net_flow * delta, net_flow, delta};
}

CircularityResult circularity_clamped(double net_flow, double delta, bool* clamped) {
    const bool clip = net_flow < 0.0;
    if (clamped) *clamped = clip;
    return circularity(clip ? 0.0 : net_flow, delta);
}

double compensation_volume(double m12_ss, double m23_ss, double vd) {
    if (!(m23_ss > 0.0)) {
        throw NoCompensationError("compensation_volume: uptake flow must be positive");
    }
    if (!(vd > 0.0)) throw ConfigError("compensation_volume: Vd must be positive");
    return m12_ss * (vd / m23_ss);
}

} // namespace co2net::network
