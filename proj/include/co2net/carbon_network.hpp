#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace co2net::network {

/// Compartment c^k_{i,j}: index k connecting vertex i to vertex j.
/// Vertex compartments have i == j, arc compartments i != j.
struct CompartmentId {
    int k;
    int i;
    int j;

    bool is_vertex() const { return i == j; }
};

/// Geometry of an arc compartment. In the regime studied here the duct
/// length is the H -> 0 limit, so the faces coincide with the adjacent
/// vertex areas and the duct has no effect on the flow; the record is
/// metadata only.
struct VirtualDuct {
    double h = 0.0;
    double a_face_source = 1.0;
    double a_face_sink = 1.0;
};

struct Compartment {
    CompartmentId id;
    std::string name;
    std::optional<VirtualDuct> duct; // arcs only
};

/// The five-compartment digraph: digester, atmosphere and cultivation as
/// vertices; two one-directional ducts digester->atmosphere and
/// atmosphere->cultivation.
class NetworkGraph {
public:
    explicit NetworkGraph(std::vector<Compartment> compartments);

    const std::vector<Compartment>& compartments() const { return compartments_; }
    std::vector<Compartment> vertices() const;
    std::vector<Compartment> arcs() const;
    bool has_arc(int from, int to) const;
    std::size_t size() const { return compartments_.size(); }

    /// One `k,i,j,kind` line per compartment.
    void write_edge_list(std::ostream& os) const;

private:
    std::vector<Compartment> compartments_;
};

/// Single-material (CO2) network of the study.
NetworkGraph build_network();

/// Atmospheric CO2 accumulation rate m12*Vd - m23*Vm, the per-volume
/// balance scaled by the compartment volumes.
double atmosphere_rate(double m12, double m23, double vd, double vm);

struct CircularityResult {
    double lambda;    // <= 0; 0 is net zero
    double net_flow;  // net finite-time sustainable flow, >= 0
    double delta;     // accounting horizon [d]
};

/// lambda = -net_flow * delta. Throws ModelDomainError for negative
/// net_flow; the clamped variant below implements the net-zero semantics.
CircularityResult circularity(double net_flow, double delta);

/// Clamps negative net flows to zero (net zero reached; the sink
/// out-absorbs the source). Sets *clamped when provided.
CircularityResult circularity_clamped(double net_flow, double delta, bool* clamped = nullptr);

/// Cultivation volume nulling the atmosphere rate: m12_ss*(Vd/m23_ss).
/// Throws NoCompensationError when m23_ss <= 0.
double compensation_volume(double m12_ss, double m23_ss, double vd);

} // namespace co2net::network
