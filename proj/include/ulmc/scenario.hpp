#ifndef ULMC_SCENARIO_HPP
#define ULMC_SCENARIO_HPP

#include <cstdint>
#include <vector>

#include "ulmc/config.hpp"
#include "ulmc/geometry.hpp"
#include "ulmc/rng.hpp"

namespace ulmc {

using NodeId = std::uint32_t;

enum class NodeKind { MCell, SCell, Ue };

struct Node {
    NodeId id = 0;
    NodeKind kind = NodeKind::Ue;
    Vec2 position;
    Vec2 velocity;      // zero for cells
    int array_rows = 0; // zero for the macro cell, which has no mmWave array
    int array_cols = 0;
};

// One random drop: the macro cell at the origin, small cells and users
// scattered over a disk with Poisson counts.
struct Deployment {
    std::vector<Node> nodes;  // mcell first, then scells, then ues
    double area_radius_m = 0.0;
    std::uint64_t seed = 0;

    const Node& mcell() const { return nodes.front(); }
    std::vector<const Node*> scells() const;
    std::vector<const Node*> ues() const;
    const Node& by_id(NodeId id) const { return nodes.at(id); }
    Node& by_id(NodeId id) { return nodes.at(id); }
};

// Draw a deployment. SCell count ~ Poisson(density * area), UE count
// ~ Poisson(ues_per_scell * scell_count), positions uniform over the disk,
// UE headings uniform over [0, 2pi) at the configured speed.
Deployment deploy(const ScenarioConfig& config, RngStream& rng);

// Constant-velocity motion over dt seconds. Users may leave the deployment
// disk; distance-based laws keep applying and coverage loss is recorded by
// the normal outage bookkeeping.
void advance_ue(Node& node, double dt);

// Same motion, but reflected at the disk edge so the user population stays
// inside the deployment area. The heading bounces off the boundary normal
// and the overshoot is folded back in.
void advance_ue_bounded(Node& node, double dt, double area_radius_m);

}  // namespace ulmc

#endif
