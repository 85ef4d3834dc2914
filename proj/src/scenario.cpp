#include "ulmc/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace ulmc {

std::vector<const Node*> Deployment::scells() const {
    std::vector<const Node*> out;
    for (const Node& n : nodes)
        if (n.kind == NodeKind::SCell) out.push_back(&n);
    return out;
}

std::vector<const Node*> Deployment::ues() const {
    std::vector<const Node*> out;
    for (const Node& n : nodes)
        if (n.kind == NodeKind::Ue) out.push_back(&n);
    return out;
}

namespace {

Vec2 uniform_in_disk(double radius, RngStream& rng) {
    // sqrt on the radial draw makes the density uniform over area.
    const double r = radius * std::sqrt(rng.u01());
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

Deployment deploy(const ScenarioConfig& config, RngStream& rng) {
    if (!(config.area_radius_m > 0.0))
        throw std::invalid_argument("deploy: area_radius_m must be > 0");
    if (config.scell_density_per_km2 < 0.0 || config.ues_per_scell < 0.0)
        throw std::invalid_argument("deploy: densities must be >= 0");

    Deployment d;
    d.area_radius_m = config.area_radius_m;
    d.seed = config.seed;

    Node mcell;
    mcell.id = 0;
    mcell.kind = NodeKind::MCell;
    mcell.position = {0.0, 0.0};
    d.nodes.push_back(mcell);

    const double area_km2 =
        M_PI * config.area_radius_m * config.area_radius_m / 1e6;
    const int n_scell = rng.poisson(config.scell_density_per_km2 * area_km2);
    for (int i = 0; i < n_scell; ++i) {
        Node s;
        s.id = static_cast<NodeId>(d.nodes.size());
        s.kind = NodeKind::SCell;
        s.position = uniform_in_disk(config.area_radius_m, rng);
        s.array_rows = config.scell_rows;
        s.array_cols = config.scell_cols;
        d.nodes.push_back(s);
    }

    // Zero small cells is a legal (if bleak) draw: it simply yields zero
    // users here, and any macro-only experiment still runs.
    const int n_ue = rng.poisson(config.ues_per_scell * n_scell);
    for (int i = 0; i < n_ue; ++i) {
        Node u;
        u.id = static_cast<NodeId>(d.nodes.size());
        u.kind = NodeKind::Ue;
        u.position = uniform_in_disk(config.area_radius_m, rng);
        const double heading = rng.uniform(0.0, 2.0 * M_PI);
        u.velocity = {config.ue_speed_mps * std::cos(heading),
                      config.ue_speed_mps * std::sin(heading)};
        u.array_rows = config.ue_rows;
        u.array_cols = config.ue_cols;
        d.nodes.push_back(u);
    }
    return d;
}

void advance_ue(Node& node, double dt) {
    if (node.kind != NodeKind::Ue)
        throw std::invalid_argument("advance_ue: node is not a UE");
    if (!(dt > 0.0)) throw std::invalid_argument("advance_ue: dt must be > 0");
    node.position = node.position + dt * node.velocity;
}

void advance_ue_bounded(Node& node, double dt, double area_radius_m) {
    advance_ue(node, dt);
    const double r = norm(node.position);
    if (r <= area_radius_m || r == 0.0) return;
    const Vec2 n = (1.0 / r) * node.position;
    const double vn = node.velocity.x * n.x + node.velocity.y * n.y;
    node.velocity = node.velocity + (-2.0 * vn) * n;
    node.position = node.position + (-2.0 * (r - area_radius_m)) * n;
}

}  // namespace ulmc
