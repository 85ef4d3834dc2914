#include <cmath>
#include <iostream>
#include <string>

#include "ulmc/scenario.hpp"

namespace {

int checks = 0;
int failures = 0;

void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
        ++failures;
        std::cout << "[FAIL] " << what << "\n";
    }
}

}  // namespace

int main() {
    using namespace ulmc;

    ScenarioConfig cfg;
    cfg.area_radius_m = 300.0;
    cfg.scell_density_per_km2 = 50.0;
    cfg.ues_per_scell = 4.0;

    // Layout contract: macro cell first with id 0 at the origin, cells
    // before users, ids dense in node order.
    {
        RngStream rng(1, StreamTag::Deployment);
        const Deployment d = deploy(cfg, rng);
        expect(d.mcell().id == 0, "macro cell has id 0");
        expect(d.mcell().kind == NodeKind::MCell, "first node is the macro cell");
        expect(norm(d.mcell().position) == 0.0, "macro cell sits at the origin");
        bool ids_dense = true, order_ok = true;
        bool seen_ue = false;
        for (std::size_t i = 0; i < d.nodes.size(); ++i) {
            ids_dense = ids_dense && d.nodes[i].id == i;
            if (d.nodes[i].kind == NodeKind::Ue) seen_ue = true;
            if (d.nodes[i].kind == NodeKind::SCell && seen_ue) order_ok = false;
        }
        expect(ids_dense, "node ids match positions in the list");
        expect(order_ok, "small cells listed before users");
        expect(d.ues().size() + d.scells().size() + 1 == d.nodes.size(),
               "accessor partition covers every node");
    }

    // Counts follow the two Poisson stages. Mean cells = density * area;
    // mean users = ues_per_scell * cells. Checked over many drops at 3
    // standard errors.
    {
        const double area_km2 =
            M_PI * cfg.area_radius_m * cfg.area_radius_m / 1e6;
        const double lam_cells = cfg.scell_density_per_km2 * area_km2;
        const int n_drops = 4000;
        long cells = 0, ues = 0;
        double cells_sq = 0.0;
        for (int i = 0; i < n_drops; ++i) {
            RngStream rng(1000 + i, StreamTag::Deployment);
            const Deployment d = deploy(cfg, rng);
            const long nc = static_cast<long>(d.scells().size());
            cells += nc;
            cells_sq += static_cast<double>(nc) * nc;
            ues += static_cast<long>(d.ues().size());
        }
        const double mean_cells = static_cast<double>(cells) / n_drops;
        const double se_cells = std::sqrt(lam_cells / n_drops);
        expect(std::abs(mean_cells - lam_cells) < 3.0 * se_cells,
               "cell count mean matches density * area");
        // Poisson: variance equals the mean.
        const double var_cells =
            cells_sq / n_drops - mean_cells * mean_cells;
        expect(std::abs(var_cells - lam_cells) < 0.15 * lam_cells,
               "cell count variance is Poisson-like");
        const double lam_ues = cfg.ues_per_scell * lam_cells;
        // Two-stage draw inflates the user-count variance; a generous band
        // on the mean is still a real check of the coupling.
        const double se_ues = std::sqrt(
            (lam_ues + cfg.ues_per_scell * cfg.ues_per_scell * lam_cells) /
            n_drops);
        expect(std::abs(static_cast<double>(ues) / n_drops - lam_ues) <
                   3.0 * se_ues,
               "user count mean matches ues_per_scell * cells");
    }

    // Positions uniform over the disk: all within the radius, mean distance
    // from the centre 2R/3, mean position at the centre.
    {
        double rsum = 0.0, xsum = 0.0, ysum = 0.0;
        long n = 0;
        bool inside = true;
        for (int i = 0; i < 400; ++i) {
            RngStream rng(9000 + i, StreamTag::Deployment);
            const Deployment d = deploy(cfg, rng);
            for (const Node* u : d.ues()) {
                const double r = norm(u->position);
                inside = inside && r <= cfg.area_radius_m;
                rsum += r;
                xsum += u->position.x;
                ysum += u->position.y;
                ++n;
            }
        }
        expect(inside, "every user inside the disk");
        const double mean_r = rsum / n;
        const double expect_r = 2.0 * cfg.area_radius_m / 3.0;
        // sd of r is R * sqrt(1/2 - 4/9)
        const double se_r = cfg.area_radius_m *
                            std::sqrt(0.5 - 4.0 / 9.0) /
                            std::sqrt(static_cast<double>(n));
        expect(std::abs(mean_r - expect_r) < 3.0 * se_r,
               "mean radius matches uniform-disk value 2R/3");
        const double se_xy = cfg.area_radius_m / 2.0 /
                             std::sqrt(static_cast<double>(n));
        expect(std::abs(xsum / n) < 3.0 * se_xy && std::abs(ysum / n) < 3.0 * se_xy,
               "cloud centred on the origin");
    }

    // Users move at the configured speed in a fixed heading.
    {
        RngStream rng(3, StreamTag::Deployment);
        ScenarioConfig fast = cfg;
        fast.ue_speed_mps = 12.0;
        const Deployment d = deploy(fast, rng);
        bool speeds_ok = true;
        for (const Node* u : d.ues())
            speeds_ok = speeds_ok &&
                        std::abs(norm(u->velocity) - 12.0) < 1e-9;
        expect(speeds_ok, "every user moves at the configured speed");

        Node u = *d.ues().front();
        const Vec2 before = u.position;
        advance_ue(u, 0.5);
        expect(std::abs(distance(before, u.position) - 6.0) < 1e-9,
               "half a second covers half the speed");
        advance_ue(u, 0.25);
        advance_ue(u, 0.25);
        Node v = *d.ues().front();
        advance_ue(v, 1.0);
        expect(distance(u.position, v.position) < 1e-9,
               "two quarter steps equal one half step");
    }

    // Reflection at the rim: stays inside, conserves speed, and turns the
    // radial velocity component around.
    {
        Node u;
        u.kind = NodeKind::Ue;
        u.position = {299.0, 0.0};
        u.velocity = {10.0, 0.0};
        advance_ue_bounded(u, 1.0, 300.0);  // would land at 309
        expect(norm(u.position) <= 300.0 + 1e-9, "reflected user stays inside");
        expect(std::abs(u.position.x - 291.0) < 1e-9,
               "overshoot folded back through the rim");
        expect(u.velocity.x == -10.0, "radial velocity flipped");

        Node w;
        w.kind = NodeKind::Ue;
        w.position = {299.0, -2.0};
        w.velocity = {7.0, 3.0};
        const double speed_before = norm(w.velocity);
        advance_ue_bounded(w, 1.0, 300.0);
        expect(std::abs(norm(w.velocity) - speed_before) < 1e-9,
               "reflection conserves speed");
        expect(norm(w.position) <= 300.0 + 1e-9,
               "oblique reflection stays inside");

        // Long-run containment under repeated bounces.
        Node z;
        z.kind = NodeKind::Ue;
        z.position = {120.0, 40.0};
        z.velocity = {20.0, -5.0};
        bool contained = true;
        for (int i = 0; i < 2000; ++i) {
            advance_ue_bounded(z, 0.1, 300.0);
            contained = contained && norm(z.position) <= 300.0 + 1e-9;
        }
        expect(contained, "user never escapes over many bounces");
    }

    // Moving anything but a user is a coding error.
    {
        Node cell;
        cell.kind = NodeKind::SCell;
        bool threw = false;
        try {
            advance_ue(cell, 1.0);
        } catch (const std::exception&) {
            threw = true;
        }
        expect(threw, "advancing a cell throws");

        Node u;
        u.kind = NodeKind::Ue;
        threw = false;
        try {
            advance_ue(u, 0.0);
        } catch (const std::exception&) {
            threw = true;
        }
        expect(threw, "zero time step throws");
    }

    std::cout << checks - failures << "/" << checks << " checks passed\n";
    if (failures > 0) {
        std::cerr << "scenario tests failed\n";
        return 1;
    }
    std::cout << "scenario tests passed\n";
    return 0;
}
