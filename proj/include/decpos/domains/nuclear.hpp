// Copyright 2026 The decpos Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECPOS_DOMAINS_NUCLEAR_HPP
#define DECPOS_DOMAINS_NUCLEAR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "decpos/domain.hpp"
#include "decpos/rng.hpp"

namespace decpos {

struct Disc {
    double cx = 0.0, cy = 0.0, r = 1.0;

    bool contains(double x, double y) const {
        const double dx = x - cx, dy = y - cy;
        return dx * dx + dy * dy <= r * r;
    }
};

struct Rect {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    double area() const { return (x1 - x0) * (y1 - y0); }
    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
};

/// Settings and geometry of the contamination domain (see NuclearDomain).
/// Defaults: a 5x5 workspace with the base disc on the left, two abutting
/// waste-zone rectangles on the right, and one small contamination disc
/// inside each rectangle.
struct NuclearConfig {
    int num_robots = 3;
    double workspace = 5.0;      // positions live in [0, workspace]^2
    double failure_prob = 0.3;   // every macro-action fails this often
    int duration_min = 1;        // macro-action duration is uniform on
    int duration_max = 4;        //   {duration_min, ..., duration_max}
    double obs_sigma = 0.25;     // per-axis observation noise
    double gamma = 0.9;
    double collect_reward = 1.0;
    /// false: the joint reward is paid when a collection succeeds.
    /// true: it is paid when the carried contaminant is deposited at base.
    bool reward_at_deposit = false;

    Disc base{0.75, 2.5, 0.5};
    std::vector<Rect> waste_zones{{2.2, 4.2, 0.5, 2.5},
                                  {2.2, 4.2, 2.5, 4.5}};
    std::vector<Disc> small_zones{{3.2, 1.5, 0.4}, {3.2, 3.5, 0.4}};
};

inline void validate(const NuclearConfig& cfg) {
    if (cfg.num_robots < 1)
        throw std::invalid_argument("NuclearConfig: num_robots must be >= 1");
    if (!(cfg.workspace > 0.0))
        throw std::invalid_argument("NuclearConfig: workspace must be > 0");
    if (!(cfg.failure_prob >= 0.0 && cfg.failure_prob <= 1.0))
        throw std::invalid_argument(
            "NuclearConfig: failure_prob must be in [0,1]");
    if (cfg.duration_min < 1 || cfg.duration_max < cfg.duration_min)
        throw std::invalid_argument(
            "NuclearConfig: need 1 <= duration_min <= duration_max");
    if (cfg.obs_sigma < 0.0)
        throw std::invalid_argument("NuclearConfig: obs_sigma must be >= 0");
    if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0))
        throw std::invalid_argument("NuclearConfig: gamma must be in [0,1)");
    if (cfg.waste_zones.empty() || cfg.small_zones.empty())
        throw std::invalid_argument(
            "NuclearConfig: need at least one waste zone and one small zone");
    for (const Rect& z : cfg.waste_zones)
        if (!(z.x1 > z.x0 && z.y1 > z.y0))
            throw std::invalid_argument(
                "NuclearConfig: degenerate waste zone");
    // Every small zone must lie inside some waste zone.
    for (const Disc& s : cfg.small_zones) {
        bool inside = false;
        for (const Rect& z : cfg.waste_zones)
            if (s.cx - s.r >= z.x0 && s.cx + s.r <= z.x1 &&
                s.cy - s.r >= z.y0 && s.cy + s.r <= z.y1)
                inside = true;
        if (!inside)
            throw std::invalid_argument(
                "NuclearConfig: small zone outside every waste zone");
    }
    // The base must not overlap any waste zone.
    for (const Rect& z : cfg.waste_zones) {
        const double nx = std::clamp(cfg.base.cx, z.x0, z.x1);
        const double ny = std::clamp(cfg.base.cy, z.y0, z.y1);
        const double dx = cfg.base.cx - nx, dy = cfg.base.cy - ny;
        if (dx * dx + dy * dy <= cfg.base.r * cfg.base.r)
            throw std::invalid_argument(
                "NuclearConfig: base overlaps a waste zone");
    }
}

/// Three-robot (by default) continuous-observation collection domain.
///
/// Each robot holds a 2D position and a carrying flag. Macro-actions draw a
/// uniform duration and an independent success flag at start; failures
/// consume the duration but leave the position unchanged. Effects on
/// success, applied at completion:
///   0 navigate-to-base: position resampled uniformly in the base disc;
///     a carried contaminant is deposited there.
///   1 navigate-to-waste: position resampled uniformly over the waste-zone
///     rectangles (area-weighted, small zones included).
///   2 correct-position: when inside a waste-zone rectangle, position
///     resampled uniformly in the nearest small contamination disc.
///     Attempts from outside the waste zone waste the action, so robots
///     must navigate to the waste zone before lining up a collection.
///   3 collect: when inside a small zone and not carrying, picks up one
///     contaminant. Attempts elsewhere waste the action.
/// Each successful collection (or, configurably, each deposit) pays a joint
/// reward. Completions emit the robot's position with Gaussian noise,
/// clamped to the workspace.
class NuclearDomain {
  public:
    struct RobotState {
        double x = 0.0, y = 0.0;
        bool carrying = false;
        int action = 0;
        long remaining = 0;
        bool success = false;
    };

    struct State {
        std::vector<RobotState> robots;
        long time = 0;
    };

    NuclearDomain() : NuclearDomain(NuclearConfig{}) {}

    explicit NuclearDomain(NuclearConfig cfg) : cfg_(std::move(cfg)) {
        validate(cfg_);
        total_waste_area_ = 0.0;
        for (const Rect& z : cfg_.waste_zones)
            total_waste_area_ += z.area();
    }

    const NuclearConfig& config() const { return cfg_; }

    int num_robots() const { return cfg_.num_robots; }
    int num_actions(int) const { return 4; }
    int obs_dim() const { return 2; }
    std::vector<Interval> obs_bounds() const {
        return {{0.0, cfg_.workspace}, {0.0, cfg_.workspace}};
    }
    double discount() const { return cfg_.gamma; }

    State initial_state(RngStream& rng) const {
        State s;
        s.robots.resize(cfg_.num_robots);
        for (RobotState& r : s.robots)
            sample_in_disc(cfg_.base, rng, r.x, r.y);
        return s;
    }

    void begin_ma(State& state, int robot, int ma, RngStream& rng) const {
        if (robot < 0 || robot >= cfg_.num_robots)
            throw std::invalid_argument("NuclearDomain: robot out of range");
        if (ma < 0 || ma > 3)
            throw std::invalid_argument("NuclearDomain: unknown macro-action");
        RobotState& r = state.robots[robot];
        r.action = ma;
        r.remaining = rng.next_int(cfg_.duration_min, cfg_.duration_max);
        r.success = !rng.next_bernoulli(cfg_.failure_prob);
    }

    std::vector<CompletionEvent> step(State& state, RngStream& rng) const {
        state.time += 1;
        std::vector<CompletionEvent> events;
        for (int i = 0; i < cfg_.num_robots; ++i) {
            RobotState& r = state.robots[i];
            r.remaining -= 1;
            if (r.remaining > 0) continue;

            double reward = 0.0;
            if (r.success) {
                switch (r.action) {
                    case 0:
                        sample_in_disc(cfg_.base, rng, r.x, r.y);
                        if (r.carrying) {
                            r.carrying = false;
                            if (cfg_.reward_at_deposit)
                                reward = cfg_.collect_reward;
                        }
                        break;
                    case 1:
                        sample_in_waste(rng, r.x, r.y);
                        break;
                    case 2:
                        if (in_waste_zone(r.x, r.y))
                            sample_in_disc(nearest_small(r.x, r.y), rng, r.x,
                                           r.y);
                        break;
                    case 3:
                        if (!r.carrying && in_small_zone(r.x, r.y)) {
                            r.carrying = true;
                            if (!cfg_.reward_at_deposit)
                                reward = cfg_.collect_reward;
                        }
                        break;
                }
            }

            CompletionEvent ev;
            ev.robot = i;
            ev.reward = reward;
            ev.time = state.time;
            ev.observation = {
                std::clamp(rng.next_gaussian(r.x, cfg_.obs_sigma), 0.0,
                           cfg_.workspace),
                std::clamp(rng.next_gaussian(r.y, cfg_.obs_sigma), 0.0,
                           cfg_.workspace)};
            events.push_back(std::move(ev));
        }
        return events;
    }

    bool in_small_zone(double x, double y) const {
        for (const Disc& s : cfg_.small_zones)
            if (s.contains(x, y)) return true;
        return false;
    }

    bool in_waste_zone(double x, double y) const {
        for (const Rect& z : cfg_.waste_zones)
            if (z.contains(x, y)) return true;
        return false;
    }

    const Disc& nearest_small(double x, double y) const {
        const Disc* best = &cfg_.small_zones.front();
        double best_sq = std::numeric_limits<double>::infinity();
        for (const Disc& s : cfg_.small_zones) {
            const double dx = x - s.cx, dy = y - s.cy;
            const double sq = dx * dx + dy * dy;
            if (sq < best_sq) {
                best_sq = sq;
                best = &s;
            }
        }
        return *best;
    }

  private:
    static void sample_in_disc(const Disc& d, RngStream& rng, double& x,
                               double& y) {
        const double radius = d.r * std::sqrt(rng.next_canonical());
        const double angle = 2.0 * M_PI * rng.next_canonical();
        x = d.cx + radius * std::cos(angle);
        y = d.cy + radius * std::sin(angle);
    }

    void sample_in_waste(RngStream& rng, double& x, double& y) const {
        double pick = rng.next_canonical() * total_waste_area_;
        const Rect* zone = &cfg_.waste_zones.back();
        for (const Rect& z : cfg_.waste_zones) {
            if (pick < z.area()) {
                zone = &z;
                break;
            }
            pick -= z.area();
        }
        x = zone->x0 + rng.next_canonical() * (zone->x1 - zone->x0);
        y = zone->y0 + rng.next_canonical() * (zone->y1 - zone->y0);
    }

    NuclearConfig cfg_;
    double total_waste_area_ = 0.0;
};

}  // namespace decpos

#endif
