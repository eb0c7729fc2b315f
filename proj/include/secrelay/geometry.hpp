#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace secrelay {

struct NodePosition {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const NodePosition& a, const NodePosition& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Source, relay and user locations on an unitless 2-D plane.
struct SystemGeometry {
    NodePosition source;
    NodePosition relay;
    std::vector<NodePosition> users;

    std::size_t num_users() const { return users.size(); }
};

inline bool is_finite(const NodePosition& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

/// Throws std::invalid_argument unless there are >= 2 users, all coordinates
/// are finite and no user sits exactly on the source or the relay.
inline void validate(const SystemGeometry& g) {
    if (g.users.size() < 2)
        throw std::invalid_argument("geometry: need at least 2 users");
    if (!is_finite(g.source) || !is_finite(g.relay))
        throw std::invalid_argument("geometry: non-finite source/relay position");
    for (const auto& u : g.users) {
        if (!is_finite(u))
            throw std::invalid_argument("geometry: non-finite user position");
        if (distance(u, g.source) <= 0.0)
            throw std::invalid_argument("geometry: user co-located with source");
        if (distance(u, g.relay) <= 0.0)
            throw std::invalid_argument("geometry: user co-located with relay");
    }
}

}  // namespace secrelay
