#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "abcde/errors.hpp"
#include "abcde/rng.hpp"
#include "abcde/sampling.hpp"

namespace abcde {

enum class Variant { Global, Local };

inline const char* variant_name(Variant v) { return v == Variant::Global ? "global" : "local"; }

struct MixingConfig {
    double xi = 0.5;
    Variant variant = Variant::Global;

    void validate() const {
        if (!(xi >= 0.0 && xi <= 1.0))
            throw ConfigError("assignment", "xi must be in [0,1], got " + std::to_string(xi));
    }
};

/// Per-community mixing. Global is the identity; Local solves
/// xi_l * (1 - W_l/W) = xi so every community sheds the same expected
/// fraction of edge endpoints to the background graph.
inline double effective_xi(double xi, Variant variant, std::uint64_t community_volume,
                           std::uint64_t total_volume) {
    if (variant == Variant::Global) return xi;
    const double ratio = static_cast<double>(community_volume) / static_cast<double>(total_volume);
    const double adjusted = xi / (1.0 - ratio);
    if (adjusted > 1.0 + 1e-12)
        throw ConfigError("assignment",
                          "local variant infeasible: xi/(1 - W_l/W) = " + std::to_string(adjusted) +
                              " > 1; lower xi or shrink the largest community");
    return std::min(adjusted, 1.0);
}

/// Expected inter-community edge fraction for a given xi and community
/// volumes: mu = xi * (1 - sum (W_l/W)^2).
inline double mu_from_xi(double xi, const std::vector<std::uint64_t>& community_volumes,
                         std::uint64_t total_volume) {
    double sum_sq = 0.0;
    for (std::uint64_t wl : community_volumes) {
        const double r = static_cast<double>(wl) / static_cast<double>(total_volume);
        sum_sq += r * r;
    }
    return xi * (1.0 - sum_sq);
}

/// Node -> community map plus the inverse member lists; the two views are
/// kept consistent by construction.
struct Membership {
    std::vector<std::uint32_t> community_of;           // per node
    std::vector<std::vector<std::uint32_t>> members;   // per community

    std::size_t community_count() const noexcept { return members.size(); }

    /// Degree volume of each community under the given degree sequence.
    std::vector<std::uint64_t> community_volumes(const DegreeSequence& degrees) const {
        std::vector<std::uint64_t> vol(members.size(), 0);
        for (std::size_t i = 0; i < community_of.size(); ++i) vol[community_of[i]] += degrees[i];
        return vol;
    }
};

/// Per-node split of the degree into community-graph and background-graph
/// endpoints.
struct DegreeSplit {
    std::vector<std::uint64_t> internal;
    std::vector<std::uint64_t> background;
};

namespace detail {

/// Fenwick tree over per-community remaining capacity; supports prefix sums
/// and weighted index search in O(log k).
class CapacityTree {
public:
    explicit CapacityTree(const std::vector<std::uint64_t>& caps)
        : n_(caps.size()), tree_(caps.size() + 1, 0) {
        for (std::size_t i = 0; i < n_; ++i) add(i, static_cast<std::int64_t>(caps[i]));
    }

    void add(std::size_t i, std::int64_t delta) {
        for (std::size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] += delta;
    }

    std::uint64_t prefix_sum(std::size_t count) const {
        std::int64_t s = 0;
        for (std::size_t j = count; j > 0; j -= j & (~j + 1)) s += tree_[j];
        return static_cast<std::uint64_t>(s);
    }

    /// Smallest index i < limit with cumulative weight > target.
    std::size_t find(std::uint64_t target) const {
        std::size_t pos = 0;
        std::size_t mask = std::bit_floor(n_);
        std::int64_t remaining = static_cast<std::int64_t>(target);
        while (mask > 0) {
            const std::size_t next = pos + mask;
            if (next <= n_ && tree_[next] <= remaining) {
                pos = next;
                remaining -= tree_[next];
            }
            mask >>= 1;
        }
        return pos; // 0-based community index
    }

private:
    std::size_t n_;
    std::vector<std::int64_t> tree_;
};

/// Deterministic internal-degree demand used for admissibility. For the
/// local variant this uses the global xi, a conservative bound since
/// xi_l >= xi implies a smaller internal demand.
inline std::uint64_t internal_demand(std::uint64_t degree, double xi) {
    const double expected = (1.0 - xi) * static_cast<double>(degree);
    return static_cast<std::uint64_t>(std::ceil(expected - 1e-9));
}

/// At xi = 0 every endpoint must stay internal, so every community volume has
/// to be even or the community graph cannot be realized. Fix parity by
/// swapping two nodes of opposite degree parity between odd-volume
/// communities; sizes are untouched and admissibility (d <= s - 1 at xi = 0)
/// is re-checked for the swapped pair.
inline void fix_volume_parity(const DegreeSequence& degrees, const CommunitySizes& sizes,
                              Membership& m) {
    std::vector<std::uint64_t> vol(m.community_count(), 0);
    for (std::size_t i = 0; i < m.community_of.size(); ++i) vol[m.community_of[i]] += degrees[i];
    std::vector<std::size_t> odd;
    for (std::size_t l = 0; l < vol.size(); ++l)
        if (vol[l] % 2 != 0) odd.push_back(l);

    auto pick = [&](std::size_t l, std::uint64_t parity, std::uint64_t cap) -> std::int64_t {
        std::int64_t best = -1;  // smallest-degree member with that parity under the cap
        for (std::uint32_t v : m.members[l])
            if (degrees[v] % 2 == parity && degrees[v] <= cap &&
                (best < 0 || degrees[v] < degrees[static_cast<std::size_t>(best)]))
                best = v;
        return best;
    };

    for (std::size_t a = 0; a < odd.size(); ++a) {
        if (vol[odd[a]] % 2 == 0) continue;
        for (std::size_t b = a + 1; b < odd.size() && vol[odd[a]] % 2 != 0; ++b) {
            if (vol[odd[b]] % 2 == 0) continue;
            const std::size_t l1 = odd[a], l2 = odd[b];
            for (const std::uint64_t parity : {1, 0}) {
                const std::int64_t x = pick(l1, parity, sizes[l2] - 1);
                const std::int64_t y = pick(l2, 1 - parity, sizes[l1] - 1);
                if (x < 0 || y < 0) continue;
                const auto nx = static_cast<std::uint32_t>(x);
                const auto ny = static_cast<std::uint32_t>(y);
                *std::find(m.members[l1].begin(), m.members[l1].end(), nx) = ny;
                *std::find(m.members[l2].begin(), m.members[l2].end(), ny) = nx;
                m.community_of[nx] = static_cast<std::uint32_t>(l2);
                m.community_of[ny] = static_cast<std::uint32_t>(l1);
                vol[l1] += degrees[ny] - degrees[nx];
                vol[l2] += degrees[nx] - degrees[ny];
                break;
            }
        }
    }
}

} // namespace detail

/// Place nodes into communities. Nodes are processed in non-increasing degree
/// order (the order the sequence is stored in); each node picks uniformly
/// among admissible communities with free capacity, weighted by remaining
/// slots. Admissibility: ceil((1 - xi) * d) <= s - 1.
inline Membership assign_communities(const DegreeSequence& degrees, const CommunitySizes& sizes,
                                     const MixingConfig& mix, RandomStream& rng) {
    mix.validate();
    const std::size_t n = degrees.size();
    const std::size_t k = sizes.count();

    Membership out;
    out.community_of.assign(n, 0);
    out.members.resize(k);
    for (std::size_t l = 0; l < k; ++l) out.members[l].reserve(sizes[l]);

    detail::CapacityTree capacity(sizes.values());

    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t demand = detail::internal_demand(degrees[i], mix.xi);
        // sizes are non-increasing, so admissible communities form a prefix
        const auto& sv = sizes.values();
        const std::size_t admissible =
            static_cast<std::size_t>(std::lower_bound(sv.begin(), sv.end(), demand + 1,
                                                      std::greater_equal<std::uint64_t>()) -
                                     sv.begin());
        const std::uint64_t total = capacity.prefix_sum(admissible);
        if (total == 0)
            throw FeasibilityError(
                "assignment", "no community can host a node of degree " + std::to_string(degrees[i]) +
                                  " (internal demand " + std::to_string(demand) +
                                  ", largest admissible size " +
                                  std::to_string(admissible > 0 ? sv[0] : 0) + "); raise xi or s_max");
        const std::size_t l = capacity.find(bounded(rng, total));
        out.community_of[i] = static_cast<std::uint32_t>(l);
        out.members[l].push_back(static_cast<std::uint32_t>(i));
        capacity.add(l, -1);
    }
    // xi = 0 admits no background endpoints, so community volumes must be even
    if (mix.xi == 0.0) detail::fix_volume_parity(degrees, sizes, out);
    return out;
}

/// Split each node's degree: background = floor(xi_l * d) + Bernoulli(frac),
/// then per-community parity repair so each community's internal sum is even
/// (the background sum is then even too since W is even). The repair moves one
/// unit internal -> background on the member with the largest internal degree,
/// ties to the lowest node id.
inline DegreeSplit split_degrees(const DegreeSequence& degrees, const Membership& membership,
                                 const MixingConfig& mix, RandomStream& rng) {
    mix.validate();
    const std::size_t n = degrees.size();
    const std::uint64_t total_volume = degrees.volume();
    const std::vector<std::uint64_t> volumes = membership.community_volumes(degrees);

    std::vector<double> xi_l(volumes.size());
    for (std::size_t l = 0; l < volumes.size(); ++l)
        xi_l[l] = effective_xi(mix.xi, mix.variant, volumes[l], total_volume);

    DegreeSplit split;
    split.internal.resize(n);
    split.background.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double expected = xi_l[membership.community_of[i]] * static_cast<double>(degrees[i]);
        std::uint64_t bg = static_cast<std::uint64_t>(std::floor(expected));
        const double frac = expected - static_cast<double>(bg);
        // one uniform draw per node regardless of frac, so streams line up
        // across xi values and the background sum is monotone in xi
        if (uniform01(rng) < frac) ++bg;
        bg = std::min(bg, degrees[i]);
        split.background[i] = bg;
        split.internal[i] = degrees[i] - bg;
    }

    for (const auto& members : membership.members) {
        std::uint64_t sum = 0;
        for (std::uint32_t v : members) sum += split.internal[v];
        if (sum % 2 == 0) continue;
        std::uint32_t target = members.front();
        for (std::uint32_t v : members)
            if (split.internal[v] > split.internal[target]) target = v;
        // odd sum implies some member has internal >= 1
        --split.internal[target];
        ++split.background[target];
    }
    return split;
}

} // namespace abcde
