#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "abcde/errors.hpp"
#include "abcde/rng.hpp"

namespace abcde {

/// Truncated discrete power law: Pr(v) ~ v^-exponent on [lo, hi].
struct PowerLawSpec {
    double exponent = 2.5;
    std::uint64_t lo = 1;
    std::uint64_t hi = 1;

    void validate() const {
        if (!(exponent > 1.0))
            throw ConfigError("sampling", "power-law exponent must be > 1, got " + std::to_string(exponent));
        if (lo == 0) throw ConfigError("sampling", "truncation minimum must be positive");
        if (lo > hi)
            throw ConfigError("sampling", "truncation range invalid: lo=" + std::to_string(lo) +
                                              " > hi=" + std::to_string(hi));
    }
};

/// Precomputed cumulative mass over [lo, hi]; a draw is a binary search on a
/// uniform variate, so identical (spec, seed) give identical samples.
class PowerLawSampler {
public:
    explicit PowerLawSampler(const PowerLawSpec& spec) : spec_(spec) {
        spec.validate();
        cumulative_.reserve(spec.hi - spec.lo + 1);
        double sum = 0.0;
        for (std::uint64_t v = spec.lo; v <= spec.hi; ++v) {
            sum += std::pow(static_cast<double>(v), -spec.exponent);
            cumulative_.push_back(sum);
        }
        for (double& c : cumulative_) c /= sum;
        cumulative_.back() = 1.0;
    }

    std::uint64_t sample(RandomStream& rng) const {
        const double u = uniform01(rng);
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        return spec_.lo + static_cast<std::uint64_t>(it - cumulative_.begin());
    }

    const PowerLawSpec& spec() const noexcept { return spec_; }

private:
    PowerLawSpec spec_;
    std::vector<double> cumulative_;
};

inline std::uint64_t sample_power_law(const PowerLawSpec& spec, RandomStream& rng) {
    return PowerLawSampler(spec).sample(rng);
}

/// Node degrees, stored non-increasing; the sum is always even.
class DegreeSequence {
public:
    DegreeSequence() = default;

    /// Sorts and applies the even-sum repair: decrement one maximum-degree
    /// entry. When lo == hi forces the repaired value below the truncation
    /// minimum a warning is logged, not an error.
    static DegreeSequence from_samples(std::vector<std::uint64_t> degrees) {
        if (degrees.empty()) throw ConfigError("sampling", "degree sequence must be non-empty");
        for (std::uint64_t d : degrees)
            if (d == 0) throw ConfigError("sampling", "degrees must be positive");
        std::sort(degrees.begin(), degrees.end(), std::greater<>());
        std::uint64_t sum = std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
        if (sum % 2 != 0) {
            if (degrees[0] == 1)
                throw ConfigError("sampling", "cannot repair odd degree sum: maximum degree is 1");
            --degrees[0];
            std::cerr << "warning: odd degree sum repaired by decrementing one maximum-degree node to "
                      << degrees[0] << "\n";
            // keep non-increasing order after the decrement
            std::sort(degrees.begin(), degrees.end(), std::greater<>());
        }
        DegreeSequence out;
        out.degrees_ = std::move(degrees);
        return out;
    }

    std::size_t size() const noexcept { return degrees_.size(); }
    std::uint64_t operator[](std::size_t i) const { return degrees_[i]; }
    const std::vector<std::uint64_t>& values() const noexcept { return degrees_; }

    /// W = sum of degrees.
    std::uint64_t volume() const {
        return std::accumulate(degrees_.begin(), degrees_.end(), std::uint64_t{0});
    }

private:
    std::vector<std::uint64_t> degrees_;
};

/// Community sizes, non-increasing, summing exactly to n.
class CommunitySizes {
public:
    CommunitySizes() = default;

    static CommunitySizes from_sizes(std::vector<std::uint64_t> sizes, std::uint64_t n) {
        if (sizes.empty()) throw ConfigError("sampling", "community size list must be non-empty");
        const std::uint64_t sum = std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
        if (sum != n)
            throw ConfigError("sampling", "community sizes sum to " + std::to_string(sum) +
                                              ", expected n=" + std::to_string(n));
        std::sort(sizes.begin(), sizes.end(), std::greater<>());
        CommunitySizes out;
        out.sizes_ = std::move(sizes);
        return out;
    }

    std::size_t count() const noexcept { return sizes_.size(); }
    std::uint64_t operator[](std::size_t i) const { return sizes_[i]; }
    const std::vector<std::uint64_t>& values() const noexcept { return sizes_; }

private:
    std::vector<std::uint64_t> sizes_;
};

inline DegreeSequence sample_degrees(std::uint64_t n, const PowerLawSpec& spec, RandomStream& rng) {
    if (n == 0) throw ConfigError("sampling", "n must be >= 1");
    PowerLawSampler sampler(spec);
    std::vector<std::uint64_t> degrees(n);
    for (auto& d : degrees) d = sampler.sample(rng);
    return DegreeSequence::from_samples(std::move(degrees));
}

/// Draw sizes until the cumulative sum reaches n, then repair the overshoot:
/// shrink the last draw when that keeps it >= s_min, otherwise drop it and
/// grow the largest communities (capped at s_max) to cover the shortfall.
inline CommunitySizes sample_community_sizes(std::uint64_t n, const PowerLawSpec& spec, RandomStream& rng) {
    spec.validate();
    if (spec.lo > n)
        throw ConfigError("sampling", "s_min=" + std::to_string(spec.lo) + " exceeds n=" + std::to_string(n));
    PowerLawSampler sampler(spec);
    std::vector<std::uint64_t> sizes;
    std::uint64_t sum = 0;
    while (sum < n) {
        sizes.push_back(sampler.sample(rng));
        sum += sizes.back();
    }
    std::uint64_t excess = sum - n;
    if (excess > 0) {
        const std::uint64_t last = sizes.back();
        if (last >= excess && last - excess >= spec.lo) {
            sizes.back() = last - excess;
        } else {
            sizes.pop_back();
            std::uint64_t shortfall = n - (sum - last);
            std::sort(sizes.begin(), sizes.end(), std::greater<>());
            std::uint64_t room = 0;
            for (std::uint64_t s : sizes) room += spec.hi - std::min(s, spec.hi);
            if (room >= shortfall) {
                for (auto& s : sizes) {
                    if (shortfall == 0) break;
                    const std::uint64_t add = std::min(spec.hi - std::min(s, spec.hi), shortfall);
                    s += add;
                    shortfall -= add;
                }
            } else if (shortfall >= 1) {
                // growing cannot cover it: keep the last community clamped to
                // s_min and shave the difference off the largest communities
                std::uint64_t shave = spec.lo - shortfall;  // shortfall < s_min here
                sizes.insert(sizes.begin(), spec.lo);
                for (auto& s : sizes) {
                    if (shave == 0) break;
                    const std::uint64_t slack = s > spec.lo ? s - spec.lo : 0;
                    const std::uint64_t cut = std::min(slack, shave);
                    s -= cut;
                    shave -= cut;
                }
                if (shave > 0)
                    throw ConfigError("sampling",
                                      "cannot tile n=" + std::to_string(n) + " with sizes in [" +
                                          std::to_string(spec.lo) + "," + std::to_string(spec.hi) + "]");
            }
        }
    }
    return CommunitySizes::from_sizes(std::move(sizes), n);
}

namespace detail {
inline std::vector<std::uint64_t> read_integer_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("sampling", "cannot open " + path);
    std::vector<std::uint64_t> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(line, &pos);
            if (pos != line.size() || v <= 0) throw std::invalid_argument("not a positive integer");
            values.push_back(static_cast<std::uint64_t>(v));
        } catch (const std::exception&) {
            throw ParseError("sampling", path + ": line " + std::to_string(lineno) +
                                             ": expected a positive integer, got \"" + line + "\"");
        }
    }
    if (values.empty()) throw ParseError("sampling", path + ": file is empty");
    return values;
}
} // namespace detail

/// One positive base-10 integer per line. Odd degree sums are repaired with a
/// logged warning, same as freshly sampled sequences.
inline DegreeSequence read_degree_file(const std::string& path) {
    return DegreeSequence::from_samples(detail::read_integer_lines(path));
}

inline CommunitySizes read_community_size_file(const std::string& path, std::uint64_t n) {
    return CommunitySizes::from_sizes(detail::read_integer_lines(path), n);
}

} // namespace abcde
