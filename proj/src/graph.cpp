/*
 * Copyright 2026 The ebdevs authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ebdevs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace ebdevs {

bool DegreeGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
    const auto& nb = adjacency[a];
    return std::binary_search(nb.begin(), nb.end(), b);
}

bool DegreeGraph::is_simple_symmetric() const {
    for (std::uint32_t a = 0; a < n; ++a) {
        const auto& nb = adjacency[a];
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) return false;
        for (std::uint32_t b : nb) {
            if (b == a || b >= n) return false;
            if (!has_edge(b, a)) return false;
        }
    }
    return true;
}

std::vector<std::uint32_t> gamma_degrees(RngStream& rng, std::size_t n, double shape, double scale) {
    if (n < 1) throw usage_error("gamma_degrees: n must be >= 1");
    std::vector<std::uint32_t> degrees(n);
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sample = rng.gamma(shape, scale);
        const auto d = static_cast<std::uint32_t>(std::max(1.0, std::round(sample)));
        degrees[i] = d;
        sum += d;
    }
    if (sum % 2 != 0) degrees[0] += 1;
    return degrees;
}

DegreeGraph configuration_model(RngStream& rng, std::span<const std::uint32_t> degrees) {
    if (degrees.size() < 2) throw usage_error("configuration_model: need at least 2 nodes");
    std::uint64_t total = std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
    if (total % 2 != 0) throw usage_error("configuration_model: stub sum must be even");

    std::vector<std::uint32_t> stubs;
    stubs.reserve(total);
    for (std::uint32_t node = 0; node < degrees.size(); ++node)
        stubs.insert(stubs.end(), degrees[node], node);

    // Fisher-Yates, then pair consecutive stubs.
    for (std::size_t i = stubs.size(); i > 1; --i)
        std::swap(stubs[i - 1], stubs[rng.uniform_index(i)]);

    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        std::uint32_t a = stubs[i], b = stubs[i + 1];
        if (a == b) continue; // self-loop dropped
        if (a > b) std::swap(a, b);
        edges.emplace(a, b); // parallel edges collapse in the set
    }

    DegreeGraph g;
    g.n = degrees.size();
    g.adjacency.assign(g.n, {});
    for (const auto& [a, b] : edges) {
        g.adjacency[a].push_back(b);
        g.adjacency[b].push_back(a);
    }
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    return g;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
}

std::uint32_t UnionFind::find(std::uint32_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

void UnionFind::merge(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
}

} // namespace ebdevs
