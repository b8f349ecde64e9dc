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
#pragma once

#include <cstdint>
#include <vector>

#include "ebdevs/rng.hpp"

namespace ebdevs {

/// Undirected simple graph given by per-node sorted neighbor lists.
struct DegreeGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::uint32_t>> adjacency;

    bool has_edge(std::uint32_t a, std::uint32_t b) const;
    bool is_simple_symmetric() const;
};

/// n integer degrees from Gamma(shape, scale), rounded to nearest and clamped
/// to >= 1; the sum is made even by incrementing node 0.
std::vector<std::uint32_t> gamma_degrees(RngStream& rng, std::size_t n, double shape, double scale);

/// Stub-matching construction; self-loops and parallel edges are discarded
/// after matching, so realized degrees may undershoot the request.
DegreeGraph configuration_model(RngStream& rng, std::span<const std::uint32_t> degrees);

/// Disjoint-set forest with union by rank and path halving.
class UnionFind {
public:
    explicit UnionFind(std::size_t n);

    std::uint32_t find(std::uint32_t x);
    void merge(std::uint32_t a, std::uint32_t b);
    std::size_t component_count() const { return components_; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
    std::size_t components_;
};

} // namespace ebdevs
