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

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "ebdevs/time.hpp"

namespace ebdevs {

/// Component reference inside one coupled model. Totally ordered so that
/// tie-breaking and bag ordering are deterministic.
class ModelId {
public:
    constexpr ModelId() : v_(0) {}
    constexpr explicit ModelId(std::uint32_t v) : v_(v) {}

    constexpr std::uint32_t value() const { return v_; }

    friend constexpr auto operator<=>(ModelId, ModelId) = default;

    std::string str() const { return std::to_string(v_); }

private:
    std::uint32_t v_;
};

/// Tie-breaking rule over component references; must return a member of its input.
using SelectFn = std::function<ModelId(std::span<const ModelId>)>;

/// Default Select: ascending ModelId.
ModelId select_lowest_id(std::span<const ModelId> candidates);

/// Returns the id with minimal time; ties resolved by `select`.
ModelId compare_then_tiebreak(std::span<const std::pair<ModelId, SimTime>> entries,
                              const SelectFn& select);

} // namespace ebdevs

template <>
struct std::hash<ebdevs::ModelId> {
    std::size_t operator()(const ebdevs::ModelId& id) const noexcept {
        return std::hash<std::uint32_t>{}(id.value());
    }
};
