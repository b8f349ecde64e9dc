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
#include "ebdevs/id.hpp"

#include <algorithm>
#include <vector>

namespace ebdevs {

ModelId select_lowest_id(std::span<const ModelId> candidates) {
    if (candidates.empty()) throw usage_error("select: empty candidate set");
    return *std::min_element(candidates.begin(), candidates.end());
}

ModelId compare_then_tiebreak(std::span<const std::pair<ModelId, SimTime>> entries,
                              const SelectFn& select) {
    if (entries.empty()) throw usage_error("compare_then_tiebreak: empty entry list");

    SimTime best = entries[0].second;
    for (const auto& [id, t] : entries.subspan(1))
        if (t < best) best = t;

    std::vector<ModelId> imminent;
    for (const auto& [id, t] : entries)
        if (t == best) imminent.push_back(id);

    if (imminent.size() == 1) return imminent[0];

    const ModelId chosen = select ? select(imminent) : select_lowest_id(imminent);
    if (std::find(imminent.begin(), imminent.end(), chosen) == imminent.end())
        throw internal_error("Select returned a model outside the imminent set");
    return chosen;
}

} // namespace ebdevs
