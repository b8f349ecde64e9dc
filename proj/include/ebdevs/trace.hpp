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

#include <iosfwd>
#include <string>
#include <vector>

#include "ebdevs/time.hpp"
#include "ebdevs/value.hpp"

namespace ebdevs {

/// Shortest round-trip decimal form; "inf" for passivity.
std::string format_double(double v);

struct TraceRecord {
    enum class Kind { init, output, delta_int, delta_ext, delta_g, cycle };

    SimTime time;
    std::string path;
    Kind kind = Kind::init;
    Value state;  // post-event state of the node (delta records)
    Value output; // lambda value (output records); root output (cycle records)
    Value y_up;   // upward payload produced by the event
    Value s_g;    // global state snapshot (init/delta_g/cycle records)
};

std::string to_string(TraceRecord::Kind kind);

/// Timestamped event log of one run. Record times are nondecreasing.
class Trace {
public:
    void append(TraceRecord rec);

    const std::vector<TraceRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }
    std::size_t size() const { return records_.size(); }

    /// Events excluding init rows and cycle markers.
    std::size_t event_count() const;

    void write_csv(std::ostream& os) const;

private:
    std::vector<TraceRecord> records_;
};

} // namespace ebdevs
