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
#include "ebdevs/trace.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace ebdevs {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_time(SimTime t) {
    return format_double(t.value());
}

std::string to_string(TraceRecord::Kind kind) {
    switch (kind) {
    case TraceRecord::Kind::init: return "init";
    case TraceRecord::Kind::output: return "output";
    case TraceRecord::Kind::delta_int: return "delta_int";
    case TraceRecord::Kind::delta_ext: return "delta_ext";
    case TraceRecord::Kind::delta_g: return "delta_g";
    case TraceRecord::Kind::cycle: return "cycle";
    }
    return "?";
}

void Trace::append(TraceRecord rec) {
    if (!records_.empty() && rec.time < records_.back().time)
        throw internal_error("Trace: record times must be nondecreasing");
    records_.push_back(std::move(rec));
}

std::size_t Trace::event_count() const {
    std::size_t n = 0;
    for (const TraceRecord& r : records_)
        if (r.kind != TraceRecord::Kind::init && r.kind != TraceRecord::Kind::cycle) ++n;
    return n;
}

void Trace::write_csv(std::ostream& os) const {
    os << "time,model_path,kind,state,output,y_up,s_G\n";
    for (const TraceRecord& r : records_) {
        os << format_time(r.time) << ',' << r.path << ',' << to_string(r.kind) << ','
           << r.state.str() << ',' << r.output.str() << ',' << r.y_up.str() << ','
           << r.s_g.str() << '\n';
    }
}

} // namespace ebdevs
