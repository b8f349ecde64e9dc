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

#include <string>

#include "ebdevs/time.hpp"
#include "ebdevs/value.hpp"

namespace ebdevs {

/// Port designator. Broadcast kinds exist only in models produced by
/// lower_to_classic; up/macro name the micro-macro channels.
struct PortRef {
    enum class Kind { regular_in, regular_out, broadcast_in, broadcast_out, up, macro };

    Kind kind = Kind::regular_in;
    std::string name;

    friend bool operator==(const PortRef&, const PortRef&) = default;
};

std::string to_string(PortRef::Kind kind);

/// Protocol vocabulary of the processor tree. The in-process kernel realizes
/// these synchronously (a handler's return is the done-message), but traces,
/// tests and any future transport speak this record.
struct KernelMessage {
    enum class Tag { init, star, x, y, y_up, done };

    Tag tag = Tag::init;
    SimTime time;
    Value payload;      // event value; null for init/star/done
    Value macro_view;   // carried by star and x messages only (possibly null)

    static KernelMessage make_init(SimTime t) { return {Tag::init, t, {}, {}}; }
    static KernelMessage make_star(SimTime t, Value macro) { return {Tag::star, t, {}, std::move(macro)}; }
    static KernelMessage make_x(SimTime t, Value x, Value macro) {
        return {Tag::x, t, std::move(x), std::move(macro)};
    }
    static KernelMessage make_y(SimTime t, Value y) { return {Tag::y, t, std::move(y), {}}; }
    static KernelMessage make_y_up(SimTime t, Value y_up) { return {Tag::y_up, t, std::move(y_up), {}}; }
    static KernelMessage make_done(SimTime t) { return {Tag::done, t, {}, {}}; }

    /// Only star and x carry a macro view slot.
    bool carries_macro_view() const { return tag == Tag::star || tag == Tag::x; }
};

std::string to_string(KernelMessage::Tag tag);

} // namespace ebdevs
