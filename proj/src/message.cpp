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
#include "ebdevs/message.hpp"

namespace ebdevs {

std::string to_string(PortRef::Kind kind) {
    switch (kind) {
    case PortRef::Kind::regular_in: return "in";
    case PortRef::Kind::regular_out: return "out";
    case PortRef::Kind::broadcast_in: return "bIPort";
    case PortRef::Kind::broadcast_out: return "bOPort";
    case PortRef::Kind::up: return "up";
    case PortRef::Kind::macro: return "macro";
    }
    return "?";
}

std::string to_string(KernelMessage::Tag tag) {
    switch (tag) {
    case KernelMessage::Tag::init: return "i";
    case KernelMessage::Tag::star: return "*";
    case KernelMessage::Tag::x: return "x";
    case KernelMessage::Tag::y: return "y";
    case KernelMessage::Tag::y_up: return "y-up";
    case KernelMessage::Tag::done: return "done";
    }
    return "?";
}

} // namespace ebdevs
