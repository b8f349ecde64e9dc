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

#include <concepts>
#include <memory>
#include <sstream>
#include <string>
#include <typeinfo>
#include <utility>

#include "ebdevs/time.hpp"

namespace ebdevs {

namespace detail {

template <typename T>
concept HasFormatMember = requires(const T& t) {
    { t.format() } -> std::convertible_to<std::string>;
};

template <typename T>
std::string format_payload(const T& v) {
    if constexpr (HasFormatMember<T>) {
        return v.format();
    } else if constexpr (std::is_same_v<T, std::string>) {
        return v;
    } else if constexpr (std::is_same_v<T, bool>) {
        return v ? "true" : "false";
    } else {
        std::ostringstream os;
        os << v;
        return os.str();
    }
}

} // namespace detail

/// Type-erased model value. States, inputs, outputs, y_up payloads and macro
/// views are opaque to the kernel; the wrapped type supplies equality and a
/// textual form for trace recording. A default-constructed Value is the null
/// event.
class Value {
    struct Concept {
        virtual ~Concept() = default;
        virtual bool equals(const Concept& other) const = 0;
        virtual std::string format() const = 0;
        virtual const std::type_info& type() const = 0;
    };

    template <typename T>
    struct Holder final : Concept {
        explicit Holder(T v) : v(std::move(v)) {}
        bool equals(const Concept& other) const override {
            if (type() != other.type()) return false;
            return v == static_cast<const Holder<T>&>(other).v;
        }
        std::string format() const override { return detail::format_payload(v); }
        const std::type_info& type() const override { return typeid(T); }
        T v;
    };

public:
    Value() = default;

    template <typename T>
    static Value of(T v) {
        Value out;
        out.self_ = std::make_shared<const Holder<std::decay_t<T>>>(std::move(v));
        return out;
    }

    bool is_null() const { return self_ == nullptr; }
    explicit operator bool() const { return !is_null(); }

    template <typename T>
    const T* get_if() const {
        if (!self_ || self_->type() != typeid(T)) return nullptr;
        return &static_cast<const Holder<T>&>(*self_).v;
    }

    template <typename T>
    const T& as() const {
        const T* p = get_if<T>();
        if (!p) throw internal_error(std::string("Value: expected payload of type ") + typeid(T).name());
        return *p;
    }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.is_null() || b.is_null()) return a.is_null() == b.is_null();
        return a.self_->equals(*b.self_);
    }

    /// Textual form per the wrapped type's formatter; empty string when null.
    std::string str() const { return self_ ? self_->format() : std::string{}; }

private:
    std::shared_ptr<const Concept> self_;
};

} // namespace ebdevs
