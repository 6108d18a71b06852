#ifndef KOALG_SPACE_HPP
#define KOALG_SPACE_HPP

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "koalg/errors.hpp"
#include "koalg/value.hpp"

namespace koalg {

// Enumerations of composite spaces are materialized only up to this many
// elements; beyond it the composite keeps a membership predicate only.
inline constexpr std::size_t kEnumerationCap = 65536;

// Describes one of the spaces a process is wired over (states, inputs,
// outputs, results, actions, observations). A descriptor optionally
// carries a membership predicate and, for finite spaces, an enumeration.
// Product descriptors remember their factors so operations like feedback
// can split composite inputs.
class SpaceDescriptor {
public:
    using Membership = std::function<bool(const Value&)>;

    SpaceDescriptor() : SpaceDescriptor(anything("any")) {}

    // A space with no membership information: every value is accepted.
    static SpaceDescriptor anything(std::string name) {
        auto d = std::make_shared<Data>();
        d->name = std::move(name);
        return SpaceDescriptor(std::move(d));
    }

    static SpaceDescriptor with_membership(std::string name, Membership member) {
        auto d = std::make_shared<Data>();
        d->name = std::move(name);
        d->membership = std::move(member);
        return SpaceDescriptor(std::move(d));
    }

    static SpaceDescriptor enumerated(std::string name, std::vector<Value> values) {
        auto d = std::make_shared<Data>();
        d->name = std::move(name);
        d->enumeration = std::move(values);
        d->sorted = *d->enumeration;
        std::sort(d->sorted.begin(), d->sorted.end());
        d->sorted.erase(std::unique(d->sorted.begin(), d->sorted.end()), d->sorted.end());
        return SpaceDescriptor(std::move(d));
    }

    static SpaceDescriptor unit_space() {
        return enumerated("unit", {Value::unit()});
    }

    static SpaceDescriptor empty_space(std::string name = "empty") {
        return enumerated(std::move(name), {});
    }

    // Product of spaces; elements are tuples with one slot per factor.
    // The enumeration is the cross product when all factors are
    // enumerated and the total size stays under the cap.
    static SpaceDescriptor product(std::string name, std::vector<SpaceDescriptor> parts) {
        auto d = std::make_shared<Data>();
        d->name = std::move(name);
        d->parts = std::move(parts);
        d->is_product = true;
        bool all_enumerated = true;
        std::size_t count = 1;
        for (const auto& p : d->parts) {
            if (!p.has_enumeration()) {
                all_enumerated = false;
                break;
            }
            count *= p.enumeration().size();
            if (count > kEnumerationCap) {
                all_enumerated = false;
                break;
            }
        }
        if (all_enumerated) {
            std::vector<Value> values = {Value::unit()};
            for (const auto& p : d->parts) {
                std::vector<Value> next;
                next.reserve(values.size() * p.enumeration().size());
                for (const Value& prefix : values) {
                    for (const Value& v : p.enumeration()) {
                        Value::List items = prefix.items();
                        items.push_back(v);
                        next.push_back(Value::tuple(std::move(items)));
                    }
                }
                values = std::move(next);
            }
            d->enumeration = std::move(values);
            d->sorted = *d->enumeration;
            std::sort(d->sorted.begin(), d->sorted.end());
        }
        return SpaceDescriptor(std::move(d));
    }

    // Binary sum with the canonical injection tags "L" and "R".
    static SpaceDescriptor sum(std::string name, SpaceDescriptor left, SpaceDescriptor right) {
        return tagged_union(std::move(name),
                            {{"L", std::move(left)}, {"R", std::move(right)}});
    }

    // General disjoint union; elements are tagged with their summand.
    static SpaceDescriptor tagged_union(std::string name,
                                        std::vector<std::pair<std::string, SpaceDescriptor>> summands) {
        auto d = std::make_shared<Data>();
        d->name = std::move(name);
        d->summands = std::move(summands);
        d->is_union = true;
        bool all_enumerated = true;
        std::size_t count = 0;
        for (const auto& [tag, s] : d->summands) {
            if (!s.has_enumeration()) {
                all_enumerated = false;
                break;
            }
            count += s.enumeration().size();
        }
        if (all_enumerated && count <= kEnumerationCap) {
            std::vector<Value> values;
            values.reserve(count);
            for (const auto& [tag, s] : d->summands)
                for (const Value& v : s.enumeration())
                    values.push_back(Value::tagged(tag, v));
            d->enumeration = std::move(values);
            d->sorted = *d->enumeration;
            std::sort(d->sorted.begin(), d->sorted.end());
        }
        return SpaceDescriptor(std::move(d));
    }

    const std::string& name() const { return data_->name; }

    bool has_enumeration() const { return data_->enumeration.has_value(); }

    const std::vector<Value>& enumeration() const {
        if (!has_enumeration())
            throw InputNotEnumerableError("space '" + name() + "' is not enumerated");
        return *data_->enumeration;
    }

    // Whether contains() can actually reject anything.
    bool has_membership_info() const {
        return data_->enumeration || data_->membership || data_->is_product || data_->is_union;
    }

    bool contains(const Value& v) const {
        if (data_->enumeration)
            return std::binary_search(data_->sorted.begin(), data_->sorted.end(), v);
        if (data_->is_product) {
            if (!v.is_tuple() || v.items().size() != data_->parts.size()) return false;
            for (std::size_t i = 0; i < data_->parts.size(); ++i)
                if (!data_->parts[i].contains(v.items()[i])) return false;
            return true;
        }
        if (data_->is_union) {
            if (!v.is_tagged()) return false;
            for (const auto& [tag, s] : data_->summands)
                if (v.tag() == tag) return s.contains(v.payload());
            return false;
        }
        if (data_->membership) return data_->membership(v);
        return true;
    }

    const std::vector<SpaceDescriptor>* product_parts() const {
        return data_->is_product ? &data_->parts : nullptr;
    }

    const std::vector<std::pair<std::string, SpaceDescriptor>>* union_summands() const {
        return data_->is_union ? &data_->summands : nullptr;
    }

    bool is_empty() const { return has_enumeration() && enumeration().empty(); }

    // Identity test used by combinator preconditions. Descriptors copied
    // from one another share representation and compare equal; otherwise
    // equality falls back to name plus enumeration agreement (membership
    // predicates are not comparable).
    friend bool same_space(const SpaceDescriptor& a, const SpaceDescriptor& b) {
        if (a.data_ == b.data_) return true;
        if (a.name() != b.name()) return false;
        if (a.has_enumeration() != b.has_enumeration()) return false;
        if (a.has_enumeration()) return a.data_->sorted == b.data_->sorted;
        return true;
    }

private:
    struct Data {
        std::string name;
        std::optional<std::vector<Value>> enumeration;
        std::vector<Value> sorted;  // enumeration, sorted for membership
        Membership membership;
        std::vector<SpaceDescriptor> parts;
        std::vector<std::pair<std::string, SpaceDescriptor>> summands;
        bool is_product = false;
        bool is_union = false;
    };

    explicit SpaceDescriptor(std::shared_ptr<Data> d) : data_(std::move(d)) {}

    std::shared_ptr<const Data> data_;
};

}  // namespace koalg

#endif  // KOALG_SPACE_HPP
