#ifndef KOALG_VALUE_HPP
#define KOALG_VALUE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "koalg/errors.hpp"

namespace koalg {

// Universal dynamic value: the single element type for all state, input,
// output, result, action and observation spaces. Keeping every space over
// one value type is what lets the process combinators form sums and
// products of spaces at runtime.
//
// Values are immutable after construction and cheap to copy (shared
// representation). Structural equality is the canonical identity
// everywhere: order-sensitive for tuples and sequences, order-insensitive
// for sets and maps (both are canonicalized on construction).
class Value {
public:
    enum class Kind : std::uint8_t {
        Atom,
        Int,
        Real,
        Bool,
        Tuple,
        Tagged,
        Seq,
        Set,
        Map,
    };

    using List = std::vector<Value>;
    using MapEntries = std::vector<std::pair<Value, Value>>;

    Value() : Value(unit()) {}

    static Value atom(std::string name) {
        Rep rep(Kind::Atom);
        rep.text = std::move(name);
        return Value(std::move(rep));
    }

    static Value integer(std::int64_t v) {
        Rep rep(Kind::Int);
        rep.number_int = v;
        return Value(std::move(rep));
    }

    static Value real(double v) {
        if (std::isnan(v) || std::isinf(v))
            throw ValidationError("real value must be finite");
        Rep rep(Kind::Real);
        rep.number_real = v;
        return Value(std::move(rep));
    }

    static Value boolean(bool v) {
        Rep rep(Kind::Bool);
        rep.flag = v;
        return Value(std::move(rep));
    }

    static Value tuple(List items) {
        Rep rep(Kind::Tuple);
        rep.items = std::move(items);
        return Value(std::move(rep));
    }

    static Value pair(Value a, Value b) { return tuple({std::move(a), std::move(b)}); }

    // The unit value is the empty tuple; it stands in for one-element
    // spaces, e.g. the input space of a closed process.
    static Value unit() { return tuple({}); }

    static Value tagged(std::string tag, Value payload) {
        Rep rep(Kind::Tagged);
        rep.text = std::move(tag);
        rep.items.push_back(std::move(payload));
        return Value(std::move(rep));
    }

    static Value seq(List items) {
        Rep rep(Kind::Seq);
        rep.items = std::move(items);
        return Value(std::move(rep));
    }

    // Canonicalized: sorted, duplicates removed.
    static Value set(List items) {
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        Rep rep(Kind::Set);
        rep.items = std::move(items);
        return Value(std::move(rep));
    }

    // Canonicalized: sorted by key. Duplicate keys are rejected.
    static Value map(MapEntries entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i - 1].first == entries[i].first)
                throw ValidationError("map keys must be distinct");
        }
        Rep rep(Kind::Map);
        rep.entries = std::move(entries);
        return Value(std::move(rep));
    }

    Kind kind() const { return rep_->kind; }

    bool is_atom() const { return kind() == Kind::Atom; }
    bool is_int() const { return kind() == Kind::Int; }
    bool is_real() const { return kind() == Kind::Real; }
    bool is_bool() const { return kind() == Kind::Bool; }
    bool is_tuple() const { return kind() == Kind::Tuple; }
    bool is_tagged() const { return kind() == Kind::Tagged; }
    bool is_seq() const { return kind() == Kind::Seq; }
    bool is_set() const { return kind() == Kind::Set; }
    bool is_map() const { return kind() == Kind::Map; }
    bool is_unit() const { return is_tuple() && rep_->items.empty(); }

    const std::string& atom_name() const {
        expect(Kind::Atom, "atom");
        return rep_->text;
    }

    std::int64_t int_value() const {
        expect(Kind::Int, "integer");
        return rep_->number_int;
    }

    double real_value() const {
        expect(Kind::Real, "real");
        return rep_->number_real;
    }

    // Numeric convenience: integers widen to double.
    double as_number() const {
        if (is_int()) return static_cast<double>(rep_->number_int);
        expect(Kind::Real, "number");
        return rep_->number_real;
    }

    bool is_number() const { return is_int() || is_real(); }

    bool bool_value() const {
        expect(Kind::Bool, "boolean");
        return rep_->flag;
    }

    const List& items() const {
        if (!is_tuple() && !is_seq() && !is_set())
            throw ValidationError("value is not a tuple, sequence or set: " + str());
        return rep_->items;
    }

    const MapEntries& entries() const {
        expect(Kind::Map, "map");
        return rep_->entries;
    }

    const std::string& tag() const {
        expect(Kind::Tagged, "tagged value");
        return rep_->text;
    }

    const Value& payload() const {
        expect(Kind::Tagged, "tagged value");
        return rep_->items.front();
    }

    bool has_tag(const std::string& t) const { return is_tagged() && rep_->text == t; }

    const Value& item(std::size_t i) const {
        const List& xs = items();
        if (i >= xs.size()) throw ValidationError("tuple index out of range in " + str());
        return xs[i];
    }

    std::size_t size() const {
        if (is_map()) return rep_->entries.size();
        return items().size();
    }

    // Total order; used for canonical sets/maps, choice supports and
    // deterministic serialization. Reals compare by numeric value, so the
    // order is total because NaN is rejected at construction.
    static int compare(const Value& a, const Value& b) {
        if (a.rep_ == b.rep_) return 0;
        if (a.kind() != b.kind())
            return a.kind() < b.kind() ? -1 : 1;
        switch (a.kind()) {
            case Kind::Atom:
                return a.rep_->text.compare(b.rep_->text) < 0   ? -1
                       : a.rep_->text.compare(b.rep_->text) > 0 ? 1
                                                                : 0;
            case Kind::Int:
                if (a.rep_->number_int != b.rep_->number_int)
                    return a.rep_->number_int < b.rep_->number_int ? -1 : 1;
                return 0;
            case Kind::Real:
                if (a.rep_->number_real != b.rep_->number_real)
                    return a.rep_->number_real < b.rep_->number_real ? -1 : 1;
                return 0;
            case Kind::Bool:
                if (a.rep_->flag != b.rep_->flag) return a.rep_->flag ? 1 : -1;
                return 0;
            case Kind::Tagged: {
                int c = a.rep_->text.compare(b.rep_->text);
                if (c != 0) return c < 0 ? -1 : 1;
                return compare(a.rep_->items.front(), b.rep_->items.front());
            }
            case Kind::Tuple:
            case Kind::Seq:
            case Kind::Set:
                return compare_lists(a.rep_->items, b.rep_->items);
            case Kind::Map: {
                const auto& ea = a.rep_->entries;
                const auto& eb = b.rep_->entries;
                std::size_t n = std::min(ea.size(), eb.size());
                for (std::size_t i = 0; i < n; ++i) {
                    int c = compare(ea[i].first, eb[i].first);
                    if (c != 0) return c;
                    c = compare(ea[i].second, eb[i].second);
                    if (c != 0) return c;
                }
                if (ea.size() != eb.size()) return ea.size() < eb.size() ? -1 : 1;
                return 0;
            }
        }
        return 0;
    }

    friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
    friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Value& a, const Value& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Value& a, const Value& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Value& a, const Value& b) { return compare(a, b) >= 0; }

    // Compact human-readable rendering, used in diagnostics and DOT labels.
    std::string str() const {
        std::ostringstream os;
        print(os);
        return os.str();
    }

private:
    struct Rep {
        explicit Rep(Kind k) : kind(k) {}
        Kind kind;
        std::string text;  // atom name or tag
        std::int64_t number_int = 0;
        double number_real = 0.0;
        bool flag = false;
        List items;  // tuple/seq/set elements; tagged payload
        MapEntries entries;
    };

    explicit Value(Rep rep) : rep_(std::make_shared<const Rep>(std::move(rep))) {}

    void expect(Kind k, const char* what) const {
        if (kind() != k) throw ValidationError(std::string("value is not a ") + what + ": " + str());
    }

    static int compare_lists(const List& a, const List& b) {
        std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            int c = compare(a[i], b[i]);
            if (c != 0) return c;
        }
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        return 0;
    }

    void print(std::ostringstream& os) const {
        switch (kind()) {
            case Kind::Atom:
                os << rep_->text;
                break;
            case Kind::Int:
                os << rep_->number_int;
                break;
            case Kind::Real: {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%g", rep_->number_real);
                os << buf;
                break;
            }
            case Kind::Bool:
                os << (rep_->flag ? "true" : "false");
                break;
            case Kind::Tagged:
                os << rep_->text << ':';
                rep_->items.front().print(os);
                break;
            case Kind::Tuple: {
                os << '(';
                print_joined(os, rep_->items);
                os << ')';
                break;
            }
            case Kind::Seq: {
                os << '[';
                print_joined(os, rep_->items);
                os << ']';
                break;
            }
            case Kind::Set: {
                os << '{';
                print_joined(os, rep_->items);
                os << '}';
                break;
            }
            case Kind::Map: {
                os << '{';
                bool first = true;
                for (const auto& [k, v] : rep_->entries) {
                    if (!first) os << ", ";
                    first = false;
                    k.print(os);
                    os << ": ";
                    v.print(os);
                }
                os << '}';
                break;
            }
        }
    }

    static void print_joined(std::ostringstream& os, const List& xs) {
        bool first = true;
        for (const Value& x : xs) {
            if (!first) os << ", ";
            first = false;
            x.print(os);
        }
    }

    std::shared_ptr<const Rep> rep_;
};

}  // namespace koalg

#endif  // KOALG_VALUE_HPP
