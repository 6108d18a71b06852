#ifndef KOALG_CHOICE_HPP
#define KOALG_CHOICE_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "koalg/errors.hpp"
#include "koalg/value.hpp"

namespace koalg {

// The three choice functors: a step of a process picks its continuation
// either uniquely (Det), from a finite set (NDet), or from a finite
// probability distribution (Prob).
enum class ChoiceKind : std::uint8_t { Det, NDet, Prob };

inline const char* choice_kind_name(ChoiceKind k) {
    switch (k) {
        case ChoiceKind::Det: return "det";
        case ChoiceKind::NDet: return "ndet";
        case ChoiceKind::Prob: return "prob";
    }
    return "?";
}

// Distributions must sum to one within this tolerance.
inline constexpr double kProbSumTolerance = 1e-9;
// Per-entry tolerance for distribution equality checks.
inline constexpr double kProbEntryTolerance = 1e-12;

// Combination table for two choice kinds: Det is the identity, NDet and
// Prob combine with themselves, and mixing NDet with Prob is undefined.
inline std::optional<ChoiceKind> combined_kind(ChoiceKind a, ChoiceKind b) {
    if (a == ChoiceKind::Det) return b;
    if (b == ChoiceKind::Det) return a;
    if (a == b) return a;
    return std::nullopt;
}

inline ChoiceKind combine_kinds(ChoiceKind a, ChoiceKind b) {
    auto c = combined_kind(a, b);
    if (!c)
        throw MixedChoiceError(std::string("cannot combine ") + choice_kind_name(a) +
                               " with " + choice_kind_name(b) + " choices");
    return *c;
}

// A choice over elements of type T. T must be regular and totally ordered;
// the support is kept sorted and duplicate-free, and probabilistic weights
// are stored parallel to the support with zero entries dropped.
template <typename T>
class BasicChoice {
public:
    static BasicChoice det(T v) {
        BasicChoice c(ChoiceKind::Det);
        c.support_.push_back(std::move(v));
        return c;
    }

    static BasicChoice ndet(std::vector<T> items) {
        if (items.empty()) throw ValidationError("non-deterministic choice must be non-empty");
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        BasicChoice c(ChoiceKind::NDet);
        c.support_ = std::move(items);
        return c;
    }

    static BasicChoice prob(std::vector<std::pair<T, double>> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        BasicChoice c(ChoiceKind::Prob);
        double sum = 0.0;
        for (auto& [v, p] : entries) {
            if (std::isnan(p) || p < 0.0)
                throw ValidationError("probabilities must be non-negative");
            sum += p;
            if (p == 0.0) continue;
            if (!c.support_.empty() && c.support_.back() == v) {
                c.weights_.back() += p;
            } else {
                c.support_.push_back(std::move(v));
                c.weights_.push_back(p);
            }
        }
        if (c.support_.empty()) throw ValidationError("distribution must be non-empty");
        if (std::abs(sum - 1.0) > kProbSumTolerance)
            throw ValidationError("probabilities must sum to 1");
        return c;
    }

    // Unit injection for a kind: Det(v), NDet{v}, or a point mass. This is
    // the left (plain value) case of the distributive law.
    static BasicChoice point(ChoiceKind kind, T v) {
        switch (kind) {
            case ChoiceKind::Det: return det(std::move(v));
            case ChoiceKind::NDet: return ndet({std::move(v)});
            case ChoiceKind::Prob: return prob({{std::move(v), 1.0}});
        }
        throw ValidationError("unreachable choice kind");
    }

    ChoiceKind kind() const { return kind_; }
    const std::vector<T>& support() const { return support_; }

    // Prob only: weights parallel to support().
    const std::vector<double>& weights() const {
        if (kind_ != ChoiceKind::Prob)
            throw ValidationError("only probabilistic choices carry weights");
        return weights_;
    }

    // Weight of an element: 1 for the Det value, 1 for NDet members (a
    // flag, not a probability), and the stored probability for Prob.
    double weight_of(const T& v) const {
        auto it = std::lower_bound(support_.begin(), support_.end(), v);
        if (it == support_.end() || !(*it == v)) return 0.0;
        if (kind_ != ChoiceKind::Prob) return 1.0;
        return weights_[static_cast<std::size_t>(it - support_.begin())];
    }

    bool contains(const T& v) const {
        return std::binary_search(support_.begin(), support_.end(), v);
    }

    const T& det_value() const {
        if (kind_ != ChoiceKind::Det)
            throw ValidationError("choice is not deterministic");
        return support_.front();
    }

    std::size_t size() const { return support_.size(); }

    // Functorial action: apply f to every element of the support. NDet
    // images are de-duplicated; Prob pushes the distribution forward,
    // summing the weights of elements that f identifies.
    template <typename F>
    auto map(F&& f) const {
        using U = std::decay_t<std::invoke_result_t<F, const T&>>;
        switch (kind_) {
            case ChoiceKind::Det:
                return BasicChoice<U>::det(f(support_.front()));
            case ChoiceKind::NDet: {
                std::vector<U> out;
                out.reserve(support_.size());
                for (const T& v : support_) out.push_back(f(v));
                return BasicChoice<U>::ndet(std::move(out));
            }
            case ChoiceKind::Prob: {
                std::vector<std::pair<U, double>> out;
                out.reserve(support_.size());
                for (std::size_t i = 0; i < support_.size(); ++i)
                    out.emplace_back(f(support_[i]), weights_[i]);
                return BasicChoice<U>::prob(std::move(out));
            }
        }
        throw ValidationError("unreachable choice kind");
    }

    friend int compare(const BasicChoice& a, const BasicChoice& b) {
        if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
        std::size_t n = std::min(a.support_.size(), b.support_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a.support_[i] < b.support_[i]) return -1;
            if (b.support_[i] < a.support_[i]) return 1;
            if (a.kind_ == ChoiceKind::Prob && a.weights_[i] != b.weights_[i])
                return a.weights_[i] < b.weights_[i] ? -1 : 1;
        }
        if (a.support_.size() != b.support_.size())
            return a.support_.size() < b.support_.size() ? -1 : 1;
        return 0;
    }

    friend bool operator==(const BasicChoice& a, const BasicChoice& b) { return compare(a, b) == 0; }
    friend bool operator!=(const BasicChoice& a, const BasicChoice& b) { return compare(a, b) != 0; }
    friend bool operator<(const BasicChoice& a, const BasicChoice& b) { return compare(a, b) < 0; }

private:
    explicit BasicChoice(ChoiceKind k) : kind_(k) {}

    template <typename U>
    friend class BasicChoice;

    ChoiceKind kind_;
    std::vector<T> support_;
    std::vector<double> weights_;
};

using Choice = BasicChoice<Value>;

// Distribution equality up to a per-entry weight tolerance. Supports must
// match structurally.
template <typename T>
bool approx_equal(const BasicChoice<T>& a, const BasicChoice<T>& b,
                  double tol = kProbEntryTolerance) {
    if (a.kind() != b.kind()) return false;
    if (a.support() != b.support()) return false;
    if (a.kind() != ChoiceKind::Prob) return true;
    for (std::size_t i = 0; i < a.support().size(); ++i)
        if (std::abs(a.weights()[i] - b.weights()[i]) > tol) return false;
    return true;
}

// Multiplication (flattening): collapses a choice of choices into a single
// choice of the combined kind. Det on either layer acts as an injection;
// NDet over NDet takes the union of the inner sets; Prob over Prob weighs
// every inner entry by its outer probability.
template <typename T>
BasicChoice<T> flatten(const BasicChoice<BasicChoice<T>>& outer) {
    const auto& inners = outer.support();
    ChoiceKind inner_kind = inners.front().kind();
    for (const auto& c : inners)
        if (c.kind() != inner_kind)
            throw MixedChoiceError("flatten: inner choices do not share one kind");
    ChoiceKind result_kind = combine_kinds(outer.kind(), inner_kind);

    if (outer.kind() == ChoiceKind::Det) return inners.front();

    if (result_kind == ChoiceKind::NDet) {
        std::vector<T> out;
        for (const auto& c : inners)
            for (const T& v : c.support()) out.push_back(v);
        return BasicChoice<T>::ndet(std::move(out));
    }

    // result_kind == Prob, outer is Prob, inner is Det or Prob.
    std::vector<std::pair<T, double>> out;
    for (std::size_t i = 0; i < inners.size(); ++i) {
        double po = outer.weights()[i];
        const auto& c = inners[i];
        if (c.kind() == ChoiceKind::Det) {
            out.emplace_back(c.det_value(), po);
        } else {
            for (std::size_t j = 0; j < c.support().size(); ++j)
                out.emplace_back(c.support()[j], po * c.weights()[j]);
        }
    }
    return BasicChoice<T>::prob(std::move(out));
}

// Distributive law, plain-value case: a ↦ {a} (or the point mass).
inline Choice distribute_left(ChoiceKind kind, const Value& a) {
    return Choice::point(kind, a);
}

// Distributive law, pair case: (b, e) pushes b into every element of the
// inner choice, preserving weights.
inline Choice distribute_pair(const Value& b, const Choice& inner) {
    return inner.map([&](const Value& x) { return Value::pair(b, x); });
}

// Full distributive law over the sum A + B x C(X); the input is either a
// plain value or a pair of a value and a choice.
using DistributiveInput = std::variant<Value, std::pair<Value, Choice>>;

inline Choice distribute(ChoiceKind kind, const DistributiveInput& x) {
    if (std::holds_alternative<Value>(x))
        return distribute_left(kind, std::get<Value>(x));
    const auto& [b, inner] = std::get<std::pair<Value, Choice>>(x);
    if (inner.kind() != kind)
        throw MixedChoiceError("distribute: inner choice kind differs from requested kind");
    return distribute_pair(b, inner);
}

// Pairing: combines two independent choices into a choice over pairs of
// the combined kind. Det pairs directly, NDet takes the Cartesian product,
// Prob forms the product distribution.
inline Choice pair_choices(const Choice& c1, const Choice& c2) {
    ChoiceKind ck = combine_kinds(c1.kind(), c2.kind());
    auto weight = [](const Choice& c, std::size_t i) {
        return c.kind() == ChoiceKind::Prob ? c.weights()[i] : 1.0;
    };
    if (ck == ChoiceKind::Prob) {
        std::vector<std::pair<Value, double>> out;
        out.reserve(c1.size() * c2.size());
        for (std::size_t i = 0; i < c1.size(); ++i)
            for (std::size_t j = 0; j < c2.size(); ++j)
                out.emplace_back(Value::pair(c1.support()[i], c2.support()[j]),
                                 weight(c1, i) * weight(c2, j));
        return Choice::prob(std::move(out));
    }
    std::vector<Value> out;
    out.reserve(c1.size() * c2.size());
    for (const Value& a : c1.support())
        for (const Value& b : c2.support()) out.push_back(Value::pair(a, b));
    if (ck == ChoiceKind::Det) return Choice::det(std::move(out.front()));
    return Choice::ndet(std::move(out));
}

}  // namespace koalg

#endif  // KOALG_CHOICE_HPP
