#ifndef KOALG_SERIALIZE_HPP
#define KOALG_SERIALIZE_HPP

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "koalg/catalog.hpp"
#include "koalg/equilibrium.hpp"
#include "koalg/game.hpp"
#include "koalg/outcome.hpp"
#include "koalg/tree.hpp"

namespace koalg {

// All exports are byte-stable for fixed inputs: object keys are written in
// sorted order and floating point numbers with 17 significant digits so
// they round-trip exactly.

inline std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
    return out;
}

// 17 significant digits, with a decimal point or exponent forced so reals
// stay distinguishable from integers.
inline std::string json_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s = buf;
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

inline std::string json_real_brief(double v, int significant = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    return buf;
}

inline std::string value_to_json(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Atom:
            return json_escape(v.atom_name());
        case Value::Kind::Int:
            return std::to_string(v.int_value());
        case Value::Kind::Real:
            return json_real(v.real_value());
        case Value::Kind::Bool:
            return v.bool_value() ? "true" : "false";
        case Value::Kind::Tuple: {
            std::string out = "[";
            for (std::size_t i = 0; i < v.items().size(); ++i) {
                if (i) out += ",";
                out += value_to_json(v.items()[i]);
            }
            return out + "]";
        }
        case Value::Kind::Tagged:
            return "{\"tag\":" + json_escape(v.tag()) + ",\"value\":" + value_to_json(v.payload()) + "}";
        case Value::Kind::Seq: {
            std::string out = "{\"seq\":[";
            for (std::size_t i = 0; i < v.items().size(); ++i) {
                if (i) out += ",";
                out += value_to_json(v.items()[i]);
            }
            return out + "]}";
        }
        case Value::Kind::Set: {
            std::string out = "{\"set\":[";
            for (std::size_t i = 0; i < v.items().size(); ++i) {
                if (i) out += ",";
                out += value_to_json(v.items()[i]);
            }
            return out + "]}";
        }
        case Value::Kind::Map: {
            std::string out = "{\"map\":[";
            bool first = true;
            for (const auto& [k, val] : v.entries()) {
                if (!first) out += ",";
                first = false;
                out += "[" + value_to_json(k) + "," + value_to_json(val) + "]";
            }
            return out + "]}";
        }
    }
    return "null";
}

// --------------------------------------------------------------------------
// Game trees

namespace detail {

inline const char* label_class(TreeNode::Label l) {
    switch (l) {
        case TreeNode::Label::Root: return "root";
        case TreeNode::Label::Result: return "A";
        case TreeNode::Label::Output: return "B";
        case TreeNode::Label::Truncated: return "truncated";
    }
    return "?";
}

inline std::string node_to_json(const TreeNodePtr& n) {
    std::string out = "{\"edges\":[";
    for (std::size_t i = 0; i < n->edges.size(); ++i) {
        const TreeEdge& e = n->edges[i];
        if (i) out += ",";
        out += "{\"input\":";
        out += e.input ? value_to_json(*e.input) : "null";
        out += ",\"node\":" + node_to_json(e.target);
        if (e.prob) out += ",\"p\":" + json_real(*e.prob);
        out += "}";
    }
    out += "],\"label\":{\"class\":\"";
    out += label_class(n->label);
    out += "\"";
    if (n->value) out += ",\"value\":" + value_to_json(*n->value);
    out += "}}";
    return out;
}

}  // namespace detail

inline std::string tree_to_json(const GameTree& t) {
    return "{\"depth\":" + std::to_string(t.depth_bound) + ",\"kind\":\"" +
           choice_kind_name(t.kind) + "\",\"root\":" + detail::node_to_json(t.root) + "}";
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

inline std::string tree_to_dot(const GameTree& t) {
    std::string out = "digraph gametree {\n";
    std::size_t counter = 0;
    struct Emit {
        std::string& out;
        std::size_t& counter;
        std::size_t visit(const TreeNodePtr& n) {
            std::size_t id = counter++;
            std::string label;
            switch (n->label) {
                case TreeNode::Label::Root: label = "root"; break;
                case TreeNode::Label::Result: label = "A: " + n->value->str(); break;
                case TreeNode::Label::Output: label = "B: " + n->value->str(); break;
                case TreeNode::Label::Truncated: label = "truncated"; break;
            }
            out += "  n" + std::to_string(id) + " [label=\"" + dot_escape(label) + "\"];\n";
            for (const TreeEdge& e : n->edges) {
                std::size_t child = visit(e.target);
                std::string elabel = e.input ? e.input->str() : "";
                if (e.prob) elabel += " : " + json_real_brief(*e.prob);
                out += "  n" + std::to_string(id) + " -> n" + std::to_string(child) +
                       " [label=\"" + dot_escape(elabel) + "\"];\n";
            }
            return id;
        }
    };
    Emit emit{out, counter};
    emit.visit(t.root);
    out += "}\n";
    return out;
}

// --------------------------------------------------------------------------
// Outcomes, verdicts, traces

inline std::string outcome_to_json(const OutcomeResult& r) {
    std::string out = "{\"error_bound\":" + json_real(r.error_bound);
    out += ",\"exact\":";
    out += r.exact ? "true" : "false";
    out += ",\"value\":[";
    for (std::size_t i = 0; i < r.value.size(); ++i) {
        if (i) out += ",";
        out += json_real(r.value[i]);
    }
    out += "]}";
    return out;
}

inline std::string witness_to_json(const Witness& w) {
    std::string out = "{\"alternative\":" + json_escape(w.alternative);
    out += ",\"alternative_error\":" + json_real(w.alternative_error);
    out += ",\"alternative_value\":" + json_real(w.alternative_value);
    out += ",\"baseline_error\":" + json_real(w.baseline_error);
    out += ",\"baseline_value\":" + json_real(w.baseline_value);
    if (w.horizon) out += ",\"horizon\":" + std::to_string(*w.horizon);
    out += ",\"player\":" + json_escape(w.player);
    if (w.prefix) out += ",\"prefix\":" + json_escape(*w.prefix);
    out += "}";
    return out;
}

inline std::string verdict_to_json(const Verdict& v) {
    std::string out = "{\"eps\":" + json_real(v.eps);
    out += ",\"holds\":";
    switch (v.status) {
        case VerdictStatus::Holds: out += "true"; break;
        case VerdictStatus::Fails: out += "false"; break;
        case VerdictStatus::Inconclusive: out += "\"inconclusive\""; break;
    }
    out += ",\"kind\":" + json_escape(v.kind);
    if (v.n_max) out += ",\"n_max\":" + std::to_string(*v.n_max);
    if (v.outcome) out += ",\"outcome\":" + outcome_to_json(*v.outcome);
    if (v.witness) out += ",\"witness\":" + witness_to_json(*v.witness);
    out += "}";
    return out;
}

inline std::string trace_to_json(const std::vector<RolloutStep>& trace) {
    std::string out = "[";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i) out += ",";
        out += "{";
        if (trace[i].output) out += "\"output\":" + value_to_json(*trace[i].output) + ",";
        if (trace[i].result) out += "\"result\":" + value_to_json(*trace[i].result) + ",";
        out += "\"state\":" + value_to_json(trace[i].state);
        out += ",\"turn\":" + std::to_string(i + 1);
        out += "}";
    }
    out += "]";
    return out;
}

// --------------------------------------------------------------------------
// Matrix game descriptions (canonical form; parse . serialize == identity)

inline std::string serialize_matrix_spec(const MatrixGameSpec& spec) {
    std::string out = "{\"actions\":[";
    for (std::size_t p = 0; p < spec.actions.size(); ++p) {
        if (p) out += ",";
        out += "[";
        for (std::size_t i = 0; i < spec.actions[p].size(); ++i) {
            if (i) out += ",";
            out += json_escape(spec.actions[p][i]);
        }
        out += "]";
    }
    out += "]";
    if (spec.discount) out += ",\"discount\":" + json_real(*spec.discount);
    out += ",\"format\":\"koalg-matrix/1\"";
    out += ",\"mode\":";
    out += spec.mode == MatrixGameSpec::Mode::OneShot ? "\"one-shot\"" : "\"repeated\"";
    out += ",\"payoffs\":{";
    bool first = true;
    for (const auto& [profile, pay] : spec.payoffs) {
        if (!first) out += ",";
        first = false;
        out += json_escape(detail::join_profile(profile)) + ":[";
        for (std::size_t i = 0; i < pay.size(); ++i) {
            if (i) out += ",";
            out += json_real(pay[i]);
        }
        out += "]";
    }
    out += "},\"players\":[";
    for (std::size_t p = 0; p < spec.players.size(); ++p) {
        if (p) out += ",";
        out += json_escape(spec.players[p]);
    }
    out += "]";
    if (spec.seed_actions) {
        out += ",\"seed_actions\":[";
        for (std::size_t p = 0; p < spec.seed_actions->size(); ++p) {
            if (p) out += ",";
            out += json_escape((*spec.seed_actions)[p]);
        }
        out += "]";
    }
    if (spec.seed_output) {
        out += ",\"seed_output\":[";
        for (std::size_t p = 0; p < spec.seed_output->size(); ++p) {
            if (p) out += ",";
            out += json_real((*spec.seed_output)[p]);
        }
        out += "]";
    }
    out += ",\"visibility\":";
    out += spec.visibility == MatrixGameSpec::Visibility::FullProfile
               ? "\"full-profile\""
               : "\"own-payoff-and-signal\"";
    out += "}";
    return out;
}

}  // namespace koalg

#endif  // KOALG_SERIALIZE_HPP
