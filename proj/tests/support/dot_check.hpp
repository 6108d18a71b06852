#ifndef KOALG_TESTS_DOT_CHECK_HPP
#define KOALG_TESTS_DOT_CHECK_HPP

// Minimal DOT grammar check for the exporter's output: one digraph block,
// node statements `nK [label="..."];` and edge statements
// `nK -> nM [label="..."];` with balanced quotes.

#include <cctype>
#include <sstream>
#include <string>

namespace koalg::testgen {

inline bool valid_node_id(const std::string& s) {
    if (s.size() < 2 || s[0] != 'n') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

inline bool quoted_attr(const std::string& s) {
    // [label="..."]; with no unescaped quote inside
    if (s.rfind("[label=\"", 0) != 0) return false;
    if (s.size() < 11 || s.substr(s.size() - 3) != "\"];") return false;
    std::string body = s.substr(8, s.size() - 11);
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '\\') ++i;
        else if (body[i] == '"') return false;
    }
    return true;
}

inline bool check_dot(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "digraph gametree {") return false;
    bool closed = false;
    while (std::getline(in, line)) {
        if (line == "}") {
            closed = true;
            continue;
        }
        if (closed && !line.empty()) return false;
        if (line.rfind("  ", 0) != 0) return false;
        std::istringstream ls(line);
        std::string a, arrow, b;
        ls >> a;
        if (!valid_node_id(a)) return false;
        ls >> arrow;
        if (arrow == "->") {
            ls >> b;
            if (!valid_node_id(b)) return false;
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest[0] == ' ') rest = rest.substr(1);
            if (!quoted_attr(rest)) return false;
        } else {
            std::string rest = arrow;
            std::string tail;
            std::getline(ls, tail);
            rest += tail;
            if (!quoted_attr(rest)) return false;
        }
    }
    return closed;
}

}  // namespace koalg::testgen

#endif  // KOALG_TESTS_DOT_CHECK_HPP
