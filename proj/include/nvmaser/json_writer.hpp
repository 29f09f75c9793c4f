#pragma once

// Deterministic JSON emission for the CLI: insertion-ordered keys and fixed
// per-unit number formatting, so identical inputs produce byte-identical
// output. Fields in mT get 2 decimals, MHz 1 decimal, degrees 2 decimals,
// Gauss 3 decimals; everything else 4 significant figures.

#include <cstdio>
#include <string>
#include <vector>

namespace nvmaser {
namespace jsonout {

inline std::string fmt(double v, const char* format) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

inline std::string mt(double v) { return fmt(v, "%.2f"); }
inline std::string mhz(double v) { return fmt(v, "%.1f"); }
inline std::string deg(double v) { return fmt(v, "%.2f"); }
inline std::string gauss(double v) { return fmt(v, "%.3f"); }
inline std::string sig4(double v) { return fmt(v, "%.4g"); }

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

// Minimal ordered JSON node: raw numbers arrive pre-formatted.
class Node {
public:
    static Node object() {
        Node n;
        n.kind_ = Kind::object;
        return n;
    }
    static Node array() {
        Node n;
        n.kind_ = Kind::array;
        return n;
    }
    static Node raw(std::string formatted) {
        Node n;
        n.kind_ = Kind::raw;
        n.raw_ = std::move(formatted);
        return n;
    }
    static Node string(const std::string& s) { return raw(quote(s)); }
    static Node boolean(bool b) { return raw(b ? "true" : "false"); }
    static Node integer(long long v) { return raw(std::to_string(v)); }

    Node& add(const std::string& key, Node child) {
        members_.emplace_back(key, std::move(child));
        return *this;
    }
    Node& push(Node child) {
        members_.emplace_back(std::string{}, std::move(child));
        return *this;
    }

    std::string dump(int indent = 0) const {
        const std::string pad(static_cast<std::size_t>(indent), ' ');
        const std::string pad_in(static_cast<std::size_t>(indent) + 2, ' ');
        switch (kind_) {
            case Kind::raw: return raw_;
            case Kind::object: {
                if (members_.empty()) return "{}";
                std::string out = "{\n";
                for (std::size_t i = 0; i < members_.size(); ++i) {
                    out += pad_in + quote(members_[i].first) + ": " +
                           members_[i].second.dump(indent + 2);
                    out += i + 1 < members_.size() ? ",\n" : "\n";
                }
                return out + pad + "}";
            }
            case Kind::array: {
                if (members_.empty()) return "[]";
                std::string out = "[\n";
                for (std::size_t i = 0; i < members_.size(); ++i) {
                    out += pad_in + members_[i].second.dump(indent + 2);
                    out += i + 1 < members_.size() ? ",\n" : "\n";
                }
                return out + pad + "]";
            }
        }
        return "null";
    }

private:
    enum class Kind { object, array, raw };
    Kind kind_ = Kind::raw;
    std::string raw_ = "null";
    std::vector<std::pair<std::string, Node>> members_;
};

}  // namespace jsonout
}  // namespace nvmaser
