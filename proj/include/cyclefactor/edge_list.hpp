#ifndef CYCLEFACTOR_EDGE_LIST_HPP
#define CYCLEFACTOR_EDGE_LIST_HPP

// Edge-list text format:
//   n e
//   u v      (e lines, directed u->v, 0-indexed)

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cyclefactor/graph.hpp"

namespace cyclefactor {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::uint64_t> parse_fields(std::string_view text, std::size_t line_no, std::size_t expected) {
    std::vector<std::uint64_t> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ' ' || text[i] == '\t' || text[i] == '\r') {
            ++i;
            continue;
        }
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
        if (ec != std::errc{} || ptr == text.data() + i)
            throw ParseError(line_no, "expected a non-negative decimal integer");
        i = static_cast<std::size_t>(ptr - text.data());
        if (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r')
            throw ParseError(line_no, "unexpected character '" + std::string(1, text[i]) + "'");
        out.push_back(value);
    }
    if (out.size() != expected)
        throw ParseError(line_no, "expected " + std::to_string(expected) + " fields, found " + std::to_string(out.size()));
    return out;
}

}  // namespace detail

inline OrientedGraph read_edge_list(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(1, "missing header line 'n e'");
    ++line_no;
    const auto header = detail::parse_fields(line, line_no, 2);
    const auto n = header[0];
    const auto e = header[1];
    if (n > (std::uint64_t{1} << 31)) throw ParseError(line_no, "vertex count too large");

    GraphBuilder b(static_cast<std::size_t>(n));
    for (std::uint64_t k = 0; k < e; ++k) {
        if (!std::getline(in, line)) throw ParseError(line_no + 1, "expected " + std::to_string(e) + " edge lines, found " + std::to_string(k));
        ++line_no;
        const auto f = detail::parse_fields(line, line_no, 2);
        if (f[0] >= n || f[1] >= n) throw ParseError(line_no, "vertex id out of range [0," + std::to_string(n) + ")");
        try {
            b.add_edge(static_cast<VertexId>(f[0]), static_cast<VertexId>(f[1]));
        } catch (const GraphError& err) {
            throw ParseError(line_no, err.what());
        }
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) throw ParseError(line_no, "trailing content after edge list");
    }
    return std::move(b).build();
}

inline OrientedGraph read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const OrientedGraph& g) {
    out << g.order() << ' ' << g.size() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline std::string to_edge_list(const OrientedGraph& g) {
    std::ostringstream s;
    write_edge_list(s, g);
    return s.str();
}

/// FNV-1a 64 over the canonical edge-list text, as 16 hex digits.
inline std::string graph_hash(const OrientedGraph& g) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : to_edge_list(g)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    return out;
}

}  // namespace cyclefactor

#endif
