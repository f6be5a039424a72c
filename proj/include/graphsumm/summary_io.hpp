#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "graphsumm/common.hpp"
#include "graphsumm/summary_graph.hpp"

namespace graphsumm {

// SUMM v1 text format:
//   SUMM v1 <model> <|V|> <|S|> <|P|>
//   n <subnode> <supernode>        x |V|, ascending subnode
//   e <A> <B> <count>              x |P|, A <= B, lexicographic
// A file written by write_summary reloads and rewrites byte-identically.

inline void write_summary(std::ostream &out, const SummaryGraph &s) {
    const Partition &p = s.partition();
    out << "SUMM v1 " << model_name(s.model()) << ' ' << p.node_count() << ' '
        << p.live_supernode_count() << ' ' << s.superedge_count() << '\n';
    for (NodeId i = 0; i < p.node_count(); ++i)
        out << "n " << i << ' ' << p.supernode_of(i) << '\n';
    s.for_each_superedge([&](SupernodeId a, SupernodeId b, EdgeCount count) {
        out << "e " << a << ' ' << b << ' ' << count << '\n';
    });
    if (!out) throw Error("failed writing summary stream");
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        if (pos > start) out.push_back(line.substr(start, pos - start));
    }
    return out;
}

template <typename T>
T parse_uint(std::string_view token, std::size_t line_no) {
    T value{};
    auto [next, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || next != token.data() + token.size())
        throw ParseError(line_no, "expected unsigned integer, got '" + std::string(token) + "'");
    return value;
}

}  // namespace detail

inline SummaryGraph read_summary(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() {
        if (!std::getline(in, line)) throw Error("truncated summary file");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    next_line();
    auto header = detail::split_fields(line);
    if (header.size() != 6 || header[0] != "SUMM" || header[1] != "v1")
        throw ParseError(line_no, "bad SUMM v1 header");
    Model model;
    if (header[2] == "weighted")
        model = Model::weighted;
    else if (header[2] == "unweighted")
        model = Model::unweighted;
    else
        throw ParseError(line_no, "unknown model '" + std::string(header[2]) + "'");
    const auto node_count = detail::parse_uint<NodeId>(header[3], line_no);
    const auto supernode_count = detail::parse_uint<SupernodeId>(header[4], line_no);
    const auto superedge_count = detail::parse_uint<std::uint64_t>(header[5], line_no);

    std::vector<SupernodeId> assignment(node_count, kInvalidSupernode);
    for (NodeId k = 0; k < node_count; ++k) {
        next_line();
        auto f = detail::split_fields(line);
        if (f.size() != 3 || f[0] != "n")
            throw ParseError(line_no, "expected 'n <subnode> <supernode>'");
        const auto node = detail::parse_uint<NodeId>(f[1], line_no);
        if (node >= node_count) throw ParseError(line_no, "subnode id out of range");
        if (assignment[node] != kInvalidSupernode)
            throw ParseError(line_no, "duplicate subnode line");
        assignment[node] = detail::parse_uint<SupernodeId>(f[2], line_no);
    }

    SummaryGraph s(Partition::from_assignment(std::move(assignment)), model);
    if (s.partition().live_supernode_count() != supernode_count)
        throw Error("header |S| does not match assignment");

    for (std::uint64_t k = 0; k < superedge_count; ++k) {
        next_line();
        auto f = detail::split_fields(line);
        if (f.size() != 4 || f[0] != "e")
            throw ParseError(line_no, "expected 'e <A> <B> <count>'");
        const auto a = detail::parse_uint<SupernodeId>(f[1], line_no);
        const auto b = detail::parse_uint<SupernodeId>(f[2], line_no);
        const auto count = detail::parse_uint<EdgeCount>(f[3], line_no);
        if (count == 0) throw ParseError(line_no, "zero-count superedge");
        s.add_superedge(a, b, count);
    }
    return s;
}

inline void write_summary_file(const std::string &path, const SummaryGraph &s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_summary(out, s);
}

inline SummaryGraph read_summary_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_summary(in);
}

}  // namespace graphsumm
