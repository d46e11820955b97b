#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace ringforge {

using cost_t = std::int64_t;

// Undirected link, stored with u < v in path order.
struct Link {
    int u = 0;
    int v = 0;
    int id = 0;
    cost_t cost = 0;

    int left() const { return u; }
    int right() const { return v; }
    bool has_endpoint(int x) const { return u == x || v == x; }
    friend bool operator==(const Link&, const Link&) = default;
};

// Interval {lo..hi} of non-root vertices.
struct Cut {
    int lo = 1;
    int hi = 1;

    bool contains(int x) const { return lo <= x && x <= hi; }
    int size() const { return hi - lo + 1; }
    friend bool operator==(const Cut&, const Cut&) = default;
    friend auto operator<=>(const Cut&, const Cut&) = default;
};

// Ring 0..n-1, root 0, root edge {n-1, 0}.
struct Instance {
    int n = 0;
    std::vector<Link> links;
    cost_t scale = 1;  // costs were multiplied by this at load time

    int num_links() const { return static_cast<int>(links.size()); }
    friend bool operator==(const Instance& a, const Instance& b) {
        return a.n == b.n && a.links == b.links;
    }
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Link make_link(int a, int b, int id, cost_t cost) {
    if (a == b) throw std::invalid_argument("link endpoints must differ");
    if (a > b) std::swap(a, b);
    return Link{a, b, id, cost};
}

inline Instance make_instance(int n, const std::vector<std::tuple<int, int, cost_t>>& links) {
    if (n < 3) throw std::invalid_argument("ring needs at least 3 vertices");
    Instance inst;
    inst.n = n;
    for (const auto& [a, b, c] : links) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("endpoint out of range");
        if (c < 0) throw std::invalid_argument("negative cost");
        inst.links.push_back(make_link(a, b, inst.num_links(), c));
    }
    return inst;
}

inline std::vector<Cut> enumerate_cuts(const Instance& inst) {
    std::vector<Cut> cuts;
    cuts.reserve(static_cast<std::size_t>(inst.n) * (inst.n - 1) / 2);
    for (int lo = 1; lo < inst.n; ++lo)
        for (int hi = lo; hi < inst.n; ++hi) cuts.push_back({lo, hi});
    return cuts;
}

inline bool covers(const Link& l, const Cut& c) { return c.contains(l.u) != c.contains(l.v); }

inline cost_t total_cost(const Instance& inst, const std::vector<int>& ids) {
    cost_t s = 0;
    for (int id : ids) s += inst.links[id].cost;
    return s;
}

inline bool is_wrap_solution(const Instance& inst, const std::vector<int>& ids) {
    for (const Cut& c : enumerate_cuts(inst)) {
        bool hit = false;
        for (int id : ids)
            if (covers(inst.links[id], c)) { hit = true; break; }
        if (!hit) return false;
    }
    return true;
}

inline std::vector<int> all_link_ids(const Instance& inst) {
    std::vector<int> ids(inst.links.size());
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}

inline bool is_feasible(const Instance& inst) { return is_wrap_solution(inst, all_link_ids(inst)); }

// Number of links of `ids` crossing the cut.
inline int crossing_count(const Instance& inst, const std::vector<int>& ids, const Cut& c) {
    int k = 0;
    for (int id : ids) k += covers(inst.links[id], c) ? 1 : 0;
    return k;
}

namespace detail {

inline std::vector<std::string> tokens_of(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream is(body);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

inline long long parse_int(const std::string& s, int line_no) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty())
        throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" + s + "'");
    return v;
}

struct RawCost {
    long long num;
    long long den;
};

inline RawCost parse_cost(const std::string& s, int line_no) {
    auto slash = s.find('/');
    long long num = parse_int(s.substr(0, slash), line_no);
    long long den = slash == std::string::npos ? 1 : parse_int(s.substr(slash + 1), line_no);
    if (den <= 0) throw ParseError("line " + std::to_string(line_no) + ": denominator must be positive");
    if (num < 0) throw ParseError("line " + std::to_string(line_no) + ": negative cost");
    long long g = std::gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
    return {num, den};
}

}  // namespace detail

// Format: `wrap <n>` then `link <u> <v> <num>[/<den>]` lines; `#` starts a comment.
inline Instance load_instance(std::istream& in) {
    std::string line;
    int line_no = 0;
    int n = -1;
    struct Raw { int u, v; detail::RawCost c; int line; };
    std::vector<Raw> raw;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = detail::tokens_of(line);
        if (tok.empty()) continue;
        if (n < 0) {
            if (tok.size() != 2 || tok[0] != "wrap")
                throw ParseError("line " + std::to_string(line_no) + ": expected 'wrap <n>'");
            n = static_cast<int>(detail::parse_int(tok[1], line_no));
            if (n < 3) throw ParseError("line " + std::to_string(line_no) + ": ring needs at least 3 vertices");
            continue;
        }
        if (tok[0] != "link" || tok.size() != 4)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'link <u> <v> <cost>'");
        int u = static_cast<int>(detail::parse_int(tok[1], line_no));
        int v = static_cast<int>(detail::parse_int(tok[2], line_no));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError("line " + std::to_string(line_no) + ": endpoint out of range");
        if (u == v) throw ParseError("line " + std::to_string(line_no) + ": link endpoints must differ");
        raw.push_back({u, v, detail::parse_cost(tok[3], line_no), line_no});
    }
    if (n < 0) throw ParseError("line " + std::to_string(line_no) + ": missing 'wrap <n>' header");
    long long scale = 1;
    for (const Raw& r : raw) scale = std::lcm(scale, r.c.den);
    Instance inst;
    inst.n = n;
    inst.scale = scale;
    for (const Raw& r : raw)
        inst.links.push_back(make_link(r.u, r.v, inst.num_links(), r.c.num * (scale / r.c.den)));
    return inst;
}

inline Instance load_instance(const std::string& text) {
    std::istringstream is(text);
    return load_instance(is);
}

inline std::string save_instance(const Instance& inst) {
    std::ostringstream os;
    os << "wrap " << inst.n << "\n";
    for (const Link& l : inst.links) os << "link " << l.u << " " << l.v << " " << l.cost << "\n";
    return os.str();
}

inline std::vector<int> load_solution(std::istream& in, const Instance& inst) {
    std::string line;
    int line_no = 0;
    bool header = false;
    std::vector<int> ids;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = detail::tokens_of(line);
        if (tok.empty()) continue;
        if (!header) {
            if (tok.size() != 1 || tok[0] != "solution")
                throw ParseError("line " + std::to_string(line_no) + ": expected 'solution'");
            header = true;
            continue;
        }
        if (tok.size() != 2 || tok[0] != "link")
            throw ParseError("line " + std::to_string(line_no) + ": expected 'link <id>'");
        int id = static_cast<int>(detail::parse_int(tok[1], line_no));
        if (id < 0 || id >= inst.num_links())
            throw ParseError("line " + std::to_string(line_no) + ": link id out of range");
        ids.push_back(id);
    }
    if (!header) throw ParseError("missing 'solution' header");
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

inline std::string save_solution(const std::vector<int>& ids) {
    std::ostringstream os;
    os << "solution\n";
    for (int id : ids) os << "link " << id << "\n";
    return os.str();
}

}  // namespace ringforge
