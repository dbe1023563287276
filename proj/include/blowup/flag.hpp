#pragma once

#include "blowup/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blowup {

using Vertex = std::uint32_t;

// Sorted set of distinct vertex ids.
class VertexSet {
public:
    VertexSet() = default;
    VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}
    explicit VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
        std::sort(ids_.begin(), ids_.end());
        if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
            throw std::invalid_argument("VertexSet: duplicate vertex id");
    }

    // {0, 1, ..., n}
    static VertexSet range(Vertex count) {
        std::vector<Vertex> v(count);
        std::iota(v.begin(), v.end(), Vertex{0});
        return VertexSet(std::move(v));
    }

    const std::vector<Vertex>& ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    Vertex operator[](std::size_t i) const { return ids_[i]; }
    Vertex front() const { return ids_.front(); }
    Vertex back() const { return ids_.back(); }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    bool contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }

    // position of v in ascending order, or -1
    int index_of(Vertex v) const {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
        if (it == ids_.end() || *it != v) return -1;
        return static_cast<int>(it - ids_.begin());
    }

    bool is_subset_of(const VertexSet& o) const {
        return std::includes(o.ids_.begin(), o.ids_.end(), ids_.begin(), ids_.end());
    }

    bool intersects(const VertexSet& o) const {
        auto a = ids_.begin();
        auto b = o.ids_.begin();
        while (a != ids_.end() && b != o.ids_.end()) {
            if (*a == *b) return true;
            if (*a < *b) ++a; else ++b;
        }
        return false;
    }

    VertexSet operator|(const VertexSet& o) const {
        VertexSet r;
        std::set_union(ids_.begin(), ids_.end(), o.ids_.begin(), o.ids_.end(), std::back_inserter(r.ids_));
        return r;
    }
    VertexSet operator&(const VertexSet& o) const {
        VertexSet r;
        std::set_intersection(ids_.begin(), ids_.end(), o.ids_.begin(), o.ids_.end(), std::back_inserter(r.ids_));
        return r;
    }
    VertexSet operator-(const VertexSet& o) const {
        VertexSet r;
        std::set_difference(ids_.begin(), ids_.end(), o.ids_.begin(), o.ids_.end(), std::back_inserter(r.ids_));
        return r;
    }
    VertexSet without(Vertex v) const {
        VertexSet r = *this;
        r.ids_.erase(std::remove(r.ids_.begin(), r.ids_.end(), v), r.ids_.end());
        return r;
    }

    // "012" when every id is a single digit, otherwise "10,11,12"
    std::string label() const {
        bool compact = std::all_of(ids_.begin(), ids_.end(), [](Vertex v) { return v < 10; });
        std::string s;
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            if (!compact && i) s += ',';
            s += std::to_string(ids_[i]);
        }
        return s;
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;
    friend auto operator<=>(const VertexSet& a, const VertexSet& b) { return a.ids_ <=> b.ids_; }

private:
    std::vector<Vertex> ids_;
};

// Ordered partition of a vertex set into nonempty blocks.
class Flag {
public:
    Flag() = default;
    explicit Flag(std::vector<VertexSet> blocks) : blocks_(std::move(blocks)) {
        if (blocks_.empty()) throw std::invalid_argument("Flag: no blocks");
        std::size_t total = 0;
        for (const auto& b : blocks_) {
            if (b.empty()) throw std::invalid_argument("Flag: empty block");
            total += b.size();
        }
        if (parent().size() != total) throw std::invalid_argument("Flag: blocks are not disjoint");
    }

    static Flag parse(std::string_view text);

    const std::vector<VertexSet>& blocks() const { return blocks_; }
    const VertexSet& block(std::size_t j) const { return blocks_.at(j); }
    std::size_t block_count() const { return blocks_.size(); }
    const VertexSet& last_block() const { return blocks_.back(); }

    VertexSet parent() const {
        VertexSet v;
        for (const auto& b : blocks_) v = v | b;
        return v;
    }
    std::size_t vertex_count() const {
        std::size_t s = 0;
        for (const auto& b : blocks_) s += b.size();
        return s;
    }
    int n() const { return static_cast<int>(vertex_count()) - 1; }
    int k() const { return static_cast<int>(vertex_count() - blocks_.size()); }

    // n_j = |V_j| - 1
    std::vector<int> block_dims() const {
        std::vector<int> d;
        for (const auto& b : blocks_) d.push_back(static_cast<int>(b.size()) - 1);
        return d;
    }
    Integer factorial_product() const {
        Integer f = 1;
        for (int d : block_dims()) f *= factorial(static_cast<unsigned>(d));
        return f;
    }

    int block_of(Vertex v) const {
        for (std::size_t j = 0; j < blocks_.size(); ++j)
            if (blocks_[j].contains(v)) return static_cast<int>(j);
        return -1;
    }

    // union of blocks j, j+1, ..., last
    VertexSet tail(std::size_t j) const {
        VertexSet v;
        for (std::size_t i = j; i < blocks_.size(); ++i) v = v | blocks_[i];
        return v;
    }

    // flag on V minus the last block
    Flag without_last() const {
        if (blocks_.size() < 2) throw std::invalid_argument("Flag::without_last: single block");
        return Flag(std::vector<VertexSet>(blocks_.begin(), blocks_.end() - 1));
    }

    std::vector<Vertex> flattened() const {
        std::vector<Vertex> v;
        for (const auto& b : blocks_) v.insert(v.end(), b.begin(), b.end());
        return v;
    }

    // "0|1|2,3"
    std::string to_string() const {
        std::string s;
        for (std::size_t j = 0; j < blocks_.size(); ++j) {
            if (j) s += '|';
            for (std::size_t i = 0; i < blocks_[j].size(); ++i) {
                if (i) s += ',';
                s += std::to_string(blocks_[j][i]);
            }
        }
        return s;
    }

    // "01{23}"; falls back to to_string() for multi-digit ids
    std::string shorthand() const {
        for (const auto& b : blocks_)
            if (b.back() > 9) return to_string();
        std::string s;
        for (const auto& b : blocks_) {
            if (b.size() == 1) s += b.label();
            else s += "{" + b.label() + "}";
        }
        return s;
    }

    friend bool operator==(const Flag&, const Flag&) = default;
    friend std::strong_ordering operator<=>(const Flag& a, const Flag& b) {
        if (auto c = a.blocks_.size() <=> b.blocks_.size(); c != 0) return c;
        if (auto c = a.flattened() <=> b.flattened(); c != 0) return c;
        std::vector<std::size_t> sa, sb;
        for (const auto& x : a.blocks_) sa.push_back(x.size());
        for (const auto& x : b.blocks_) sb.push_back(x.size());
        return sa <=> sb;
    }

private:
    std::vector<VertexSet> blocks_;
};

namespace detail {

inline std::vector<Vertex> parse_vertex_list(std::string_view s) {
    std::vector<Vertex> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) throw std::invalid_argument("flag syntax: empty vertex id");
        if (cur.size() > 1 && cur[0] == '0') throw std::invalid_argument("flag syntax: leading zero in '" + cur + "'");
        out.push_back(static_cast<Vertex>(std::stoul(cur)));
        cur.clear();
    };
    for (char c : s) {
        if (c == '{' || c == '}' || c == ' ') continue;
        if (c == ',') flush();
        else if (c >= '0' && c <= '9') cur += c;
        else throw std::invalid_argument(std::string("flag syntax: unexpected character '") + c + "'");
    }
    flush();
    return out;
}

}  // namespace detail

// Accepts "0|1|2,3", "0|1|{2,3}" and the compact "01{23}" (single-digit ids).
inline Flag Flag::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("flag syntax: empty string");
    std::vector<VertexSet> blocks;
    if (text.find('|') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            auto bar = text.find('|', start);
            auto part = text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
            blocks.emplace_back(detail::parse_vertex_list(part));
            if (bar == std::string_view::npos) break;
            start = bar + 1;
        }
    } else if (text.find('{') == std::string_view::npos && text.find(',') != std::string_view::npos) {
        blocks.emplace_back(detail::parse_vertex_list(text));
    } else {
        for (std::size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (c >= '0' && c <= '9') {
                blocks.push_back(VertexSet{static_cast<Vertex>(c - '0')});
            } else if (c == '{') {
                auto close = text.find('}', i);
                if (close == std::string_view::npos) throw std::invalid_argument("flag syntax: unbalanced brace");
                auto inner = text.substr(i + 1, close - i - 1);
                std::vector<Vertex> ids;
                if (inner.find(',') != std::string_view::npos) {
                    ids = detail::parse_vertex_list(inner);
                } else {
                    for (char d : inner) {
                        if (d < '0' || d > '9') throw std::invalid_argument("flag syntax: bad block");
                        ids.push_back(static_cast<Vertex>(d - '0'));
                    }
                }
                if (ids.empty()) throw std::invalid_argument("flag syntax: empty block");
                blocks.emplace_back(std::move(ids));
                i = close;
            } else if (c != ' ') {
                throw std::invalid_argument(std::string("flag syntax: unexpected character '") + c + "'");
            }
        }
    }
    return Flag(std::move(blocks));
}

// All ordered partitions of V into |V|-k blocks, sorted.
inline std::vector<Flag> enumerate_flags(const VertexSet& V, int k) {
    if (V.empty()) throw std::invalid_argument("enumerate_flags: empty vertex set");
    if (k < 0 || k >= static_cast<int>(V.size()))
        throw std::invalid_argument("enumerate_flags: k out of range");
    const std::size_t nv = V.size();
    const std::size_t m = nv - static_cast<std::size_t>(k);
    std::vector<Flag> out;
    std::vector<std::size_t> assign(nv, 0);
    // restricted growth strings give unordered partitions; permute blocks for order
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (nv - i < m - used) return;
        if (i == nv) {
            if (used != m) return;
            std::vector<std::vector<Vertex>> parts(m);
            for (std::size_t t = 0; t < nv; ++t) parts[assign[t]].push_back(V[t]);
            std::vector<std::size_t> perm(m);
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<VertexSet> blocks;
                for (std::size_t p : perm) blocks.emplace_back(parts[p]);
                out.emplace_back(std::move(blocks));
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
        }
        for (std::size_t b = 0; b <= used && b < m; ++b) {
            assign[i] = b;
            rec(i + 1, b == used ? used + 1 : used);
        }
    };
    rec(0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

// Merge blocks j-1 and j (1 <= j <= blocks-1).
inline Flag coarsen(const Flag& F, int j) {
    if (j < 1 || j >= static_cast<int>(F.block_count()))
        throw std::invalid_argument("coarsen: j out of range");
    std::vector<VertexSet> blocks;
    for (int i = 0; i < static_cast<int>(F.block_count()); ++i) {
        if (i == j) continue;
        if (i == j - 1) blocks.push_back(F.block(i) | F.block(j));
        else blocks.push_back(F.block(i));
    }
    return Flag(std::move(blocks));
}

// True iff F subdivides the blocks of F2 in order.
inline bool refines(const Flag& F, const Flag& F2) {
    if (F.parent() != F2.parent()) throw std::invalid_argument("refines: flags on different vertex sets");
    std::size_t i = 0;
    for (const auto& target : F2.blocks()) {
        VertexSet acc;
        while (acc.size() < target.size()) {
            if (i >= F.block_count()) return false;
            const auto& b = F.block(i++);
            if (!b.is_subset_of(target)) return false;
            acc = acc | b;
        }
    }
    return i == F.block_count();
}

inline Flag permute_flag(const Flag& F, const std::map<Vertex, Vertex>& perm) {
    const VertexSet V = F.parent();
    std::vector<Vertex> image;
    for (Vertex v : V) {
        auto it = perm.find(v);
        if (it == perm.end()) throw std::invalid_argument("permute_flag: vertex missing from permutation");
        image.push_back(it->second);
    }
    std::vector<Vertex> sorted_image = image;
    std::sort(sorted_image.begin(), sorted_image.end());
    if (sorted_image != V.ids()) throw std::invalid_argument("permute_flag: not a bijection of the vertex set");
    std::vector<VertexSet> blocks;
    for (const auto& b : F.blocks()) {
        std::vector<Vertex> ids;
        for (Vertex v : b) ids.push_back(perm.at(v));
        blocks.emplace_back(std::move(ids));
    }
    return Flag(std::move(blocks));
}

// Injective relabeling onto another vertex set.
inline Flag relabel_flag(const Flag& F, const std::map<Vertex, Vertex>& m) {
    std::vector<VertexSet> blocks;
    for (const auto& b : F.blocks()) {
        std::vector<Vertex> ids;
        for (Vertex v : b) {
            auto it = m.find(v);
            if (it == m.end()) throw std::invalid_argument("relabel_flag: vertex missing from map");
            ids.push_back(it->second);
        }
        blocks.emplace_back(std::move(ids));
    }
    return Flag(std::move(blocks));
}

// Lowest-order arrival record: a word over block labels 0..m-1.
struct ArrivalWord {
    std::vector<int> labels;

    // letters a, b, c, ...
    std::string to_string() const {
        std::string s;
        for (int l : labels) s += static_cast<char>('a' + l);
        return s;
    }
    friend bool operator==(const ArrivalWord&, const ArrivalWord&) = default;
    friend auto operator<=>(const ArrivalWord&, const ArrivalWord&) = default;
};

// Interleavings with |V_j| copies of label j in which the last j-1 precedes the last j.
inline std::vector<ArrivalWord> enumerate_arrival_sequences(const Flag& F) {
    const std::size_t m = F.block_count();
    std::vector<int> remaining;
    for (const auto& b : F.blocks()) remaining.push_back(static_cast<int>(b.size()));
    std::vector<ArrivalWord> out;
    ArrivalWord cur;
    std::function<void(std::size_t)> rec = [&](std::size_t completed) {
        if (completed == m) {
            out.push_back(cur);
            return;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (remaining[j] == 0) continue;
            // completing block j requires all earlier blocks done
            if (remaining[j] == 1 && j != completed) continue;
            --remaining[j];
            cur.labels.push_back(static_cast<int>(j));
            rec(remaining[j] == 0 ? completed + 1 : completed);
            cur.labels.pop_back();
            ++remaining[j];
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

// Degree-r arrival record: per round, the particle counts of each source and
// the set of sources silenced after that round.
struct ArrivalSequence {
    unsigned degree = 1;
    std::vector<std::map<Vertex, unsigned>> rounds;
    std::vector<VertexSet> silenced;

    Flag flag() const { return Flag(silenced); }

    // rounds joined by '|', each listing vertex ids repeated by count ("001|222")
    std::string to_string() const {
        bool compact = true;
        for (const auto& s : silenced)
            if (!s.empty() && s.back() > 9) compact = false;
        std::string out;
        for (std::size_t i = 0; i < rounds.size(); ++i) {
            if (i) out += '|';
            bool first = true;
            for (const auto& [v, c] : rounds[i])
                for (unsigned t = 0; t < c; ++t) {
                    if (!compact && !first) out += ',';
                    out += std::to_string(v);
                    first = false;
                }
        }
        return out;
    }

    static ArrivalSequence parse(std::string_view text) {
        ArrivalSequence seq;
        std::size_t start = 0;
        while (true) {
            auto bar = text.find('|', start);
            auto part = text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
            std::vector<Vertex> ids;
            if (part.find(',') != std::string_view::npos) {
                ids = detail::parse_vertex_list(part);
            } else {
                for (char c : part) {
                    if (c < '0' || c > '9') throw std::invalid_argument("arrival sequence syntax");
                    ids.push_back(static_cast<Vertex>(c - '0'));
                }
            }
            if (ids.empty()) throw std::invalid_argument("arrival sequence: empty round");
            std::map<Vertex, unsigned> counts;
            for (Vertex v : ids) ++counts[v];
            std::vector<Vertex> src;
            for (const auto& [v, c] : counts) src.push_back(v);
            seq.rounds.push_back(std::move(counts));
            seq.silenced.emplace_back(std::move(src));
            if (bar == std::string_view::npos) break;
            start = bar + 1;
        }
        seq.degree = 0;
        for (const auto& [v, c] : seq.rounds.front()) seq.degree += c;
        for (const auto& r : seq.rounds) {
            unsigned s = 0;
            for (const auto& [v, c] : r) s += c;
            if (s != seq.degree) throw std::invalid_argument("arrival sequence: rounds of unequal size");
        }
        (void)seq.flag();  // disjointness check
        return seq;
    }

    friend bool operator==(const ArrivalSequence&, const ArrivalSequence&) = default;
};

}  // namespace blowup

template <>
struct std::hash<blowup::VertexSet> {
    std::size_t operator()(const blowup::VertexSet& s) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto v : s) h = (h ^ v) * 0x100000001b3ull;
        return h;
    }
};

template <>
struct std::hash<blowup::Flag> {
    std::size_t operator()(const blowup::Flag& f) const noexcept {
        std::size_t h = 0x84222325cbf29ce4ull;
        for (const auto& b : f.blocks()) h = (h ^ std::hash<blowup::VertexSet>{}(b)) * 0x100000001b3ull + b.size();
        return h;
    }
};
