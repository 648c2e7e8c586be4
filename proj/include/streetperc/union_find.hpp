#pragma once

#include <streetperc/geometry.hpp>

#include <cstdint>
#include <utility>
#include <vector>

namespace streetperc {

struct WrapFlags {
    bool horizontal = false;
    bool vertical = false;

    bool any() const { return horizontal || vertical; }
    WrapFlags& operator|=(WrapFlags o) {
        horizontal = horizontal || o.horizontal;
        vertical = vertical || o.vertical;
        return *this;
    }
};

/// Disjoint sets over torus-embedded nodes. Each node stores its winding
/// relative to its parent, so find() also yields the winding of a node
/// relative to its root, i.e. which periodic copy of the node is attached
/// to the root's base copy. Closing a cycle whose windings disagree means
/// the component wraps around the torus.
class WrapUnionFind {
public:
    WrapUnionFind() = default;
    explicit WrapUnionFind(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) add();
    }

    int add() {
        const int id = static_cast<int>(parent_.size());
        parent_.push_back(id);
        rank_.push_back(0);
        offset_.push_back({});
        flags_.push_back({});
        size_.push_back(1);
        return id;
    }

    std::size_t size() const { return parent_.size(); }

    struct Found {
        int root;
        Winding offset; // winding of the node relative to the root
    };

    Found find(int i) {
        path_.clear();
        int r = i;
        while (parent_[r] != r) {
            path_.push_back(r);
            r = parent_[r];
        }
        // Walk back down, turning parent-relative windings into root-relative ones.
        for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
            const int node = *it;
            const int p = parent_[node];
            if (p != r) offset_[node] = offset_[node] + offset_[p];
            parent_[node] = r;
        }
        return {r, i == r ? Winding{} : offset_[i]};
    }

    /// Records an edge from node i to the copy of node j shifted by `shift`
    /// periods. Returns the wrap flags of the merged component.
    WrapFlags unite(int i, int j, Winding shift) {
        const Found fi = find(i);
        const Found fj = find(j);
        if (fi.root == fj.root) {
            const Winding d = fi.offset + shift - fj.offset;
            WrapFlags& f = flags_[fi.root];
            if (d.x != 0) f.horizontal = true;
            if (d.y != 0) f.vertical = true;
            return f;
        }
        int keep = fi.root, gone = fj.root;
        // Winding of the absorbed root in the kept root's frame.
        Winding gone_offset = fi.offset + shift - fj.offset;
        if (rank_[keep] < rank_[gone]) {
            std::swap(keep, gone);
            gone_offset = Winding{} - gone_offset;
        }
        parent_[gone] = keep;
        offset_[gone] = gone_offset;
        if (rank_[keep] == rank_[gone]) ++rank_[keep];
        size_[keep] += size_[gone];
        flags_[keep] |= flags_[gone];
        return flags_[keep];
    }

    WrapFlags flags(int i) { return flags_[find(i).root]; }
    bool connected(int i, int j) { return find(i).root == find(j).root; }
    std::size_t component_size(int i) { return size_[find(i).root]; }

private:
    std::vector<int> parent_;
    std::vector<std::uint8_t> rank_;
    std::vector<Winding> offset_;
    std::vector<WrapFlags> flags_;
    std::vector<std::size_t> size_;
    std::vector<int> path_;
};

} // namespace streetperc
