#include "inramr/mesh.hpp"

#include <algorithm>

#include "inramr/util.hpp"

namespace inramr {

MeshTree::MeshTree(DomainBox box) : box_(std::move(box)) {
    const int d = box_.dim();
    if (d < 1 || d > 4) throw ContractError("MeshTree: dimension must be 1..4");
    if (static_cast<int>(box_.hi.size()) != d) throw ContractError("MeshTree: lo/hi length mismatch");
    for (int a = 0; a < d; ++a) {
        if (!(box_.lo[a] < box_.hi[a])) throw ContractError("MeshTree: requires lo < hi per axis");
    }
    nodes_.push_back(Element{});
}

std::vector<int> MeshTree::leaves() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(leaf_count_));
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const Element& e = nodes_[idx];
        if (e.is_leaf()) {
            out.push_back(idx);
        } else {
            for (int c = n_children() - 1; c >= 0; --c) stack.push_back(e.first_child + c);
        }
    }
    return out;
}

void MeshTree::refine(int idx) {
    Element& e = nodes_[idx];
    if (!e.is_leaf()) throw ContractError("refine: element is not a leaf");
    if (e.done_refining) throw ContractError("refine: element is marked done_refining");
    if (e.level >= kMaxMeshLevel) throw ContractError("refine: maximum level reached");

    const int first = static_cast<int>(nodes_.size());
    const int d = dim();
    const Element parent = e;  // nodes_ grows below; keep a copy
    for (int c = 0; c < (1 << d); ++c) {
        Element child;
        child.level = parent.level + 1;
        for (int a = 0; a < d; ++a) {
            child.coord[a] = 2 * parent.coord[a] + ((c >> a) & 1u);
        }
        nodes_.push_back(child);
    }
    nodes_[idx].first_child = first;
    leaf_count_ += (1 << d) - 1;
}

void MeshTree::mark_done(int idx) {
    Element& e = nodes_[idx];
    if (!e.is_leaf()) throw ContractError("mark_done: element is not a leaf");
    e.done_refining = true;
}

double MeshTree::axis_coord(int axis, std::uint64_t v) const {
    if (v == 0) return box_.lo[axis];
    if (v == (1ull << kMaxMeshLevel)) return box_.hi[axis];
    const double t = static_cast<double>(v) * 0x1.0p-40;
    return box_.lo[axis] + (box_.hi[axis] - box_.lo[axis]) * t;
}

void MeshTree::element_box(int idx, double* lo, double* hi) const {
    const Element& e = nodes_[idx];
    const int shift = kMaxMeshLevel - e.level;
    for (int a = 0; a < dim(); ++a) {
        lo[a] = axis_coord(a, e.coord[a] << shift);
        hi[a] = axis_coord(a, (e.coord[a] + 1) << shift);
    }
}

VertexKey MeshTree::corner_key(int idx, unsigned corner) const {
    const Element& e = nodes_[idx];
    const int shift = kMaxMeshLevel - e.level;
    VertexKey key{};
    for (int a = 0; a < dim(); ++a) {
        key[a] = (e.coord[a] + ((corner >> a) & 1u)) << shift;
    }
    return key;
}

void MeshTree::point_coords(const VertexKey& key, double* out) const {
    for (int a = 0; a < dim(); ++a) out[a] = axis_coord(a, key[a]);
}

std::uint64_t MeshTree::element_rng_key(int idx) const {
    const Element& e = nodes_[idx];
    std::uint64_t h = rng::fold_key(0x2545F4914F6CDD1Dull, static_cast<std::uint64_t>(e.level));
    for (int a = 0; a < dim(); ++a) h = rng::fold_key(h, e.coord[a]);
    return h;
}

int MeshTree::locate(const double* x) const {
    for (int a = 0; a < dim(); ++a) {
        if (x[a] < box_.lo[a] || x[a] > box_.hi[a]) throw ContractError("locate: point outside domain");
    }
    int idx = 0;
    while (!nodes_[idx].is_leaf()) {
        const Element& e = nodes_[idx];
        const int child_shift = kMaxMeshLevel - e.level - 1;
        unsigned c = 0;
        for (int a = 0; a < dim(); ++a) {
            const double mid = axis_coord(a, (2 * e.coord[a] + 1) << child_shift);
            // x exactly on the shared face goes to the lower child, which ends
            // at the leaf with lexicographically smallest lo.
            if (x[a] > mid) c |= 1u << a;
        }
        idx = e.first_child + static_cast<int>(c);
    }
    return idx;
}

VertexSet unique_vertices(const MeshTree& mesh) {
    VertexSet out;
    out.leaf_ids = mesh.leaves();
    const int nc = mesh.n_children();

    std::vector<VertexKey> all;
    all.reserve(out.leaf_ids.size() * nc);
    for (int leaf : out.leaf_ids) {
        for (int c = 0; c < nc; ++c) all.push_back(mesh.corner_key(leaf, static_cast<unsigned>(c)));
    }
    out.keys = all;
    std::sort(out.keys.begin(), out.keys.end());
    out.keys.erase(std::unique(out.keys.begin(), out.keys.end()), out.keys.end());

    std::unordered_map<VertexKey, int, VertexKeyHash> index;
    index.reserve(out.keys.size() * 2);
    for (std::size_t i = 0; i < out.keys.size(); ++i) index.emplace(out.keys[i], static_cast<int>(i));

    out.corners.resize(out.leaf_ids.size());
    std::size_t cursor = 0;
    for (std::size_t l = 0; l < out.leaf_ids.size(); ++l) {
        out.corners[l].fill(-1);
        for (int c = 0; c < nc; ++c) out.corners[l][c] = index.at(all[cursor++]);
    }
    return out;
}

double interpolate(const MeshTree& mesh, const VertexValues& values, const double* x) {
    const int leaf = mesh.locate(x);
    const int d = mesh.dim();
    double lo[4], hi[4];
    mesh.element_box(leaf, lo, hi);

    double t[4];
    for (int a = 0; a < d; ++a) {
        t[a] = (x[a] - lo[a]) / (hi[a] - lo[a]);
        t[a] = std::clamp(t[a], 0.0, 1.0);
    }
    double acc = 0.0;
    for (unsigned c = 0; c < (1u << d); ++c) {
        double w = 1.0;
        for (int a = 0; a < d; ++a) w *= ((c >> a) & 1u) ? t[a] : 1.0 - t[a];
        if (w == 0.0) continue;
        const auto it = values.find(mesh.corner_key(leaf, c));
        if (it == values.end()) throw ContractError("interpolate: missing vertex value");
        acc += w * it->second;
    }
    return acc;
}

Matrix sample_uniform(const MeshTree& mesh, int leaf, int n, std::uint64_t seed, rng::Purpose purpose) {
    if (n < 1) throw ContractError("sample_uniform: n must be >= 1");
    const int d = mesh.dim();
    double lo[4], hi[4];
    mesh.element_box(leaf, lo, hi);
    rng::Stream stream(seed, mesh.element_rng_key(leaf), purpose);
    Matrix pts(n, d);
    for (int i = 0; i < n; ++i) {
        double* p = pts.row(i);
        for (int a = 0; a < d; ++a) p[a] = stream.next_in(lo[a], hi[a]);
    }
    return pts;
}

}  // namespace inramr
