#include "inramr/inr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inramr/util.hpp"

namespace inramr {

const char* activation_name(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::relu: return "relu";
        case ActivationKind::tanh: return "tanh";
        case ActivationKind::swish: return "swish";
        case ActivationKind::sine: return "sine";
        case ActivationKind::identity: return "identity";
    }
    return "?";
}

std::optional<ActivationKind> activation_from_name(std::string_view name) {
    if (name == "relu") return ActivationKind::relu;
    if (name == "tanh") return ActivationKind::tanh;
    if (name == "swish") return ActivationKind::swish;
    if (name == "sine") return ActivationKind::sine;
    if (name == "identity") return ActivationKind::identity;
    return std::nullopt;
}

double activate_scalar(ActivationKind kind, double x) {
    switch (kind) {
        case ActivationKind::relu: return x > 0.0 ? x : 0.0;
        case ActivationKind::tanh: return std::tanh(x);
        case ActivationKind::swish: return x / (1.0 + std::exp(-x));
        case ActivationKind::sine: return std::sin(x);
        case ActivationKind::identity: return x;
    }
    return x;
}

double activation_grad(ActivationKind kind, double x) {
    switch (kind) {
        case ActivationKind::relu: return x > 0.0 ? 1.0 : 0.0;
        case ActivationKind::tanh: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case ActivationKind::swish: {
            const double s = 1.0 / (1.0 + std::exp(-x));
            return s * (1.0 + x * (1.0 - s));
        }
        case ActivationKind::sine: return std::cos(x);
        case ActivationKind::identity: return 1.0;
    }
    return 1.0;
}

void apply_activation(ActivationKind kind, double* y, std::size_t n) {
    switch (kind) {
        case ActivationKind::identity:
            return;
        case ActivationKind::relu:
            kernels::ops().relu(y, n);
            return;
        default:
            // Transcendental kinds go through libm in every backend so scalar
            // and SIMD evaluation agree bitwise.
            for (std::size_t i = 0; i < n; ++i) y[i] = activate_scalar(kind, y[i]);
            return;
    }
}

bool DomainBox::contains(const double* x) const {
    for (int a = 0; a < dim(); ++a) {
        if (x[a] < lo[a] || x[a] > hi[a]) return false;
    }
    return true;
}

Mlp::Mlp(std::optional<FourierEncoding> encoding, std::vector<LayerSpec> layers, DomainBox domain,
         int output_component)
    : encoding_(std::move(encoding)),
      layers_(std::move(layers)),
      domain_(std::move(domain)),
      output_component_(output_component) {
    validate();
}

void Mlp::validate() const {
    const int d = domain_.dim();
    if (d < 2 || d > 4) throw ContractError("Mlp: input dimension must be 2, 3, or 4");
    if (static_cast<int>(domain_.hi.size()) != d) throw ContractError("Mlp: domain lo/hi length mismatch");
    for (int a = 0; a < d; ++a) {
        if (!(domain_.lo[a] < domain_.hi[a])) throw ContractError("Mlp: domain requires lo < hi on every axis");
    }
    if (layers_.empty()) throw ContractError("Mlp: at least one layer required");

    int expected_in = d;
    if (encoding_) {
        if (encoding_->b.cols != d) throw ContractError("Mlp: encoding B column count must equal input_dim");
        if (encoding_->b.rows < 1) throw ContractError("Mlp: encoding B needs at least one row");
        expected_in = encoding_->out_dim();
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const LayerSpec& layer = layers_[i];
        if (layer.w.rows < 1 || layer.w.cols < 1) throw ContractError("Mlp: empty layer weight matrix");
        if (layer.w.cols != expected_in) {
            throw ContractError("Mlp: layer " + std::to_string(i) + " expects input width " +
                                std::to_string(layer.w.cols) + " but receives " + std::to_string(expected_in));
        }
        if (static_cast<int>(layer.bias.size()) != layer.w.rows) {
            throw ContractError("Mlp: layer " + std::to_string(i) + " bias length mismatch");
        }
        expected_in = layer.w.rows;
    }
    if (layers_.back().activation != ActivationKind::identity) {
        throw ContractError("Mlp: output layer activation must be identity");
    }
    if (output_component_ < 0 || output_component_ >= layers_.back().out_dim()) {
        throw ContractError("Mlp: output_component out of range");
    }
    for (std::size_t i = 0; i < bound_.size(); ++i) {
        const auto& [axis, value] = bound_[i];
        if (axis < 0 || axis >= d) throw ContractError("Mlp: bound axis out of range");
        if (i > 0 && bound_[i - 1].first >= axis) throw ContractError("Mlp: bound axes must be strictly ascending");
        if (value < domain_.lo[axis] || value > domain_.hi[axis]) {
            throw ContractError("Mlp: bound value outside domain");
        }
    }
}

long Mlp::neuron_count() const {
    long n = 0;
    for (int i = 0; i + 1 < static_cast<int>(layers_.size()); ++i) n += layers_[i].out_dim();
    return n;
}

std::vector<int> Mlp::hidden_widths() const {
    std::vector<int> w;
    for (int i = 0; i + 1 < static_cast<int>(layers_.size()); ++i) w.push_back(layers_[i].out_dim());
    return w;
}

int Mlp::max_hidden_width() const {
    int w = 0;
    for (int i = 0; i + 1 < static_cast<int>(layers_.size()); ++i) w = std::max(w, layers_[i].out_dim());
    return w;
}

DomainBox Mlp::free_domain() const {
    DomainBox box;
    std::size_t b = 0;
    for (int a = 0; a < input_dim(); ++a) {
        if (b < bound_.size() && bound_[b].first == a) {
            ++b;
            continue;
        }
        box.lo.push_back(domain_.lo[a]);
        box.hi.push_back(domain_.hi[a]);
    }
    return box;
}

Mlp Mlp::restrict_axis(int axis, double value) const {
    if (axis < 0 || axis >= input_dim()) throw ContractError("restrict_axis: axis out of range");
    if (value < domain_.lo[axis] || value > domain_.hi[axis]) {
        throw ContractError("restrict_axis: value outside domain");
    }
    Mlp out = *this;
    for (const auto& [a, v] : out.bound_) {
        if (a == axis) throw ContractError("restrict_axis: axis already bound");
    }
    out.bound_.emplace_back(axis, value);
    std::sort(out.bound_.begin(), out.bound_.end());
    if (out.free_dim() < 1) throw ContractError("restrict_axis: no free axes left");
    return out;
}

Mlp Mlp::with_output_component(int component) const {
    Mlp out = *this;
    out.output_component_ = component;
    out.validate();
    return out;
}

Matrix Mlp::expand_points(const Matrix& x) const {
    if (x.cols != free_dim()) throw ContractError("forward: point dimension mismatch");
    if (bound_.empty()) return x;
    Matrix full(x.rows, input_dim());
    for (int i = 0; i < x.rows; ++i) {
        const double* src = x.row(i);
        double* dst = full.row(i);
        std::size_t b = 0;
        int f = 0;
        for (int a = 0; a < input_dim(); ++a) {
            if (b < bound_.size() && bound_[b].first == a) {
                dst[a] = bound_[b].second;
                ++b;
            } else {
                dst[a] = src[f++];
            }
        }
    }
    return full;
}

Matrix Mlp::run_layers(Matrix cur, std::vector<Matrix>* capture_hidden) const {
    const auto& ops = kernels::ops();
    if (encoding_) {
        Matrix phase = matmul_nt(cur, encoding_->b);  // l x F
        Matrix enc(cur.rows, encoding_->out_dim());
        const int f = encoding_->b.rows;
        for (int i = 0; i < cur.rows; ++i) {
            const double* p = phase.row(i);
            double* e = enc.row(i);
            for (int j = 0; j < f; ++j) {
                e[j] = std::cos(p[j]);
                e[f + j] = std::sin(p[j]);
            }
        }
        cur = std::move(enc);
    }
    const int n_layers = static_cast<int>(layers_.size());
    for (int i = 0; i < n_layers; ++i) {
        const LayerSpec& layer = layers_[i];
        Matrix next = matmul_nt(cur, layer.w);
        ops.add_bias(next.data.data(), layer.bias.data(), next.rows, next.cols);
        apply_activation(layer.activation, next.data.data(), next.size());
        cur = std::move(next);
        if (capture_hidden && i + 1 < n_layers) capture_hidden->push_back(cur);
    }
    return cur;
}

std::vector<double> Mlp::forward(const Matrix& x) const {
    Matrix out = run_layers(expand_points(x), nullptr);
    std::vector<double> col(out.rows);
    for (int i = 0; i < out.rows; ++i) col[i] = out(i, output_component_);
    return col;
}

double Mlp::forward_one(const double* x) const {
    Matrix pt(1, free_dim());
    std::copy(x, x + free_dim(), pt.row(0));
    return forward(pt)[0];
}

ForwardCapture Mlp::forward_capture(const Matrix& x) const {
    ForwardCapture cap;
    cap.hidden.reserve(hidden_layer_count());
    Matrix out = run_layers(expand_points(x), &cap.hidden);
    cap.out.resize(out.rows);
    for (int i = 0; i < out.rows; ++i) cap.out[i] = out(i, output_component_);
    return cap;
}

// ---------------------------------------------------------------------------
// Weight-file format (version 1): self-describing JSON text, decimal numbers,
// no binary blobs. See README for the schema.
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& rows, const char* what) {
    if (!rows.is_array() || rows.empty()) throw ParseError(std::string(what) + ": expected non-empty 2D array");
    const auto& first = rows.front();
    if (!first.is_array() || first.empty()) throw ParseError(std::string(what) + ": expected non-empty 2D array");
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(first.size()));
    for (int i = 0; i < m.rows; ++i) {
        const auto& row = rows.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != m.cols) {
            throw ParseError(std::string(what) + ": ragged rows");
        }
        for (int j = 0; j < m.cols; ++j) {
            if (!row.at(j).is_number()) throw ParseError(std::string(what) + ": non-numeric entry");
            m(i, j) = row.at(j).get<double>();
        }
    }
    return m;
}

std::vector<double> parse_vector(const json& arr, const char* what) {
    if (!arr.is_array() || arr.empty()) throw ParseError(std::string(what) + ": expected non-empty array");
    std::vector<double> v(arr.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!arr.at(i).is_number()) throw ParseError(std::string(what) + ": non-numeric entry");
        v[i] = arr.at(i).get<double>();
    }
    return v;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Mlp parse_inr(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("weight file: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw ParseError("weight file: top level must be an object");
        if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"].get<int>() != 1) {
            throw ParseError("weight file: unsupported or missing version (expected 1)");
        }
        for (const char* field : {"input_dim", "output_dim", "domain", "layers"}) {
            if (!doc.contains(field)) throw ParseError(std::string("weight file: missing field '") + field + "'");
        }
        const int input_dim = doc["input_dim"].get<int>();
        const int output_dim = doc["output_dim"].get<int>();

        DomainBox box;
        box.lo = parse_vector(doc["domain"].at("lo"), "domain.lo");
        box.hi = parse_vector(doc["domain"].at("hi"), "domain.hi");
        if (static_cast<int>(box.lo.size()) != input_dim || static_cast<int>(box.hi.size()) != input_dim) {
            throw ParseError("weight file: domain length disagrees with input_dim");
        }

        std::optional<FourierEncoding> enc;
        if (doc.contains("fourier")) {
            enc = FourierEncoding{parse_matrix(doc["fourier"].at("B"), "fourier.B")};
        }

        std::vector<LayerSpec> layers;
        for (const auto& jl : doc["layers"]) {
            LayerSpec layer;
            layer.w = parse_matrix(jl.at("weight"), "layer.weight");
            layer.bias = parse_vector(jl.at("bias"), "layer.bias");
            const auto act = activation_from_name(jl.at("activation").get<std::string>());
            if (!act) throw ParseError("weight file: unknown activation tag '" +
                                       jl.at("activation").get<std::string>() + "'");
            layer.activation = *act;
            layers.push_back(std::move(layer));
        }
        if (layers.empty()) throw ParseError("weight file: empty layer list");
        if (layers.back().out_dim() != output_dim) {
            throw ParseError("weight file: output_dim disagrees with last layer");
        }
        try {
            return Mlp(std::move(enc), std::move(layers), std::move(box));
        } catch (const ContractError& e) {
            throw ParseError(std::string("weight file: ") + e.what());
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("weight file: ") + e.what());
    }
}

Mlp load_inr(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open weight file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_inr(buf.str());
}

std::string serialize_inr(const Mlp& net) {
    json doc;
    doc["version"] = 1;
    doc["input_dim"] = net.input_dim();
    doc["output_dim"] = net.output_dim();
    doc["domain"]["lo"] = net.domain().lo;
    doc["domain"]["hi"] = net.domain().hi;
    if (net.encoding()) doc["fourier"]["B"] = matrix_to_json(net.encoding()->b);
    json layers = json::array();
    for (const LayerSpec& layer : net.layers()) {
        json jl;
        jl["weight"] = matrix_to_json(layer.w);
        jl["bias"] = layer.bias;
        jl["activation"] = activation_name(layer.activation);
        layers.push_back(std::move(jl));
    }
    doc["layers"] = std::move(layers);
    return doc.dump();
}

void save_inr(const Mlp& net, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write weight file: " + path);
    out << serialize_inr(net) << '\n';
    if (!out) throw IoError("failed writing weight file: " + path);
}

Mlp rebuild_pruned(const Mlp& net, const std::vector<lowrank::InterpDecomp>& decomps) {
    const int hidden = net.hidden_layer_count();
    if (static_cast<int>(decomps.size()) != hidden) {
        throw ContractError("rebuild_pruned: need one decomposition per hidden layer");
    }
    std::vector<LayerSpec> layers = net.layers();
    for (int i = 0; i < hidden; ++i) {
        const lowrank::InterpDecomp& id = decomps[i];
        LayerSpec& layer = layers[i];
        const int m = layer.out_dim();
        if (id.d.cols != m) throw ContractError("rebuild_pruned: interpolation matrix width mismatch");
        Matrix wbar(id.k, layer.in_dim());
        std::vector<double> bbar(id.k);
        for (int t = 0; t < id.k; ++t) {
            const int src = id.index_set[t];
            if (src < 0 || src >= m) throw ContractError("rebuild_pruned: index out of range");
            std::copy(layer.w.row(src), layer.w.row(src) + layer.in_dim(), wbar.row(t));
            bbar[t] = layer.bias[src];
        }
        layer.w = std::move(wbar);
        layer.bias = std::move(bbar);
        layers[i + 1].w = matmul_nt(layers[i + 1].w, id.d);  // U <- U * D^T
    }
    Mlp out(net.encoding(), std::move(layers), net.domain(), net.output_component());
    for (const auto& [axis, value] : net.bound_axes()) out = out.restrict_axis(axis, value);
    return out;
}

}  // namespace inramr
