#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "inramr/lowrank.hpp"
#include "inramr/matrix.hpp"

namespace inramr {

enum class ActivationKind { relu, tanh, swish, sine, identity };

const char* activation_name(ActivationKind kind);
std::optional<ActivationKind> activation_from_name(std::string_view name);

double activate_scalar(ActivationKind kind, double x);
/// Derivative with respect to the preactivation. relu uses the subgradient 0
/// at the kink.
double activation_grad(ActivationKind kind, double x);
void apply_activation(ActivationKind kind, double* y, std::size_t n);

/// Axis-aligned input domain. lo < hi per axis; 2 to 4 axes.
struct DomainBox {
    std::vector<double> lo;
    std::vector<double> hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const double* x) const;
};

/// Fixed random-feature first stage: x -> [cos(Bx), sin(Bx)]. B is read from
/// the weight file and never regenerated.
struct FourierEncoding {
    Matrix b;  // num_features x input_dim

    int out_dim() const { return 2 * b.rows; }
};

struct LayerSpec {
    Matrix w;                  // m x n
    std::vector<double> bias;  // m
    ActivationKind activation = ActivationKind::identity;

    int in_dim() const { return w.cols; }
    int out_dim() const { return w.rows; }
};

/// Per-point capture of a forward pass: post-activation matrices for the
/// hidden layers plus the selected output component.
struct ForwardCapture {
    std::vector<Matrix> hidden;
    std::vector<double> out;
};

/// Feed-forward INR. Immutable after construction; forward evaluation is pure
/// and safe to call concurrently on a shared instance.
class Mlp {
public:
    Mlp(std::optional<FourierEncoding> encoding, std::vector<LayerSpec> layers, DomainBox domain,
        int output_component = 0);

    int input_dim() const { return domain_.dim(); }
    int output_dim() const { return layers_.back().out_dim(); }
    int output_component() const { return output_component_; }
    const DomainBox& domain() const { return domain_; }
    const std::vector<LayerSpec>& layers() const { return layers_; }
    const std::optional<FourierEncoding>& encoding() const { return encoding_; }

    int hidden_layer_count() const { return static_cast<int>(layers_.size()) - 1; }
    /// |theta|: total hidden neurons. Encoding and output layer excluded.
    long neuron_count() const;
    std::vector<int> hidden_widths() const;
    int max_hidden_width() const;

    /// Axes pinned to fixed values by restrict_axis, ascending by axis.
    const std::vector<std::pair<int, double>>& bound_axes() const { return bound_; }
    /// Input dimension seen by callers: input_dim() minus bound axes.
    int free_dim() const { return input_dim() - static_cast<int>(bound_.size()); }
    /// Domain over the free axes only.
    DomainBox free_domain() const;
    /// Restriction f(..., axis = value, ...): same weights, one less free axis.
    Mlp restrict_axis(int axis, double value) const;

    /// X: l x free_dim points. Returns the output_component column.
    std::vector<double> forward(const Matrix& x) const;
    double forward_one(const double* x) const;
    ForwardCapture forward_capture(const Matrix& x) const;

    Mlp with_output_component(int component) const;

private:
    void validate() const;
    Matrix expand_points(const Matrix& x) const;
    Matrix run_layers(Matrix cur, std::vector<Matrix>* capture_hidden) const;

    std::optional<FourierEncoding> encoding_;
    std::vector<LayerSpec> layers_;
    DomainBox domain_;
    int output_component_ = 0;
    std::vector<std::pair<int, double>> bound_;
};

Mlp load_inr(const std::string& path);
Mlp parse_inr(const std::string& json_text);
void save_inr(const Mlp& net, const std::string& path);
std::string serialize_inr(const Mlp& net);

/// Apply per-hidden-layer interpolative decompositions: layer i keeps rows
/// index_set_i of its (current) weights and bias, layer i+1's weights are
/// right-multiplied by D_i^T. Applied first hidden layer to last. The input
/// net is untouched.
Mlp rebuild_pruned(const Mlp& net, const std::vector<lowrank::InterpDecomp>& decomps);

}  // namespace inramr
