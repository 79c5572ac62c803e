#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gittins/error.hpp"
#include "gittins/random.hpp"

namespace gittins::deep {

enum class Encoding {
    one_hot,     ///< [onehot(s), onehot(x)], length 2N
    scalar_pair, ///< [(s+1)/N, (x+1)/N], length 2
};

inline std::string to_string(Encoding e) { return e == Encoding::one_hot ? "one_hot" : "scalar_pair"; }

/// Maps a (state, reference state) pair to the network input.
class StateEncoder {
public:
    StateEncoder(std::size_t num_states, Encoding mode) : n_(num_states), mode_(mode)
    {
        detail::require(n_ > 0, "StateEncoder: need at least one state");
    }

    [[nodiscard]] std::size_t num_states() const noexcept { return n_; }
    [[nodiscard]] Encoding mode() const noexcept { return mode_; }
    [[nodiscard]] std::size_t input_dim() const noexcept { return mode_ == Encoding::one_hot ? 2 * n_ : 2; }

    template <class Column>
    void encode(std::size_t s, std::size_t x, Column&& out) const
    {
        detail::require(s < n_ && x < n_, "StateEncoder: state index out of range");
        out.setZero();
        if (mode_ == Encoding::one_hot) {
            out(static_cast<Eigen::Index>(s)) = 1.0;
            out(static_cast<Eigen::Index>(n_ + x)) = 1.0;
        } else {
            out(0) = static_cast<double>(s + 1) / static_cast<double>(n_);
            out(1) = static_cast<double>(x + 1) / static_cast<double>(n_);
        }
    }

    [[nodiscard]] Eigen::VectorXd encode(std::size_t s, std::size_t x) const
    {
        Eigen::VectorXd v(static_cast<Eigen::Index>(input_dim()));
        encode(s, x, v);
        return v;
    }

private:
    std::size_t n_;
    Encoding mode_;
};

/// Fully connected ReLU network with a single linear output.
///
/// All parameters live in one flat buffer, layer by layer: W_l (out x in,
/// column-major) followed by b_l. Optimizers, soft updates, finite-difference
/// checks and serialization all work on that flat view.
class Mlp {
public:
    using Matrix = Eigen::MatrixXd;
    using Vector = Eigen::VectorXd;

    explicit Mlp(std::vector<std::size_t> dims) : dims_(std::move(dims))
    {
        detail::require(dims_.size() >= 2, "Mlp: need input and output dimensions");
        detail::require(dims_.back() == 1, "Mlp: output dimension must be 1");
        std::size_t total = 0;
        for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
            detail::require(dims_[l] > 0 && dims_[l + 1] > 0, "Mlp: zero-width layer");
            offsets_.push_back(total);
            total += dims_[l + 1] * dims_[l] + dims_[l + 1];
        }
        params_.assign(total, 0.0);
    }

    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight and bias.
    static Mlp seeded(std::vector<std::size_t> dims, RandomSource& rng)
    {
        Mlp net(std::move(dims));
        for (std::size_t l = 0; l < net.num_layers(); ++l) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims_[l]));
            auto w = net.weight(l);
            for (Eigen::Index j = 0; j < w.cols(); ++j)
                for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-bound, bound);
            auto b = net.bias(l);
            for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.uniform(-bound, bound);
        }
        return net;
    }

    /// input -> 64 -> 128 -> 64 -> 1
    static std::vector<std::size_t> standard_dims(std::size_t input_dim) { return {input_dim, 64, 128, 64, 1}; }

    [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t num_layers() const noexcept { return dims_.size() - 1; }
    [[nodiscard]] std::size_t input_dim() const noexcept { return dims_.front(); }
    [[nodiscard]] std::size_t size() const noexcept { return params_.size(); }
    [[nodiscard]] std::span<double> values() noexcept { return params_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return params_; }

    [[nodiscard]] Eigen::Map<Matrix> weight(std::size_t l)
    {
        return {params_.data() + offsets_[l], rows(l), cols(l)};
    }
    [[nodiscard]] Eigen::Map<const Matrix> weight(std::size_t l) const
    {
        return {params_.data() + offsets_[l], rows(l), cols(l)};
    }
    [[nodiscard]] Eigen::Map<Vector> bias(std::size_t l) { return {params_.data() + offsets_[l] + rows(l) * cols(l), rows(l)}; }
    [[nodiscard]] Eigen::Map<const Vector> bias(std::size_t l) const { return {params_.data() + offsets_[l] + rows(l) * cols(l), rows(l)}; }

    /// Forward pass on a batch; each column of `inputs` is one example.
    [[nodiscard]] Vector forward(const Matrix& inputs) const
    {
        detail::require(static_cast<std::size_t>(inputs.rows()) == input_dim(), "Mlp::forward: input dimension mismatch");
        Matrix a = inputs;
        for (std::size_t l = 0; l < num_layers(); ++l) {
            Matrix z = weight(l) * a;
            z.colwise() += bias(l);
            if (l + 1 < num_layers()) z = z.cwiseMax(0.0);
            a = std::move(z);
        }
        return a.row(0).transpose();
    }

    [[nodiscard]] double forward_one(const Vector& input) const
    {
        return forward(Matrix(input))(0);
    }

    /// Mean squared error (1/B) sum_b (target_b - output_b)^2 and its gradient,
    /// written into `grad` (same flat layout as the parameters).
    double loss_gradient(const Matrix& inputs, const Vector& targets, std::span<double> grad) const
    {
        const Eigen::Index batch = inputs.cols();
        detail::require(batch > 0, "mlp_gradient: empty batch");
        detail::require(targets.size() == batch, "mlp_gradient: one target per input column expected");
        detail::require(grad.size() == size(), "mlp_gradient: gradient buffer has the wrong size");
        detail::require(static_cast<std::size_t>(inputs.rows()) == input_dim(), "mlp_gradient: input dimension mismatch");

        const std::size_t layers = num_layers();
        std::vector<Matrix> acts;  // acts[l] is the input to layer l
        std::vector<Matrix> pre;   // pre-activations of hidden layers
        acts.reserve(layers);
        pre.reserve(layers);
        acts.push_back(inputs);
        for (std::size_t l = 0; l < layers; ++l) {
            Matrix z = weight(l) * acts.back();
            z.colwise() += bias(l);
            if (l + 1 < layers) {
                acts.push_back(z.cwiseMax(0.0));
                pre.push_back(std::move(z));
            } else {
                acts.push_back(std::move(z));
            }
        }
        const Eigen::RowVectorXd residual = acts.back().row(0) - targets.transpose();
        const double loss = residual.squaredNorm() / static_cast<double>(batch);

        Matrix delta = (2.0 / static_cast<double>(batch)) * residual;
        for (std::size_t l = layers; l-- > 0;) {
            Eigen::Map<Matrix> gw(grad.data() + offsets_[l], rows(l), cols(l));
            Eigen::Map<Vector> gb(grad.data() + offsets_[l] + rows(l) * cols(l), rows(l));
            gw.noalias() = delta * acts[l].transpose();
            gb = delta.rowwise().sum();
            if (l == 0) break;
            Matrix back = weight(l).transpose() * delta;
            delta = back.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
        return loss;
    }

private:
    [[nodiscard]] Eigen::Index rows(std::size_t l) const { return static_cast<Eigen::Index>(dims_[l + 1]); }
    [[nodiscard]] Eigen::Index cols(std::size_t l) const { return static_cast<Eigen::Index>(dims_[l]); }

    std::vector<std::size_t> dims_;
    std::vector<std::size_t> offsets_;
    std::vector<double> params_;
};

/// Q_theta^x(s, continue) for one (state, reference) pair.
inline double mlp_forward(const Mlp& params, const StateEncoder& encoder, std::size_t s, std::size_t x)
{
    detail::require(encoder.input_dim() == params.input_dim(), "mlp_forward: encoder does not match network input");
    return params.forward_one(encoder.encode(s, x));
}

/// Gradient of the batch-mean squared error; returns (loss, gradient).
inline std::pair<double, std::vector<double>> mlp_gradient(const Mlp& params, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets)
{
    std::vector<double> grad(params.size(), 0.0);
    const double loss = params.loss_gradient(inputs, targets, grad);
    return {loss, std::move(grad)};
}

} // namespace gittins::deep
