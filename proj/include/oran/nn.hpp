#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace oran {

// Dense chain: affine layers with tanh hidden activations and an identity
// output layer. Parameters live in one flat buffer, per layer as a row-major
// (out x in) weight block followed by the bias block.
class DenseNet {
 public:
  // widths = [input, hidden..., output]; every width >= 1, at least two
  // entries. Weights start fan-in-scaled uniform, biases zero; bit-identical
  // per seed.
  DenseNet(std::vector<int> widths, uint64_t seed);

  int input_size() const { return widths_.front(); }
  int output_size() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  int layer_count() const { return static_cast<int>(widths_.size()) - 1; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  size_t param_count() const { return params_.size(); }

  // Post-activation values per layer; activations[0] is the input.
  struct Cache {
    std::vector<std::vector<double>> activations;
  };

  std::vector<double> forward(std::span<const double> input, Cache* cache = nullptr) const;

  // Exact reverse-mode gradients of a scalar loss, given dLoss/dOutput.
  // Accumulates into grad (same layout as params). Throws StateError if the
  // cache does not match this net's shapes.
  void backward(const Cache& cache, std::span<const double> output_grad,
                std::span<double> grad) const;

  double weight(int layer, int out, int in) const;
  void set_weight(int layer, int out, int in, double value);
  double bias(int layer, int out) const;
  void set_bias(int layer, int out, double value);

 private:
  size_t weight_offset(int layer) const { return offsets_[static_cast<size_t>(layer)]; }
  size_t bias_offset(int layer) const;

  std::vector<int> widths_;
  std::vector<size_t> offsets_;  // start of each layer's weight block
  std::vector<double> params_;
};

// Bias-corrected adaptive-moment optimizer state for one parameter buffer.
class Adam {
 public:
  Adam(size_t param_count, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double epsilon = 1e-8);

  // One update in place. Throws NumericError on a non-finite gradient; the
  // parameters are left untouched in that case.
  void step(std::span<double> params, std::span<const double> grads);

  long step_count() const { return t_; }
  double learning_rate() const { return lr_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }

  // checkpoint support
  void restore(std::vector<double> m, std::vector<double> v, long t);
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  double epsilon() const { return eps_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

struct FiniteDiffReport {
  bool pass = false;
  double max_rel_error = 0.0;
  size_t worst_param = 0;
};

// Central-difference verification of an analytic gradient over every
// parameter of the net. loss must be a pure function of the parameters.
FiniteDiffReport finite_diff_check(const DenseNet& net,
                                   const std::function<double(const DenseNet&)>& loss,
                                   std::span<const double> analytic_grad, double tolerance,
                                   double step = 1e-5);

}  // namespace oran
