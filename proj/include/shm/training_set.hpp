#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <shm/errors.hpp>
#include <shm/matrix.hpp>

namespace shm {

/// Paired training data: columns of x are the inputs x_i (m×N), columns of y
/// the transformed outputs y_i = f(x_i) (Z×N), d the ±1 labels.
struct TrainingSet {
  Matrix x;
  Matrix y;
  std::vector<int> d;

  TrainingSet() = default;
  TrainingSet(Matrix x_, Matrix y_, std::vector<int> d_)
      : x(std::move(x_)), y(std::move(y_)), d(std::move(d_)) {
    validate();
  }

  std::size_t input_dim() const { return x.rows(); }    // m
  std::size_t output_dim() const { return y.rows(); }   // Z
  std::size_t size() const { return d.size(); }         // N

  void validate() const {
    if (x.cols() != y.cols() || x.cols() != d.size())
      throw ShapeMismatch("x, y and d disagree on the number of examples");
    if (d.size() < 2) throw ShapeMismatch("training set needs at least 2 examples");
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] != 1 && d[i] != -1)
        throw BadLabel("label at example " + std::to_string(i + 1) +
                       " is not -1 or +1");
  }
};

}  // namespace shm
