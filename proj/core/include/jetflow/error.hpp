#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetflow {

/// Base class for all jetflow errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix entry was negative. Indices are 0-based.
class NegativeEntryError : public Error {
 public:
  NegativeEntryError(int row, int col, double value)
      : Error("negative entry " + std::to_string(value) + " at (" +
              std::to_string(row) + "," + std::to_string(col) + ")"),
        row(row), col(col), value(value) {}
  int row;
  int col;
  double value;
};

/// A matrix row did not sum to 1 within tolerance.
class RowSumError : public Error {
 public:
  RowSumError(int row, double deviation)
      : Error("row " + std::to_string(row) + " sums to 1 " +
              (deviation >= 0 ? "+" : "-") + std::to_string(std::abs(deviation))),
        row(row), deviation(deviation) {}
  int row;
  double deviation;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter was outside its documented range.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration was requested beyond its size cap.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling ran out of retries for one step.
class SamplingError : public Error {
 public:
  SamplingError(std::int64_t step, int budget)
      : Error("rejection budget (" + std::to_string(budget) +
              " tries) exhausted at step " + std::to_string(step)),
        step(step), budget(budget) {}
  std::int64_t step;
  int budget;
};

}  // namespace jetflow
