#pragma once

#include "regpath/core.hpp"
#include "regpath/nn.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace regpath {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Dataset {
  RowMatrix features;  // N × d
  std::vector<int> labels;
  std::string name;
  // Empty when raw; "zscore" or "scale255" once normalized.
  std::string normalization_tag;
  int num_classes = 0;
  std::vector<std::string> class_names;

  Index rows() const { return features.rows(); }
  Index dim() const { return features.cols(); }
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

// Iris CSV: 4 numeric columns and a class-name column, optional header.
// Labels follow first-appearance order; features are z-scored per column.
Dataset load_iris(const std::filesystem::path& path);
Dataset load_iris_raw(const std::filesystem::path& path);

// MNIST IDX pair (".gz" suffix means gzip). Pixels are divided by 255.
Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels);

// Column z-score with population standard deviation. Throws if the dataset
// already carries a normalization tag.
void normalize_zscore(Dataset& ds);
void normalize_scale255(Dataset& ds);

Dataset concat(const Dataset& a, const Dataset& b);
Dataset subset(const Dataset& ds, std::span<const Index> rows);
// First `count` rows (all rows when count >= N).
Dataset head(const Dataset& ds, Index count);

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

// Row order of one epoch: a permutation seeded by (seed, epoch).
std::vector<Index> epoch_permutation(Index n, std::uint64_t seed, std::uint64_t epoch);

std::vector<std::vector<Index>> batch_indices(Index n, Index batch_size, std::uint64_t seed,
                                              std::uint64_t epoch);

std::vector<Batch> batch_stream(const Dataset& ds, Index batch_size, std::uint64_t seed,
                                std::uint64_t epoch);

Batch gather(const Dataset& ds, std::span<const Index> rows);

// Endless minibatch sampler: walks epochs 0, 1, 2, ... of batch_indices.
class MinibatchSampler final : public BatchSampler {
 public:
  MinibatchSampler(Index n, Index batch_size, std::uint64_t seed);
  BatchSpec next() override;
  bool deterministic() const override { return false; }

 private:
  Index n_;
  Index batch_size_;
  std::uint64_t seed_;
  std::uint64_t epoch_ = 0;
  std::size_t cursor_ = 0;
  std::vector<std::vector<Index>> current_;
};

}  // namespace regpath
