#pragma once

#include "regpath/core.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string_view>

namespace regpath {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Column order of exported fronts.
inline constexpr std::array<std::string_view, 9> kFrontCsvColumns = {
    "index",     "direction", "f1_train", "g2_scaled",     "l1_unscaled",
    "f1_test",   "acc_train", "acc_test", "grad_evals_cum"};

// Missing optionals are written as empty fields. Doubles use 17
// significant digits so the file reproduces the values exactly.
void write_front_csv(std::ostream& os, const FrontArchive& archive);
void write_front_csv(const std::filesystem::path& path, const FrontArchive& archive);

// Reads a front back (θ is not stored, so points carry empty parameter
// vectors). Throws SchemaError naming missing and unexpected columns.
FrontArchive read_front_csv(std::istream& is);
FrontArchive read_front_csv(const std::filesystem::path& path);

}  // namespace regpath
