#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsk/types.hpp"

namespace tsk {

enum class SketchFamily {
    count_sketch_tensor,
    dense_rows,
    fast_tensor_jl,
    recursive,
};

enum class EntryKind {
    rademacher,
    gaussian,
};

const char* family_name(SketchFamily f);
SketchFamily family_from_name(const std::string& name);
const char* entry_kind_name(EntryKind k);
EntryKind entry_kind_from_name(const std::string& name);

/// Immutable description of one sketch instance. Equal configs build
/// bit-identical sketches.
struct SketchConfig {
    SketchFamily family = SketchFamily::dense_rows;
    std::vector<std::size_t> factor_dims;  // d_1..d_c
    std::size_t rows = 1;                  // m
    std::uint64_t seed = 42;
    EntryKind entry_kind = EntryKind::rademacher;  // dense_rows only
    double epsilon_split_scale = 1.0;              // recursive only

    std::size_t order() const { return factor_dims.size(); }
    std::size_t input_dim() const { return checked_dim_product(factor_dims); }

    /// Throws ConfigError on invalid dimensions.
    void validate() const;

    std::string to_json_string() const;
    static SketchConfig from_json_string(const std::string& text);
};

/// Lexicographic decomposition of a flat index, leftmost factor most
/// significant; inverse of sample_index_recompose.
std::vector<std::size_t> sample_index_decompose(std::size_t flat,
                                                std::span<const std::size_t> dims);
std::size_t sample_index_recompose(std::span<const std::size_t> parts,
                                   std::span<const std::size_t> dims);

}  // namespace tsk
