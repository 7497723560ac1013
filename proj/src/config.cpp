#include "tsk/config.hpp"

#include <json.hpp>

namespace tsk {

const char* family_name(SketchFamily f) {
    switch (f) {
        case SketchFamily::count_sketch_tensor: return "count_sketch_tensor";
        case SketchFamily::dense_rows: return "dense_rows";
        case SketchFamily::fast_tensor_jl: return "fast_tensor_jl";
        case SketchFamily::recursive: return "recursive";
    }
    return "unknown";
}

SketchFamily family_from_name(const std::string& name) {
    if (name == "count_sketch_tensor") return SketchFamily::count_sketch_tensor;
    if (name == "dense_rows") return SketchFamily::dense_rows;
    if (name == "fast_tensor_jl") return SketchFamily::fast_tensor_jl;
    if (name == "recursive") return SketchFamily::recursive;
    throw ConfigError("unknown sketch family: " + name);
}

const char* entry_kind_name(EntryKind k) {
    return k == EntryKind::rademacher ? "rademacher" : "gaussian";
}

EntryKind entry_kind_from_name(const std::string& name) {
    if (name == "rademacher") return EntryKind::rademacher;
    if (name == "gaussian") return EntryKind::gaussian;
    throw ConfigError("unknown entry kind: " + name);
}

void SketchConfig::validate() const {
    if (factor_dims.empty()) throw ConfigError("factor_dims must have at least one entry");
    for (std::size_t d : factor_dims)
        if (d == 0) throw ConfigError("factor dimensions must be positive");
    if (rows == 0) throw ConfigError("rows must be positive");
    if (!(epsilon_split_scale > 0.0)) throw ConfigError("epsilon_split_scale must be positive");
    (void)input_dim();  // overflow check
}

std::string SketchConfig::to_json_string() const {
    nlohmann::json j;
    j["family"] = family_name(family);
    j["dims"] = factor_dims;
    j["rows"] = rows;
    j["seed"] = seed;
    j["entry_kind"] = entry_kind_name(entry_kind);
    j["epsilon_split_scale"] = epsilon_split_scale;
    return j.dump();
}

SketchConfig SketchConfig::from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SketchConfig cfg;
    cfg.family = family_from_name(j.at("family").get<std::string>());
    cfg.factor_dims = j.at("dims").get<std::vector<std::size_t>>();
    cfg.rows = j.at("rows").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("entry_kind"))
        cfg.entry_kind = entry_kind_from_name(j["entry_kind"].get<std::string>());
    if (j.contains("epsilon_split_scale"))
        cfg.epsilon_split_scale = j["epsilon_split_scale"].get<double>();
    cfg.validate();
    return cfg;
}

std::vector<std::size_t> sample_index_decompose(std::size_t flat,
                                                std::span<const std::size_t> dims) {
    std::size_t total = checked_dim_product(dims);
    if (flat >= total) throw IndexError("sample_index_decompose: flat index out of range");
    std::vector<std::size_t> parts(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        parts[k] = flat % dims[k];
        flat /= dims[k];
    }
    return parts;
}

std::size_t sample_index_recompose(std::span<const std::size_t> parts,
                                   std::span<const std::size_t> dims) {
    if (parts.size() != dims.size()) throw ShapeError("sample_index_recompose: arity mismatch");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (parts[k] >= dims[k]) throw IndexError("sample_index_recompose: index out of range");
        flat = flat * dims[k] + parts[k];
    }
    return flat;
}

}  // namespace tsk
