#include "glyphlab/checkpoint.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

namespace glyphlab::denoiser {

namespace fs = std::filesystem;
using nlohmann::json;

void save_checkpoint(const std::string& dir, const DenoiserParams& params) {
    fs::create_directories(dir);
    json manifest;
    manifest["format"] = "glyphlab-checkpoint";
    manifest["version"] = 1;
    manifest["model"] = {
        {"levels", params.config.levels},       {"widths", params.config.widths},
        {"emb_dim", params.config.emb_dim},     {"time_emb_dim", params.config.time_emb_dim},
        {"in_channels", params.config.in_channels}, {"hint_channels", params.config.hint_channels},
    };
    json tensors = json::array();
    std::ofstream blob(fs::path(dir) / "weights.bin", std::ios::binary);
    if (!blob) throw std::runtime_error("save_checkpoint: cannot write weights.bin in " + dir);
    std::size_t offset = 0;
    std::vector<float> buf;
    for (const auto& [name, entry] : params.tensors) {
        buf.resize(entry.value.numel());
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<float>(entry.value[i]);
        blob.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
        tensors.push_back({{"path", name},
                           {"shape", entry.value.shape},
                           {"dtype", "f32"},
                           {"group", param_group_name(entry.group)},
                           {"frozen", entry.frozen},
                           {"offset", offset}});
        offset += buf.size() * sizeof(float);
    }
    manifest["tensors"] = std::move(tensors);
    std::ofstream mf(fs::path(dir) / "manifest.json");
    if (!mf) throw std::runtime_error("save_checkpoint: cannot write manifest.json in " + dir);
    mf << manifest.dump(2) << "\n";
}

DenoiserParams load_checkpoint(const std::string& dir) {
    std::ifstream mf(fs::path(dir) / "manifest.json");
    if (!mf) throw std::runtime_error("load_checkpoint: cannot open " + dir + "/manifest.json");
    json manifest = json::parse(mf);
    if (manifest.value("format", "") != "glyphlab-checkpoint" || manifest.value("version", 0) != 1) {
        throw std::runtime_error("load_checkpoint: unrecognized checkpoint format in " + dir);
    }
    DenoiserParams params;
    const json& m = manifest.at("model");
    params.config.levels = m.at("levels").get<int>();
    params.config.widths = m.at("widths").get<std::vector<int>>();
    params.config.emb_dim = m.at("emb_dim").get<int>();
    params.config.time_emb_dim = m.at("time_emb_dim").get<int>();
    params.config.in_channels = m.at("in_channels").get<int>();
    params.config.hint_channels = m.at("hint_channels").get<int>();
    params.config.validate();

    std::ifstream blob(fs::path(dir) / "weights.bin", std::ios::binary);
    if (!blob) throw std::runtime_error("load_checkpoint: cannot open " + dir + "/weights.bin");
    for (const json& t : manifest.at("tensors")) {
        ParamEntry entry;
        entry.value = Tensor(t.at("shape").get<std::vector<int>>());
        entry.grad = Tensor(entry.value.shape);
        entry.group = param_group_from_name(t.at("group").get<std::string>());
        entry.frozen = t.at("frozen").get<bool>();
        if (t.value("dtype", "") != "f32") throw std::runtime_error("load_checkpoint: unsupported dtype");
        blob.seekg(static_cast<std::streamoff>(t.at("offset").get<std::size_t>()));
        std::vector<float> buf(entry.value.numel());
        blob.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (!blob) throw std::runtime_error("load_checkpoint: truncated weights.bin in " + dir);
        for (std::size_t i = 0; i < buf.size(); ++i) entry.value[i] = static_cast<double>(buf[i]);
        params.tensors[t.at("path").get<std::string>()] = std::move(entry);
    }
    return params;
}

}  // namespace glyphlab::denoiser
