#include "glyphlab/dataset.hpp"

#include "glyphlab/png_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

namespace glyphlab::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

std::string write_dataset(const std::vector<CorpusSample>& samples, const std::string& root) {
    fs::create_directories(fs::path(root) / "images");
    fs::create_directories(fs::path(root) / "lr");
    {
        std::ofstream sv(fs::path(root) / "schema_version");
        if (!sv) throw std::runtime_error("write_dataset: cannot write schema_version in " + root);
        sv << kDatasetSchemaVersion << "\n";
    }
    const std::string manifest_path = (fs::path(root) / "manifest.jsonl").string();
    std::ofstream manifest(manifest_path);
    if (!manifest) throw std::runtime_error("write_dataset: cannot write " + manifest_path);

    for (const CorpusSample& s : samples) {
        const std::string qname = guidance::quadrant_name(s.quadrant);
        const std::string hr_rel = "images/" + s.sample_id + "_" + qname + ".png";
        const std::string lr_rel = "lr/" + s.sample_id + "_" + qname + "_x" + std::to_string(s.scale_factor) + ".png";
        write_png((fs::path(root) / hr_rel).string(), s.hr_image);
        write_png((fs::path(root) / lr_rel).string(), s.lr_image);

        json ann = json::array();
        for (const Annotation& a : s.annotations) {
            ann.push_back({{"text", a.text}, {"box", {a.box.x0, a.box.y0, a.box.x1, a.box.y1}}});
        }
        json cues = json::array();
        for (const guidance::TextCue& c : s.bundle.text_cues) {
            cues.push_back({{"text", c.text}, {"pos", c.pos}});
        }
        const json line = {{"sample_id", s.sample_id},
                           {"quadrant", qname},
                           {"caption", s.bundle.scene_caption},
                           {"guide_prompt", s.bundle.guide_prompt},
                           {"annotations", ann},
                           {"cues", cues},
                           {"hr_path", hr_rel},
                           {"lr_path", lr_rel},
                           {"scale_factor", s.scale_factor}};
        manifest << line.dump() << "\n";
    }
    return manifest_path;
}

std::vector<CorpusSample> read_dataset(const std::string& root) {
    {
        std::ifstream sv(fs::path(root) / "schema_version");
        if (!sv) throw std::runtime_error("read_dataset: missing schema_version in " + root);
        std::string version;
        std::getline(sv, version);
        if (version != kDatasetSchemaVersion) {
            throw std::runtime_error("read_dataset: schema version '" + version + "' does not match expected '" +
                                     kDatasetSchemaVersion + "'");
        }
    }
    std::ifstream manifest(fs::path(root) / "manifest.jsonl");
    if (!manifest) throw std::runtime_error("read_dataset: missing manifest.jsonl in " + root);

    std::vector<CorpusSample> samples;
    std::string line;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        CorpusSample s;
        s.sample_id = j.at("sample_id").get<std::string>();
        s.quadrant = guidance::quadrant_from_name(j.at("quadrant").get<std::string>());
        s.scale_factor = j.at("scale_factor").get<int>();
        for (const json& a : j.at("annotations")) {
            Annotation ann;
            ann.text = a.at("text").get<std::string>();
            const auto& b = a.at("box");
            ann.box = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
            s.annotations.push_back(std::move(ann));
        }
        s.bundle.scene_caption = j.at("caption").get<std::string>();
        s.bundle.guide_prompt = j.at("guide_prompt").get<std::string>();
        s.bundle.quadrant = s.quadrant;
        for (const json& c : j.at("cues")) {
            s.bundle.text_cues.push_back({c.at("text").get<std::string>(), c.at("pos").get<std::string>()});
        }
        s.hr_image = read_png((fs::path(root) / j.at("hr_path").get<std::string>()).string());
        s.lr_image = read_png((fs::path(root) / j.at("lr_path").get<std::string>()).string());
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace glyphlab::corpus
