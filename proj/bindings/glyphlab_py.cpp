#include "glyphlab/checkpoint.hpp"
#include "glyphlab/dataset.hpp"
#include "glyphlab/guidance.hpp"
#include "glyphlab/metrics.hpp"
#include "glyphlab/model.hpp"
#include "glyphlab/ocr.hpp"
#include "glyphlab/parallel.hpp"
#include "glyphlab/sampler.hpp"
#include "glyphlab/schedule.hpp"
#include "glyphlab/synth.hpp"
#include "glyphlab/train.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace glyphlab;

namespace {

// HxWx3 float64 array in [0,1] <-> Image.
Image image_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3) throw std::invalid_argument("expected an HxWx3 array");
    Image img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::memcpy(img.pixels.data(), arr.data(), img.pixels.size() * sizeof(double));
    return img;
}

py::array_t<double> image_to_array(const Image& img) {
    py::array_t<double> arr({img.height, img.width, 3});
    std::memcpy(arr.mutable_data(), img.pixels.data(), img.pixels.size() * sizeof(double));
    return arr;
}

Tensor tensor_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    std::vector<int> shape;
    for (py::ssize_t i = 0; i < arr.ndim(); ++i) shape.push_back(static_cast<int>(arr.shape(i)));
    Tensor t(shape);
    std::memcpy(t.ptr(), arr.data(), t.numel() * sizeof(double));
    return t;
}

py::array_t<double> tensor_to_array(const Tensor& t) {
    std::vector<py::ssize_t> shape(t.shape.begin(), t.shape.end());
    py::array_t<double> arr(shape);
    std::memcpy(arr.mutable_data(), t.ptr(), t.numel() * sizeof(double));
    return arr;
}

py::array_t<double> vector_to_array(const std::vector<double>& v) {
    py::array_t<double> arr(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::memcpy(arr.mutable_data(), v.data(), v.size() * sizeof(double));
    return arr;
}

guidance::NormalizedBox box_from_tuple(const std::array<double, 4>& b) { return {b[0], b[1], b[2], b[3]}; }

std::vector<evaluation::DetectedWord> words_from_py(
    const std::vector<std::pair<std::string, std::array<double, 4>>>& in) {
    std::vector<evaluation::DetectedWord> out;
    for (const auto& [text, box] : in) out.push_back({text, box_from_tuple(box)});
    return out;
}

py::list words_to_py(const std::vector<evaluation::DetectedWord>& words) {
    py::list out;
    for (const auto& w : words) {
        out.append(py::make_tuple(w.text, py::make_tuple(w.box.x0, w.box.y0, w.box.x1, w.box.y1)));
    }
    return out;
}

guidance::PromptBundle bundle_from_cues(const std::string& caption,
                                        const std::vector<std::pair<std::string, std::array<double, 4>>>& cues) {
    std::vector<std::pair<std::string, guidance::NormalizedBox>> boxes;
    for (const auto& [text, box] : cues) boxes.emplace_back(text, box_from_tuple(box));
    return guidance::build_prompt_bundle(caption, boxes, guidance::guide_prompt_pos_hq());
}

}  // namespace

PYBIND11_MODULE(_glyphlab, m) {
    m.doc() = "glyphlab: text-guided diffusion super-resolution lab";

    // ----- diffusion core -----
    py::class_<diffusion::NoiseSchedule>(m, "NoiseSchedule")
        .def_readonly("T", &diffusion::NoiseSchedule::T)
        .def_readonly("betas", &diffusion::NoiseSchedule::betas)
        .def_readonly("alphas_bar", &diffusion::NoiseSchedule::alphas_bar)
        .def_readonly("sigmas", &diffusion::NoiseSchedule::sigmas);

    m.def("build_noise_schedule", &diffusion::build_noise_schedule, py::arg("T"), py::arg("beta_start"),
          py::arg("beta_end"));

    m.def(
        "forward_noise",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z0, int t,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& eps,
           const diffusion::NoiseSchedule& sched) {
            return tensor_to_array(diffusion::forward_noise(tensor_from_array(z0), t, tensor_from_array(eps), sched));
        },
        py::arg("z0"), py::arg("t"), py::arg("eps"), py::arg("sched"));

    m.def("karras_sigma_ladder", &diffusion::karras_sigma_ladder, py::arg("num_steps"), py::arg("sigma_min"),
          py::arg("sigma_max"), py::arg("rho"));

    // ----- guidance -----
    py::class_<guidance::GuidanceSchedule>(m, "GuidanceSchedule")
        .def_static("pingpong", &guidance::GuidanceSchedule::pingpong, py::arg("tau") = 1, py::arg("t0") = 0)
        .def_static("constant", &guidance::GuidanceSchedule::constant, py::arg("lambda_value"))
        .def_static("ramp", &guidance::GuidanceSchedule::ramp, py::arg("sigma_max"))
        .def("describe", &guidance::GuidanceSchedule::describe);

    m.def("lambda_at", &guidance::lambda_at, py::arg("schedule"), py::arg("t"), py::arg("sigma_t") = 1.0);

    m.def("encode_text",
          [](const std::string& s) { return vector_to_array(guidance::encode_text(s).v); });

    m.def(
        "fuse_embeddings",
        [](const std::vector<double>& e_txt, const std::vector<double>& e_img, double lambda_t) {
            const guidance::Embedding fused = guidance::fuse_embeddings(
                guidance::Embedding(std::vector<double>(e_txt)), guidance::Embedding(std::vector<double>(e_img)),
                lambda_t);
            return vector_to_array(fused.v);
        },
        py::arg("e_txt"), py::arg("e_img"), py::arg("lambda_t"));

    m.def("verbalize_position",
          [](const std::array<double, 4>& box) { return guidance::verbalize_position(box_from_tuple(box)); });
    m.def("render_cue_sentence", &guidance::render_cue_sentence, py::arg("text"), py::arg("pos"));
    m.def("guide_prompts", []() {
        return py::dict(py::arg("pos_hq") = guidance::guide_prompt_pos_hq(),
                        py::arg("neg_hq") = guidance::guide_prompt_neg_hq(),
                        py::arg("pos_lq") = guidance::guide_prompt_pos_lq(),
                        py::arg("neg_lq") = guidance::guide_prompt_neg_lq());
    });

    // ----- metrics & OCR -----
    m.def("edit_distance", &evaluation::edit_distance);
    m.def(
        "word_f1",
        [](const std::vector<std::pair<std::string, std::array<double, 4>>>& pred,
           const std::vector<std::pair<std::string, std::array<double, 4>>>& gt) {
            const auto r = evaluation::word_f1(words_from_py(pred), words_from_py(gt));
            return py::make_tuple(r.precision, r.recall, r.f1);
        },
        py::arg("pred"), py::arg("gt"));
    m.def(
        "char_accuracy",
        [](const std::vector<std::pair<std::string, std::array<double, 4>>>& pred,
           const std::vector<std::pair<std::string, std::array<double, 4>>>& gt) {
            return evaluation::char_accuracy(words_from_py(pred), words_from_py(gt));
        },
        py::arg("pred"), py::arg("gt"));
    m.def("psnr", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                     const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
        return evaluation::psnr(image_from_array(a), image_from_array(b));
    });
    m.def("ssim", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                     const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
        return evaluation::ssim(image_from_array(a), image_from_array(b));
    });
    m.def("sharpness", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
        return evaluation::sharpness(image_from_array(a));
    });
    m.def(
        "ocr_oracle",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& image, double threshold) {
            evaluation::OcrConfig cfg;
            cfg.ncc_threshold = threshold;
            return words_to_py(evaluation::ocr_oracle(image_from_array(image), cfg));
        },
        py::arg("image"), py::arg("ncc_threshold") = 0.8);

    // ----- corpus -----
    m.def(
        "generate_corpus",
        [](const std::string& out_dir, int num_scenes, std::uint64_t seed, int min_words, int max_words,
           int downsample_factor) {
            corpus::CorpusGenConfig gen;
            gen.num_scenes = num_scenes;
            gen.seed = seed;
            gen.min_words = min_words;
            gen.max_words = max_words;
            gen.degradation.downsample_factor = downsample_factor;
            gen.validate();
            std::vector<corpus::CorpusSample> samples(static_cast<std::size_t>(num_scenes) * 4);
            parallel_for(static_cast<std::size_t>(num_scenes), [&](std::size_t i) {
                char id[16];
                std::snprintf(id, sizeof(id), "s%06zu", i);
                const corpus::SceneSpec spec = corpus::sample_scene_spec(gen, mix_seed(seed, i));
                auto quad = corpus::synthesize_quadrants(spec, gen.degradation, id);
                for (int q = 0; q < 4; ++q) samples[i * 4 + q] = std::move(quad[q]);
            });
            return corpus::write_dataset(samples, out_dir);
        },
        py::arg("out_dir"), py::arg("num_scenes"), py::arg("seed") = 0, py::arg("min_words") = 1,
        py::arg("max_words") = 2, py::arg("downsample_factor") = 4);

    // ----- model & sampler -----
    py::class_<denoiser::DenoiserParams>(m, "Model")
        .def_static("load", &denoiser::load_checkpoint, py::arg("checkpoint_dir"))
        .def("num_scalars", &denoiser::DenoiserParams::num_scalars, py::arg("trainable_only") = false)
        .def(
            "super_resolve",
            [](const denoiser::DenoiserParams& model,
               const py::array_t<double, py::array::c_style | py::array::forcecast>& lr_image,
               const std::vector<std::pair<std::string, std::array<double, 4>>>& cues, const std::string& caption,
               int factor, int num_steps, double omega, std::uint64_t seed, const std::string& schedule, int tau,
               double lambda_value, double s_ctrl) {
                const Image lr = image_from_array(lr_image);
                const Image up = resize_bicubic(lr, lr.width * factor, lr.height * factor);
                guidance::PromptBundle bundle = bundle_from_cues(caption, cues);
                diffusion::SamplerConfig cfg;
                cfg.num_steps = num_steps;
                cfg.omega = omega;
                cfg.seed = seed;
                guidance::GuidanceSchedule gsched = guidance::GuidanceSchedule::pingpong(tau);
                if (schedule == "constant") gsched = guidance::GuidanceSchedule::constant(lambda_value);
                if (schedule == "ramp") gsched = guidance::GuidanceSchedule::ramp(cfg.sigma_max);
                const Tensor out = diffusion::run_sampler(model, bundle, image_to_latent(up), cfg, gsched, s_ctrl);
                return image_to_array(latent_to_image(out));
            },
            py::arg("lr_image"), py::arg("cues") = std::vector<std::pair<std::string, std::array<double, 4>>>{},
            py::arg("caption") = "a sign with printed text", py::arg("factor") = 4, py::arg("num_steps") = 50,
            py::arg("omega") = 2.0, py::arg("seed") = 0, py::arg("schedule") = "pingpong", py::arg("tau") = 1,
            py::arg("lambda_value") = 0.5, py::arg("s_ctrl") = 1.0);

    m.def(
        "train",
        [](const std::string& dataset_dir, const std::string& out_dir, int phase_a_steps, int phase_b_steps,
           int batch_size, double lr, std::uint64_t seed, const std::vector<int>& widths) {
            const auto dataset = corpus::read_dataset(dataset_dir);
            training::TrainConfig cfg;
            cfg.phase_a_steps = phase_a_steps;
            cfg.phase_b_steps = phase_b_steps;
            cfg.batch_size = batch_size;
            cfg.lr = lr;
            cfg.seed = seed;
            denoiser::ModelConfig mc;
            mc.levels = static_cast<int>(widths.size());
            mc.widths = widths;
            const auto result = training::train_loop(dataset, cfg, mc, out_dir);
            return result.checkpoint_path;
        },
        py::arg("dataset_dir"), py::arg("out_dir"), py::arg("phase_a_steps") = 100, py::arg("phase_b_steps") = 100,
        py::arg("batch_size") = 4, py::arg("lr") = 2e-4, py::arg("seed") = 0,
        py::arg("widths") = std::vector<int>{8, 16, 32});

    m.attr("ENCODER_DIM") = guidance::kEncoderDim;
}
