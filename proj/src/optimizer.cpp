#include "glyphlab/optimizer.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace glyphlab::training {

OptState init_opt_state(const denoiser::DenoiserParams& params) {
    OptState opt;
    for (const auto& [name, entry] : params.tensors) {
        if (entry.frozen) continue;
        opt.moments[name] = {Tensor(entry.value.shape), Tensor(entry.value.shape)};
    }
    return opt;
}

void adamw_update(denoiser::DenoiserParams& params, OptState& opt, const OptConfig& cfg) {
    ++opt.step;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(opt.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(opt.step));
    for (auto& [name, entry] : params.tensors) {
        if (entry.frozen) continue;
        auto it = opt.moments.find(name);
        if (it == opt.moments.end()) {
            throw std::logic_error("adamw_update: no optimizer state for trainable parameter " + name);
        }
        Tensor& m = it->second.m;
        Tensor& v = it->second.v;
        for (std::size_t i = 0; i < entry.value.numel(); ++i) {
            const double g = entry.grad[i];
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            entry.value[i] -= cfg.lr * (mhat / (std::sqrt(vhat) + cfg.eps) + cfg.weight_decay * entry.value[i]);
        }
    }
}

void save_opt_state(const std::string& path, const OptState& opt) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_opt_state: cannot write " + path);
    const std::uint64_t n = opt.moments.size();
    f.write(reinterpret_cast<const char*>(&opt.step), sizeof(opt.step));
    f.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (const auto& [name, mom] : opt.moments) {
        const std::uint64_t len = name.size();
        f.write(reinterpret_cast<const char*>(&len), sizeof(len));
        f.write(name.data(), static_cast<std::streamsize>(len));
        const std::uint64_t count = mom.m.numel();
        f.write(reinterpret_cast<const char*>(&count), sizeof(count));
        f.write(reinterpret_cast<const char*>(mom.m.ptr()), static_cast<std::streamsize>(count * sizeof(double)));
        f.write(reinterpret_cast<const char*>(mom.v.ptr()), static_cast<std::streamsize>(count * sizeof(double)));
    }
}

OptState load_opt_state(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_opt_state: cannot open " + path);
    OptState opt;
    std::uint64_t n = 0;
    f.read(reinterpret_cast<char*>(&opt.step), sizeof(opt.step));
    f.read(reinterpret_cast<char*>(&n), sizeof(n));
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t len = 0;
        f.read(reinterpret_cast<char*>(&len), sizeof(len));
        std::string name(len, '\0');
        f.read(name.data(), static_cast<std::streamsize>(len));
        std::uint64_t count = 0;
        f.read(reinterpret_cast<char*>(&count), sizeof(count));
        OptState::Moments mom;
        mom.m = Tensor({static_cast<int>(count)});
        mom.v = Tensor({static_cast<int>(count)});
        f.read(reinterpret_cast<char*>(mom.m.ptr()), static_cast<std::streamsize>(count * sizeof(double)));
        f.read(reinterpret_cast<char*>(mom.v.ptr()), static_cast<std::streamsize>(count * sizeof(double)));
        if (!f) throw std::runtime_error("load_opt_state: truncated file " + path);
        opt.moments[name] = std::move(mom);
    }
    return opt;
}

}  // namespace glyphlab::training
