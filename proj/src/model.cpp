#include "glyphlab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace glyphlab::denoiser {

namespace {

int norm_groups(int channels) {
    for (int g = std::min(8, channels); g >= 1; --g) {
        if (channels % g == 0) return g;
    }
    return 1;
}

std::string lvl(const std::string& stem, int l) { return stem + std::to_string(l); }

}  // namespace

void ModelConfig::validate() const {
    if (levels < 2) throw std::invalid_argument("ModelConfig: need at least 2 levels");
    if (static_cast<int>(widths.size()) != levels) throw std::invalid_argument("ModelConfig: widths size != levels");
    for (int w : widths) {
        if (w < 1) throw std::invalid_argument("ModelConfig: widths must be >= 1");
    }
    if (emb_dim < 1 || time_emb_dim < 2 || time_emb_dim % 2 != 0) {
        throw std::invalid_argument("ModelConfig: emb_dim >= 1 and even time_emb_dim >= 2 required");
    }
    if (in_channels < 1 || hint_channels < 1) throw std::invalid_argument("ModelConfig: bad channel counts");
}

const char* param_group_name(ParamGroup g) {
    switch (g) {
        case ParamGroup::Backbone: return "backbone";
        case ParamGroup::SrBranch: return "sr_branch";
        case ParamGroup::TxtBranch: return "txt_branch";
        case ParamGroup::Projections: return "projections";
    }
    throw std::logic_error("param_group_name: bad enum");
}

ParamGroup param_group_from_name(const std::string& s) {
    if (s == "backbone") return ParamGroup::Backbone;
    if (s == "sr_branch") return ParamGroup::SrBranch;
    if (s == "txt_branch") return ParamGroup::TxtBranch;
    if (s == "projections") return ParamGroup::Projections;
    throw std::invalid_argument("unknown parameter group: " + s);
}

ParamEntry& DenoiserParams::at(const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw std::out_of_range("DenoiserParams: no tensor named " + name);
    return it->second;
}

const ParamEntry& DenoiserParams::at(const std::string& name) const {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw std::out_of_range("DenoiserParams: no tensor named " + name);
    return it->second;
}

void DenoiserParams::zero_grads() {
    for (auto& [name, entry] : tensors) entry.grad.fill(0.0);
}

std::size_t DenoiserParams::num_scalars(bool trainable_only) const {
    std::size_t n = 0;
    for (const auto& [name, entry] : tensors) {
        if (!trainable_only || !entry.frozen) n += entry.value.numel();
    }
    return n;
}

void DenoiserParams::apply_phase_a_freeze() {
    for (auto& [name, entry] : tensors) {
        entry.frozen = !(entry.group == ParamGroup::Backbone || entry.group == ParamGroup::SrBranch);
    }
}

void DenoiserParams::apply_phase_b_freeze() {
    for (auto& [name, entry] : tensors) {
        entry.frozen = !(entry.group == ParamGroup::TxtBranch || entry.group == ParamGroup::Projections);
    }
}

namespace {

struct Initializer {
    DenoiserParams& p;
    Rng& rng;
    ParamGroup group;

    void conv(const std::string& name, int co, int ci, int k, bool zero = false, double custom_std = -1.0) {
        ParamEntry w;
        w.value = Tensor({co, ci, k, k});
        if (!zero) {
            const double std = custom_std > 0.0 ? custom_std : std::sqrt(2.0 / (static_cast<double>(ci) * k * k));
            for (double& v : w.value.data) v = std * rng.normal();
        }
        w.grad = Tensor(w.value.shape);
        w.group = group;
        p.tensors[name + ".w"] = std::move(w);

        ParamEntry b;
        b.value = Tensor({co});
        b.grad = Tensor(b.value.shape);
        b.group = group;
        p.tensors[name + ".b"] = std::move(b);
    }

    void norm(const std::string& name, int c) {
        ParamEntry g;
        g.value = Tensor({c}, 1.0);
        g.grad = Tensor(g.value.shape);
        g.group = group;
        p.tensors[name + ".g"] = std::move(g);
        ParamEntry b;
        b.value = Tensor({c});
        b.grad = Tensor(b.value.shape);
        b.group = group;
        p.tensors[name + ".b"] = std::move(b);
    }

    void linear(const std::string& name, int out, int in, double std, bool bias = true) {
        ParamEntry w;
        w.value = Tensor({out, in});
        if (std > 0.0) {
            for (double& v : w.value.data) v = std * rng.normal();
        }
        w.grad = Tensor(w.value.shape);
        w.group = group;
        p.tensors[name + ".w"] = std::move(w);
        if (bias) {
            ParamEntry b;
            b.value = Tensor({out});
            b.grad = Tensor(b.value.shape);
            b.group = group;
            p.tensors[name + ".b"] = std::move(b);
        }
    }

    void resblock(const std::string& prefix, int c_in, int c_out, int ctx_dim) {
        norm(prefix + ".gn1", c_in);
        conv(prefix + ".conv1", c_out, c_in, 3);
        linear(prefix + ".film", 2 * c_out, ctx_dim, 0.5 / std::sqrt(static_cast<double>(ctx_dim)));
        norm(prefix + ".gn2", c_out);
        conv(prefix + ".conv2", c_out, c_out, 3);
        if (c_in != c_out) conv(prefix + ".skip", c_out, c_in, 1);
    }
};

}  // namespace

DenoiserParams init_model_params(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    DenoiserParams p;
    p.config = cfg;
    Rng rng(seed);
    const int L = cfg.levels;
    const auto& w = cfg.widths;

    {
        Initializer init{p, rng, ParamGroup::Backbone};
        init.conv("backbone.stem", w[0], cfg.in_channels, 3);
        for (int l = 0; l < L; ++l) {
            init.resblock(lvl("backbone.enc", l) + ".rb0", w[l], w[l], cfg.ctx_dim());
            init.resblock(lvl("backbone.enc", l) + ".rb1", w[l], w[l], cfg.ctx_dim());
            if (l + 1 < L) init.conv(lvl("backbone.down", l), w[l + 1], w[l], 3);
        }
        init.resblock("backbone.mid.rb0", w[L - 1], w[L - 1], cfg.ctx_dim());
        init.norm("backbone.mid.attn.gn", w[L - 1]);
        // q/k/v as 1x1 convs, zero-init output projection.
        const double attn_std = 1.0 / std::sqrt(static_cast<double>(w[L - 1]));
        init.conv("backbone.mid.attn.q", w[L - 1], w[L - 1], 1, false, attn_std);
        init.conv("backbone.mid.attn.k", w[L - 1], w[L - 1], 1, false, attn_std);
        init.conv("backbone.mid.attn.v", w[L - 1], w[L - 1], 1, false, attn_std);
        init.conv("backbone.mid.attn.o", w[L - 1], w[L - 1], 1, /*zero=*/true);
        init.resblock("backbone.mid.rb1", w[L - 1], w[L - 1], cfg.ctx_dim());
        for (int l = L - 1; l >= 0; --l) {
            init.resblock(lvl("backbone.dec", l) + ".rb0", 2 * w[l], w[l], cfg.ctx_dim());
            init.resblock(lvl("backbone.dec", l) + ".rb1", w[l], w[l], cfg.ctx_dim());
            if (l > 0) init.conv(lvl("backbone.up", l), w[l - 1], w[l], 3);
        }
        init.norm("backbone.head.gn", w[0]);
        init.conv("backbone.head.conv", cfg.in_channels, w[0], 3, /*zero=*/true);
    }

    for (Branch br : {Branch::Sr, Branch::Txt}) {
        const std::string prefix = br == Branch::Sr ? "sr_branch" : "txt_branch";
        Initializer init{p, rng, br == Branch::Sr ? ParamGroup::SrBranch : ParamGroup::TxtBranch};
        init.conv(prefix + ".stem", w[0], cfg.in_channels + cfg.hint_channels, 3);
        for (int l = 0; l < L; ++l) {
            init.resblock(prefix + ".enc" + std::to_string(l) + ".rb0", w[l], w[l], guidance::kEncoderDim);
            init.resblock(prefix + ".enc" + std::to_string(l) + ".rb1", w[l], w[l], guidance::kEncoderDim);
            if (l + 1 < L) init.conv(prefix + ".down" + std::to_string(l), w[l + 1], w[l], 3);
            init.conv(prefix + ".proj" + std::to_string(l), w[l], w[l], 1, /*zero=*/true);
        }
    }

    {
        Initializer init{p, rng, ParamGroup::Projections};
        const double std = 1.0 / std::sqrt(static_cast<double>(guidance::kEncoderDim));
        init.linear("proj.img", cfg.emb_dim, guidance::kEncoderDim, std, /*bias=*/false);
        init.linear("proj.txt", cfg.emb_dim, guidance::kEncoderDim, std, /*bias=*/false);
    }

    p.apply_phase_b_freeze();
    return p;
}

ControlResiduals mix_control_residuals(const ControlResiduals& r_sr, const ControlResiduals& r_txt, double lambda_t,
                                       double s_ctrl) {
    if (r_sr.levels.size() != r_txt.levels.size()) {
        throw std::invalid_argument("mix_control_residuals: level count mismatch");
    }
    if (lambda_t < 0.0 || lambda_t > 1.0) throw std::invalid_argument("mix_control_residuals: lambda_t must be in [0,1]");
    if (!(s_ctrl > 0.0)) throw std::invalid_argument("mix_control_residuals: s_ctrl must be > 0");
    ControlResiduals out;
    out.levels.reserve(r_sr.levels.size());
    for (std::size_t l = 0; l < r_sr.levels.size(); ++l) {
        require_same_shape(r_sr.levels[l], r_txt.levels[l], "mix_control_residuals");
        Tensor t(r_sr.levels[l].shape);
        for (std::size_t i = 0; i < t.numel(); ++i) {
            t[i] = s_ctrl * ((1.0 - lambda_t) * r_txt.levels[l][i] + lambda_t * r_sr.levels[l][i]);
        }
        out.levels.push_back(std::move(t));
    }
    return out;
}

Tensor time_embedding(double sigma, int dim) {
    Tensor emb({dim});
    const double v = std::log(std::max(sigma, 1e-8));
    const int half = dim / 2;
    for (int j = 0; j < half; ++j) {
        const double freq = std::exp(-std::log(10000.0) * static_cast<double>(j) / half);
        emb[j] = std::sin(v * freq);
        emb[half + j] = std::cos(v * freq);
    }
    return emb;
}

NodePtr GraphBuilder::param(const std::string& name) {
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    const ParamEntry& entry = params.at(name);
    NodePtr n = tape.leaf(entry.value, train && !entry.frozen);
    cache[name] = n;
    return n;
}

namespace {

NodePtr resblock_graph(GraphBuilder& gb, const std::string& prefix, const NodePtr& x, const NodePtr& ctx) {
    Tape& t = gb.tape;
    const int c_in = x->value.dim(0);
    NodePtr h = t.group_norm(x, gb.param(prefix + ".gn1.g"), gb.param(prefix + ".gn1.b"), norm_groups(c_in));
    h = t.silu(h);
    h = t.conv2d(h, gb.param(prefix + ".conv1.w"), gb.param(prefix + ".conv1.b"));
    const int c_out = h->value.dim(0);
    NodePtr film = t.linear(gb.param(prefix + ".film.w"), gb.param(prefix + ".film.b"), ctx);
    NodePtr h2 = t.group_norm(h, gb.param(prefix + ".gn2.g"), gb.param(prefix + ".gn2.b"), norm_groups(c_out));
    h2 = t.film(h2, t.slice_vec(film, 0, c_out), t.slice_vec(film, c_out, c_out));
    h2 = t.silu(h2);
    h2 = t.conv2d(h2, gb.param(prefix + ".conv2.w"), gb.param(prefix + ".conv2.b"));
    NodePtr skip = x;
    if (c_in != c_out) {
        skip = t.conv2d(x, gb.param(prefix + ".skip.w"), gb.param(prefix + ".skip.b"));
    }
    return t.add(h2, skip);
}

NodePtr attention_graph(GraphBuilder& gb, const std::string& prefix, const NodePtr& x) {
    Tape& t = gb.tape;
    const int c = x->value.dim(0);
    NodePtr h = t.group_norm(x, gb.param(prefix + ".gn.g"), gb.param(prefix + ".gn.b"), norm_groups(c));
    NodePtr q = t.conv2d(h, gb.param(prefix + ".q.w"), gb.param(prefix + ".q.b"));
    NodePtr k = t.conv2d(h, gb.param(prefix + ".k.w"), gb.param(prefix + ".k.b"));
    NodePtr v = t.conv2d(h, gb.param(prefix + ".v.w"), gb.param(prefix + ".v.b"));
    NodePtr attn = t.attention(q, k, v);
    attn = t.conv2d(attn, gb.param(prefix + ".o.w"), gb.param(prefix + ".o.b"));
    return t.add(x, attn);
}

}  // namespace

NodePtr backbone_graph(GraphBuilder& gb, const NodePtr& z, const NodePtr& ctx,
                       const std::vector<NodePtr>* residuals) {
    Tape& t = gb.tape;
    const ModelConfig& cfg = gb.params.config;
    const int L = cfg.levels;
    if (residuals && static_cast<int>(residuals->size()) != L) {
        throw std::invalid_argument("backbone_graph: residual count must equal levels");
    }

    NodePtr h = t.conv2d(z, gb.param("backbone.stem.w"), gb.param("backbone.stem.b"));
    std::vector<NodePtr> skips(L);
    for (int l = 0; l < L; ++l) {
        h = resblock_graph(gb, lvl("backbone.enc", l) + ".rb0", h, ctx);
        h = resblock_graph(gb, lvl("backbone.enc", l) + ".rb1", h, ctx);
        skips[l] = h;
        if (l + 1 < L) {
            h = t.conv2d(h, gb.param(lvl("backbone.down", l) + ".w"), gb.param(lvl("backbone.down", l) + ".b"), 2);
        }
    }
    h = resblock_graph(gb, "backbone.mid.rb0", h, ctx);
    h = attention_graph(gb, "backbone.mid.attn", h);
    h = resblock_graph(gb, "backbone.mid.rb1", h, ctx);
    for (int l = L - 1; l >= 0; --l) {
        if (residuals) h = t.add(h, (*residuals)[l]);
        h = t.concat_ch(h, skips[l]);
        h = resblock_graph(gb, lvl("backbone.dec", l) + ".rb0", h, ctx);
        h = resblock_graph(gb, lvl("backbone.dec", l) + ".rb1", h, ctx);
        if (l > 0) {
            h = t.upsample_nearest2x(h);
            h = t.conv2d(h, gb.param(lvl("backbone.up", l) + ".w"), gb.param(lvl("backbone.up", l) + ".b"));
        }
    }
    h = t.group_norm(h, gb.param("backbone.head.gn.g"), gb.param("backbone.head.gn.b"), norm_groups(cfg.widths[0]));
    h = t.silu(h);
    return t.conv2d(h, gb.param("backbone.head.conv.w"), gb.param("backbone.head.conv.b"));
}

std::vector<NodePtr> branch_graph(GraphBuilder& gb, Branch branch, const NodePtr& z, const NodePtr& hint,
                                  const NodePtr& cond) {
    Tape& t = gb.tape;
    const ModelConfig& cfg = gb.params.config;
    const std::string prefix = branch == Branch::Sr ? "sr_branch" : "txt_branch";
    const int L = cfg.levels;

    NodePtr h = t.concat_ch(z, hint);
    h = t.conv2d(h, gb.param(prefix + ".stem.w"), gb.param(prefix + ".stem.b"));
    std::vector<NodePtr> residuals(L);
    for (int l = 0; l < L; ++l) {
        const std::string enc = prefix + ".enc" + std::to_string(l);
        h = resblock_graph(gb, enc + ".rb0", h, cond);
        h = resblock_graph(gb, enc + ".rb1", h, cond);
        const std::string proj = prefix + ".proj" + std::to_string(l);
        residuals[l] = t.conv2d(h, gb.param(proj + ".w"), gb.param(proj + ".b"));
        if (l + 1 < L) {
            const std::string down = prefix + ".down" + std::to_string(l);
            h = t.conv2d(h, gb.param(down + ".w"), gb.param(down + ".b"), 2);
        }
    }
    return residuals;
}

namespace {

void check_latent(const ModelConfig& cfg, const Tensor& z) {
    if (z.rank() != 3 || z.dim(0) != cfg.in_channels) {
        throw std::invalid_argument("denoiser: latent must be [in_channels,H,W]");
    }
    const int div = 1 << (cfg.levels - 1);
    if (z.dim(1) % div != 0 || z.dim(2) % div != 0) {
        throw std::invalid_argument("denoiser: spatial dims must be divisible by 2^(levels-1)");
    }
}

Tensor embedding_tensor(const guidance::Embedding& e) {
    Tensor t({e.dim()});
    for (int i = 0; i < e.dim(); ++i) t[i] = e.v[i];
    return t;
}

}  // namespace

Tensor denoise_predict(const DenoiserParams& params, const Tensor& z_t, double sigma,
                       const guidance::Embedding& cond, const ControlResiduals* control) {
    check_latent(params.config, z_t);
    if (cond.dim() != params.config.emb_dim) {
        throw std::invalid_argument("denoise_predict: cond must have emb_dim entries");
    }
    Tape tape;
    GraphBuilder gb(tape, params, /*train_mode=*/false);
    NodePtr z = tape.leaf(z_t, false);
    Tensor ctx_v({params.config.ctx_dim()});
    const Tensor t_emb = time_embedding(sigma, params.config.time_emb_dim);
    for (int i = 0; i < params.config.emb_dim; ++i) ctx_v[i] = cond.v[i];
    for (int i = 0; i < params.config.time_emb_dim; ++i) ctx_v[params.config.emb_dim + i] = t_emb[i];
    NodePtr ctx = tape.leaf(ctx_v, false);

    std::vector<NodePtr> res_nodes;
    if (control) {
        if (static_cast<int>(control->levels.size()) != params.config.levels) {
            throw std::invalid_argument("denoise_predict: control residual count must equal levels");
        }
        for (const Tensor& r : control->levels) res_nodes.push_back(tape.leaf(r, false));
    }
    NodePtr eps = backbone_graph(gb, z, ctx, control ? &res_nodes : nullptr);
    return eps->value;
}

ControlResiduals control_branch_forward(const DenoiserParams& params, Branch branch, const Tensor& z_t,
                                        const Tensor& spatial_hint, const guidance::Embedding& cond) {
    check_latent(params.config, z_t);
    if (spatial_hint.rank() != 3 || spatial_hint.dim(0) != params.config.hint_channels ||
        spatial_hint.dim(1) != z_t.dim(1) || spatial_hint.dim(2) != z_t.dim(2)) {
        throw std::invalid_argument("control_branch_forward: hint must be [hint_channels,H,W] matching z_t");
    }
    if (cond.dim() != guidance::kEncoderDim) {
        throw std::invalid_argument("control_branch_forward: cond must be the raw encoder embedding");
    }
    Tape tape;
    GraphBuilder gb(tape, params, /*train_mode=*/false);
    NodePtr z = tape.leaf(z_t, false);
    NodePtr hint = tape.leaf(spatial_hint, false);
    NodePtr cond_node = tape.leaf(embedding_tensor(cond), false);
    std::vector<NodePtr> nodes = branch_graph(gb, branch, z, hint, cond_node);
    ControlResiduals out;
    for (const NodePtr& n : nodes) out.levels.push_back(n->value);
    return out;
}

guidance::Embedding project_embedding(const DenoiserParams& params, Branch branch, const guidance::Embedding& raw) {
    const std::string name = branch == Branch::Sr ? "proj.img.w" : "proj.txt.w";
    const ParamEntry& entry = params.at(name);
    guidance::Projection W(entry.value.dim(0), entry.value.dim(1));
    W.w = entry.value.data;
    return guidance::project(W, raw);
}

NodePtr training_loss_graph(GraphBuilder& gb, const TrainSample& sample) {
    Tape& t = gb.tape;
    const ModelConfig& cfg = gb.params.config;
    check_latent(cfg, sample.z_t);
    require_same_shape(sample.z_t, sample.eps_target, "training_loss_graph");

    NodePtr z = t.leaf(sample.z_t, false);
    const Tensor t_emb = time_embedding(sample.sigma, cfg.time_emb_dim);
    NodePtr time_node = t.leaf(t_emb, false);

    NodePtr cond_fused;
    std::vector<NodePtr> mixed;
    if (sample.drop_conditioning) {
        cond_fused = t.leaf(Tensor({cfg.emb_dim}), false);  // zero embedding, no control
    } else {
        NodePtr e_img_raw = t.leaf(embedding_tensor(sample.e_img_raw), false);
        NodePtr e_img = t.linear(gb.param("proj.img.w"), nullptr, e_img_raw);
        NodePtr sr_hint = t.leaf(sample.sr_hint, false);
        std::vector<NodePtr> r_sr = branch_graph(gb, Branch::Sr, z, sr_hint, e_img_raw);
        mixed.resize(r_sr.size());
        if (sample.zero_text_conditioning) {
            // Zeroed text cues make the (frozen, zero-projected) text branch
            // contribute exactly nothing; only its lambda weight remains.
            cond_fused = t.scale(e_img, sample.lambda);
            for (std::size_t l = 0; l < r_sr.size(); ++l) {
                mixed[l] = t.scale(r_sr[l], sample.lambda * sample.s_ctrl);
            }
        } else {
            NodePtr e_txt_raw = t.leaf(embedding_tensor(sample.e_txt_raw), false);
            NodePtr e_txt = t.linear(gb.param("proj.txt.w"), nullptr, e_txt_raw);
            cond_fused = t.add(t.scale(e_txt, 1.0 - sample.lambda), t.scale(e_img, sample.lambda));
            NodePtr txt_hint = t.leaf(sample.txt_hint, false);
            std::vector<NodePtr> r_txt = branch_graph(gb, Branch::Txt, z, txt_hint, e_txt_raw);
            for (std::size_t l = 0; l < r_sr.size(); ++l) {
                mixed[l] = t.scale(t.add(t.scale(r_txt[l], 1.0 - sample.lambda), t.scale(r_sr[l], sample.lambda)),
                                   sample.s_ctrl);
            }
        }
    }
    NodePtr ctx = t.concat_vec(cond_fused, time_node);
    NodePtr eps = backbone_graph(gb, z, ctx, sample.drop_conditioning ? nullptr : &mixed);
    return t.mse(eps, sample.eps_target);
}

void accumulate_param_grads(GraphBuilder& gb, DenoiserParams& into) {
    for (const auto& [name, node] : gb.cache) {
        if (!node->requires_grad || node->grad.empty()) continue;
        ParamEntry& entry = into.at(name);
        if (entry.grad.shape != entry.value.shape) entry.grad = Tensor(entry.value.shape);
        for (std::size_t i = 0; i < entry.grad.numel(); ++i) entry.grad[i] += node->grad[i];
    }
}

}  // namespace glyphlab::denoiser
