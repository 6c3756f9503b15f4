#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "thermoweld/film.hpp"
#include "thermoweld/rng.hpp"

namespace tw::nn {

constexpr int kNumClasses = 3;
constexpr int kInputHW = 64;

enum class ModelVariant : std::uint8_t { small = 0, medium = 1 };

inline const char* to_string(ModelVariant v) {
    return v == ModelVariant::small ? "small" : "medium";
}

/// 3x3 same-padding convolution weights, [out][in][3][3] + bias[out].
template <typename T>
struct ConvLayer {
    int in_ch = 0, out_ch = 0;
    std::vector<T> w;
    std::vector<T> b;
};

template <typename T>
struct DenseLayer {
    int in_dim = 0, out_dim = 0;
    std::vector<T> w;                    ///< [out][in]
    std::vector<T> b;
};

/// Small feed-forward CNN: N conv(3x3, pad 1)+ReLU+maxpool2 blocks, then
/// dense+ReLU, then a 3-way softmax head. The "medium" variant adds one
/// conv block and widens the hidden dense layer.
template <typename T>
struct Cnn {
    ModelVariant variant = ModelVariant::small;
    bool relu_bypass = false;            ///< test hook: identity activations
    std::vector<ConvLayer<T>> convs;
    std::vector<DenseLayer<T>> fcs;

    static std::vector<int> conv_channels(ModelVariant v) {
        return v == ModelVariant::small ? std::vector<int>{3, 8, 16, 32}
                                        : std::vector<int>{3, 8, 16, 32, 64};
    }
    static int hidden_dim(ModelVariant v) { return v == ModelVariant::small ? 64 : 128; }

    static Cnn he_init(ModelVariant variant, Rng& rng) {
        Cnn m;
        m.variant = variant;
        const std::vector<int> ch = conv_channels(variant);
        int hw = kInputHW;
        for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
            ConvLayer<T> layer;
            layer.in_ch = ch[i];
            layer.out_ch = ch[i + 1];
            layer.w.resize(static_cast<std::size_t>(layer.out_ch) * layer.in_ch * 9);
            layer.b.assign(layer.out_ch, T(0));
            const double std = std::sqrt(2.0 / (layer.in_ch * 9));
            for (auto& v : layer.w) v = static_cast<T>(rng.normal(0.0, std));
            m.convs.push_back(std::move(layer));
            hw /= 2;
        }
        const int flat = hw * hw * ch.back();
        const int hidden = hidden_dim(variant);
        for (auto [in, out] : {std::pair{flat, hidden}, std::pair{hidden, kNumClasses}}) {
            DenseLayer<T> layer;
            layer.in_dim = in;
            layer.out_dim = out;
            layer.w.resize(static_cast<std::size_t>(out) * in);
            layer.b.assign(out, T(0));
            const double std = std::sqrt(2.0 / in);
            for (auto& v : layer.w) v = static_cast<T>(rng.normal(0.0, std));
            m.fcs.push_back(std::move(layer));
        }
        return m;
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& c : convs) n += c.w.size() + c.b.size();
        for (const auto& f : fcs) n += f.w.size() + f.b.size();
        return n;
    }

    template <typename F>
    void for_each_tensor(F&& f) {
        for (auto& c : convs) {
            f(c.w);
            f(c.b);
        }
        for (auto& d : fcs) {
            f(d.w);
            f(d.b);
        }
    }

    template <typename F>
    void for_each_tensor(F&& f) const {
        for (const auto& c : convs) {
            f(c.w);
            f(c.b);
        }
        for (const auto& d : fcs) {
            f(d.w);
            f(d.b);
        }
    }
};

/// One training/inference sample: CHW float image in [0,1] plus label.
struct Sample {
    std::vector<float> chw;              ///< 3 * kInputHW * kInputHW
    int label = 0;
    std::string film_id;
    int frame_index = 0;
};

/// Bilinear resize of an RGB image to the network input, channels scaled
/// to [0,1], CHW layout.
std::vector<float> image_to_input(const Image8& img, int hw = kInputHW);

namespace detail {

template <typename T>
void conv3x3_forward(const ConvLayer<T>& layer, const T* in, int hw, T* out) {
    const std::size_t plane = static_cast<std::size_t>(hw) * hw;
    for (int k = 0; k < layer.out_ch; ++k) {
        T* o = out + plane * k;
        std::fill(o, o + plane, layer.b[k]);
        for (int c = 0; c < layer.in_ch; ++c) {
            const T* src = in + plane * c;
            const T* wk = layer.w.data() + (static_cast<std::size_t>(k) * layer.in_ch + c) * 9;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const T w = wk[(dy + 1) * 3 + (dx + 1)];
                    const int y0 = std::max(0, -dy), y1 = std::min(hw, hw - dy);
                    const int x0 = std::max(0, -dx), x1 = std::min(hw, hw - dx);
                    for (int y = y0; y < y1; ++y) {
                        T* orow = o + static_cast<std::size_t>(y) * hw;
                        const T* irow = src + static_cast<std::size_t>(y + dy) * hw + dx;
                        for (int x = x0; x < x1; ++x) orow[x] += w * irow[x];
                    }
                }
            }
        }
    }
}

/// Gradient w.r.t. the conv input (adjoint of conv3x3_forward).
template <typename T>
void conv3x3_backward_data(const ConvLayer<T>& layer, const T* dout, int hw, T* din) {
    const std::size_t plane = static_cast<std::size_t>(hw) * hw;
    std::fill(din, din + plane * layer.in_ch, T(0));
    for (int k = 0; k < layer.out_ch; ++k) {
        const T* dk = dout + plane * k;
        for (int c = 0; c < layer.in_ch; ++c) {
            T* dst = din + plane * c;
            const T* wk = layer.w.data() + (static_cast<std::size_t>(k) * layer.in_ch + c) * 9;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const T w = wk[(dy + 1) * 3 + (dx + 1)];
                    const int y0 = std::max(0, -dy), y1 = std::min(hw, hw - dy);
                    const int x0 = std::max(0, -dx), x1 = std::min(hw, hw - dx);
                    for (int y = y0; y < y1; ++y) {
                        const T* drow = dk + static_cast<std::size_t>(y) * hw;
                        T* irow = dst + static_cast<std::size_t>(y + dy) * hw + dx;
                        for (int x = x0; x < x1; ++x) irow[x] += w * drow[x];
                    }
                }
            }
        }
    }
}

/// Accumulates weight/bias gradients for one sample.
template <typename T>
void conv3x3_backward_weights(const ConvLayer<T>& layer, const T* in, const T* dout, int hw,
                              T* dw, T* db) {
    const std::size_t plane = static_cast<std::size_t>(hw) * hw;
    for (int k = 0; k < layer.out_ch; ++k) {
        const T* dk = dout + plane * k;
        T acc = 0;
        for (std::size_t i = 0; i < plane; ++i) acc += dk[i];
        db[k] += acc;
        for (int c = 0; c < layer.in_ch; ++c) {
            const T* src = in + plane * c;
            T* wk = dw + (static_cast<std::size_t>(k) * layer.in_ch + c) * 9;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int y0 = std::max(0, -dy), y1 = std::min(hw, hw - dy);
                    const int x0 = std::max(0, -dx), x1 = std::min(hw, hw - dx);
                    T wacc = 0;
                    for (int y = y0; y < y1; ++y) {
                        const T* drow = dk + static_cast<std::size_t>(y) * hw;
                        const T* irow = src + static_cast<std::size_t>(y + dy) * hw + dx;
                        for (int x = x0; x < x1; ++x) wacc += drow[x] * irow[x];
                    }
                    wk[(dy + 1) * 3 + (dx + 1)] += wacc;
                }
            }
        }
    }
}

}  // namespace detail

/// Per-sample activation cache for backprop.
template <typename T>
struct ForwardCache {
    std::vector<std::vector<T>> conv_in;      ///< input of each conv block
    std::vector<std::vector<T>> act;          ///< post-activation, pre-pool
    std::vector<std::vector<int>> pool_src;   ///< argmax source index per pooled cell
    std::vector<std::vector<T>> fc_in;
    std::vector<std::vector<T>> fc_act;       ///< post-activation of hidden dense
    std::vector<T> logits;
    std::vector<T> probs;
};

/// Forward pass for one CHW sample; fills the cache when given.
template <typename T>
std::vector<T> cnn_forward(const Cnn<T>& m, const std::vector<T>& chw,
                           ForwardCache<T>* cache = nullptr) {
    const std::size_t expect = static_cast<std::size_t>(3) * kInputHW * kInputHW;
    if (chw.size() != expect) throw std::invalid_argument("cnn_forward: bad input shape");

    std::vector<T> cur = chw;
    int hw = kInputHW;
    for (std::size_t li = 0; li < m.convs.size(); ++li) {
        const auto& layer = m.convs[li];
        if (cache) cache->conv_in.push_back(cur);
        std::vector<T> conv(static_cast<std::size_t>(layer.out_ch) * hw * hw);
        detail::conv3x3_forward(layer, cur.data(), hw, conv.data());
        if (!m.relu_bypass)
            for (auto& v : conv) v = std::max(v, T(0));
        if (cache) cache->act.push_back(conv);

        const int phw = hw / 2;
        std::vector<T> pooled(static_cast<std::size_t>(layer.out_ch) * phw * phw);
        std::vector<int> src_idx(pooled.size());
        const std::size_t plane = static_cast<std::size_t>(hw) * hw;
        for (int c = 0; c < layer.out_ch; ++c) {
            for (int y = 0; y < phw; ++y) {
                for (int x = 0; x < phw; ++x) {
                    std::size_t best = plane * c + static_cast<std::size_t>(2 * y) * hw + 2 * x;
                    T bv = conv[best];
                    for (int oy = 0; oy < 2; ++oy)
                        for (int ox = 0; ox < 2; ++ox) {
                            const std::size_t idx =
                                plane * c + static_cast<std::size_t>(2 * y + oy) * hw + 2 * x + ox;
                            if (conv[idx] > bv) {
                                bv = conv[idx];
                                best = idx;
                            }
                        }
                    const std::size_t o = (static_cast<std::size_t>(c) * phw + y) * phw + x;
                    pooled[o] = bv;
                    src_idx[o] = static_cast<int>(best);
                }
            }
        }
        if (cache) cache->pool_src.push_back(std::move(src_idx));
        cur = std::move(pooled);
        hw = phw;
    }

    // Hidden dense + activation.
    {
        const auto& fc = m.fcs[0];
        if (cache) cache->fc_in.push_back(cur);
        std::vector<T> out(fc.out_dim);
        for (int o = 0; o < fc.out_dim; ++o) {
            T acc = fc.b[o];
            const T* wr = fc.w.data() + static_cast<std::size_t>(o) * fc.in_dim;
            for (int i = 0; i < fc.in_dim; ++i) acc += wr[i] * cur[i];
            out[o] = m.relu_bypass ? acc : std::max(acc, T(0));
        }
        if (cache) cache->fc_act.push_back(out);
        cur = std::move(out);
    }
    // Output head.
    const auto& head = m.fcs[1];
    std::vector<T> logits(head.out_dim);
    for (int o = 0; o < head.out_dim; ++o) {
        T acc = head.b[o];
        const T* wr = head.w.data() + static_cast<std::size_t>(o) * head.in_dim;
        for (int i = 0; i < head.in_dim; ++i) acc += wr[i] * cur[i];
        logits[o] = acc;
    }

    T mx = logits[0];
    for (T v : logits) mx = std::max(mx, v);
    std::vector<T> probs(logits.size());
    T z = 0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - mx);
        z += probs[i];
    }
    for (auto& p : probs) p /= z;
    if (cache) {
        cache->logits = logits;
        cache->probs = probs;
    }
    return probs;
}

}  // namespace tw::nn
