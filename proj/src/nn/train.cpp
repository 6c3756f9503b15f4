#include "thermoweld/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "thermoweld/preprocess/preprocess.hpp"

namespace tw::nn {

std::vector<float> image_to_input(const Image8& img, int hw) {
    std::vector<float> out(static_cast<std::size_t>(3) * hw * hw);
    const double sx = static_cast<double>(img.width) / hw;
    const double sy = static_cast<double>(img.height) / hw;
    for (int y = 0; y < hw; ++y) {
        for (int x = 0; x < hw; ++x) {
            // Align sample centers.
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
            const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
            const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
            const int x1 = std::min(x0 + 1, img.width - 1), y1 = std::min(y0 + 1, img.height - 1);
            const double wx = fx - x0, wy = fy - y0;
            for (int c = 0; c < 3; ++c) {
                const double v =
                    (1 - wy) * ((1 - wx) * img.pixels[img.offset(y0, x0) + c] +
                                wx * img.pixels[img.offset(y0, x1) + c]) +
                    wy * ((1 - wx) * img.pixels[img.offset(y1, x0) + c] +
                          wx * img.pixels[img.offset(y1, x1) + c]);
                out[(static_cast<std::size_t>(c) * hw + y) * hw + x] =
                    static_cast<float>(v / 255.0);
            }
        }
    }
    return out;
}

namespace detail2 {

/// Backward pass for one sample; accumulates parameter gradients into a
/// zero-initialized clone of the model. `weight` scales the sample's loss.
template <typename T>
void backward(const Cnn<T>& m, const ForwardCache<T>& cache, int label, T weight, Cnn<T>& grads) {
    std::vector<T> dcur(cache.probs);
    dcur[static_cast<std::size_t>(label)] -= T(1);
    for (auto& v : dcur) v *= weight;

    // Output head.
    {
        const auto& fc = m.fcs[1];
        auto& g = grads.fcs[1];
        const std::vector<T>& in = cache.fc_act[0];
        std::vector<T> din(fc.in_dim, T(0));
        for (int o = 0; o < fc.out_dim; ++o) {
            g.b[o] += dcur[o];
            T* gw = g.w.data() + static_cast<std::size_t>(o) * fc.in_dim;
            const T* w = fc.w.data() + static_cast<std::size_t>(o) * fc.in_dim;
            const T d = dcur[o];
            for (int i = 0; i < fc.in_dim; ++i) {
                gw[i] += d * in[i];
                din[i] += d * w[i];
            }
        }
        dcur = std::move(din);
    }
    // Hidden dense (+ activation).
    {
        const auto& fc = m.fcs[0];
        auto& g = grads.fcs[0];
        const std::vector<T>& act = cache.fc_act[0];
        if (!m.relu_bypass)
            for (int o = 0; o < fc.out_dim; ++o)
                if (act[o] <= T(0)) dcur[o] = T(0);
        const std::vector<T>& in = cache.fc_in[0];
        std::vector<T> din(fc.in_dim, T(0));
        for (int o = 0; o < fc.out_dim; ++o) {
            g.b[o] += dcur[o];
            T* gw = g.w.data() + static_cast<std::size_t>(o) * fc.in_dim;
            const T* w = fc.w.data() + static_cast<std::size_t>(o) * fc.in_dim;
            const T d = dcur[o];
            if (d == T(0)) continue;
            for (int i = 0; i < fc.in_dim; ++i) {
                gw[i] += d * in[i];
                din[i] += d * w[i];
            }
        }
        dcur = std::move(din);
    }
    // Conv blocks, reversed.
    int hw = kInputHW >> m.convs.size();
    for (int li = static_cast<int>(m.convs.size()) - 1; li >= 0; --li) {
        const auto& layer = m.convs[li];
        const int up = hw * 2;  // resolution before pooling
        const std::vector<T>& act = cache.act[li];
        std::vector<T> dact(act.size(), T(0));
        const std::vector<int>& src = cache.pool_src[li];
        for (std::size_t i = 0; i < src.size(); ++i) dact[static_cast<std::size_t>(src[i])] += dcur[i];
        if (!m.relu_bypass)
            for (std::size_t i = 0; i < dact.size(); ++i)
                if (act[i] <= T(0)) dact[i] = T(0);

        auto& g = grads.convs[li];
        nn::detail::conv3x3_backward_weights(layer, cache.conv_in[li].data(), dact.data(), up,
                                             g.w.data(), g.b.data());
        if (li > 0) {
            std::vector<T> din(static_cast<std::size_t>(layer.in_ch) * up * up);
            nn::detail::conv3x3_backward_data(layer, dact.data(), up, din.data());
            dcur = std::move(din);
        }
        hw = up;
    }
}

template <typename T>
Cnn<T> zero_clone(const Cnn<T>& m) {
    Cnn<T> g = m;
    g.for_each_tensor([](std::vector<T>& t) { std::fill(t.begin(), t.end(), T(0)); });
    return g;
}

/// Mean weighted cross-entropy and gradient accumulation over a batch.
template <typename T>
double batch_loss_and_grads(const Cnn<T>& m, const std::vector<const Sample*>& batch,
                            const std::array<double, kNumClasses>& class_w,
                            Cnn<T>* grads = nullptr, int* correct = nullptr) {
    double loss = 0.0;
    for (const Sample* s : batch) {
        ForwardCache<T> cache;
        std::vector<T> chw(s->chw.begin(), s->chw.end());
        const std::vector<T> probs = cnn_forward(m, chw, &cache);
        const double w = class_w[static_cast<std::size_t>(s->label)];
        const double p = std::max(static_cast<double>(probs[s->label]), 1e-30);
        loss += -w * std::log(p);
        if (correct) {
            const int pred = static_cast<int>(
                std::max_element(probs.begin(), probs.end()) - probs.begin());
            *correct += (pred == s->label);
        }
        if (grads) backward(m, cache, s->label, static_cast<T>(w / batch.size()), *grads);
    }
    return loss / batch.size();
}

}  // namespace detail2

std::vector<std::array<double, kNumClasses>> forward(const Cnn<float>& model,
                                                     const std::vector<Sample>& batch) {
    std::vector<std::array<double, kNumClasses>> out;
    out.reserve(batch.size());
    for (const Sample& s : batch) {
        const std::vector<float> probs = cnn_forward(model, s.chw);
        out.push_back({probs[0], probs[1], probs[2]});
    }
    return out;
}

TrainResult train(const std::vector<Sample>& train_set, const std::vector<Sample>& val_set,
                  const TrainConfig& cfg) {
    cfg.validate();
    if (train_set.empty()) throw std::invalid_argument("train: empty training set");

    std::array<double, kNumClasses> class_w{1.0, 1.0, 1.0};
    if (cfg.class_weights) {
        std::array<double, kNumClasses> counts{};
        for (const Sample& s : train_set) counts[static_cast<std::size_t>(s.label)] += 1.0;
        for (int c = 0; c < kNumClasses; ++c)
            class_w[c] = counts[c] > 0
                             ? static_cast<double>(train_set.size()) / (kNumClasses * counts[c])
                             : 0.0;
    }

    Rng rng(cfg.seed);
    TrainResult result;
    result.model = Cnn<float>::he_init(cfg.variant, rng);
    Cnn<float> velocity = detail2::zero_clone(result.model);
    Cnn<float> grads = detail2::zero_clone(result.model);

    std::vector<std::vector<float>*> wt, vt, gt;
    result.model.for_each_tensor([&](std::vector<float>& t) { wt.push_back(&t); });
    velocity.for_each_tensor([&](std::vector<float>& t) { vt.push_back(&t); });
    grads.for_each_tensor([&](std::vector<float>& t) { gt.push_back(&t); });

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        int correct = 0, batches = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            std::vector<const Sample*> batch;
            for (std::size_t i = start; i < std::min(order.size(), start + cfg.batch_size); ++i)
                batch.push_back(&train_set[order[i]]);
            for (auto* g : gt) std::fill(g->begin(), g->end(), 0.0f);
            loss_sum += detail2::batch_loss_and_grads(result.model, batch, class_w, &grads, &correct);
            ++batches;

            if (!std::isfinite(loss_sum))
                throw NumericError("train: non-finite loss (learning rate too high?)");

            // SGD with momentum.
            const float lr = static_cast<float>(cfg.learning_rate);
            const float mu = static_cast<float>(cfg.momentum);
            for (std::size_t ti = 0; ti < wt.size(); ++ti) {
                std::vector<float>& w = *wt[ti];
                std::vector<float>& v = *vt[ti];
                const std::vector<float>& g = *gt[ti];
                for (std::size_t i = 0; i < w.size(); ++i) {
                    v[i] = mu * v[i] - lr * g[i];
                    w[i] += v[i];
                }
            }
        }

        EpochStats st;
        st.epoch = epoch;
        st.loss = batches ? loss_sum / batches : 0.0;
        st.train_acc = train_set.empty() ? 0.0 : static_cast<double>(correct) / train_set.size();
        if (!val_set.empty()) {
            const auto preds = predict(result.model, val_set);
            st.val_acc = accuracy(preds);
        }
        result.history.push_back(st);
    }
    return result;
}

std::vector<Prediction> predict(const Cnn<float>& model, const std::vector<Sample>& samples) {
    std::vector<Prediction> preds;
    preds.reserve(samples.size());
    for (const Sample& s : samples) {
        const std::vector<float> probs = cnn_forward(model, s.chw);
        Prediction p;
        p.true_label = s.label;
        p.scores = {probs[0], probs[1], probs[2]};
        p.predicted = static_cast<int>(
            std::max_element(p.scores.begin(), p.scores.end()) - p.scores.begin());
        p.film_id = s.film_id;
        p.frame_index = s.frame_index;
        preds.push_back(std::move(p));
    }
    return preds;
}

double accuracy(const std::vector<Prediction>& preds) {
    if (preds.empty()) return 0.0;
    int correct = 0;
    for (const Prediction& p : preds) correct += (p.predicted == p.true_label);
    return static_cast<double>(correct) / preds.size();
}

double grad_check(Cnn<double>& model, const std::vector<Sample>& batch, double epsilon,
                  int n_params, std::uint64_t seed) {
    if (batch.empty()) throw std::invalid_argument("grad_check: empty batch");
    std::vector<const Sample*> ptrs;
    for (const Sample& s : batch) ptrs.push_back(&s);
    const std::array<double, kNumClasses> w{1.0, 1.0, 1.0};

    Cnn<double> grads = detail2::zero_clone(model);
    detail2::batch_loss_and_grads(model, ptrs, w, &grads);

    // Collect tensor pointers in the canonical order.
    std::vector<std::vector<double>*> mt, gt;
    model.for_each_tensor([&](std::vector<double>& t) { mt.push_back(&t); });
    grads.for_each_tensor([&](std::vector<double>& t) { gt.push_back(&t); });

    std::size_t total = 0;
    for (auto* t : mt) total += t->size();

    Rng rng(seed);
    double max_rel = 0.0;
    for (int k = 0; k < n_params; ++k) {
        std::size_t flat = static_cast<std::size_t>(rng.uniform_index(total));
        std::size_t ti = 0;
        while (flat >= mt[ti]->size()) {
            flat -= mt[ti]->size();
            ++ti;
        }
        double& param = (*mt[ti])[flat];
        const double saved = param;
        param = saved + epsilon;
        const double lp = detail2::batch_loss_and_grads(model, ptrs, w);
        param = saved - epsilon;
        const double lm = detail2::batch_loss_and_grads(model, ptrs, w);
        param = saved;

        const double numeric = (lp - lm) / (2.0 * epsilon);
        const double analytic = (*gt[ti])[flat];
        const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-7});
        max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
    }
    return max_rel;
}

std::pair<QualityClass, double> predict_film(const Cnn<float>& model, const ThermalFilm& film,
                                             const NormalizedFilm& nf, const FilterSpec& filter) {
    const IntensityCurve curve = mean_intensity_curve(film);
    const std::vector<int> frames = selected_frames(curve, filter);
    if (frames.empty()) throw DataError("predict_film: no evidence (filter selects no frame)");

    std::array<double, kNumClasses> mean{};
    for (int f : frames) {
        double lo = frame_percentile(nf, f, 1.0);
        double hi = frame_percentile(nf, f, 99.0);
        if (!(hi > lo)) hi = lo + 1.0;
        const Image8 img = to_rgb(nf, f, lo, hi);
        const std::vector<float> probs = cnn_forward(model, image_to_input(img));
        for (int c = 0; c < kNumClasses; ++c) mean[c] += probs[c];
    }
    for (auto& m : mean) m /= static_cast<double>(frames.size());
    const int arg = static_cast<int>(std::max_element(mean.begin(), mean.end()) - mean.begin());
    return {static_cast<QualityClass>(arg), mean[arg]};
}

std::string history_to_csv(const std::vector<EpochStats>& history) {
    std::string out = "epoch,loss,train_acc,val_acc\n";
    char buf[128];
    for (const EpochStats& e : history) {
        std::snprintf(buf, sizeof(buf), "%d,%.8f,%.6f,%.6f\n", e.epoch, e.loss, e.train_acc,
                      e.val_acc);
        out += buf;
    }
    return out;
}

}  // namespace tw::nn
