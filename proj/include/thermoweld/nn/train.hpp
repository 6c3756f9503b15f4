#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "thermoweld/dataprep/filters.hpp"
#include "thermoweld/nn/cnn.hpp"

namespace tw::nn {

struct TrainConfig {
    double learning_rate = 0.02;
    double momentum = 0.9;
    int batch_size = 16;
    int epochs = 10;
    std::uint64_t seed = 1;
    ModelVariant variant = ModelVariant::small;
    bool class_weights = false;          ///< inverse-frequency loss weights

    void validate() const {
        if (!(learning_rate >= 0)) throw std::invalid_argument("TrainConfig: learning_rate < 0");
        if (!(momentum >= 0 && momentum < 1))
            throw std::invalid_argument("TrainConfig: momentum must be in [0,1)");
        if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
        if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
    }
};

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double train_acc = 0.0;
    double val_acc = 0.0;
};

struct TrainResult {
    Cnn<float> model;
    std::vector<EpochStats> history;
};

/// Per-sample probabilities for a batch; rows sum to 1.
std::vector<std::array<double, kNumClasses>> forward(const Cnn<float>& model,
                                                     const std::vector<Sample>& batch);

/// Cross-entropy SGD-with-momentum training. He init, epoch shuffling and
/// the whole trajectory are driven by cfg.seed; runs single-threaded with a
/// fixed reduction order, so repeated calls are bit-identical.
/// Throws NumericError if the loss stops being finite.
TrainResult train(const std::vector<Sample>& train_set, const std::vector<Sample>& val_set,
                  const TrainConfig& cfg);

struct Prediction {
    int true_label = 0;
    int predicted = 0;
    std::array<double, kNumClasses> scores{};
    std::string film_id;
    int frame_index = 0;
};

std::vector<Prediction> predict(const Cnn<float>& model, const std::vector<Sample>& samples);

double accuracy(const std::vector<Prediction>& preds);

/// Max relative error between analytic and central-difference gradients on
/// n_params randomly sampled parameters (double precision).
double grad_check(Cnn<double>& model, const std::vector<Sample>& batch, double epsilon,
                  int n_params = 100, std::uint64_t seed = 1234);

/// Classifies every frame the filter selects from the film, averages the
/// probabilities and returns the argmax class with its mean probability.
/// Ties resolve to the lowest class index (good < medium < bad).
/// Throws DataError when the filter selects no frame ("no evidence").
std::pair<QualityClass, double> predict_film(const Cnn<float>& model, const ThermalFilm& film,
                                             const NormalizedFilm& nf, const FilterSpec& filter);

/// "epoch,loss,train_acc,val_acc" CSV.
std::string history_to_csv(const std::vector<EpochStats>& history);

}  // namespace tw::nn
