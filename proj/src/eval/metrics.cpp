#include "thermoweld/eval/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace tw {

std::optional<double> average_precision(const std::vector<std::pair<double, bool>>& ranked) {
    std::size_t n_pos = 0;
    for (const auto& [score, pos] : ranked) n_pos += pos;
    if (n_pos == 0) return std::nullopt;

    std::vector<std::size_t> order(ranked.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ranked[a].first > ranked[b].first; });

    // Step-interpolated area: precision at each positive hit, averaged over
    // the positives (each contributes a 1/n_pos recall step).
    double ap = 0.0;
    std::size_t hits = 0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (ranked[order[rank]].second) {
            ++hits;
            ap += static_cast<double>(hits) / static_cast<double>(rank + 1);
        }
    }
    return ap / static_cast<double>(n_pos);
}

EvalReport compute_metrics(const std::vector<nn::Prediction>& predictions) {
    if (predictions.empty()) throw std::invalid_argument("compute_metrics: empty predictions");

    EvalReport r;
    r.total = static_cast<int>(predictions.size());
    std::array<int, 3> class_total{};
    std::array<int, 3> class_wrong{};
    int correct = 0;
    for (const auto& p : predictions) {
        if (p.true_label < 0 || p.true_label >= 3 || p.predicted < 0 || p.predicted >= 3)
            throw std::invalid_argument("compute_metrics: label out of range");
        r.confusion[p.true_label][p.predicted] += 1;
        class_total[p.true_label] += 1;
        if (p.predicted != p.true_label)
            class_wrong[p.true_label] += 1;
        else
            ++correct;
    }
    r.overall_accuracy = 100.0 * correct / r.total;

    for (int c = 0; c < 3; ++c) {
        r.error_rate[c] =
            class_total[c] ? 100.0 * class_wrong[c] / class_total[c] : 0.0;
        std::vector<std::pair<double, bool>> ranked;
        ranked.reserve(predictions.size());
        for (const auto& p : predictions) ranked.emplace_back(p.scores[c], p.true_label == c);
        const auto ap = average_precision(ranked);
        if (ap)
            r.ap[c] = 100.0 * *ap;
        else
            r.ap_undefined_warning = true;
    }
    double ap_sum = 0.0;
    int ap_n = 0;
    for (const auto& ap : r.ap)
        if (ap) {
            ap_sum += *ap;
            ++ap_n;
        }
    if (ap_n > 0) r.map = ap_sum / ap_n;
    return r;
}

std::string report_to_text(const EvalReport& report) {
    char buf[256];
    std::string out;
    out += "               good      medium    bad\n";
    std::snprintf(buf, sizeof(buf), "Error Rate     %-9.2f %-9.2f %-9.2f\n", report.error_rate[0],
                  report.error_rate[1], report.error_rate[2]);
    out += buf;
    auto ap_str = [](const std::optional<double>& ap) {
        char b[32];
        if (ap)
            std::snprintf(b, sizeof(b), "%-9.2f", *ap);
        else
            std::snprintf(b, sizeof(b), "%-9s", "n/a");
        return std::string(b);
    };
    out += "AP             " + ap_str(report.ap[0]) + " " + ap_str(report.ap[1]) + " " +
           ap_str(report.ap[2]) + "\n";
    if (report.map) {
        std::snprintf(buf, sizeof(buf), "mAP            %.2f\n", *report.map);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "frame accuracy %.2f%%  (n=%d)\n", report.overall_accuracy,
                  report.total);
    out += buf;
    if (report.film_level_accuracy) {
        std::snprintf(buf, sizeof(buf), "film accuracy  %.2f%%\n", *report.film_level_accuracy);
        out += buf;
    }
    out += "confusion (rows=true, cols=predicted):\n";
    for (int t = 0; t < 3; ++t) {
        std::snprintf(buf, sizeof(buf), "  %-6s %5d %5d %5d\n",
                      to_string(static_cast<QualityClass>(t)), report.confusion[t][0],
                      report.confusion[t][1], report.confusion[t][2]);
        out += buf;
    }
    out += "reference (published architecture comparison):\n";
    for (const auto& row : kReferenceResults) {
        std::snprintf(buf, sizeof(buf), "  %-12s err %5.2f/%5.2f/%5.2f  AP %5.2f/%5.2f/%5.2f\n",
                      row.architecture, row.error_rate[0], row.error_rate[1], row.error_rate[2],
                      row.ap[0], row.ap[1], row.ap[2]);
        out += buf;
    }
    if (!report.metadata.empty()) out += "meta: " + report.metadata + "\n";
    return out;
}

}  // namespace tw
