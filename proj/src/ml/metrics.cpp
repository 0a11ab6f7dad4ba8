#include <stdexcept>

#include "fseg/ml.hpp"

namespace fseg::ml {

std::size_t Samples::count(int label) const {
    std::size_t n = 0;
    for (int v : y)
        if (v == label) ++n;
    return n;
}

EvalReport metrics_from_confusion(const ConfusionMatrix& cm) {
    EvalReport r;
    long n = cm.total();
    if (n <= 0) throw std::invalid_argument("metrics: empty confusion matrix");
    r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n);
    if (cm.tp + cm.fp > 0) {
        r.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    }
    if (cm.tp + cm.fn > 0) {
        r.tpr = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    }
    if (r.precision && r.tpr && (*r.precision + *r.tpr) > 0.0) {
        r.f1 = 2.0 * *r.precision * *r.tpr / (*r.precision + *r.tpr);
    }
    return r;
}

ConfusionMatrix confusion_from_predictions(std::span<const int> pred, std::span<const int> label) {
    if (pred.size() != label.size()) throw std::invalid_argument("metrics: size mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == 1 && label[i] == 1) ++cm.tp;
        else if (pred[i] == 1 && label[i] == 0) ++cm.fp;
        else if (pred[i] == 0 && label[i] == 0) ++cm.tn;
        else ++cm.fn;
    }
    return cm;
}

std::pair<EvalReport, ConfusionMatrix> evaluate(const Classifier& model, const Samples& test) {
    if (test.size() == 0) throw std::invalid_argument("evaluate: empty test set");
    std::vector<int> pred(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        pred[i] = model.predict(test.x[i]) ? 1 : 0;
    }
    ConfusionMatrix cm = confusion_from_predictions(pred, test.y);
    return {metrics_from_confusion(cm), cm};
}

}  // namespace fseg::ml
