#include <algorithm>

#include "fseg/ml.hpp"
#include "fseg/rng.hpp"

namespace fseg::ml {

Samples samples_from_matrix(const feat::LabeledMatrix& m, std::span<const std::size_t> idx) {
    Samples s;
    s.x.reserve(idx.size());
    s.y.reserve(idx.size());
    for (std::size_t i : idx) {
        const auto& row = m.rows[i];
        s.x.emplace_back(row.x.values.begin(), row.x.values.end());
        s.y.push_back(row.success ? 1 : 0);
    }
    return s;
}

Split make_split(const feat::LabeledMatrix& m, std::uint64_t seed, const SplitSpec& spec) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        (m.rows[i].success ? pos : neg).push_back(i);
    }
    if (pos.size() < spec.min_per_class) {
        throw SplitError("insufficient positive rows: have " + std::to_string(pos.size()) +
                         ", need " + std::to_string(spec.min_per_class));
    }
    if (neg.size() < spec.min_per_class) {
        throw SplitError("insufficient negative rows: have " + std::to_string(neg.size()) +
                         ", need " + std::to_string(spec.min_per_class));
    }

    Rng rng(mix64(seed ^ 0x51uLL));
    fisher_yates(pos, rng);
    fisher_yates(neg, rng);

    Split out;
    auto take = [](std::vector<std::size_t>& from, std::size_t offset, std::size_t count,
                   std::vector<std::size_t>& into) {
        for (std::size_t i = 0; i < count; ++i) into.push_back(from[offset + i]);
    };
    take(neg, 0, spec.test1_neg, out.test1_idx);
    take(pos, 0, spec.test1_pos, out.test1_idx);
    take(neg, spec.test1_neg, spec.test2_neg, out.test2_idx);
    take(pos, spec.test1_pos, spec.test2_pos, out.test2_idx);
    take(neg, spec.test1_neg + spec.test2_neg, neg.size() - spec.test1_neg - spec.test2_neg,
         out.train_idx);
    take(pos, spec.test1_pos + spec.test2_pos, pos.size() - spec.test1_pos - spec.test2_pos,
         out.train_idx);

    // stable row order inside each subset
    std::sort(out.train_idx.begin(), out.train_idx.end());
    std::sort(out.test1_idx.begin(), out.test1_idx.end());
    std::sort(out.test2_idx.begin(), out.test2_idx.end());

    out.train = samples_from_matrix(m, out.train_idx);
    out.test1 = samples_from_matrix(m, out.test1_idx);
    out.test2 = samples_from_matrix(m, out.test2_idx);
    return out;
}

}  // namespace fseg::ml
