#include "cubeproto/metrics.hpp"

#include <map>

#include "cubeproto/errors.hpp"

namespace cubeproto {

EvaluationReport clustering_accuracy(std::span<const std::int32_t> assignments, std::span<const std::int32_t> labels) {
    if (assignments.size() != labels.size())
        throw ArgumentError("assignments cover " + std::to_string(assignments.size()) + " units, labels " +
                            std::to_string(labels.size()));
    if (assignments.empty()) throw ArgumentError("no units to evaluate");

    std::map<std::int32_t, std::map<std::int32_t, std::size_t>> table;
    for (std::size_t i = 0; i < assignments.size(); ++i) ++table[assignments[i]][labels[i]];

    EvaluationReport report;
    report.n_total = assignments.size();
    std::size_t total_majority = 0;
    for (const auto& [cluster, counts] : table) {
        ClusterSummary s{cluster, 0, 0, 0};
        bool first = true;
        for (const auto& [label, c] : counts) {
            s.size += c;
            if (first || c > s.majority_count) {
                s.majority_label = label;
                s.majority_count = c;
                first = false;
            }
        }
        total_majority += s.majority_count;
        report.per_cluster.push_back(s);
    }
    report.ca = static_cast<double>(total_majority) / static_cast<double>(report.n_total);
    return report;
}

}  // namespace cubeproto
