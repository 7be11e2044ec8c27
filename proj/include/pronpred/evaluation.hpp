#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pronpred/types.hpp"

namespace pronpred::eval {

// Percentage num/den * 100 rounded half-up to 2 decimals, computed with
// exact integer arithmetic (floating point misrounds boundary cases).
double percent_2dp(std::int64_t num, std::int64_t den);

ConfusionMatrix confusion(const std::vector<std::string>& gold,
                          const std::vector<std::string>& pred,
                          const std::vector<std::string>& classes);

// Official metric: mean per-class recall over classes that occur in the
// gold data (absent classes are excluded, not counted as zero), times 100,
// rounded half-up to 2 decimals. EmptyGold when nothing was scored.
double macro_recall(const ConfusionMatrix& m);

// Secondary metric: trace/total * 100, same rounding.
double accuracy(const ConfusionMatrix& m);

// Fixed point of macro recall for a uniform random predictor: 100/|classes|.
double expected_random_macro_recall(const SubtaskSpec& spec);

struct ClassMetrics {
    std::string cls;
    std::int64_t gold_count = 0;
    std::int64_t pred_count = 0;
    std::int64_t correct = 0;
    double recall = 0.0;            // 0 when the class is absent from gold
    double precision = 0.0;         // 0 when never predicted; see flag
    bool precision_defined = true;  // false when pred_count == 0
    double f1 = 0.0;                // exact 2*correct/(gold+pred), 2dp
};

struct ScoreReport {
    ConfusionMatrix matrix{std::vector<std::string>{}};
    double macro_recall = 0.0;
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    std::vector<std::string> absent_classes;  // excluded from the macro average
    std::int64_t examples = 0;
    std::int64_t correct = 0;
};

// Scores a prediction file against gold instances. predictions is one label
// list per instance (line-aligned); the count per line must equal the
// instance's placeholder count.
ScoreReport score_report(const std::vector<TaskInstance>& gold,
                         const std::vector<std::vector<std::string>>& predictions,
                         const SubtaskSpec& spec);

// Same, over pre-flattened label sequences.
ScoreReport score_labels(const std::vector<std::string>& gold,
                         const std::vector<std::string>& pred,
                         const SubtaskSpec& spec);

std::string format_text(const ScoreReport& report, std::string_view system_name);
std::string format_json(const ScoreReport& report, std::string_view system_name);

} // namespace pronpred::eval
