#include "pronpred/evaluation.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdio>

#include <json.hpp>

namespace pronpred::eval {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

// Half-up rounding of a non-negative percentage to 2 decimals.
double round_percent(const Rational& percent) {
    Rational scaled = percent * 100 + Rational(1, 2);
    BigInt hundredths = scaled.numerator() / scaled.denominator();  // floor for >= 0
    return hundredths.convert_to<double>() / 100.0;
}

std::string format_2dp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

double percent_2dp(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("percentage of an empty denominator");
    return round_percent(Rational(BigInt(num) * 100, BigInt(den)));
}

ConfusionMatrix confusion(const std::vector<std::string>& gold,
                          const std::vector<std::string>& pred,
                          const std::vector<std::string>& classes) {
    if (gold.size() != pred.size())
        throw LengthMismatch("gold has " + std::to_string(gold.size()) +
                             " labels, predictions have " + std::to_string(pred.size()));
    ConfusionMatrix m(classes);
    for (std::size_t i = 0; i < gold.size(); ++i)
        ++m.counts[m.index_of(gold[i])][m.index_of(pred[i])];
    return m;
}

double macro_recall(const ConfusionMatrix& m) {
    Rational sum(0);
    std::int64_t present = 0;
    for (std::size_t i = 0; i < m.classes.size(); ++i) {
        std::int64_t row = m.gold_count(i);
        if (row == 0) continue;  // absent classes are excluded, not zero
        ++present;
        sum += Rational(BigInt(m.counts[i][i]), BigInt(row));
    }
    if (present == 0)
        throw EmptyGold("macro recall undefined: no gold examples");
    return round_percent(sum * 100 / present);
}

double accuracy(const ConfusionMatrix& m) {
    std::int64_t total = m.total();
    if (total == 0)
        throw EmptyGold("accuracy undefined: no gold examples");
    return percent_2dp(m.diagonal(), total);
}

double expected_random_macro_recall(const SubtaskSpec& spec) {
    if (spec.classes.empty())
        throw Error("subtask spec has no classes");
    return percent_2dp(1, static_cast<std::int64_t>(spec.classes.size()));
}

ScoreReport score_labels(const std::vector<std::string>& gold,
                         const std::vector<std::string>& pred,
                         const SubtaskSpec& spec) {
    ScoreReport report;
    report.matrix = confusion(gold, pred, spec.classes);
    report.examples = report.matrix.total();
    report.correct = report.matrix.diagonal();
    report.macro_recall = macro_recall(report.matrix);
    report.accuracy = accuracy(report.matrix);
    for (std::size_t i = 0; i < spec.classes.size(); ++i) {
        ClassMetrics cm;
        cm.cls = spec.classes[i];
        cm.gold_count = report.matrix.gold_count(i);
        cm.pred_count = report.matrix.pred_count(i);
        cm.correct = report.matrix.counts[i][i];
        cm.recall = cm.gold_count > 0 ? percent_2dp(cm.correct, cm.gold_count) : 0.0;
        cm.precision_defined = cm.pred_count > 0;
        cm.precision = cm.precision_defined ? percent_2dp(cm.correct, cm.pred_count) : 0.0;
        std::int64_t f1_den = cm.gold_count + cm.pred_count;
        cm.f1 = f1_den > 0 ? percent_2dp(2 * cm.correct, f1_den) : 0.0;
        if (cm.gold_count == 0) report.absent_classes.push_back(cm.cls);
        report.per_class.push_back(std::move(cm));
    }
    return report;
}

ScoreReport score_report(const std::vector<TaskInstance>& gold,
                         const std::vector<std::vector<std::string>>& predictions,
                         const SubtaskSpec& spec) {
    if (gold.size() != predictions.size())
        throw LengthMismatch("prediction file has " + std::to_string(predictions.size()) +
                             " lines, gold has " + std::to_string(gold.size()) + " instances");
    std::vector<std::string> gold_flat, pred_flat;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        std::size_t want = gold[i].placeholder_count();
        if (predictions[i].size() != want)
            throw LengthMismatch("instance " + std::to_string(i + 1) + ": " +
                                 std::to_string(predictions[i].size()) + " predictions for " +
                                 std::to_string(want) + " placeholders");
        gold_flat.insert(gold_flat.end(), gold[i].labels.begin(), gold[i].labels.end());
        pred_flat.insert(pred_flat.end(), predictions[i].begin(), predictions[i].end());
    }
    return score_labels(gold_flat, pred_flat, spec);
}

std::string format_text(const ScoreReport& report, std::string_view system_name) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-24s %8s %9s\n", "system", "macro-R", "accuracy");
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-24s %8s %9s\n", std::string(system_name).c_str(),
                  format_2dp(report.macro_recall).c_str(), format_2dp(report.accuracy).c_str());
    out += buf;
    out += "\n";
    std::snprintf(buf, sizeof(buf), "%-12s %6s %6s %8s %8s %10s %8s\n", "class", "gold",
                  "pred", "correct", "recall", "precision", "F1");
    out += buf;
    for (const auto& cm : report.per_class) {
        std::string prec = cm.precision_defined ? format_2dp(cm.precision) : "0.00*";
        std::snprintf(buf, sizeof(buf), "%-12s %6lld %6lld %8lld %8s %10s %8s\n",
                      cm.cls.c_str(), static_cast<long long>(cm.gold_count),
                      static_cast<long long>(cm.pred_count), static_cast<long long>(cm.correct),
                      format_2dp(cm.recall).c_str(), prec.c_str(), format_2dp(cm.f1).c_str());
        out += buf;
    }
    if (!report.absent_classes.empty()) {
        out += "absent from gold (excluded from macro average):";
        for (const auto& c : report.absent_classes) out += " " + c;
        out += "\n";
    }
    bool starred = false;
    for (const auto& cm : report.per_class)
        if (!cm.precision_defined) starred = true;
    if (starred) out += "* precision reported as 0: class never predicted\n";
    out += "\nconfusion matrix (rows = gold, columns = predicted)\n";
    std::snprintf(buf, sizeof(buf), "%-12s", "");
    out += buf;
    for (const auto& c : report.matrix.classes) {
        std::snprintf(buf, sizeof(buf), " %8s", c.c_str());
        out += buf;
    }
    out += "\n";
    for (std::size_t i = 0; i < report.matrix.classes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%-12s", report.matrix.classes[i].c_str());
        out += buf;
        for (std::size_t j = 0; j < report.matrix.classes.size(); ++j) {
            std::snprintf(buf, sizeof(buf), " %8lld",
                          static_cast<long long>(report.matrix.counts[i][j]));
            out += buf;
        }
        out += "\n";
    }
    std::snprintf(buf, sizeof(buf), "\nexamples: %lld  correct: %lld\n",
                  static_cast<long long>(report.examples),
                  static_cast<long long>(report.correct));
    out += buf;
    return out;
}

std::string format_json(const ScoreReport& report, std::string_view system_name) {
    nlohmann::json j;
    j["system"] = std::string(system_name);
    j["macro_recall"] = report.macro_recall;
    j["accuracy"] = report.accuracy;
    j["examples"] = report.examples;
    j["correct"] = report.correct;
    j["absent_classes"] = report.absent_classes;
    j["per_class"] = nlohmann::json::array();
    for (const auto& cm : report.per_class) {
        nlohmann::json c;
        c["class"] = cm.cls;
        c["gold"] = cm.gold_count;
        c["pred"] = cm.pred_count;
        c["correct"] = cm.correct;
        c["recall"] = cm.recall;
        if (cm.precision_defined)
            c["precision"] = cm.precision;
        else
            c["precision"] = nullptr;
        c["f1"] = cm.f1;
        j["per_class"].push_back(std::move(c));
    }
    j["classes"] = report.matrix.classes;
    j["confusion"] = report.matrix.counts;
    return j.dump(2) + "\n";
}

} // namespace pronpred::eval
