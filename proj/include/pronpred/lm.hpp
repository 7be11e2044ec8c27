#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pronpred/types.hpp"

namespace pronpred::lm {

enum class Smoothing { kneser_ney, witten_bell };
std::string to_string(Smoothing s);
Smoothing smoothing_from_string(std::string_view s);

// Interpolated modified Kneser-Ney n-gram model with a Witten-Bell fallback
// when the KN discount estimates are unusable (tiny or degenerate corpora).
// Tokens with training frequency <= unk_threshold are mapped to <unk>;
// sentences are padded with order-1 <s> and a closing </s>. All conditional
// probabilities are positive over the prediction vocabulary (every trained
// word plus </s> and <unk>; <s> is context only and has probability 0).
class NGramModel {
public:
    NGramModel() = default;

    static NGramModel train(const std::vector<std::vector<std::string>>& corpus,
                            int order = 5, int unk_threshold = 1);

    bool trained() const { return trained_; }
    int order() const { return order_; }
    int unk_threshold() const { return unk_threshold_; }
    Smoothing smoothing() const { return smoothing_; }

    std::size_t vocab_size() const;  // prediction vocabulary size
    std::vector<std::string> prediction_vocabulary() const;

    // P(word | history); the last order-1 history tokens are used. Unknown
    // words map to <unk> on both sides.
    double cond_prob(const std::string& word, const std::vector<std::string>& history) const;

    // Natural-log probability of the padded sequence including the </s>
    // transition; prefix_logprob omits </s> (for incremental search).
    double sequence_logprob(const std::vector<std::string>& lemmas) const;
    double prefix_logprob(const std::vector<std::string>& lemmas) const;

    // Raw training count of an n-gram (after <unk> mapping); introspection
    // for tests and bindings.
    std::uint64_t raw_count(const std::vector<std::string>& ngram) const;
    // All seen histories of the given length (0..order-1), lexicographically
    // sorted. Expensive on big models; meant for inspection.
    std::vector<std::vector<std::string>> seen_histories(int length) const;

    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static NGramModel load(std::istream& in, std::string_view source_name = "<stream>");
    static NGramModel load_file(const std::string& path);

    static constexpr std::uint32_t kBos = 0;
    static constexpr std::uint32_t kEos = 1;
    static constexpr std::uint32_t kUnk = 2;

private:
    using CountTable = std::unordered_map<std::string, std::uint64_t>;
    struct HistStats {
        std::uint64_t total = 0;
        std::uint32_t n1 = 0;     // continuation/raw count == 1
        std::uint32_t n2 = 0;     // == 2
        std::uint32_t n3p = 0;    // >= 3
        std::uint32_t types = 0;  // distinct following words
    };
    struct Discounts {
        double d1 = 0, d2 = 0, d3 = 0;
        bool valid = false;
    };

    void count_sentence(const std::vector<std::uint32_t>& ids);
    void finalize();
    std::uint32_t id_of(const std::string& word) const;  // <unk> for OOV
    double base_prob(std::uint32_t w) const;
    double cond_ids(const std::uint32_t* hist, int hlen, std::uint32_t w) const;
    double events_logprob(std::vector<std::uint32_t> padded, bool with_eos) const;
    void require_trained() const;

    int order_ = 0;
    int unk_threshold_ = 1;
    Smoothing smoothing_ = Smoothing::witten_bell;
    bool trained_ = false;
    std::vector<std::string> words_;  // id -> word; 0=<s> 1=</s> 2=<unk>
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<CountTable> raw_;     // raw_[j]: (j+1)-gram raw counts
    std::vector<CountTable> counts_;  // counts used at query time per level
    std::vector<std::unordered_map<std::string, HistStats>> hist_;
    std::vector<Discounts> discounts_;
};

} // namespace pronpred::lm
