#include "pronpred/lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "pronpred/util.hpp"

namespace pronpred::lm {

std::string to_string(Smoothing s) {
    return s == Smoothing::kneser_ney ? "kneser-ney" : "witten-bell";
}

Smoothing smoothing_from_string(std::string_view s) {
    if (s == "kneser-ney") return Smoothing::kneser_ney;
    if (s == "witten-bell") return Smoothing::witten_bell;
    throw Error("unknown smoothing '" + std::string(s) + "'");
}

namespace {

// Big-endian packing so byte-wise key order equals numeric id order.
void append_id(std::string& key, std::uint32_t id) {
    key.push_back(static_cast<char>((id >> 24) & 0xFF));
    key.push_back(static_cast<char>((id >> 16) & 0xFF));
    key.push_back(static_cast<char>((id >> 8) & 0xFF));
    key.push_back(static_cast<char>(id & 0xFF));
}

std::string pack(const std::uint32_t* ids, int n) {
    std::string key;
    key.reserve(static_cast<std::size_t>(n) * 4);
    for (int i = 0; i < n; ++i) append_id(key, ids[i]);
    return key;
}

std::uint32_t id_at(const std::string& key, std::size_t i) {
    auto b = [&](std::size_t k) { return static_cast<std::uint32_t>(static_cast<unsigned char>(key[k])); };
    std::size_t o = i * 4;
    return (b(o) << 24) | (b(o + 1) << 16) | (b(o + 2) << 8) | b(o + 3);
}

std::vector<std::uint32_t> unpack(const std::string& key) {
    std::vector<std::uint32_t> ids(key.size() / 4);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = id_at(key, i);
    return ids;
}

const char* kReserved[3] = {"<s>", "</s>", "<unk>"};

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

} // namespace

void NGramModel::count_sentence(const std::vector<std::uint32_t>& ids) {
    // Events are every real token and </s>; k-grams for all k end at events,
    // so <s> occurs as context only.
    int n = order_;
    for (std::size_t t = static_cast<std::size_t>(n - 1); t < ids.size(); ++t)
        for (int k = 1; k <= n; ++k)
            ++raw_[static_cast<std::size_t>(k - 1)][pack(&ids[t - static_cast<std::size_t>(k - 1)], k)];
}

NGramModel NGramModel::train(const std::vector<std::vector<std::string>>& corpus, int order,
                             int unk_threshold) {
    if (order < 1) throw Error("model order must be >= 1");
    if (unk_threshold < 0) throw Error("unk threshold must be >= 0");

    std::uint64_t tokens = 0;
    std::map<std::string, std::uint64_t> freq;
    for (const auto& sent : corpus)
        for (const auto& w : sent) {
            ++tokens;
            ++freq[w];
        }
    if (corpus.empty() || tokens == 0)
        throw EmptyCorpus("cannot train a language model on an empty corpus");

    NGramModel m;
    m.order_ = order;
    m.unk_threshold_ = unk_threshold;
    m.words_ = {kReserved[0], kReserved[1], kReserved[2]};
    for (const auto& [w, c] : freq) {
        if (w == kReserved[0] || w == kReserved[1] || w == kReserved[2]) continue;
        if (c <= static_cast<std::uint64_t>(unk_threshold)) continue;
        m.words_.push_back(w);
    }
    for (std::uint32_t i = 0; i < m.words_.size(); ++i) m.ids_[m.words_[i]] = i;

    m.raw_.assign(static_cast<std::size_t>(order), CountTable{});
    std::vector<std::uint32_t> padded;
    for (const auto& sent : corpus) {
        padded.assign(static_cast<std::size_t>(order - 1), kBos);
        for (const auto& w : sent) padded.push_back(m.id_of(w));
        padded.push_back(kEos);
        m.count_sentence(padded);
    }
    m.finalize();
    m.trained_ = true;
    return m;
}

void NGramModel::finalize() {
    int n = order_;

    // Candidate KN tables: raw counts at the top, continuation counts below,
    // except that grams starting with <s> keep raw counts (nothing can
    // precede them).
    std::vector<CountTable> kn(static_cast<std::size_t>(n));
    kn[static_cast<std::size_t>(n - 1)] = raw_[static_cast<std::size_t>(n - 1)];
    for (int j = n - 2; j >= 0; --j) {
        CountTable cont;
        for (const auto& [key, c] : raw_[static_cast<std::size_t>(j + 1)])
            ++cont[key.substr(4)];
        for (const auto& [key, c] : raw_[static_cast<std::size_t>(j)])
            if (id_at(key, 0) == kBos) cont[key] = c;
        kn[static_cast<std::size_t>(j)] = std::move(cont);
    }

    auto estimate = [](const CountTable& tbl) {
        std::uint64_t n1 = 0, n2 = 0, n3 = 0, n4 = 0;
        for (const auto& [key, c] : tbl) {
            if (c == 1) ++n1;
            else if (c == 2) ++n2;
            else if (c == 3) ++n3;
            else if (c == 4) ++n4;
        }
        Discounts d;
        if (n1 == 0 || n2 == 0 || n3 == 0 || n4 == 0) return d;
        double y = static_cast<double>(n1) / (static_cast<double>(n1) + 2.0 * static_cast<double>(n2));
        d.d1 = 1.0 - 2.0 * y * static_cast<double>(n2) / static_cast<double>(n1);
        d.d2 = 2.0 - 3.0 * y * static_cast<double>(n3) / static_cast<double>(n2);
        d.d3 = 3.0 - 4.0 * y * static_cast<double>(n4) / static_cast<double>(n3);
        d.valid = d.d1 > 0.0 && d.d1 <= 1.0 && d.d2 > 0.0 && d.d2 <= 2.0 && d.d3 > 0.0 &&
                  d.d3 <= 3.0;
        return d;
    };

    std::vector<Discounts> ds(static_cast<std::size_t>(n));
    bool kn_ok = true;
    for (int j = 0; j < n; ++j) {
        ds[static_cast<std::size_t>(j)] = estimate(kn[static_cast<std::size_t>(j)]);
        if (!ds[static_cast<std::size_t>(j)].valid) kn_ok = false;
    }

    if (kn_ok) {
        smoothing_ = Smoothing::kneser_ney;
        counts_ = std::move(kn);
        discounts_ = std::move(ds);
    } else {
        smoothing_ = Smoothing::witten_bell;
        counts_ = raw_;
        discounts_.assign(static_cast<std::size_t>(n), Discounts{});
    }

    hist_.assign(static_cast<std::size_t>(n), {});
    for (int j = 0; j < n; ++j) {
        auto& level = hist_[static_cast<std::size_t>(j)];
        for (const auto& [key, c] : counts_[static_cast<std::size_t>(j)]) {
            auto& hs = level[key.substr(0, key.size() - 4)];
            hs.total += c;
            ++hs.types;
            if (c == 1) ++hs.n1;
            else if (c == 2) ++hs.n2;
            else ++hs.n3p;
        }
    }
}

std::uint32_t NGramModel::id_of(const std::string& word) const {
    auto it = ids_.find(word);
    return it == ids_.end() ? kUnk : it->second;
}

double NGramModel::base_prob(std::uint32_t w) const {
    if (w == kBos) return 0.0;
    return 1.0 / static_cast<double>(words_.size() - 1);
}

double NGramModel::cond_ids(const std::uint32_t* hist, int hlen, std::uint32_t w) const {
    double lower = hlen == 0 ? base_prob(w) : cond_ids(hist + 1, hlen - 1, w);
    std::string key = pack(hist, hlen);
    const auto& level = hist_[static_cast<std::size_t>(hlen)];
    auto hs_it = level.find(key);
    if (hs_it == level.end() || hs_it->second.total == 0) return lower;
    const HistStats& hs = hs_it->second;
    double total = static_cast<double>(hs.total);

    append_id(key, w);
    auto c_it = counts_[static_cast<std::size_t>(hlen)].find(key);
    double c = c_it == counts_[static_cast<std::size_t>(hlen)].end()
                   ? 0.0
                   : static_cast<double>(c_it->second);

    if (smoothing_ == Smoothing::kneser_ney) {
        const Discounts& d = discounts_[static_cast<std::size_t>(hlen)];
        double disc = c >= 3.0 ? d.d3 : (c == 2.0 ? d.d2 : (c == 1.0 ? d.d1 : 0.0));
        double num = std::max(c - disc, 0.0);
        double gamma = (d.d1 * hs.n1 + d.d2 * hs.n2 + d.d3 * hs.n3p) / total;
        return num / total + gamma * lower;
    }
    double t = static_cast<double>(hs.types);
    return (c + t * lower) / (total + t);
}

void NGramModel::require_trained() const {
    if (!trained_) throw UntrainedModel("language model has not been trained or loaded");
}

std::size_t NGramModel::vocab_size() const {
    require_trained();
    return words_.size() - 1;
}

std::vector<std::string> NGramModel::prediction_vocabulary() const {
    require_trained();
    return {words_.begin() + 1, words_.end()};
}

double NGramModel::cond_prob(const std::string& word,
                             const std::vector<std::string>& history) const {
    require_trained();
    int hlen = std::min<int>(order_ - 1, static_cast<int>(history.size()));
    std::vector<std::uint32_t> h(static_cast<std::size_t>(hlen));
    for (int i = 0; i < hlen; ++i)
        h[static_cast<std::size_t>(i)] = id_of(history[history.size() - static_cast<std::size_t>(hlen - i)]);
    return cond_ids(h.data(), hlen, id_of(word));
}

double NGramModel::events_logprob(std::vector<std::uint32_t> padded, bool with_eos) const {
    if (with_eos) padded.push_back(kEos);
    double lp = 0.0;
    for (std::size_t t = static_cast<std::size_t>(order_ - 1); t < padded.size(); ++t)
        lp += std::log(cond_ids(&padded[t - static_cast<std::size_t>(order_ - 1)], order_ - 1,
                                padded[t]));
    return lp;
}

double NGramModel::sequence_logprob(const std::vector<std::string>& lemmas) const {
    require_trained();
    std::vector<std::uint32_t> padded(static_cast<std::size_t>(order_ - 1), kBos);
    for (const auto& w : lemmas) padded.push_back(id_of(w));
    return events_logprob(std::move(padded), true);
}

double NGramModel::prefix_logprob(const std::vector<std::string>& lemmas) const {
    require_trained();
    std::vector<std::uint32_t> padded(static_cast<std::size_t>(order_ - 1), kBos);
    for (const auto& w : lemmas) padded.push_back(id_of(w));
    return events_logprob(std::move(padded), false);
}

std::uint64_t NGramModel::raw_count(const std::vector<std::string>& ngram) const {
    require_trained();
    if (ngram.empty() || ngram.size() > static_cast<std::size_t>(order_)) return 0;
    std::string key;
    for (const auto& w : ngram) append_id(key, id_of(w));
    const auto& tbl = raw_[ngram.size() - 1];
    auto it = tbl.find(key);
    return it == tbl.end() ? 0 : it->second;
}

std::vector<std::vector<std::string>> NGramModel::seen_histories(int length) const {
    require_trained();
    if (length < 0 || length >= order_)
        throw Error("history length must be in [0, order)");
    std::vector<std::string> keys;
    keys.reserve(hist_[static_cast<std::size_t>(length)].size());
    for (const auto& [key, hs] : hist_[static_cast<std::size_t>(length)])
        if (hs.total > 0) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    std::vector<std::vector<std::string>> out;
    out.reserve(keys.size());
    for (const auto& key : keys) {
        std::vector<std::string> h;
        for (auto id : unpack(key)) h.push_back(words_[id]);
        out.push_back(std::move(h));
    }
    return out;
}

void NGramModel::save(std::ostream& out) const {
    require_trained();
    out << "pronpred-lm 1\n";
    out << "order " << order_ << "\n";
    out << "unk-threshold " << unk_threshold_ << "\n";
    out << "smoothing " << to_string(smoothing_) << "\n";
    out << "vocab " << words_.size() - 3 << "\n";
    for (std::size_t i = 3; i < words_.size(); ++i) out << words_[i] << "\n";
    for (int j = 0; j < order_; ++j) {
        const auto& tbl = raw_[static_cast<std::size_t>(j)];
        std::vector<std::string> keys;
        keys.reserve(tbl.size());
        for (const auto& [key, c] : tbl) keys.push_back(key);
        std::sort(keys.begin(), keys.end());
        out << "counts " << j + 1 << " " << tbl.size() << "\n";
        for (const auto& key : keys) {
            for (std::size_t i = 0; i * 4 < key.size(); ++i) {
                if (i) out << ' ';
                out << id_at(key, i);
            }
            out << ' ' << tbl.at(key) << "\n";
        }
    }
    out << "end\n";
}

void NGramModel::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    save(out);
    if (!out) throw Error("failed while writing " + path);
}

NGramModel NGramModel::load(std::istream& in, std::string_view source_name) {
    std::string src(source_name);
    std::size_t line_no = 0;
    std::string line;
    auto need = [&](const char* what) -> std::string& {
        if (!next_line(in, line))
            throw MalformedLine(0, std::string("unexpected end of model file, expected ") + what,
                                line_no, src);
        ++line_no;
        return line;
    };

    if (need("header") != "pronpred-lm 1")
        throw MalformedLine(0, "not a model file (bad header '" + line + "')", line_no, src);

    auto keyed_int = [&](const char* key) {
        need(key);
        std::istringstream ss(line);
        std::string k;
        long v = -1;
        ss >> k >> v;
        if (k != key || v < 0 || !ss)
            throw MalformedLine(0, std::string("expected '") + key + " N', got '" + line + "'",
                                line_no, src);
        return v;
    };

    NGramModel m;
    m.order_ = static_cast<int>(keyed_int("order"));
    if (m.order_ < 1) throw MalformedLine(0, "model order must be >= 1", line_no, src);
    m.unk_threshold_ = static_cast<int>(keyed_int("unk-threshold"));

    need("smoothing");
    if (line.rfind("smoothing ", 0) != 0)
        throw MalformedLine(0, "expected 'smoothing ...', got '" + line + "'", line_no, src);
    Smoothing stored = smoothing_from_string(line.substr(10));

    long vocab = keyed_int("vocab");
    m.words_ = {kReserved[0], kReserved[1], kReserved[2]};
    for (long i = 0; i < vocab; ++i) {
        need("vocabulary entry");
        if (line.empty() || line == kReserved[0] || line == kReserved[1] || line == kReserved[2])
            throw MalformedLine(0, "bad vocabulary entry '" + line + "'", line_no, src);
        m.words_.push_back(line);
    }
    for (std::uint32_t i = 0; i < m.words_.size(); ++i) m.ids_[m.words_[i]] = i;

    m.raw_.assign(static_cast<std::size_t>(m.order_), CountTable{});
    for (int j = 1; j <= m.order_; ++j) {
        need("counts section");
        std::istringstream ss(line);
        std::string word;
        int k = -1;
        std::uint64_t rows = 0;
        ss >> word >> k >> rows;
        if (word != "counts" || k != j || !ss)
            throw MalformedLine(0, "expected 'counts " + std::to_string(j) + " N', got '" + line +
                                        "'",
                                line_no, src);
        for (std::uint64_t r = 0; r < rows; ++r) {
            need("count row");
            std::istringstream row(line);
            std::string key;
            std::uint64_t v = 0;
            for (int i = 0; i < j; ++i) {
                long long id = -1;
                if (!(row >> id) || id < 0 || static_cast<std::size_t>(id) >= m.words_.size())
                    throw MalformedLine(0, "bad id in count row '" + line + "'", line_no, src);
                append_id(key, static_cast<std::uint32_t>(id));
            }
            std::string extra;
            if (!(row >> v) || (row >> extra))
                throw MalformedLine(0, "bad count row '" + line + "'", line_no, src);
            m.raw_[static_cast<std::size_t>(j - 1)][key] = v;
        }
    }
    if (need("trailer") != "end")
        throw MalformedLine(0, "expected 'end', got '" + line + "'", line_no, src);

    if (m.raw_[0].empty())
        throw MalformedLine(0, "model file has no unigram counts", line_no, src);
    m.finalize();
    if (m.smoothing_ != stored)
        throw MalformedLine(0, "stored smoothing '" + to_string(stored) +
                                    "' does not match counts (recomputed '" +
                                    to_string(m.smoothing_) + "')",
                            line_no, src);
    m.trained_ = true;
    return m;
}

NGramModel NGramModel::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path + " for reading");
    return load(in, path);
}

} // namespace pronpred::lm
