#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace pronpred::util {

// Splits on every separator, keeping empty chunks: "a,,b" -> {"a","","b"},
// "" -> {""}. Views into the input; the input must outlive the result.
inline std::vector<std::string_view> split_fields(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// Token list of a field: empty field means zero tokens. Empty chunks are kept
// so callers can reject doubled separators explicitly.
inline std::vector<std::string_view> split_tokens(std::string_view s, char sep = ' ') {
    if (s.empty()) return {};
    return split_fields(s, sep);
}

template <typename Range>
std::string join(const Range& parts, std::string_view sep) {
    std::string out;
    bool first = true;
    for (const auto& p : parts) {
        if (!first) out += sep;
        first = false;
        out += p;
    }
    return out;
}

// Lowercases ASCII A-Z plus the Latin-1 uppercase block as encoded in UTF-8
// (0xC3 0x80..0x9E except the multiplication sign), enough for the covered
// language pairs. Other bytes pass through untouched.
inline std::string fold_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c >= 'A' && c <= 'Z') {
            out += static_cast<char>(c + 0x20);
        } else if (c == 0xC3 && i + 1 < s.size()) {
            unsigned char d = static_cast<unsigned char>(s[i + 1]);
            if (d >= 0x80 && d <= 0x9E && d != 0x97) {
                out += static_cast<char>(c);
                out += static_cast<char>(d + 0x20);
                ++i;
            } else {
                out += static_cast<char>(c);
            }
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

inline std::size_t utf8_codepoints(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

// Canonical non-negative decimal: digits only, no leading zero unless the
// value is exactly "0". Anything else (sign, spaces, overflow) is rejected.
inline std::optional<int> parse_canonical_int(std::string_view s) {
    if (s.empty() || s.size() > 9) return std::nullopt;
    if (s.size() > 1 && s[0] == '0') return std::nullopt;
    long v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return std::nullopt;
        v = v * 10 + (ch - '0');
    }
    return static_cast<int>(v);
}

inline bool contains_whitespace(std::string_view s) {
    return s.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one thread
// per chunk. jobs <= 1 runs inline. Chunking is deterministic, so callers
// that write into preallocated slots get reproducible results.
template <typename Fn>
void parallel_chunks(std::size_t n, int jobs, Fn&& fn) {
    if (n == 0) return;
    std::size_t workers = jobs <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    if (workers == 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t b = w * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

} // namespace pronpred::util
