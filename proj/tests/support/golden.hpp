#pragma once

// Golden corpus: synthetic ad records with planted structure, written against
// data/synthetic.dic.
//
// Main text is a fixed number of space-separated tokens, so the negemo
// occurrence ratio is 100*k/N exactly. k is planted as
//   k = round(mu + s * (rho * z_ctr + sqrt(1 - rho^2) * eps))
// which makes negemo% a linear function of CTR plus Gaussian noise with
// population correlation ~rho (rounding and clamping shave a little off).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "liwcad/ingest/records.hpp"

namespace liwcad::testing {

struct GoldenProduct {
    std::string name;
    std::size_t records = 0;
    double mean_ctr = 0.0;
    double negemo_rho = 0.3;   // planted corr(CTR, negemo%) in main text
    double cause_mean = 1.0;   // mean cause tokens per main text (independent of CTR)
};

struct GoldenOptions {
    std::size_t main_tokens = 40;
    std::size_t image_tokens = 20;
    double negemo_mu = 10.0;
    double negemo_sd = 3.0;
    double image_presence = 0.7;
    std::size_t below_threshold = 0;  // extra rows with impressions < 10,000
};

inline const std::vector<std::string>& negemo_words() {
    static const std::vector<std::string> w{"不安", "悩み", "危機", "心配"};
    return w;
}
inline const std::vector<std::string>& cause_words() {
    static const std::vector<std::string> w{"理想", "対策", "方法", "原因"};
    return w;
}
inline const std::vector<std::string>& bio_words() {
    static const std::vector<std::string> w{"疲労", "脂肪", "血圧", "肌"};
    return w;
}
// Single hiragana that are neither stems nor matched by any wildcard.
inline const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> w{"の", "は", "を", "が", "に", "と", "も", "や"};
    return w;
}

inline std::vector<ingest::AdRecord> golden_records(const std::vector<GoldenProduct>& products, std::uint64_t seed,
                                                    const GoldenOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> impressions_dist(10000, 200000);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<ingest::AdRecord> out;
    for (const auto& p : products) {
        const double sigma = 0.4;
        std::vector<ingest::AdRecord> recs(p.records);
        std::vector<double> ctrs(p.records);
        for (std::size_t i = 0; i < p.records; ++i) {
            auto& r = recs[i];
            r.ad_id = p.name.substr(0, 1) + std::to_string(i);
            r.product_category = p.name;
            r.impressions = impressions_dist(rng);
            const double ctr = std::min(0.2, p.mean_ctr * std::exp(sigma * normal(rng) - sigma * sigma / 2));
            r.clicks = static_cast<std::uint64_t>(std::llround(ctr * static_cast<double>(r.impressions)));
            ctrs[i] = static_cast<double>(r.clicks) / static_cast<double>(r.impressions);
        }
        double mean = 0, var = 0;
        for (double c : ctrs) mean += c;
        mean /= static_cast<double>(ctrs.size());
        for (double c : ctrs) var += (c - mean) * (c - mean);
        const double sd = std::sqrt(var / static_cast<double>(ctrs.size()));

        std::poisson_distribution<int> cause(p.cause_mean);
        std::poisson_distribution<int> bio(2.0);
        for (std::size_t i = 0; i < p.records; ++i) {
            const double z = sd > 0 ? (ctrs[i] - mean) / sd : 0.0;
            const double latent = p.negemo_rho * z + std::sqrt(1 - p.negemo_rho * p.negemo_rho) * normal(rng);
            const auto n_main = static_cast<long>(opt.main_tokens);
            const long k_neg = std::clamp(std::lround(opt.negemo_mu + opt.negemo_sd * latent), 0L, n_main / 2);
            const long k_cause = std::min<long>(cause(rng), n_main / 4);

            std::vector<std::string> toks;
            for (long k = 0; k < k_neg; ++k) toks.push_back(negemo_words()[rng() % negemo_words().size()]);
            for (long k = 0; k < k_cause; ++k) toks.push_back(cause_words()[rng() % cause_words().size()]);
            while (toks.size() < opt.main_tokens) toks.push_back(filler_words()[rng() % filler_words().size()]);
            std::shuffle(toks.begin(), toks.end(), rng);
            std::string text;
            for (const auto& t : toks) text += (text.empty() ? "" : " ") + t;
            recs[i].main_text = std::move(text);

            if (unit(rng) < opt.image_presence) {
                std::vector<std::string> img;
                const long k_bio = std::min<long>(bio(rng), static_cast<long>(opt.image_tokens) / 2);
                for (long k = 0; k < k_bio; ++k) img.push_back(bio_words()[rng() % bio_words().size()]);
                while (img.size() < opt.image_tokens) img.push_back(filler_words()[rng() % filler_words().size()]);
                std::shuffle(img.begin(), img.end(), rng);
                std::string t;
                for (const auto& s : img) t += (t.empty() ? "" : " ") + s;
                recs[i].in_image_text = std::move(t);
            }
        }
        for (auto& r : recs) out.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < opt.below_threshold; ++i) {
        ingest::AdRecord r;
        r.ad_id = "low" + std::to_string(i);
        r.product_category = products.empty() ? "health" : products.front().name;
        r.main_text = "不安 の は";
        r.impressions = 1000 + rng() % 8999;
        r.clicks = r.impressions / 100;
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<GoldenProduct> two_product_corpus(double negemo_rho = 0.3) {
    return {{"health", 3555, 0.0075, negemo_rho, 3.0}, {"cosmetics", 3270, 0.0061, negemo_rho, 1.0}};
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string to_csv(const std::vector<ingest::AdRecord>& records) {
    std::string out = "ad_id,product_category,main_text,in_image_text,image_ref,impressions,clicks\n";
    for (const auto& r : records) {
        out += csv_escape(r.ad_id) + "," + csv_escape(r.product_category) + "," + csv_escape(r.main_text) + "," +
               csv_escape(r.in_image_text.value_or("")) + "," + csv_escape(r.image_ref.value_or("")) + "," +
               std::to_string(r.impressions) + "," + std::to_string(r.clicks) + "\n";
    }
    return out;
}

// Character-mix generator: Poisson counts per class with the given means,
// characters drawn from small per-class pools and shuffled.
struct CharMix {
    double numbers, alphabetic, katakana, hiragana, kanji, symbols, emoji;
};

// Health-products main-text means (counts per ad).
inline constexpr CharMix kHealthMainMix{2.7, 1.2, 17.4, 20.4, 23.3, 6.8, 0.8};

inline std::string mixed_text(std::mt19937_64& rng, const CharMix& mix) {
    static const std::vector<std::vector<char32_t>> pools{
        {U'0', U'1', U'5', U'9', U'７'},
        {U'a', U'Z', U'k', U'Ｗ'},
        {U'ア', U'カ', U'ツ', U'ル', U'ー', U'ﾀ'},
        {U'あ', U'の', U'を', U'ん', U'ゃ'},
        {U'肌', U'血', U'圧', U'価', U'格', U'々'},
        {U'！', U'【', U'】', U'＼', U'／', U'・', U'。', U'%'},
        {U'\U0001F600', U'\U0001F60A', U'\U0001F381'}};
    const std::array<double, 7> means{mix.numbers,  mix.alphabetic, mix.katakana, mix.hiragana,
                                      mix.kanji,    mix.symbols,    mix.emoji};
    std::u32string chars;
    for (std::size_t c = 0; c < 7; ++c) {
        std::poisson_distribution<int> d(means[c]);
        const int n = d(rng);
        for (int k = 0; k < n; ++k) chars.push_back(pools[c][rng() % pools[c].size()]);
    }
    std::shuffle(chars.begin(), chars.end(), rng);
    return utf8::encode(chars);
}

}  // namespace liwcad::testing
