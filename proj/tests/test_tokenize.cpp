#include <gtest/gtest.h>

#include <random>

#include "liwcad/text/tokenize.hpp"

namespace {

using namespace liwcad;
using text::tokenize;

using Tokens = std::vector<std::string>;

TEST(Tokenize, WhitespaceAndClassTransitions) {
    EXPECT_EQ(tokenize("very happy!").tokens, (Tokens{"very", "happy", "!"}));
    EXPECT_EQ(tokenize("価格500円").tokens, (Tokens{"価", "格", "500", "円"}));
    EXPECT_EQ(tokenize("SALE中!!😊😊").tokens, (Tokens{"SALE", "中", "!", "!", "😊", "😊"}));
    EXPECT_TRUE(tokenize("").tokens.empty());
    EXPECT_TRUE(tokenize(" \t\n").tokens.empty());
}

TEST(Tokenize, GreedyLongestMatchInCjkRuns) {
    const auto dict = liwc::parse_dictionary("%\n1\tbio\n2\tcause\n%\n血圧\t1\n血\t1\n対策\t2\n対策法\t2\n");
    const auto m = liwc::compile_matcher(dict);
    EXPECT_EQ(tokenize("血圧対策法を", m).tokens, (Tokens{"血圧", "対策法", "を"}));
    EXPECT_EQ(tokenize("血液", m).tokens, (Tokens{"血", "液"}));
    EXPECT_EQ(tokenize("対策", m).tokens.front(), "対策");
}

TEST(Tokenize, HalfWidthVoicingMarksStayAttached) {
    const auto dict = liwc::parse_dictionary("%\n1\tbio\n%\nダイエット\t1\n");
    const auto m = liwc::compile_matcher(dict);
    const auto t = tokenize("ﾀﾞｲｴｯﾄ", m);
    ASSERT_EQ(t.tokens.size(), 1u);
    EXPECT_EQ(liwc::match_token(m, t.tokens[0]), (liwc::CategorySet{1}));
}

TEST(Tokenize, BoundariesSliceTheSource) {
    const std::string src = "【限定】 お試し価格 500円 ✨Skin care✨";
    const auto t = tokenize(src);
    ASSERT_EQ(t.tokens.size(), t.boundaries.size());
    std::size_t prev_end = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto [b, e] = t.boundaries[i];
        EXPECT_LT(b, e);
        EXPECT_GE(b, prev_end);
        EXPECT_EQ(src.substr(b, e - b), t.tokens[i]);
        prev_end = e;
    }
}

std::string strip_whitespace(std::string_view s) {
    std::string out;
    text::for_each_unit(s, [&](const text::CharUnit& u) {
        if (u.cls != text::CharClass::Whitespace) out += s.substr(u.begin, u.end - u.begin);
    });
    return out;
}

// Property: joined tokens reproduce the source minus whitespace.
TEST(Tokenize, RandomCjkStringsReconstruct) {
    const std::vector<std::string> alphabet{"あ", "い", "ア", "ｶ", "ﾞ", "血", "圧", "対", "策", "ー", " ", "A", "1",
                                            "！", "😊", "・", "々", "　"};
    const auto dict = liwc::parse_dictionary("%\n1\tx\n%\n血圧\t1\n対策*\t1\nあい\t1\nｶﾞ\t1\n");
    const auto m = liwc::compile_matcher(dict);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        std::string s;
        const std::size_t len = rng() % 30;
        for (std::size_t k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
        for (const liwc::Matcher* mp : {static_cast<const liwc::Matcher*>(nullptr), &m}) {
            const auto t = tokenize(s, mp);
            std::string joined;
            for (const auto& tok : t.tokens) {
                EXPECT_FALSE(tok.empty());
                joined += tok;
            }
            EXPECT_EQ(joined, strip_whitespace(s)) << s;
        }
    }
}

}  // namespace
