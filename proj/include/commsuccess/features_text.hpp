#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commsuccess/descriptive.hpp"
#include "commsuccess/errors.hpp"
#include "commsuccess/feature_vector.hpp"
#include "commsuccess/window_view.hpp"

namespace commsuccess {

// Lowercase, URL-stripped, split on non-alphanumeric.
inline std::vector<std::string> tokenize(const std::string& text) {
    std::string lower;
    lower.reserve(text.size());
    for (unsigned char c : text) lower.push_back(static_cast<char>(std::tolower(c)));

    // drop whitespace-delimited chunks that look like URLs
    std::string cleaned;
    cleaned.reserve(lower.size());
    std::size_t i = 0;
    while (i < lower.size()) {
        std::size_t j = i;
        while (j < lower.size() && !std::isspace(static_cast<unsigned char>(lower[j]))) ++j;
        const std::string_view chunk(lower.data() + i, j - i);
        if (chunk.rfind("http://", 0) != 0 && chunk.rfind("https://", 0) != 0 &&
            chunk.rfind("www.", 0) != 0) {
            cleaned.append(chunk);
            cleaned.push_back(' ');
        }
        i = j + 1;
    }

    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : cleaned) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Category -> patterns; a pattern is a lowercase token or a prefix ending in
// '*'. File format: `category_name: pat1, pat2, ...`, '#' comments.
class CategoryLexicon {
  public:
    void add_category(const std::string& name, std::vector<std::string> patterns) {
        if (name.empty()) throw ConfigError("lexicon: empty category name");
        if (categories_.count(name)) throw ConfigError("lexicon: duplicate category: " + name);
        for (const auto& p : patterns)
            if (p.empty() || p == "*") throw ConfigError("lexicon: empty pattern in " + name);
        categories_[name] = std::move(patterns);
    }

    bool empty() const { return categories_.empty(); }

    std::vector<std::string> category_names() const {
        std::vector<std::string> names;
        for (const auto& [name, _] : categories_) names.push_back(name);
        return names;
    }

    bool matches(const std::string& category, const std::string& token) const {
        for (const auto& pat : categories_.at(category)) {
            if (pat.back() == '*') {
                const std::string_view stem(pat.data(), pat.size() - 1);
                if (token.size() >= stem.size() && token.compare(0, stem.size(), stem) == 0)
                    return true;
            } else if (token == pat) {
                return true;
            }
        }
        return false;
    }

    static CategoryLexicon parse(std::istream& in) {
        CategoryLexicon lex;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto colon = line.find(':');
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            if (colon == std::string::npos)
                throw ConfigError("lexicon: missing ':' on line " + std::to_string(lineno));
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            std::string name = trim(line.substr(0, colon));
            std::vector<std::string> patterns;
            std::stringstream rest(line.substr(colon + 1));
            std::string pat;
            while (std::getline(rest, pat, ',')) {
                pat = trim(pat);
                if (!pat.empty()) patterns.push_back(pat);
            }
            lex.add_category(name, std::move(patterns));
        }
        return lex;
    }

  private:
    std::map<std::string, std::vector<std::string>> categories_;
};

// Small open default so the pipeline runs without an external lexicon file.
// The first-person-plural category is required by the feature registry.
inline CategoryLexicon default_lexicon() {
    CategoryLexicon lex;
    lex.add_category("pronoun_we", {"we", "us", "our*", "ourselves", "lets"});
    lex.add_category("pronoun_i", {"i", "me", "my", "mine", "myself", "im"});
    lex.add_category("pronoun_you", {"you", "your*", "yourself", "u"});
    lex.add_category("affect_positive", {"good", "great", "love*", "happy", "nice", "best", "awesome",
                                         "fun", "thank*", "glad", "cool", "amazing", "like*"});
    lex.add_category("affect_negative", {"bad", "hate*", "sad", "awful", "worst", "angry", "annoy*",
                                         "terrible", "wrong", "problem*", "fail*"});
    return lex;
}

// Lengths, vocabulary rate, and lexicon category distributions over the
// window text. Category fractions are pooled over all window tokens of the
// given kind, separately for posts and comments.
inline void linguistic_features(const WindowView& view, const CategoryLexicon& lexicon,
                                FeatureVector& out) {
    const EarlyWindow& w = view.window;
    const auto family = FeatureFamily::Linguistic;

    std::vector<double> post_lengths, title_lengths, comment_lengths;
    std::vector<std::string> post_tokens, comment_tokens;
    std::set<std::string> vocab;
    for (const auto& e : w.events) {
        if (e.is_post()) {
            auto title = tokenize(e.title);
            auto body = tokenize(e.body);
            title_lengths.push_back(static_cast<double>(title.size()));
            post_lengths.push_back(static_cast<double>(body.size()));
            for (auto& t : title) {
                vocab.insert(t);
                post_tokens.push_back(std::move(t));
            }
            for (auto& t : body) {
                vocab.insert(t);
                post_tokens.push_back(std::move(t));
            }
        } else {
            auto body = tokenize(e.body);
            comment_lengths.push_back(static_cast<double>(body.size()));
            for (auto& t : body) {
                vocab.insert(t);
                comment_tokens.push_back(std::move(t));
            }
        }
    }

    const bool no_posts = post_lengths.empty();
    const bool no_comments = comment_lengths.empty();
    out.add(family, "median_post_length", no_posts ? 0.0 : median_of(post_lengths), no_posts);
    out.add(family, "median_title_length", no_posts ? 0.0 : median_of(title_lengths), no_posts);
    out.add(family, "median_comment_length", no_comments ? 0.0 : median_of(comment_lengths),
            no_comments);
    out.add(family, "vocab_rate",
            static_cast<double>(vocab.size()) / static_cast<double>(w.events.size()));

    for (const auto& category : lexicon.category_names()) {
        auto fraction = [&](const std::vector<std::string>& tokens) {
            std::size_t hits = 0;
            for (const auto& t : tokens) hits += lexicon.matches(category, t);
            return tokens.empty() ? 0.0
                                  : static_cast<double>(hits) / static_cast<double>(tokens.size());
        };
        out.add(family, "posts_cat_" + category, fraction(post_tokens), post_tokens.empty());
        out.add(family, "comments_cat_" + category, fraction(comment_tokens), comment_tokens.empty());
    }
}

}  // namespace commsuccess
