#include "subcollect/relevance.hpp"

#include "subcollect/error.hpp"
#include "subcollect/text.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace subcollect {

namespace {

class CosineTfScorer final : public KeywordScorer {
public:
    std::string_view id() const override { return kDefaultScorer; }

    double score(std::span<const std::string> tokens, std::span<const std::string> terms) const override {
        if (tokens.empty() || terms.empty()) return 0.0;
        std::unordered_map<std::string_view, std::uint64_t> tf;
        for (const auto& t : tokens) ++tf[t];
        double norm_sq = 0.0;
        for (const auto& [term, n] : tf) norm_sq += static_cast<double>(n) * static_cast<double>(n);
        double dot = 0.0;
        for (const auto& term : terms)
            if (auto it = tf.find(term); it != tf.end()) dot += static_cast<double>(it->second);
        if (dot == 0.0) return 0.0;
        return std::min(1.0, dot / (std::sqrt(norm_sq) * std::sqrt(static_cast<double>(terms.size()))));
    }
};

std::vector<std::vector<std::string>> alias_token_lists(const EntityRef& entity) {
    std::vector<std::vector<std::string>> out;
    auto add = [&](const std::string& alias) {
        auto toks = tokenize(alias);
        if (!toks.empty() && std::find(out.begin(), out.end(), toks) == out.end()) out.push_back(std::move(toks));
    };
    add(entity.label);
    for (const auto& a : entity.aliases) add(a);
    return out;
}

bool contains_run(std::span<const std::string> tokens, const std::vector<std::string>& run) {
    return std::search(tokens.begin(), tokens.end(), run.begin(), run.end()) != tokens.end();
}

}  // namespace

std::unique_ptr<KeywordScorer> make_keyword_scorer(std::string_view id) {
    if (id == kDefaultScorer) return std::make_unique<CosineTfScorer>();
    throw ValidationError("unknown keyword scorer '" + std::string(id) + "'");
}

std::vector<std::string> keyword_terms(std::span<const std::string> keywords) {
    std::vector<std::string> terms;
    for (const auto& k : keywords)
        for (auto& t : tokenize(k))
            if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(std::move(t));
    if (terms.empty()) throw ValidationError("keyword list is empty");
    return terms;
}

double keyword_score(std::span<const std::string> tokens, std::span<const std::string> keywords) {
    const auto terms = keyword_terms(keywords);
    return CosineTfScorer{}.score(tokens, terms);
}

bool entity_match(std::span<const std::string> tokens, const EntityRef& entity) {
    for (const auto& run : alias_token_lists(entity))
        if (contains_run(tokens, run)) return true;
    return false;
}

RelevanceFilter::RelevanceFilter(const SubCollectionSpec& spec) : combine_(spec.entity_combine) {
    if (spec.keyword_scope) {
        has_keywords_ = true;
        terms_ = keyword_terms(*spec.keyword_scope);
        threshold_ = spec.relevance_threshold.value_or(0.0);
        scorer_ = make_keyword_scorer(spec.scorer);
    }
    if (spec.entity_scope)
        for (const auto& e : *spec.entity_scope) entities_.push_back({e.id, alias_token_lists(e)});
}

RelevanceVerdict RelevanceFilter::evaluate(const PageAnalysis& analysis) const {
    RelevanceVerdict v;
    bool keyword_ok = true;
    if (has_keywords_) {
        v.keyword_score = scorer_->score(analysis.tokens, terms_);
        keyword_ok = *v.keyword_score >= threshold_;
    }
    bool entity_ok = true;
    if (!entities_.empty()) {
        for (const auto& e : entities_) {
            if (std::any_of(e.alias_tokens.begin(), e.alias_tokens.end(),
                            [&](const auto& run) { return contains_run(analysis.tokens, run); }))
                v.matched_entities.push_back(e.id);
        }
        entity_ok = combine_ == EntityCombine::all ? v.matched_entities.size() == entities_.size()
                                                   : !v.matched_entities.empty();
    }
    v.relevant = keyword_ok && entity_ok;
    return v;
}

RelevanceVerdict is_relevant(const PageAnalysis& analysis, const SubCollectionSpec& spec) {
    return RelevanceFilter(spec).evaluate(analysis);
}

}  // namespace subcollect
