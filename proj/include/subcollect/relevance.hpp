#pragma once

#include "subcollect/html.hpp"
#include "subcollect/spec.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subcollect {

struct RelevanceVerdict {
    std::optional<double> keyword_score;        // absent without a keyword scope
    std::vector<std::string> matched_entities;  // entity ids, spec order
    bool relevant = false;
};

/// Keyword scorers are selected by string id from the spec.
class KeywordScorer {
public:
    virtual ~KeywordScorer() = default;
    virtual std::string_view id() const = 0;
    /// `terms` are distinct lowercase tokens. Result in [0, 1].
    virtual double score(std::span<const std::string> tokens, std::span<const std::string> terms) const = 0;
};

/// Throws ValidationError for an unknown id.
std::unique_ptr<KeywordScorer> make_keyword_scorer(std::string_view id);

/// Distinct keyword terms: every keyword is tokenized, multi-word keywords
/// contribute all their words. Throws ValidationError if nothing remains.
std::vector<std::string> keyword_terms(std::span<const std::string> keywords);

/// Cosine between the raw term-frequency vector of `tokens` and the uniform
/// indicator vector over the keyword terms. 0 for an empty document.
double keyword_score(std::span<const std::string> tokens, std::span<const std::string> keywords);

/// True iff the label or an alias, tokenized like page text, occurs as a
/// contiguous run of `tokens`.
bool entity_match(std::span<const std::string> tokens, const EntityRef& entity);

/// Content filter prepared once per spec; stateless afterwards and safe to
/// share across threads.
class RelevanceFilter {
public:
    explicit RelevanceFilter(const SubCollectionSpec& spec);

    RelevanceVerdict evaluate(const PageAnalysis& analysis) const;
    bool has_content_scopes() const { return has_keywords_ || !entities_.empty(); }

private:
    struct PreparedEntity {
        std::string id;
        std::vector<std::vector<std::string>> alias_tokens;
    };

    bool has_keywords_ = false;
    std::vector<std::string> terms_;
    double threshold_ = 0.0;
    std::unique_ptr<KeywordScorer> scorer_;
    std::vector<PreparedEntity> entities_;
    EntityCombine combine_ = EntityCombine::any;
};

RelevanceVerdict is_relevant(const PageAnalysis& analysis, const SubCollectionSpec& spec);

}  // namespace subcollect
