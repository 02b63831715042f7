#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wwqe::text {

// Tokens are maximal runs of alphanumeric code points. Everything else
// (whitespace, ASCII punctuation, Unicode punctuation and symbols, invalid
// UTF-8) separates tokens. This one definition is shared by the Wikipedia
// store, the retrieval index and query preprocessing so that term counts
// agree across modules.

// Case-folded tokens in order.
std::vector<std::string> tokenize(std::string_view text);

// Surface-form tokens in order (no case folding).
std::vector<std::string> split_words(std::string_view text);

// Appends the case-folded tokens of text to out, each followed by a single
// space. Used on hot paths where per-token allocation matters.
void append_folded_tokens(std::string_view text, std::string& out);

// Simple per-code-point case folding (ASCII, Latin-1, Latin Extended-A,
// Greek, Cyrillic).
std::string fold_case(std::string_view text);

// Title normalization: case-fold, '_' treated as space, runs of whitespace
// collapsed to one space, leading/trailing whitespace removed. Idempotent.
std::string normalize_title(std::string_view title);

// Normalized form of a term or phrase: its folded tokens joined by one space.
// "Swine_Flu" and "swine  flu" both become "swine flu".
std::string normalize_term(std::string_view term);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace wwqe::text
