#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wwqe::wikitext {

struct ParsedText {
  // Plain text with markup removed. Link labels are kept inline.
  std::string plain;
  // Normalized titles of [[Target]] / [[Target|label]] links in order of
  // appearance, duplicates kept. Links into non-article namespaces
  // (File:, Category:, interwiki, ...) and pure section anchors are dropped.
  std::vector<std::string> link_targets;
};

ParsedText parse(std::string_view wikitext);

// Returns the raw target of a "#REDIRECT [[Target]]" page (case-insensitive
// keyword, leading whitespace allowed), or nullopt if the text is not a
// redirect. Any "#section" suffix is removed.
std::optional<std::string> redirect_target(std::string_view wikitext);

// True when a link target names a page outside the main article namespace.
bool is_namespaced(std::string_view target);

}  // namespace wwqe::wikitext
