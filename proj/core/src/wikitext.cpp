#include "wwqe/wikitext.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "wwqe/text.hpp"

namespace wwqe::wikitext {

namespace {

constexpr std::array<std::string_view, 26> kNamespaces = {
    "category", "file",     "image",     "media",     "template", "help",  "portal",
    "wikipedia", "wp",      "special",   "user",      "talk",     "draft", "module",
    "mediawiki", "timedtext", "book",    "education program",     "gadget", "topic",
    "wiktionary", "wikt",   "commons",   "wikisource", "wikiquote", "meta"};

bool starts_with_at(std::string_view s, std::size_t i, std::string_view prefix) {
  return s.size() >= i + prefix.size() && s.compare(i, prefix.size(), prefix) == 0;
}

bool istarts_with_at(std::string_view s, std::size_t i, std::string_view prefix) {
  if (s.size() < i + prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(s[i + k])) != prefix[k]) return false;
  }
  return true;
}

// Index one past the "close" that balances the "open" found at i, or npos.
std::size_t skip_balanced(std::string_view s, std::size_t i, std::string_view open,
                          std::string_view close) {
  int depth = 0;
  while (i < s.size()) {
    if (starts_with_at(s, i, open)) {
      ++depth;
      i += open.size();
    } else if (starts_with_at(s, i, close)) {
      --depth;
      i += close.size();
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

std::string_view strip_anchor(std::string_view target) {
  const auto hash = target.find('#');
  return hash == std::string_view::npos ? target : target.substr(0, hash);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void append_space(std::string& out) {
  if (!out.empty() && out.back() != ' ' && out.back() != '\n') out.push_back(' ');
}

void parse_into(std::string_view s, ParsedText& result, bool collect_links);

void handle_internal_link(std::string_view inner, ParsedText& result, bool collect_links) {
  const auto pipe = inner.find('|');
  std::string_view target = trim(pipe == std::string_view::npos ? inner : inner.substr(0, pipe));
  bool leading_colon = false;
  if (!target.empty() && target.front() == ':') {
    leading_colon = true;
    target.remove_prefix(1);
  }
  const bool namespaced = is_namespaced(target);
  if (namespaced && !leading_colon) return;  // File/Category/interwiki: drop entirely

  std::string_view label = target;
  if (pipe != std::string_view::npos) {
    const auto last = inner.rfind('|');
    std::string_view tail = inner.substr(last + 1);
    if (!trim(tail).empty()) label = tail;
  }
  ParsedText nested;
  parse_into(label, nested, false);
  append_space(result.plain);
  result.plain.append(nested.plain);
  append_space(result.plain);

  if (!collect_links || namespaced) return;
  std::string normalized = text::normalize_title(strip_anchor(target));
  if (!normalized.empty()) result.link_targets.push_back(std::move(normalized));
}

void parse_into(std::string_view s, ParsedText& result, bool collect_links) {
  std::string& out = result.plain;
  std::size_t i = 0;
  const auto at_line_start = [&](std::size_t pos) { return pos == 0 || s[pos - 1] == '\n'; };
  while (i < s.size()) {
    const char c = s[i];
    if (c == '<') {
      if (starts_with_at(s, i, "<!--")) {
        const auto end = s.find("-->", i + 4);
        i = end == std::string_view::npos ? s.size() : end + 3;
        continue;
      }
      if (istarts_with_at(s, i, "<ref") || istarts_with_at(s, i, "<math") ||
          istarts_with_at(s, i, "<gallery") || istarts_with_at(s, i, "<score")) {
        const auto gt = s.find('>', i);
        if (gt == std::string_view::npos) {
          i = s.size();
          continue;
        }
        if (s[gt - 1] == '/') {
          i = gt + 1;
          continue;
        }
        std::size_t name_end = i + 1;
        while (name_end < s.size() && std::isalpha(static_cast<unsigned char>(s[name_end]))) {
          ++name_end;
        }
        std::string close = "</" + text::fold_case(s.substr(i + 1, name_end - i - 1));
        std::size_t end = std::string_view::npos;
        for (std::size_t k = gt + 1; k + close.size() <= s.size(); ++k) {
          if (istarts_with_at(s, k, close)) {
            end = k;
            break;
          }
        }
        if (end == std::string_view::npos) {
          i = gt + 1;
          continue;
        }
        const auto close_gt = s.find('>', end);
        i = close_gt == std::string_view::npos ? s.size() : close_gt + 1;
        append_space(out);
        continue;
      }
      const bool tagish = i + 1 < s.size() && (std::isalpha(static_cast<unsigned char>(s[i + 1])) ||
                                               s[i + 1] == '/' || s[i + 1] == '!');
      if (tagish) {
        const auto gt = s.find('>', i);
        if (gt != std::string_view::npos) {
          i = gt + 1;
          append_space(out);
          continue;
        }
      }
      out.push_back(c);
      ++i;
      continue;
    }
    if (c == '{' && starts_with_at(s, i, "{{")) {
      const auto end = skip_balanced(s, i, "{{", "}}");
      i = end == std::string_view::npos ? s.size() : end;
      append_space(out);
      continue;
    }
    if (c == '{' && starts_with_at(s, i, "{|") && at_line_start(i)) {
      const auto end = skip_balanced(s, i, "{|", "|}");
      i = end == std::string_view::npos ? s.size() : end;
      append_space(out);
      continue;
    }
    if (c == '[' && starts_with_at(s, i, "[[")) {
      const auto end = skip_balanced(s, i, "[[", "]]");
      if (end == std::string_view::npos) {
        i += 2;
        continue;
      }
      handle_internal_link(s.substr(i + 2, end - i - 4), result, collect_links);
      i = end;
      continue;
    }
    if (c == '[' && (starts_with_at(s, i + 1, "http://") || starts_with_at(s, i + 1, "https://") ||
                     starts_with_at(s, i + 1, "ftp://") || starts_with_at(s, i + 1, "//"))) {
      const auto close = s.find(']', i);
      if (close == std::string_view::npos) {
        ++i;
        continue;
      }
      const auto inner = s.substr(i + 1, close - i - 1);
      const auto space = inner.find(' ');
      append_space(out);
      if (space != std::string_view::npos) {
        ParsedText nested;
        parse_into(inner.substr(space + 1), nested, false);
        out.append(nested.plain);
        append_space(out);
      }
      i = close + 1;
      continue;
    }
    if (c == '\'' && starts_with_at(s, i, "''")) {
      while (i < s.size() && s[i] == '\'') ++i;
      continue;
    }
    if (c == '=' && starts_with_at(s, i, "==")) {
      while (i < s.size() && s[i] == '=') ++i;
      append_space(out);
      continue;
    }
    if (c == '_' && starts_with_at(s, i, "__")) {
      std::size_t k = i + 2;
      while (k < s.size() && std::isupper(static_cast<unsigned char>(s[k]))) ++k;
      if (k > i + 2 && starts_with_at(s, k, "__")) {
        i = k + 2;
        continue;
      }
    }
    if (c == '&') {
      std::size_t k = i + 1;
      while (k < s.size() && k - i <= 10 && (std::isalnum(static_cast<unsigned char>(s[k])) ||
                                             s[k] == '#')) {
        ++k;
      }
      if (k < s.size() && s[k] == ';' && k > i + 1) {
        append_space(out);
        i = k + 1;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
}

}  // namespace

bool is_namespaced(std::string_view target) {
  const auto colon = target.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  const std::string prefix = text::normalize_title(target.substr(0, colon));
  if (std::find(kNamespaces.begin(), kNamespaces.end(), prefix) != kNamespaces.end()) return true;
  if (prefix.size() >= 5 && prefix.ends_with(" talk")) return true;
  // Interwiki language prefixes: "fr:", "de:", "simple:" ...
  const bool lang = (prefix.size() == 2 || prefix.size() == 3) &&
                    std::all_of(prefix.begin(), prefix.end(),
                                [](char ch) { return ch >= 'a' && ch <= 'z'; });
  return lang || prefix == "simple";
}

ParsedText parse(std::string_view wikitext) {
  ParsedText result;
  result.plain.reserve(wikitext.size());
  parse_into(wikitext, result, true);
  return result;
}

std::optional<std::string> redirect_target(std::string_view wikitext) {
  std::size_t i = 0;
  while (i < wikitext.size() && std::isspace(static_cast<unsigned char>(wikitext[i]))) ++i;
  if (!istarts_with_at(wikitext, i, "#redirect")) return std::nullopt;
  const auto open = wikitext.find("[[", i);
  if (open == std::string_view::npos) return std::nullopt;
  const auto close = wikitext.find("]]", open + 2);
  if (close == std::string_view::npos) return std::nullopt;
  std::string_view inner = wikitext.substr(open + 2, close - open - 2);
  const auto pipe = inner.find('|');
  if (pipe != std::string_view::npos) inner = inner.substr(0, pipe);
  inner = trim(strip_anchor(inner));
  if (!inner.empty() && inner.front() == ':') inner.remove_prefix(1);
  if (inner.empty()) return std::nullopt;
  return std::string(inner);
}

}  // namespace wwqe::wikitext
