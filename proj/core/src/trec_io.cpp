#include "wwqe/trec_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "wwqe/error.hpp"
#include "wwqe/store_io.hpp"

namespace wwqe {

namespace {

std::size_t line_of(std::string_view content, std::size_t pos) {
  return static_cast<std::size_t>(
             std::count(content.begin(), content.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) +
         1;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : trim(s)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

// Case-insensitive search for an ASCII tag.
std::size_t find_tag(std::string_view s, std::string_view tag, std::size_t from) {
  if (tag.size() > s.size()) return std::string_view::npos;
  for (std::size_t i = from; i + tag.size() <= s.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < tag.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(s[i + k])) !=
          std::tolower(static_cast<unsigned char>(tag[k]))) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

std::string strip_tags(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<') {
      const auto gt = s.find('>', i);
      if (gt == std::string_view::npos) break;
      out.push_back(' ');
      i = gt + 1;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> fields_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string format_double(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::vector<TrecDocument> parse_trec_corpus(std::string_view content) {
  std::vector<TrecDocument> docs;
  std::size_t pos = 0;
  while (true) {
    const auto open = find_tag(content, "<DOC>", pos);
    if (open == std::string_view::npos) break;
    const auto close = find_tag(content, "</DOC>", open + 5);
    const auto next_open = find_tag(content, "<DOC>", open + 5);
    std::string_view body = content.substr(
        open + 5, (close == std::string_view::npos ? content.size() : close) - open - 5);

    TrecDocument doc;
    const auto dn_open = find_tag(body, "<DOCNO>", 0);
    if (dn_open != std::string_view::npos) {
      const auto dn_close = find_tag(body, "</DOCNO>", dn_open);
      if (dn_close == std::string_view::npos) {
        throw ParseError("unterminated DOCNO", line_of(content, open + 5 + dn_open));
      }
      doc.docno = std::string(trim(body.substr(dn_open + 7, dn_close - dn_open - 7)));
    }
    if (doc.docno.empty()) throw ParseError("DOC without DOCNO", line_of(content, open));
    if (close == std::string_view::npos || (next_open != std::string_view::npos && next_open < close)) {
      throw ParseError("unterminated DOC (DOCNO " + doc.docno + ")", line_of(content, open));
    }

    bool saw_text = false;
    std::size_t t = 0;
    while (true) {
      const auto t_open = find_tag(body, "<TEXT>", t);
      if (t_open == std::string_view::npos) break;
      const auto t_close = find_tag(body, "</TEXT>", t_open);
      if (t_close == std::string_view::npos) {
        throw ParseError("unterminated TEXT (DOCNO " + doc.docno + ")",
                         line_of(content, open + 5 + t_open));
      }
      if (saw_text) doc.text.push_back('\n');
      doc.text += strip_tags(body.substr(t_open + 6, t_close - t_open - 6));
      saw_text = true;
      t = t_close + 7;
    }
    if (!saw_text) {
      std::string rest(body.substr(0, dn_open));
      const auto dn_close = find_tag(body, "</DOCNO>", dn_open);
      rest += body.substr(dn_close + 8);
      doc.text = strip_tags(rest);
    }
    docs.push_back(std::move(doc));
    pos = close + 6;
  }
  return docs;
}

std::vector<Topic> parse_topics(std::string_view content) {
  std::vector<Topic> topics;
  std::set<int> ids;
  std::size_t pos = 0;
  while (true) {
    const auto open = find_tag(content, "<top>", pos);
    if (open == std::string_view::npos) break;
    const std::size_t line = line_of(content, open);
    const auto close = find_tag(content, "</top>", open);
    if (close == std::string_view::npos) throw ParseError("unterminated <top>", line);
    const std::string_view block = content.substr(open + 5, close - open - 5);
    pos = close + 6;

    const auto field = [&](std::string_view tag) -> std::optional<std::string> {
      const auto at = find_tag(block, tag, 0);
      if (at == std::string_view::npos) return std::nullopt;
      const std::size_t start = at + tag.size();
      auto end = block.find('<', start);
      if (end == std::string_view::npos) end = block.size();
      return collapse_whitespace(block.substr(start, end - start));
    };

    auto num = field("<num>");
    if (!num) throw ParseError("topic without <num>", line);
    std::string_view num_text = *num;
    if (const auto colon = num_text.find(':'); colon != std::string_view::npos) {
      num_text = trim(num_text.substr(colon + 1));
    }
    const auto id = parse_int<int>(num_text);
    if (!id) throw ParseError("bad topic number '" + *num + "'", line);

    auto title = field("<title>");
    if (!title || title->empty()) {
      throw ParseError("topic " + std::to_string(*id) + " without <title>", line);
    }
    std::string_view title_text = *title;
    if (title_text.starts_with("Topic:")) title_text = trim(title_text.substr(6));
    if (!ids.insert(*id).second) {
      throw ParseError("duplicate topic " + std::to_string(*id), line);
    }
    topics.push_back({*id, std::string(title_text)});
  }
  return topics;
}

void QRels::add(int topic, const std::string& docno, int grade) {
  auto& per_topic = judgments_[topic];
  auto [it, inserted] = per_topic.emplace(docno, grade);
  if (!inserted && it->second != grade) {
    throw Error("conflicting judgments for topic " + std::to_string(topic) + " document " + docno);
  }
}

std::optional<int> QRels::grade(int topic, const std::string& docno) const {
  auto t = judgments_.find(topic);
  if (t == judgments_.end()) return std::nullopt;
  auto d = t->second.find(docno);
  if (d == t->second.end()) return std::nullopt;
  return d->second;
}

bool QRels::is_relevant(int topic, const std::string& docno) const {
  auto g = grade(topic, docno);
  return g && *g >= 1;
}

bool QRels::is_judged(int topic, const std::string& docno) const {
  return grade(topic, docno).has_value();
}

std::size_t QRels::relevant_count(int topic) const {
  auto t = judgments_.find(topic);
  if (t == judgments_.end()) return 0;
  return static_cast<std::size_t>(std::count_if(
      t->second.begin(), t->second.end(), [](const auto& kv) { return kv.second >= 1; }));
}

std::size_t QRels::nonrelevant_count(int topic) const {
  auto t = judgments_.find(topic);
  if (t == judgments_.end()) return 0;
  return t->second.size() - relevant_count(topic);
}

std::vector<int> QRels::topics() const {
  std::vector<int> out;
  for (const auto& [topic, _] : judgments_) out.push_back(topic);
  return out;
}

std::size_t QRels::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, docs] : judgments_) n += docs.size();
  return n;
}

const std::map<std::string, int>* QRels::judgments(int topic) const {
  auto t = judgments_.find(topic);
  return t == judgments_.end() ? nullptr : &t->second;
}

QRels parse_qrels(std::string_view content) {
  QRels qrels;
  std::size_t line_no = 0;
  for (auto line : store::lines(content)) {
    ++line_no;
    const auto f = fields_of(line);
    if (f.empty()) continue;
    if (f.size() != 4) throw ParseError("expected 'topic iteration docno grade'", line_no);
    const auto topic = parse_int<int>(f[0]);
    const auto grade = parse_int<int>(f[3]);
    if (!topic) throw ParseError("bad topic '" + std::string(f[0]) + "'", line_no);
    if (!grade) throw ParseError("bad grade '" + std::string(f[3]) + "'", line_no);
    try {
      qrels.add(*topic, std::string(f[2]), *grade);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return qrels;
}

std::string format_run(const RankedRun& run, std::string_view tag) {
  std::string out;
  for (const auto& [topic, entries] : run) {
    for (const auto& e : entries) {
      out += std::to_string(topic);
      out += " Q0 ";
      out += e.docno;
      out += ' ';
      out += std::to_string(e.rank);
      out += ' ';
      out += format_double(e.score);
      out += ' ';
      out += tag;
      out += '\n';
    }
  }
  return out;
}

RankedRun parse_run(std::string_view content) {
  RankedRun run;
  std::map<int, std::set<std::string>> seen;
  std::size_t line_no = 0;
  for (auto line : store::lines(content)) {
    ++line_no;
    const auto f = fields_of(line);
    if (f.empty()) continue;
    if (f.size() != 6) throw ParseError("expected 'topic Q0 docno rank score tag'", line_no);
    const auto topic = parse_int<int>(f[0]);
    const auto rank = parse_int<int>(f[3]);
    if (!topic || !rank) throw ParseError("bad topic or rank", line_no);
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(std::string(f[4]), &used);
      if (used != f[4].size() || !std::isfinite(score)) throw std::invalid_argument("score");
    } catch (const std::exception&) {
      throw ParseError("bad score '" + std::string(f[4]) + "'", line_no);
    }
    std::string docno(f[2]);
    if (!seen[*topic].insert(docno).second) {
      throw ParseError("document " + docno + " repeated in topic " + std::to_string(*topic),
                       line_no);
    }
    run[*topic].push_back({std::move(docno), score, *rank});
  }
  for (auto& [topic, entries] : run) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
  }
  return run;
}

std::string format_weighted_queries(const WeightedQueries& queries) {
  std::string out;
  for (const auto& [topic, terms] : queries) {
    for (const auto& t : terms) {
      out += std::to_string(topic);
      out += '\t';
      out += t.term;
      out += '\t';
      out += format_double(t.weight);
      out += '\n';
    }
  }
  return out;
}

WeightedQueries parse_weighted_queries(std::string_view content) {
  WeightedQueries queries;
  std::size_t line_no = 0;
  for (auto line : store::lines(content)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = store::split(line, '\t');
    if (f.size() != 3) throw ParseError("expected 'topic<TAB>term<TAB>weight'", line_no);
    const auto topic = parse_int<int>(f[0]);
    if (!topic) throw ParseError("bad topic", line_no);
    double weight = 0.0;
    try {
      weight = std::stod(std::string(f[2]));
    } catch (const std::exception&) {
      throw ParseError("bad weight", line_no);
    }
    queries[*topic].push_back({std::string(f[1]), weight});
  }
  return queries;
}

}  // namespace wwqe
