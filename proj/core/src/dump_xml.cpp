#include "dump_xml.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "wwqe/error.hpp"

namespace wwqe::detail {

namespace {

void append_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Appends character data with the five predefined entities and numeric
// character references decoded.
void append_decoded(std::string_view raw, std::size_t base_offset, std::string& out) {
  std::size_t i = 0;
  while (i < raw.size()) {
    const auto amp = raw.find('&', i);
    if (amp == std::string_view::npos) {
      out.append(raw.substr(i));
      return;
    }
    out.append(raw.substr(i, amp - i));
    const auto semi = raw.find(';', amp);
    if (semi == std::string_view::npos || semi - amp > 12) {
      throw IngestError("unterminated entity reference", base_offset + amp);
    }
    const std::string_view name = raw.substr(amp + 1, semi - amp - 1);
    if (name == "amp") {
      out.push_back('&');
    } else if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (name.size() > 1 && name[0] == '#') {
      unsigned long cp = 0;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const char* first = name.data() + (hex ? 2 : 1);
      const char* last = name.data() + name.size();
      const auto [ptr, ec] = std::from_chars(first, last, cp, hex ? 16 : 10);
      if (ec != std::errc() || ptr != last || cp == 0 || cp > 0x10FFFF) {
        throw IngestError("bad character reference", base_offset + amp);
      }
      append_utf8(static_cast<char32_t>(cp), out);
    } else {
      throw IngestError("unknown entity '&" + std::string(name) + ";'", base_offset + amp);
    }
    i = semi + 1;
  }
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
         c == '.';
}

struct Tag {
  std::string_view name;
  std::string_view attrs;
  bool closing = false;
  bool self_closing = false;
};

std::optional<std::string> attribute(std::string_view attrs, std::string_view key,
                                     std::size_t offset) {
  std::size_t i = 0;
  while (i < attrs.size()) {
    while (i < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[i]))) ++i;
    const std::size_t name_start = i;
    while (i < attrs.size() && is_name_char(attrs[i])) ++i;
    const std::string_view name = attrs.substr(name_start, i - name_start);
    while (i < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[i]))) ++i;
    if (name.empty() || i >= attrs.size() || attrs[i] != '=') {
      if (name.empty() && i >= attrs.size()) break;
      throw IngestError("malformed attribute", offset);
    }
    ++i;
    while (i < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[i]))) ++i;
    if (i >= attrs.size() || (attrs[i] != '"' && attrs[i] != '\'')) {
      throw IngestError("unquoted attribute value", offset);
    }
    const char quote = attrs[i++];
    const auto end = attrs.find(quote, i);
    if (end == std::string_view::npos) throw IngestError("unterminated attribute value", offset);
    if (name == key) {
      std::string value;
      append_decoded(attrs.substr(i, end - i), offset, value);
      return value;
    }
    i = end + 1;
  }
  return std::nullopt;
}

}  // namespace

void read_dump_pages(std::string_view xml, const std::function<void(RawPage&&)>& on_page) {
  std::vector<std::string_view> stack;
  std::optional<RawPage> page;
  std::string* capture = nullptr;
  std::string ns_buffer;
  bool saw_title = false;
  bool saw_root = false;

  std::size_t i = 0;
  while (i < xml.size()) {
    const auto lt = xml.find('<', i);
    const std::size_t text_end = lt == std::string_view::npos ? xml.size() : lt;
    if (text_end > i) {
      const std::string_view chars = xml.substr(i, text_end - i);
      if (capture != nullptr) {
        append_decoded(chars, i, *capture);
      } else if (stack.empty()) {
        for (std::size_t k = 0; k < chars.size(); ++k) {
          if (!std::isspace(static_cast<unsigned char>(chars[k]))) {
            throw IngestError("character data outside the root element", i + k);
          }
        }
      }
    }
    if (lt == std::string_view::npos) break;
    i = lt;

    if (xml.compare(i, 4, "<!--") == 0) {
      const auto end = xml.find("-->", i + 4);
      if (end == std::string_view::npos) throw IngestError("unterminated comment", i);
      i = end + 3;
      continue;
    }
    if (xml.compare(i, 9, "<![CDATA[") == 0) {
      const auto end = xml.find("]]>", i + 9);
      if (end == std::string_view::npos) throw IngestError("unterminated CDATA section", i);
      if (capture != nullptr) capture->append(xml.substr(i + 9, end - i - 9));
      i = end + 3;
      continue;
    }
    if (xml.compare(i, 2, "<?") == 0) {
      const auto end = xml.find("?>", i + 2);
      if (end == std::string_view::npos) throw IngestError("unterminated processing instruction", i);
      i = end + 2;
      continue;
    }
    if (xml.compare(i, 2, "<!") == 0) {
      const auto end = xml.find('>', i + 2);
      if (end == std::string_view::npos) throw IngestError("unterminated declaration", i);
      i = end + 1;
      continue;
    }

    const auto gt = xml.find('>', i);
    if (gt == std::string_view::npos) throw IngestError("unterminated tag", i);
    std::string_view body = xml.substr(i + 1, gt - i - 1);
    Tag tag;
    if (!body.empty() && body.front() == '/') {
      tag.closing = true;
      body.remove_prefix(1);
    }
    if (!body.empty() && body.back() == '/') {
      tag.self_closing = true;
      body.remove_suffix(1);
    }
    std::size_t name_end = 0;
    while (name_end < body.size() && is_name_char(body[name_end])) ++name_end;
    tag.name = body.substr(0, name_end);
    tag.attrs = body.substr(name_end);
    if (tag.name.empty() || (tag.closing && tag.self_closing)) {
      throw IngestError("malformed tag", i);
    }
    if (!tag.attrs.empty() && !std::isspace(static_cast<unsigned char>(tag.attrs.front()))) {
      throw IngestError("malformed tag", i);
    }

    if (tag.closing) {
      if (stack.empty() || stack.back() != tag.name) {
        throw IngestError("mismatched end tag </" + std::string(tag.name) + ">", i);
      }
      stack.pop_back();
      if (page && tag.name == "page") {
        if (!saw_title) throw IngestError("page without title", page->offset);
        if (!ns_buffer.empty()) {
          int ns = 0;
          const auto [ptr, ec] =
              std::from_chars(ns_buffer.data(), ns_buffer.data() + ns_buffer.size(), ns);
          if (ec != std::errc() || ptr != ns_buffer.data() + ns_buffer.size()) {
            throw IngestError("non-numeric namespace", page->offset);
          }
          page->ns = ns;
        }
        on_page(std::move(*page));
        page.reset();
      }
      capture = nullptr;
      i = gt + 1;
      continue;
    }

    if (stack.empty()) {
      if (saw_root) throw IngestError("multiple root elements", i);
      saw_root = true;
    }
    const std::string_view parent = stack.empty() ? std::string_view{} : stack.back();
    if (tag.name == "page") {
      if (page) throw IngestError("nested page element", i);
      page.emplace();
      page->offset = i;
      saw_title = false;
      ns_buffer.clear();
    } else if (page && parent == "page" && tag.name == "title") {
      saw_title = true;
      if (!tag.self_closing) capture = &page->title;
    } else if (page && parent == "page" && tag.name == "ns") {
      if (!tag.self_closing) capture = &ns_buffer;
    } else if (page && parent == "page" && tag.name == "redirect") {
      page->redirect_attr = attribute(tag.attrs, "title", i);
      if (!page->redirect_attr) page->redirect_attr.emplace();
    } else if (page && parent == "revision" && tag.name == "text") {
      if (!tag.self_closing) capture = &page->text;
    } else {
      capture = nullptr;
    }
    if (!tag.self_closing) stack.push_back(tag.name);
    i = gt + 1;
  }
  if (!stack.empty()) {
    throw IngestError("unexpected end of input inside <" + std::string(stack.back()) + ">",
                      xml.size());
  }
}

}  // namespace wwqe::detail
