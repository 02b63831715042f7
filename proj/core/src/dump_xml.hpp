#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace wwqe::detail {

struct RawPage {
  std::string title;
  int ns = 0;
  // Value of the <redirect title="..."/> attribute when present.
  std::optional<std::string> redirect_attr;
  std::string text;
  std::size_t offset = 0;  // byte offset of the <page> start tag
};

// Streams the pages of a MediaWiki XML export held in memory. Throws
// IngestError with the byte offset of the first well-formedness violation.
void read_dump_pages(std::string_view xml, const std::function<void(RawPage&&)>& on_page);

}  // namespace wwqe::detail
