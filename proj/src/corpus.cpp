#include "wikitag/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "wikitag/text.hpp"

namespace wikitag {

using nlohmann::json;

RawPage ParsePageLine(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw CorpusError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw CorpusError("page record must be an object");

  RawPage page;
  if (!j.contains("id") || !j["id"].is_number_integer()) {
    throw CorpusError("missing integer field 'id'");
  }
  page.id = j["id"].get<PageId>();
  if (!j.contains("title") || !j["title"].is_string()) {
    throw CorpusError("missing string field 'title'");
  }
  page.title = j["title"].get<std::string>();
  if (page.title.empty()) throw CorpusError("empty title");

  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw CorpusError("missing string field 'kind'");
  }
  auto kind = PageKindFromString(j["kind"].get<std::string>());
  if (!kind) throw CorpusError("unknown page kind '" + j["kind"].get<std::string>() + "'");
  page.kind = *kind;

  const bool has_redirect = j.contains("redirect_to");
  if (page.kind == PageKind::kRedirect) {
    if (!has_redirect || !j["redirect_to"].is_string()) {
      throw CorpusError("redirect page without 'redirect_to'");
    }
    page.redirect_to = j["redirect_to"].get<std::string>();
  } else if (has_redirect) {
    throw CorpusError("'redirect_to' on a non-redirect page");
  }

  if (j.contains("body")) {
    if (!j["body"].is_string()) throw CorpusError("'body' must be a string");
    page.body = j["body"].get<std::string>();
  }
  return page;
}

ParsedCorpus ParseCorpus(std::istream& in, bool strict) {
  ParsedCorpus out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.pages.push_back(ParsePageLine(line));
    } catch (const CorpusError& e) {
      if (strict) {
        throw CorpusError("line " + std::to_string(line_no) + ": " + e.what());
      }
      out.errors.push_back(ParseError{line_no, e.what()});
    }
  }
  return out;
}

ParsedCorpus ParseCorpus(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file: " + path);
  return ParseCorpus(in, strict);
}

RedirectMap ResolveRedirects(const std::vector<RawPage>& pages,
                             int depth_limit) {
  std::unordered_map<std::string, const RawPage*> by_title;
  by_title.reserve(pages.size());
  for (const RawPage& p : pages) by_title.emplace(p.title, &p);

  RedirectMap out;
  for (const RawPage& p : pages) {
    if (p.kind == PageKind::kArticle) {
      out.title_to_article.emplace(p.title, p.id);
      continue;
    }
    if (p.kind != PageKind::kRedirect) continue;

    const RawPage* cur = &p;
    int hops = 0;
    bool resolved = false;
    while (hops++ < depth_limit) {
      auto it = by_title.find(cur->redirect_to);
      if (it == by_title.end()) break;
      cur = it->second;
      if (cur->kind == PageKind::kArticle) {
        out.title_to_article.emplace(p.title, cur->id);
        resolved = true;
        break;
      }
      if (cur->kind != PageKind::kRedirect) break;  // redirect to list/disamb
    }
    if (!resolved) out.unresolved.push_back(p.title);
  }
  return out;
}

std::vector<LinkOccurrence> ExtractLinks(const RawPage& page,
                                         const RedirectMap& titlemap,
                                         ExtractStats* stats) {
  std::vector<LinkOccurrence> out;
  const std::string& body = page.body;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = body.find("[[", pos);
    if (open == std::string::npos) break;
    std::size_t close = body.find("]]", open + 2);
    if (close == std::string::npos) {
      if (stats) ++stats->dropped_malformed_span;
      break;
    }
    pos = close + 2;
    std::string_view inner(body.data() + open + 2, close - open - 2);
    std::size_t bar = inner.find('|');
    std::string_view target =
        bar == std::string_view::npos ? inner : inner.substr(0, bar);
    std::string_view surface =
        bar == std::string_view::npos ? inner : inner.substr(bar + 1);
    if (target.empty() || surface.empty()) {
      if (stats) ++stats->dropped_malformed_span;
      continue;
    }
    auto it = titlemap.title_to_article.find(std::string(target));
    if (it == titlemap.title_to_article.end()) {
      if (stats) ++stats->dropped_unknown_target;
      continue;
    }
    LinkOccurrence occ;
    occ.source = page.id;
    occ.target = it->second;
    occ.anchor = Normalize(surface);
    occ.char_begin = open;
    occ.char_end = pos;
    if (occ.anchor.empty()) {
      if (stats) ++stats->dropped_malformed_span;
      continue;
    }
    out.push_back(std::move(occ));
  }
  return out;
}

std::string StripMarkup(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t open = body.find("[[", pos);
    if (open == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    std::size_t close = body.find("]]", open + 2);
    if (close == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    out.append(body.substr(pos, open - pos));
    std::string_view inner = body.substr(open + 2, close - open - 2);
    std::size_t bar = inner.find('|');
    out.append(bar == std::string_view::npos ? inner : inner.substr(bar + 1));
    pos = close + 2;
  }
  return out;
}

}  // namespace wikitag
