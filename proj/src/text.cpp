#include "wikitag/text.hpp"

#include <cctype>

namespace wikitag {

const char* ToString(PageKind kind) {
  switch (kind) {
    case PageKind::kArticle: return "article";
    case PageKind::kRedirect: return "redirect";
    case PageKind::kDisambiguation: return "disambiguation";
    case PageKind::kList: return "list";
  }
  return "?";
}

std::optional<PageKind> PageKindFromString(const std::string& s) {
  if (s == "article") return PageKind::kArticle;
  if (s == "redirect") return PageKind::kRedirect;
  if (s == "disambiguation") return PageKind::kDisambiguation;
  if (s == "list") return PageKind::kList;
  return std::nullopt;
}

namespace {

inline bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Lowercases ASCII and the Latin-1 supplement range of UTF-8 (two-byte
// sequences 0xC3 0x80..0x9E map to 0xC3 0xA0..0xBE, skipping the multiply
// sign). Other bytes pass through.
void AppendLowered(std::string& out, std::string_view in) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == 0xC3 && i + 1 < in.size()) {
      unsigned char d = static_cast<unsigned char>(in[i + 1]);
      if (d >= 0x80 && d <= 0x9E && d != 0x97) d += 0x20;
      out.push_back(static_cast<char>(c));
      out.push_back(static_cast<char>(d));
      ++i;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
}

}  // namespace

std::string Normalize(std::string_view text) {
  std::string lowered;
  lowered.reserve(text.size());
  AppendLowered(lowered, text);

  std::string out;
  out.reserve(lowered.size());
  bool pending_space = false;
  for (char ch : lowered) {
    if (IsAsciiSpace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ch);
  }
  return out;
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto is_token_byte = [](unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
  };
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (!is_token_byte(c)) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    while (i < n && is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    tokens.push_back(Token{std::string(text.substr(begin, i - begin)), begin, i});
  }
  return tokens;
}

std::string NormalizedPhrase(const std::vector<Token>& tokens,
                             std::size_t begin, std::size_t end) {
  std::string joined;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) joined.push_back(' ');
    joined += tokens[i].surface;
  }
  return Normalize(joined);
}

bool IsForbiddenAnchorText(std::string_view normalized) {
  if (normalized.size() <= 1) return true;
  bool all_digits = true;
  for (char ch : normalized) {
    if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != ' ') {
      all_digits = false;
      break;
    }
  }
  return all_digits;
}

std::string StripTitleQualifier(std::string_view title) {
  if (title.empty() || title.back() != ')') return std::string(title);
  std::size_t open = title.rfind('(');
  if (open == std::string_view::npos || open == 0) return std::string(title);
  std::size_t end = open;
  while (end > 0 && IsAsciiSpace(static_cast<unsigned char>(title[end - 1]))) {
    --end;
  }
  if (end == 0) return std::string(title);
  return std::string(title.substr(0, end));
}

}  // namespace wikitag
