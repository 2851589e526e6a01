// Copyright 2026 The synthdoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthdoc/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filtering_streambuf.hpp>

namespace synthdoc::corpus {

namespace {

bool is_alnum(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isalnum(u);
}

char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Element bodies that carry document prose across the Disk 4&5 sub-collections.
bool is_content_tag(const std::string& name) {
  static const std::set<std::string, std::less<>> kContent = {
      "TEXT", "HEADLINE", "HL", "TI", "TITLE", "LP", "LEADPARA", "SUMMARY"};
  return kContent.contains(name);
}

void scrub_eof(std::string& s) { std::erase(s, kEofChar); }

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

// ---------------------------------------------------------------- Vocabulary

void Vocabulary::add(const Term& term, std::uint64_t count) {
  if (term.empty() || count == 0) return;
  freq_[term] += count;
  total_ += count;
}

void Vocabulary::merge(const Vocabulary& other) {
  for (const auto& [term, n] : other.freq_) add(term, n);
}

bool Vocabulary::contains(std::string_view term) const { return freq_.find(term) != freq_.end(); }

std::uint64_t Vocabulary::frequency(std::string_view term) const {
  auto it = freq_.find(term);
  return it == freq_.end() ? 0 : it->second;
}

// -------------------------------------------------------------- StopwordList

StopwordList::StopwordList(std::set<std::string, std::less<>> words) : words_(std::move(words)) {
  if (words_.empty()) throw std::invalid_argument("stopword list is empty");
  for (const auto& w : words_) {
    if (std::any_of(w.begin(), w.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)); }))
      throw std::invalid_argument("stopword not lowercase: " + w);
  }
}

StopwordList StopwordList::load(std::istream& in) {
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.emplace(w);
  }
  return StopwordList(std::move(words));
}

StopwordList StopwordList::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword list: " + path);
  return load(in);
}

// -------------------------------------------------------- TrecDocumentReader

TrecDocumentReader::TrecDocumentReader(std::istream& in, std::string source_tag)
    : in_(in), source_(std::move(source_tag)) {}

int TrecDocumentReader::get() {
  const int c = in_.get();
  if (c != std::char_traits<char>::eof()) ++offset_;
  return c;
}

bool TrecDocumentReader::read_text(std::string* sink) {
  for (;;) {
    const int c = in_.peek();
    if (c == std::char_traits<char>::eof()) return false;
    if (c == '<') {
      // A '<' that cannot start a tag is ordinary text ("a < b").
      in_.get();
      const int n = in_.peek();
      in_.unget();
      if (n == '/' || (n != std::char_traits<char>::eof() && std::isalpha(n))) return true;
    }
    get();
    if (sink) sink->push_back(static_cast<char>(c));
  }
}

bool TrecDocumentReader::read_tag(Tag& tag) {
  tag = Tag{};
  tag.offset = offset_;
  get();  // '<'
  std::string body;
  for (;;) {
    const int c = get();
    if (c == std::char_traits<char>::eof()) return false;
    if (c == '>') break;
    body.push_back(static_cast<char>(c));
  }
  std::string_view v = trim(body);
  if (!v.empty() && v.front() == '/') {
    tag.closing = true;
    v.remove_prefix(1);
  }
  const auto end = v.find_first_of(" \t\r\n/");
  tag.name = upper(std::string(v.substr(0, end)));
  return true;
}

std::optional<Document> TrecDocumentReader::next() {
  Tag tag;
  // Skip to the next <DOC>.
  for (;;) {
    if (!read_text(nullptr)) return std::nullopt;
    const auto at = offset_;
    if (!read_tag(tag)) throw ParseError("unterminated tag at offset " + std::to_string(at), at);
    if (!tag.closing && tag.name == "DOC") break;
  }
  const auto doc_offset = tag.offset;

  Document doc;
  doc.source = source_;
  std::optional<std::string> docno;
  std::string docno_buf;
  bool in_docno = false;
  int content_depth = 0;
  std::string piece;

  auto unclosed = [&] {
    return ParseError("unclosed DOC at offset " + std::to_string(offset_), offset_);
  };

  for (;;) {
    std::string* sink = in_docno ? &docno_buf : (content_depth > 0 ? &piece : nullptr);
    if (!read_text(sink)) throw unclosed();
    if (!read_tag(tag)) throw unclosed();

    if (tag.name == "DOC") {
      if (!tag.closing) throw unclosed();
      if (!docno || docno->empty())
        throw ParseError("missing DOCNO in DOC at offset " + std::to_string(doc_offset), doc_offset);
      doc.docno = std::move(*docno);
      scrub_eof(doc.text);
      return doc;
    }
    if (tag.name == "DOCNO") {
      if (!tag.closing) {
        in_docno = true;
        docno_buf.clear();
      } else if (in_docno) {
        in_docno = false;
        docno = std::string(trim(docno_buf));
      }
      continue;
    }
    if (is_content_tag(tag.name)) {
      if (!tag.closing) {
        if (content_depth > 0) piece.push_back(' ');
        ++content_depth;
      } else if (content_depth > 0) {
        --content_depth;
        if (content_depth == 0) {
          auto body = trim(piece);
          if (!body.empty()) {
            if (!doc.text.empty()) doc.text.push_back('\n');
            doc.text.append(body);
          }
          piece.clear();
        } else {
          piece.push_back(' ');
        }
      }
      continue;
    }
    // Unknown tags are markup only; keep word boundaries inside content.
    if (content_depth > 0) piece.push_back(' ');
  }
}

std::vector<Document> parse_trec_documents(std::istream& in, const std::string& source_tag) {
  TrecDocumentReader reader(in, source_tag);
  std::vector<Document> docs;
  while (auto d = reader.next()) docs.push_back(std::move(*d));
  return docs;
}

// -------------------------------------------------------------------- topics

std::vector<Topic> parse_topics(std::istream& in) {
  const std::string all{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::string lower_all = all;
  std::transform(lower_all.begin(), lower_all.end(), lower_all.begin(), lower);

  // Field text runs from after the field tag up to the next tag.
  auto field = [&](std::size_t begin, std::size_t end, std::string_view name) -> std::optional<std::string> {
    const auto open = std::string("<") + std::string(name) + ">";
    const auto p = lower_all.find(open, begin);
    if (p == std::string::npos || p >= end) return std::nullopt;
    const auto start = p + open.size();
    auto stop = lower_all.find('<', start);
    if (stop == std::string::npos || stop > end) stop = end;
    return all.substr(start, stop - start);
  };

  std::vector<Topic> topics;
  std::size_t pos = 0;
  int index = 0;
  for (;;) {
    const auto b = lower_all.find("<top>", pos);
    if (b == std::string::npos) break;
    ++index;
    auto e = lower_all.find("</top>", b);
    if (e == std::string::npos) e = lower_all.size();

    auto num = field(b, e, "num");
    if (!num) throw ParseError("topic missing num (topic " + std::to_string(index) + ")", b);
    std::string digits;
    for (char c : *num)
      if (std::isdigit(static_cast<unsigned char>(c))) digits.push_back(c);
    auto id = parse_int(digits);
    if (!id) throw ParseError("topic num has no digits (topic " + std::to_string(index) + ")", b);

    auto title = field(b, e, "title");
    if (!title) throw ParseError("topic missing title (topic " + std::to_string(*id) + ")", b);
    auto normalized = normalize_whitespace(*title);
    if (normalized.empty()) throw ParseError("topic has empty title (topic " + std::to_string(*id) + ")", b);

    topics.push_back(Topic{*id, std::move(normalized)});
    pos = e;
  }
  return topics;
}

// --------------------------------------------------------------------- qrels

std::vector<QrelEntry> parse_qrels(std::istream& in) {
  std::vector<QrelEntry> out;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string topic, iter, docno, rel;
    if (!(fields >> topic)) continue;  // blank line
    if (!(fields >> iter >> docno >> rel))
      throw ParseError("qrels line " + std::to_string(lineno) + ": expected 4 fields", lineno);
    auto t = parse_int(topic);
    auto r = parse_int(rel);
    if (!t) throw ParseError("qrels line " + std::to_string(lineno) + ": bad topic id '" + topic + "'", lineno);
    if (!r || *r < 0)
      throw ParseError("qrels line " + std::to_string(lineno) + ": bad relevance '" + rel + "'", lineno);
    out.push_back(QrelEntry{*t, std::move(docno), *r});
  }
  return out;
}

// ------------------------------------------------------------------ tokenize

std::vector<Term> tokenize(std::string_view text) {
  std::vector<Term> terms;
  Term cur;
  for (char c : text) {
    if (is_alnum(c)) {
      cur.push_back(lower(c));
    } else if (!cur.empty()) {
      terms.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) terms.push_back(std::move(cur));
  return terms;
}

Vocabulary build_vocabulary(const std::vector<Document>& docs) {
  Vocabulary v;
  for (const auto& d : docs)
    for (const auto& t : tokenize(d.text)) v.add(t);
  return v;
}

namespace {

// Owns the file and the decompressing buffer so the stream stays lazy.
class GzipInputStream : public std::istream {
public:
  explicit GzipInputStream(const std::string& path)
      : std::istream(nullptr), file_(path, std::ios::binary) {
    if (!file_) throw std::runtime_error("cannot open " + path);
    buf_.push(boost::iostreams::gzip_decompressor());
    buf_.push(file_);
    rdbuf(&buf_);
  }

private:
  std::ifstream file_;
  boost::iostreams::filtering_istreambuf buf_;
};

}  // namespace

std::unique_ptr<std::istream> open_input(const std::string& path) {
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0)
    return std::make_unique<GzipInputStream>(path);
  auto f = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*f) throw std::runtime_error("cannot open " + path);
  return f;
}

std::vector<std::string> relevant_docnos(const std::vector<QrelEntry>& qrels, int topic_id) {
  std::vector<std::string> out;
  std::set<std::string, std::less<>> seen;
  for (const auto& q : qrels)
    if (q.topic_id == topic_id && q.relevant() && seen.insert(q.docno).second) out.push_back(q.docno);
  return out;
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending = !out.empty();
    } else {
      if (pending) out.push_back(' ');
      pending = false;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace synthdoc::corpus
