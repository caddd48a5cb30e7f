#include "iamlearn/pabulib.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "iamlearn/error.hpp"

namespace iamlearn {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// ';'-separated record with optional double-quoted fields ("" escapes a quote).
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ';') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

struct Section {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> line_numbers;
};

std::size_t column(const Section& s, std::string_view name, std::string_view section) {
  for (std::size_t i = 0; i < s.header.size(); ++i) {
    if (trim(s.header[i]) == name) return i;
  }
  throw Error(ErrorKind::MalformedRecord,
              std::string(section) + " header has no '" + std::string(name) + "' column");
}

}  // namespace

Election parse_pabulib(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::unordered_map<std::string, Section> sections;
  Section* current = nullptr;
  bool expect_header = false;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    const std::string tag = upper(line);
    if (tag == "META" || tag == "PROJECTS" || tag == "VOTES") {
      current = &sections[tag];
      if (!current->header.empty()) {
        throw Error(ErrorKind::MalformedRecord, "section " + tag + " appears twice");
      }
      expect_header = true;
      continue;
    }
    if (current == nullptr) {
      throw Error(ErrorKind::MalformedRecord,
                  "line " + std::to_string(line_no) + " precedes any section");
    }
    auto fields = split_record(raw);
    if (expect_header) {
      current->header = std::move(fields);
      expect_header = false;
      continue;
    }
    if (fields.size() != current->header.size()) {
      throw Error(ErrorKind::MalformedRecord,
                  "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(current->header.size()));
    }
    current->records.push_back(std::move(fields));
    current->line_numbers.push_back(line_no);
  }

  for (const char* required : {"PROJECTS", "VOTES"}) {
    auto it = sections.find(required);
    if (it == sections.end() || it->second.header.empty()) {
      throw Error(ErrorKind::MissingSection, std::string("no ") + required + " section");
    }
  }

  const Section& projects = sections.at("PROJECTS");
  const std::size_t id_col = column(projects, "project_id", "PROJECTS");
  std::vector<Candidate> roster;
  std::unordered_map<std::string, std::size_t> index_of;
  for (const auto& rec : projects.records) {
    std::string id(trim(rec[id_col]));
    if (!index_of.emplace(id, roster.size()).second) {
      throw Error(ErrorKind::DuplicateProjectId, "project id '" + id + "' declared twice");
    }
    roster.push_back({id, roster.size()});
  }

  const Section& votes = sections.at("VOTES");
  const std::size_t vote_col = column(votes, "vote", "VOTES");
  const std::size_t m = roster.size();
  std::vector<ApprovalBallot> ballots;
  ballots.reserve(votes.records.size());
  for (std::size_t r = 0; r < votes.records.size(); ++r) {
    ApprovalBallot b(m);
    const std::string_view list = trim(votes.records[r][vote_col]);
    std::size_t start = 0;
    while (!list.empty() && start <= list.size()) {
      std::size_t comma = list.find(',', start);
      if (comma == std::string_view::npos) comma = list.size();
      const std::string_view id = trim(list.substr(start, comma - start));
      start = comma + 1;
      if (id.empty()) continue;
      auto it = index_of.find(std::string(id));
      if (it == index_of.end()) {
        throw Error(ErrorKind::UnknownProjectId,
                    "line " + std::to_string(votes.line_numbers[r]) + " votes for unknown project '" +
                        std::string(id) + "'");
      }
      b.set(it->second);
    }
    ballots.push_back(std::move(b));
  }
  return Election(std::move(roster), std::move(ballots));
}

nlohmann::json election_to_json(const Election& e) {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& c : e.candidates()) ids.push_back(c.external_id);
  nlohmann::json ballots = nlohmann::json::array();
  for (const auto& b : e.ballots()) ballots.push_back(b.approved());
  return {{"candidates", std::move(ids)}, {"ballots", std::move(ballots)}};
}

Election election_from_json(const nlohmann::json& j) {
  try {
    std::vector<Candidate> roster;
    for (const auto& id : j.at("candidates")) {
      roster.push_back({id.get<std::string>(), roster.size()});
    }
    const std::size_t m = roster.size();
    std::vector<ApprovalBallot> ballots;
    for (const auto& b : j.at("ballots")) {
      const auto idx = b.get<std::vector<std::size_t>>();
      ballots.push_back(ApprovalBallot::from_indices(m, idx));
    }
    return Election(std::move(roster), std::move(ballots));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::MalformedRecord, std::string("bad election JSON: ") + ex.what());
  }
}

Election load_election(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return election_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& ex) {
      throw Error(ErrorKind::MalformedRecord, path.string() + ": " + ex.what());
    }
  }
  return parse_pabulib(text);
}

}  // namespace iamlearn
