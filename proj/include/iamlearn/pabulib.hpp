#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "iamlearn/election.hpp"

namespace iamlearn {

/// Parses a Pabulib .pb file (META / PROJECTS / VOTES sections, ';'
/// separated records). Only project_id and vote are used; costs and all
/// other columns are read and dropped.
Election parse_pabulib(std::string_view text);

/// {"candidates": [ids...], "ballots": [[indices...], ...]}
nlohmann::json election_to_json(const Election& e);
Election election_from_json(const nlohmann::json& j);

/// Loads a .pb file, or a JSON election dump when the content starts with '{'.
Election load_election(const std::filesystem::path& path);

}  // namespace iamlearn
