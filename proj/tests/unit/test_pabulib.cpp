#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "iamlearn/error.hpp"
#include "iamlearn/pabulib.hpp"

using namespace iamlearn;

namespace {

const char* kTwoProjects =
    "META\n"
    "key;value\n"
    "num_projects;2\n"
    "PROJECTS\n"
    "project_id;cost;name\n"
    "P1;1000;\"Park; north\"\n"
    "P2;2500;Library\n"
    "VOTES\n"
    "voter_id;vote;age\n"
    "1;P1,P2;30\n"
    "2;P1;41\n"
    "3; P1 ;25\n"
    "4;;19\n";

ErrorKind parse_error(const std::string& text) {
  try {
    parse_pabulib(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("parse a small file") {
  const Election e = parse_pabulib(kTwoProjects);
  CHECK(e.num_candidates() == 2);
  CHECK(e.num_voters() == 4);
  CHECK(e.scores()[0] == 3);
  CHECK(e.scores()[1] == 1);
  CHECK(e.candidates()[0].external_id == "P1");
  CHECK(e.candidates()[1].external_id == "P2");
  CHECK(e.ballots()[3].count() == 0);
}

TEST_CASE("CRLF line endings and lowercase section names") {
  std::string text = kTwoProjects;
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  CHECK(parse_pabulib(crlf) == parse_pabulib(text));
  CHECK(parse_pabulib("projects\nproject_id\nx\nvotes\nvoter_id;vote\n1;x\n").num_voters() == 1);
}

TEST_CASE("empty VOTES section") {
  const Election e = parse_pabulib("PROJECTS\nproject_id;cost\nP1;1\nP2;2\nVOTES\nvoter_id;vote\n");
  CHECK(e.num_voters() == 0);
  CHECK(e.num_candidates() == 2);
  CHECK(e.scores()[0] == 0);
  CHECK(e.scores()[1] == 0);
}

TEST_CASE("duplicate voter ids are distinct voters") {
  const Election e = parse_pabulib("PROJECTS\nproject_id\nP1\nVOTES\nvoter_id;vote\n7;P1\n7;P1\n");
  CHECK(e.num_voters() == 2);
}

TEST_CASE("parse errors") {
  CHECK(parse_error("PROJECTS\nproject_id\nP1\nP2\nVOTES\nvoter_id;vote\n1;P9\n") ==
        ErrorKind::UnknownProjectId);
  CHECK(parse_error("META\nkey;value\nVOTES\nvoter_id;vote\n1;P1\n") == ErrorKind::MissingSection);
  CHECK(parse_error("PROJECTS\nproject_id\nP1\n") == ErrorKind::MissingSection);
  CHECK(parse_error("PROJECTS\nproject_id\nP1\nP1\nVOTES\nvoter_id;vote\n") ==
        ErrorKind::DuplicateProjectId);
  CHECK(parse_error("PROJECTS\nproject_id;cost\nP1\nVOTES\nvoter_id;vote\n") ==
        ErrorKind::MalformedRecord);
  CHECK(parse_error("PROJECTS\nproject_id\nP1\nVOTES\nvoter_id;vote\n1;P1;extra\n") ==
        ErrorKind::MalformedRecord);
}

TEST_CASE("JSON round trip") {
  const Election e = parse_pabulib(kTwoProjects);
  const auto j = election_to_json(e);
  CHECK(election_from_json(j) == e);
  CHECK(election_from_json(nlohmann::json::parse(j.dump())) == e);
}

TEST_CASE("fixture file loads") {
  const Election e = load_election(std::string(IAMLEARN_FIXTURES) + "/e0.pb");
  CHECK(e.ballots() == test::e0().ballots());
  CHECK(e.candidates()[0].external_id == "a");
}
