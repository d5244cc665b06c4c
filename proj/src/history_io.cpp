#include "kinsim/history_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>

#include "kinsim/errors.hpp"

namespace kinsim {

namespace {

constexpr std::string_view kSentinel = "#end,";

void write_row(std::ostream& out, const Agent& a) {
  out << a.id << ',' << a.generation << ',' << static_cast<int>(a.gender) << ',' << a.mother << ','
      << a.father << '\n';
}

bool parse_int(std::string_view field, std::int64_t& value) {
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc{} && end == field.data() + field.size();
}

}  // namespace

void write_agents_csv(std::ostream& out, std::span<const Agent> agents) {
  out << kAgentCsvHeader << '\n';
  for (const Agent& a : agents) write_row(out, a);
  out << kSentinel << agents.size() << '\n';
}

void write_cohort_csv(std::ostream& out, const Cohort& cohort, Pedigree pedigree) {
  out << kAgentCsvHeader << '\n';
  for (AgentId id : cohort.members) write_row(out, pedigree[static_cast<std::size_t>(id)]);
  out << kSentinel << cohort.members.size() << '\n';
}

std::vector<Agent> read_agents_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string name = path.string();

  std::string line;
  if (!std::getline(in, line) || line != kAgentCsvHeader) {
    throw SchemaMismatch(name, "expected header '" + std::string(kAgentCsvHeader) + "'");
  }
  std::vector<Agent> agents;
  std::size_t line_no = 1;
  bool terminated = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.starts_with(kSentinel)) {
      std::int64_t count = -1;
      if (!parse_int(std::string_view(line).substr(kSentinel.size()), count) ||
          count != static_cast<std::int64_t>(agents.size())) {
        throw SchemaMismatch(name, "sentinel row count does not match " +
                                       std::to_string(agents.size()) + " records");
      }
      terminated = true;
      break;
    }
    std::int64_t fields[5];
    std::string_view rest(line);
    for (int f = 0; f < 5; ++f) {
      const auto comma = rest.find(',');
      const bool last = f == 4;
      if (last != (comma == std::string_view::npos) || !parse_int(rest.substr(0, comma), fields[f])) {
        throw SchemaMismatch(name, "malformed row at line " + std::to_string(line_no));
      }
      if (!last) rest.remove_prefix(comma + 1);
    }
    if (fields[2] != 0 && fields[2] != 1) {
      throw SchemaMismatch(name, "gender must be 0 or 1 at line " + std::to_string(line_no));
    }
    Agent a;
    a.id = fields[0];
    a.generation = static_cast<int>(fields[1]);
    a.gender = fields[2] == 0 ? Gender::Female : Gender::Male;
    a.mother = fields[3];
    a.father = fields[4];
    agents.push_back(a);
  }
  if (!terminated) throw SchemaMismatch(name, "missing end sentinel (truncated file?)");
  if (std::getline(in, line) && !line.empty()) {
    throw SchemaMismatch(name, "data after end sentinel");
  }
  return agents;
}

std::vector<Agent> read_pedigree_csv(const std::filesystem::path& path) {
  std::vector<Agent> agents = read_agents_csv(path);
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const Agent& a = agents[k];
    if (a.id != static_cast<AgentId>(k)) {
      throw SchemaMismatch(path.string(), "agent ids must be dense and ordered (row " +
                                              std::to_string(k + 2) + ")");
    }
    const bool founder = a.mother == kFounder && a.father == kFounder;
    const bool valid_parents = a.mother >= 0 && a.father >= 0 && a.mother < a.id && a.father < a.id;
    if (!founder && !valid_parents) {
      throw SchemaMismatch(path.string(), "invalid parent reference for agent " +
                                              std::to_string(a.id));
    }
  }
  return agents;
}

}  // namespace kinsim
