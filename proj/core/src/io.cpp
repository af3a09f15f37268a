#include "tempora/io.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "tempora/errors.hpp"
#include "tempora/util.hpp"

namespace tempora {

void write_field_csv(std::ostream& os, const SampledSpacetime& st, const ScalarField& f) {
  if (f.size() != st.node_count()) throw InputError("field size does not match spacetime");
  os << "i_t, i_x, t_coord, x_coord, value\n";
  for (std::size_t n = 0; n < st.node_count(); ++n) {
    os << st.node_it(n) << ", " << st.node_ix(n) << ", " << fmt_g17(st.node_t(n)) << ", " << fmt_g17(st.node_x(n))
       << ", " << fmt_g17(f[n]) << "\n";
  }
}

std::string field_csv(const SampledSpacetime& st, const ScalarField& f) {
  std::ostringstream ss;
  write_field_csv(ss, st, f);
  return ss.str();
}

ScalarField read_field_csv(std::istream& is, const SampledSpacetime& st) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("field CSV is empty");
  ScalarField f(st.node_count(), std::numeric_limits<double>::quiet_NaN());
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    int it, ix;
    double t, x, v;
    if (!(ls >> it >> ix >> t >> x >> v)) throw InputError("malformed field CSV line: " + line);
    const std::int32_t n = st.node_at(it, ix);
    if (n < 0) throw InputError("field CSV row refers to an excluded node");
    f[static_cast<std::size_t>(n)] = v;
    ++rows;
  }
  if (rows != st.node_count()) throw InputError("field CSV does not cover every included node");
  return f;
}

void write_edge_list(std::ostream& os, const CausalGraph& graph) {
  for (std::size_t p = 0; p < graph.node_count(); ++p) {
    const auto [e0, e1] = graph.out_range(p);
    for (std::size_t e = e0; e < e1; ++e)
      os << p << " " << graph.edge_to(e) << " " << (graph.edge_timelike(e) ? "timelike" : "causal") << "\n";
  }
}

void Report::section(const std::string& name) { entries_.push_back({Entry::Kind::Section, name, {}, false}); }
void Report::kv(const std::string& key, const std::string& value) {
  entries_.push_back({Entry::Kind::Value, key, value, false});
}
void Report::kv(const std::string& key, double value) { kv(key, fmt_g17(value)); }
void Report::kv(const std::string& key, std::size_t value) { kv(key, std::to_string(value)); }
void Report::kv(const std::string& key, int value) { kv(key, std::to_string(value)); }
void Report::check(const std::string& key, bool passed) {
  entries_.push_back({Entry::Kind::Check, key, passed ? "pass" : "fail", passed});
  if (!passed) ++failures_;
}

std::string Report::to_text() const {
  std::ostringstream ss;
  bool first = true;
  for (const Entry& e : entries_) {
    switch (e.kind) {
      case Entry::Kind::Section:
        if (!first) ss << "\n";
        ss << "[" << e.key << "]\n";
        break;
      case Entry::Kind::Value:
      case Entry::Kind::Check:
        ss << e.key << " = " << e.value << "\n";
        break;
    }
    first = false;
  }
  ss << "\nresult = " << (failures_ == 0 ? "pass" : "fail") << "\n";
  return ss.str();
}

namespace {
std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
} // namespace

std::string Report::to_json() const {
  // Flat ordered object: "section.key": "value". Stable key order.
  std::ostringstream ss;
  ss << "{\n";
  std::string section = "report";
  bool first = true;
  for (const Entry& e : entries_) {
    if (e.kind == Entry::Kind::Section) {
      section = e.key;
      continue;
    }
    if (!first) ss << ",\n";
    ss << "  \"" << json_escape(section) << "." << json_escape(e.key) << "\": \"" << json_escape(e.value) << "\"";
    first = false;
  }
  if (!first) ss << ",\n";
  ss << "  \"result\": \"" << (failures_ == 0 ? "pass" : "fail") << "\"\n}\n";
  return ss.str();
}

} // namespace tempora
