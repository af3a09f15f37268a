#ifndef TEMPORA_IO_HPP
#define TEMPORA_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "tempora/causal.hpp"
#include "tempora/scalar_field.hpp"

namespace tempora {

/// Field CSV: header "i_t, i_x, t_coord, x_coord, value", one row per node in
/// node order. Byte-stable across runs.
void write_field_csv(std::ostream& os, const SampledSpacetime& st, const ScalarField& f);
std::string field_csv(const SampledSpacetime& st, const ScalarField& f);

/// Reads a field CSV back onto a spacetime with matching grid indices.
ScalarField read_field_csv(std::istream& is, const SampledSpacetime& st);

/// Edge list: "src dst kind" per line, kind in {timelike, causal}; node ids
/// are compact node indices. Timelike edges are reported with their stronger
/// kind only.
void write_edge_list(std::ostream& os, const CausalGraph& graph);

/// Flat ordered report: sections of key/value lines plus pass/fail checks.
/// Rendering is deterministic; values print with %.17g.
class Report {
public:
  void section(const std::string& name);
  void kv(const std::string& key, const std::string& value);
  void kv(const std::string& key, double value);
  void kv(const std::string& key, std::size_t value);
  void kv(const std::string& key, int value);
  void check(const std::string& key, bool passed);

  bool all_passed() const { return failures_ == 0; }
  std::size_t failures() const { return failures_; }

  std::string to_text() const;
  std::string to_json() const;

private:
  struct Entry {
    enum class Kind { Section, Value, Check } kind;
    std::string key;
    std::string value;
    bool passed = false;
  };
  std::vector<Entry> entries_;
  std::size_t failures_ = 0;
};

} // namespace tempora

#endif
