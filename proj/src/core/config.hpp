#ifndef EBGAS_CONFIG_HPP
#define EBGAS_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace ebgas {

// Flat key-value configuration with provenance tracking.  Every key has a
// built-in default; a config file or an explicit set() overrides it.  The
// provenance (default / file / set) is surfaced in run manifests so that
// literature-default constants are always visible in outputs.
class Config {
 public:
  enum class Source { builtin, file, set };

  Config();

  static Config from_file(const std::string& path);

  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);

  double get(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::string get_str(const std::string& key) const;
  Source source(const std::string& key) const;

  bool has(const std::string& key) const;
  std::vector<std::string> keys() const;

  // "key = value  [default|file|set]" lines, sorted by key.
  std::string provenance_text() const;

 private:
  struct Entry {
    std::string value;
    Source src = Source::builtin;
  };
  std::map<std::string, Entry> entries_;
};

}  // namespace ebgas

#endif
