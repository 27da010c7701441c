// Copyright 2026 The aiik Authors
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

#include "aiik/model_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "aiik/errors.hpp"

namespace aiik {
namespace {

constexpr std::string_view kFormatTag = "aiik-robot/1";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename Vec>
std::string format_array(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(v(i));
  }
  return out + "]";
}

struct Entry {
  std::string value;
  int line = 0;
};

class KeyValueFile {
 public:
  KeyValueFile(std::istream& in, std::string_view source) : source_(source) {
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty()) fail(line_no, "empty key");
      if (entries_.count(key) != 0) fail(line_no, "duplicate key '" + key + "'");
      entries_[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
    }
  }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ModelLoadError(source_ + ":" + std::to_string(line) + ": " + what);
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ModelLoadError(source_ + ": " + what);
  }

  const Entry& get(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail("missing key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string text(const std::string& key) {
    const Entry& e = get(key);
    if (e.value.empty()) fail(e.line, "empty value for '" + key + "'");
    return e.value;
  }

  double number(const std::string& key) {
    const Entry& e = get(key);
    return parse_number(e.value, e.line, key);
  }

  int integer(const std::string& key) {
    const Entry& e = get(key);
    int v = 0;
    const auto* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(e.line, "'" + key + "' must be an integer");
    return v;
  }

  VectorXd array(const std::string& key, Eigen::Index expected) {
    const Entry& e = get(key);
    std::string_view s = e.value;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
      fail(e.line, "'" + key + "' must be a bracketed array");
    }
    s = trim(s.substr(1, s.size() - 2));
    std::vector<double> values;
    while (!s.empty()) {
      const auto comma = s.find(',');
      values.push_back(parse_number(trim(s.substr(0, comma)), e.line, key));
      if (comma == std::string_view::npos) break;
      s = trim(s.substr(comma + 1));
      if (s.empty()) fail(e.line, "trailing comma in '" + key + "'");
    }
    if (expected >= 0 && static_cast<Eigen::Index>(values.size()) != expected) {
      fail(e.line, "'" + key + "' has " + std::to_string(values.size()) + " entries, expected " +
                       std::to_string(expected));
    }
    return Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  }

  std::vector<std::string> prefixed(const std::string& prefix) const {
    std::vector<std::string> keys;
    for (const auto& [key, entry] : entries_) {
      if (key.rfind(prefix, 0) == 0) keys.push_back(key);
    }
    return keys;
  }

  void check_all_used() const {
    for (const auto& [key, entry] : entries_) {
      if (used_.count(key) == 0) fail(entry.line, "unknown key '" + key + "'");
    }
  }

  int line_of(const std::string& key) const { return entries_.at(key).line; }

 private:
  double parse_number(std::string_view s, int line, const std::string& key) const {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(line, "bad number '" + std::string(s) + "' in '" + key + "'");
    }
    return v;
  }

  std::string source_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

MatrixXd read_vectors(KeyValueFile& file, const std::string& prefix, int count, Eigen::Index n) {
  MatrixXd out(n, count);
  for (int k = 0; k < count; ++k) out.col(k) = file.array(prefix + std::to_string(k + 1), n);
  return out;
}

}  // namespace

const SingularBasisd& RobotDefinition::singularity(std::string_view name) const {
  for (const auto& s : singularities) {
    if (s.name == name) return s;
  }
  throw ModelLoadError("model '" + model.name() + "' has no singularity named '" +
                       std::string(name) + "'");
}

RobotDefinition read_model(std::istream& in, std::string_view source) {
  KeyValueFile file(in, source);
  if (const std::string tag = file.text("format"); tag != kFormatTag) {
    file.fail(file.line_of("format"), "unsupported format '" + tag + "'");
  }
  RobotDefinition def;
  const std::string name = file.text("name");
  const int n = file.integer("joints");
  if (n < 1) file.fail(file.line_of("joints"), "joints must be >= 1");

  for (const auto& key : file.prefixed("parameter.")) {
    def.parameters.emplace_back(key.substr(10), file.number(key));
  }

  std::vector<Twistd> screws;
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) {
    const std::string prefix = "joint." + std::to_string(i) + ".";
    names.push_back(file.text(prefix + "name"));
    screws.push_back(file.array(prefix + "screw", 6));
  }
  const VectorXd r = file.array("home.rotation", 9);
  Posed home;
  home.rotation = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(r.data());
  home.translation = file.array("home.translation", 3);

  const VectorXd task = file.array("task", -1);
  std::vector<int> selector;
  for (Eigen::Index k = 0; k < task.size(); ++k) {
    if (task(k) != std::floor(task(k))) file.fail(file.line_of("task"), "task rows must be integers");
    selector.push_back(static_cast<int>(task(k)));
  }

  try {
    def.model = RobotModeld(name, std::move(screws), home, std::move(selector), std::move(names));
  } catch (const InvalidModel& e) {
    file.fail(e.what());
  }

  const int count = file.has("singularities") ? file.integer("singularities") : 0;
  for (int s = 1; s <= count; ++s) {
    const std::string prefix = "singularity." + std::to_string(s) + ".";
    SingularBasisd basis;
    basis.name = file.text(prefix + "name");
    basis.config = file.array(prefix + "q", n);
    basis.basis = read_vectors(file, prefix + "basis.", file.integer(prefix + "basis_size"), n);
    const int components = file.has(prefix + "components") ? file.integer(prefix + "components") : 0;
    for (int c = 1; c <= components; ++c) {
      const std::string cp = prefix + "component." + std::to_string(c) + ".";
      basis.component_spaces.push_back(read_vectors(file, cp + "vector.", file.integer(cp + "size"), n));
    }
    try {
      validate_singular_basis(def.model, basis);
    } catch (const Error& e) {
      file.fail(e.what());
    }
    def.singularities.push_back(std::move(basis));
  }
  file.check_all_used();
  return def;
}

RobotDefinition load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelLoadError("cannot open model file " + path.string());
  return read_model(in, path.string());
}

void write_model(std::ostream& out, const RobotDefinition& def) {
  const RobotModeld& m = def.model;
  out << "# aiik robot model\n"
      << "# Twists are ordered (angular; linear). Screws are given in the base frame at q = 0;\n"
      << "# the Jacobian used by the solver is expressed in the end-effector frame.\n"
      << "format = " << kFormatTag << "\n"
      << "name = " << m.name() << "\n"
      << "joints = " << m.dof() << "\n";
  for (const auto& [key, value] : def.parameters) {
    out << "parameter." << key << " = " << format_number(value) << "\n";
  }
  for (Eigen::Index i = 0; i < m.dof(); ++i) {
    const std::string prefix = "joint." + std::to_string(i + 1) + ".";
    out << prefix << "name = " << m.joint_names()[static_cast<std::size_t>(i)] << "\n"
        << prefix << "screw = " << format_array(m.screw(i)) << "\n";
  }
  const Eigen::Matrix<double, 3, 3, Eigen::RowMajor> r = m.home_pose().rotation;
  out << "home.rotation = " << format_array(Eigen::Map<const VectorXd>(r.data(), 9)) << "\n"
      << "home.translation = " << format_array(m.home_pose().translation) << "\n"
      << "task = [";
  for (std::size_t k = 0; k < m.task_selector().size(); ++k) {
    out << (k > 0 ? ", " : "") << m.task_selector()[k];
  }
  out << "]\n";
  if (def.singularities.empty()) return;
  out << "singularities = " << def.singularities.size() << "\n";
  for (std::size_t s = 0; s < def.singularities.size(); ++s) {
    const SingularBasisd& b = def.singularities[s];
    const std::string prefix = "singularity." + std::to_string(s + 1) + ".";
    out << prefix << "name = " << b.name << "\n"
        << prefix << "q = " << format_array(b.config) << "\n"
        << prefix << "basis_size = " << b.basis.cols() << "\n";
    for (Eigen::Index k = 0; k < b.basis.cols(); ++k) {
      out << prefix << "basis." << k + 1 << " = " << format_array(b.basis.col(k)) << "\n";
    }
    if (b.component_spaces.empty()) continue;
    out << prefix << "components = " << b.component_spaces.size() << "\n";
    for (std::size_t c = 0; c < b.component_spaces.size(); ++c) {
      const MatrixXd& comp = b.component_spaces[c];
      const std::string cp = prefix + "component." + std::to_string(c + 1) + ".";
      out << cp << "size = " << comp.cols() << "\n";
      for (Eigen::Index k = 0; k < comp.cols(); ++k) {
        out << cp << "vector." << k + 1 << " = " << format_array(comp.col(k)) << "\n";
      }
    }
  }
}

std::string to_model_text(const RobotDefinition& def) {
  std::ostringstream out;
  write_model(out, def);
  return out.str();
}

}  // namespace aiik
