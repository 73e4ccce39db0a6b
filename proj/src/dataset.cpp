#include "sympnet/dataset.hpp"

#include "sympnet/format.hpp"
#include "sympnet/rng.hpp"

#include <fstream>
#include <sstream>

namespace sympnet {

Box::Box(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw std::invalid_argument("box: bounds must be nonempty and of equal length");
  }
  if (!(lower.array() < upper.array()).all()) {
    throw std::invalid_argument("box: lower must be < upper componentwise");
  }
}

bool Box::contains(const Vector& x) const {
  return x.size() == dim() && (x.array() >= lower.array()).all() &&
         (x.array() <= upper.array()).all();
}

void DatasetMeta::set(const std::string& key, const std::string& value) {
  if (key.empty() || key.find_first_of("=\n") != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw std::invalid_argument("dataset meta: invalid key or value '" + key + "'");
  }
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

std::optional<std::string> DatasetMeta::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

Vector Dataset::final_point() const {
  if (size() == 0) throw std::invalid_argument("dataset is empty");
  return targets.col(size() - 1);
}

bool Dataset::operator==(const Dataset& other) const {
  return inputs.rows() == other.inputs.rows() && inputs.cols() == other.inputs.cols() &&
         inputs == other.inputs && targets == other.targets && meta == other.meta;
}

std::string format_vector(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = parse_double(item);
    if (!v) throw std::invalid_argument("cannot parse number '" + item + "' in '" + text + "'");
    values.push_back(*v);
  }
  if (values.empty()) throw std::invalid_argument("empty vector '" + text + "'");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

namespace {

void record_integrator(DatasetMeta& meta, const IntegratorConfig& integ) {
  meta.set("scheme", to_string(integ.scheme));
  meta.set("substeps", std::to_string(integ.substeps));
  meta.set("fp_tol", format_double(integ.fp_tol));
}

}  // namespace

Dataset sample_pairs(const HamiltonianSystem& sys, const Box& box, int n, double h,
                     std::uint64_t seed, const IntegratorConfig& integ, int max_retries) {
  if (n < 1) throw std::invalid_argument("sample_pairs: n must be >= 1");
  if (box.dim() != 2 * sys.dof()) {
    throw std::invalid_argument("sample_pairs: box dimension " + std::to_string(box.dim()) +
                                " does not match 2d = " + std::to_string(2 * sys.dof()));
  }
  integ.validate();
  const Eigen::Index dim = box.dim();
  Dataset data;
  data.inputs.resize(dim, n);
  data.targets.resize(dim, n);

  const SplitMix64 root(seed);
  for (int i = 0; i < n; ++i) {
    SplitMix64 rng = root.split(static_cast<std::uint64_t>(i));
    for (int attempt = 0;; ++attempt) {
      Vector x(dim);
      for (Eigen::Index c = 0; c < dim; ++c) x[c] = rng.uniform(box.lower[c], box.upper[c]);
      try {
        data.targets.col(i) = step(sys, x, h, integ);
        data.inputs.col(i) = x;
        break;
      } catch (const SingularityError&) {
        if (attempt >= max_retries) throw;
      } catch (const ConvergenceError&) {
        if (attempt >= max_retries) throw;
      }
    }
  }

  data.meta.set("system", sys.name());
  data.meta.set("task", "solve");
  data.meta.set("h", format_double(h));
  data.meta.set("n", std::to_string(n));
  data.meta.set("seed", std::to_string(seed));
  data.meta.set("box_lower", format_vector(box.lower));
  data.meta.set("box_upper", format_vector(box.upper));
  record_integrator(data.meta, integ);
  return data;
}

Dataset sample_trajectory(const HamiltonianSystem& sys, const Vector& x0, int n, double h,
                          const IntegratorConfig& integ) {
  if (n < 1) throw std::invalid_argument("sample_trajectory: n must be >= 1");
  check_phase_point(x0, sys.dof());
  integ.validate();
  Dataset data;
  data.inputs.resize(x0.size(), n);
  data.targets.resize(x0.size(), n);
  Vector x = x0;
  for (int i = 0; i < n; ++i) {
    data.inputs.col(i) = x;
    x = step(sys, x, h, integ);
    data.targets.col(i) = x;
  }
  data.meta.set("system", sys.name());
  data.meta.set("task", "predict");
  data.meta.set("h", format_double(h));
  data.meta.set("n", std::to_string(n));
  data.meta.set("start", format_vector(x0));
  data.meta.set("final", format_vector(x));
  record_integrator(data.meta, integ);
  return data;
}

void save_csv(std::ostream& out, const Dataset& data) {
  for (const auto& [k, v] : data.meta.entries()) out << "# " << k << '=' << v << '\n';
  const Eigen::Index dim = data.inputs.rows();
  for (Eigen::Index c = 0; c < dim; ++c) out << (c ? "," : "") << 'x' << c + 1;
  for (Eigen::Index c = 0; c < dim; ++c) out << ",y" << c + 1;
  out << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index c = 0; c < dim; ++c) out << (c ? "," : "") << format_double(data.inputs(c, i));
    for (Eigen::Index c = 0; c < dim; ++c) out << ',' << format_double(data.targets(c, i));
    out << '\n';
  }
}

Dataset load_csv(std::istream& in) {
  Dataset data;
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  Eigen::Index columns = -1;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(line[1] == ' ' ? 2 : 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ParseError("line " + std::to_string(line_no) + ": meta line is not key=value");
      }
      data.meta.set(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();

    if (!header_seen) {
      header_seen = true;
      if (!cells.empty() && !cells[0].empty() && cells[0][0] == 'x') {
        columns = static_cast<Eigen::Index>(cells.size());
        if (columns % 4 != 0) {
          throw ParseError("line " + std::to_string(line_no) + ": header has " +
                           std::to_string(columns) + " columns, expected a multiple of 4");
        }
        continue;
      }
    }
    if (columns < 0) {
      columns = static_cast<Eigen::Index>(cells.size());
      if (columns == 0 || columns % 4 != 0) {
        throw ParseError("line " + std::to_string(line_no) + ": " + std::to_string(columns) +
                         " columns, expected 4d (x and y phase points)");
      }
    }
    if (static_cast<Eigen::Index>(cells.size()) != columns) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns) + " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto v = parse_double(cells[c]);
      if (!v) {
        throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                         ": cannot parse '" + cells[c] + "'");
      }
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyDatasetError("empty dataset: no data rows");

  const Eigen::Index dim = columns / 2;
  const auto n = static_cast<Eigen::Index>(rows.size());
  data.inputs.resize(dim, n);
  data.targets.resize(dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      data.inputs(c, i) = rows[i][c];
      data.targets(c, i) = rows[i][dim + c];
    }
  }
  return data;
}

void save_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_csv(out, data);
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_csv(in);
}

}  // namespace sympnet
