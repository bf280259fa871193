#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <shm/errors.hpp>
#include <shm/matrix.hpp>
#include <shm/model.hpp>
#include <shm/training_set.hpp>

namespace shm {

/// Doubles are serialized with 17 significant digits so every value
/// round-trips to the identical bit pattern.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(trim(field));
  return out;
}

inline double parse_number(const std::string& s, std::size_t line, std::size_t column) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError("cannot parse number '" + s + "'", line, column);
  return v;
}

}  // namespace detail

/// Unlabeled feature block of a dataset file: x columns and y columns.
struct FeatureSet {
  Matrix x;  // m×N
  Matrix y;  // Z×N
  std::vector<int> d;  // empty when the file has no label column
  std::size_t size() const { return x.cols(); }
};

/// CSV loader. The header names the columns (x1..xm, y1..yZ, d) in any
/// order; fields are comma-separated with '.' decimals.
inline FeatureSet load_features(std::istream& in, bool require_labels) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1, 1);
  const auto header = detail::split_csv(line);

  std::vector<std::size_t> x_pos, y_pos;
  std::size_t d_pos = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "d") {
      d_pos = c;
    } else if (name.size() > 1 && (name[0] == 'x' || name[0] == 'y')) {
      std::size_t idx = 0;
      for (std::size_t k = 1; k < name.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(name[k])))
          throw ParseError("unknown column '" + name + "'", 1, c + 1);
        idx = idx * 10 + static_cast<std::size_t>(name[k] - '0');
      }
      if (idx == 0) throw ParseError("column indices start at 1", 1, c + 1);
      auto& pos = (name[0] == 'x') ? x_pos : y_pos;
      if (pos.size() < idx) pos.resize(idx, header.size());
      pos[idx - 1] = c;
    } else {
      throw ParseError("unknown column '" + name + "'", 1, c + 1);
    }
  }
  if (x_pos.empty()) throw ParseError("no x columns in header", 1, 1);
  if (y_pos.empty()) throw ParseError("no y columns in header", 1, 1);
  for (std::size_t i = 0; i < x_pos.size(); ++i)
    if (x_pos[i] >= header.size())
      throw ParseError("missing column x" + std::to_string(i + 1), 1, 1);
  for (std::size_t i = 0; i < y_pos.size(); ++i)
    if (y_pos[i] >= header.size())
      throw ParseError("missing column y" + std::to_string(i + 1), 1, 1);
  const bool has_labels = d_pos < header.size();
  if (require_labels && !has_labels)
    throw ParseError("missing column d", 1, 1);

  std::vector<Vector> rows;
  std::vector<std::size_t> row_lines;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != header.size())
      throw RaggedRow("line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    Vector row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c)
      row[c] = detail::parse_number(fields[c], line_no, c + 1);
    rows.push_back(std::move(row));
    row_lines.push_back(line_no);
  }

  const std::size_t n = rows.size();
  const std::size_t m = x_pos.size();
  const std::size_t z = y_pos.size();
  FeatureSet fs;
  fs.x = Matrix(m, n);
  fs.y = Matrix(z, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < m; ++p) fs.x(p, i) = rows[i][x_pos[p]];
    for (std::size_t t = 0; t < z; ++t) fs.y(t, i) = rows[i][y_pos[t]];
  }
  if (has_labels) {
    fs.d.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = rows[i][d_pos];
      if (v != 1.0 && v != -1.0)
        throw BadLabel("label on line " + std::to_string(row_lines[i]) + " is " +
                       format_double(v) + ", expected -1 or 1");
      fs.d[i] = static_cast<int>(v);
    }
  }
  return fs;
}

inline FeatureSet load_features(const std::string& path, bool require_labels = false) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return load_features(in, require_labels);
}

inline TrainingSet load_dataset(std::istream& in) {
  FeatureSet fs = load_features(in, /*require_labels=*/true);
  return TrainingSet(std::move(fs.x), std::move(fs.y), std::move(fs.d));
}

inline TrainingSet load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return load_dataset(in);
}

inline void save_dataset(const TrainingSet& ts, std::ostream& out) {
  for (std::size_t p = 0; p < ts.input_dim(); ++p) out << "x" << p + 1 << ",";
  for (std::size_t t = 0; t < ts.output_dim(); ++t) out << "y" << t + 1 << ",";
  out << "d\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t p = 0; p < ts.input_dim(); ++p)
      out << format_double(ts.x(p, i)) << ",";
    for (std::size_t t = 0; t < ts.output_dim(); ++t)
      out << format_double(ts.y(t, i)) << ",";
    out << ts.d[i] << "\n";
  }
}

// ---- model file ----
//
// Token-based text format, one model per file:
//   shm-model format_version 1
//   mode <linear-explicit|kernel-expansion>
//   kernel <linear | poly D R | rbf G>
//   m <m>  z <z>  b <b>
//   inv_xxt <m·m numbers>
//   w <m·z numbers>  w0 <m numbers>        (linear-explicit only)
//   supports <count>  { sv <index> <d> <alpha> <x…> <y…> }
//   meta <ridge_used> <qp_objective> <qp_mode> <c> <qp_iterations> <qp_residual>
//   end

inline constexpr int kModelFormatVersion = 1;

inline void save_model(const Model& model, std::ostream& out) {
  out << "shm-model format_version " << kModelFormatVersion << "\n";
  out << "mode " << to_string(model.mode) << "\n";
  out << "kernel ";
  switch (model.kernel.kind) {
    case KernelKind::linear:
      out << "linear";
      break;
    case KernelKind::polynomial:
      out << "poly " << model.kernel.degree << " " << format_double(model.kernel.offset);
      break;
    case KernelKind::rbf:
      out << "rbf " << format_double(model.kernel.gamma);
      break;
  }
  out << "\n";
  out << "m " << model.input_dim << "\n";
  out << "z " << model.output_dim << "\n";
  out << "b " << format_double(model.b) << "\n";
  out << "inv_xxt";
  for (double v : model.inv_xxt.data()) out << " " << format_double(v);
  out << "\n";
  if (model.mode == ModelMode::linear_explicit) {
    out << "w";
    for (double v : model.w.data()) out << " " << format_double(v);
    out << "\nw0";
    for (double v : model.w0) out << " " << format_double(v);
    out << "\n";
  }
  out << "supports " << model.supports.size() << "\n";
  for (const SupportVector& sv : model.supports) {
    out << "sv " << sv.index << " " << sv.d << " " << format_double(sv.alpha);
    for (double v : sv.x) out << " " << format_double(v);
    for (double v : sv.y) out << " " << format_double(v);
    out << "\n";
  }
  out << "meta " << format_double(model.meta.ridge_used) << " "
      << format_double(model.meta.qp_objective) << " " << to_string(model.meta.qp_mode)
      << " " << format_double(model.meta.c) << " " << model.meta.qp_iterations << " "
      << format_double(model.meta.qp_residual) << "\n";
  out << "end\n";
}

inline void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  save_model(model, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

namespace detail {

struct TokenReader {
  std::istream& in;

  std::string next(const char* what) {
    std::string tok;
    if (!(in >> tok)) throw CorruptField(std::string("unexpected end of model file, expected ") + what);
    return tok;
  }
  void expect(const std::string& kw) {
    const std::string tok = next(kw.c_str());
    if (tok != kw)
      throw CorruptField("expected '" + kw + "', found '" + tok + "'");
  }
  double number(const char* what) {
    const std::string tok = next(what);
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
      throw CorruptField(std::string("bad numeric field for ") + what + ": '" + tok + "'");
    return v;
  }
  long long integer(const char* what) {
    const double v = number(what);
    const long long i = static_cast<long long>(v);
    if (static_cast<double>(i) != v)
      throw CorruptField(std::string("expected integer for ") + what);
    return i;
  }
};

}  // namespace detail

inline Model load_model(std::istream& in) {
  detail::TokenReader r{in};
  if (r.next("shm-model") != "shm-model")
    throw VersionMismatch("not a shm model file");
  r.expect("format_version");
  const long long version = r.integer("format_version");
  if (version != kModelFormatVersion)
    throw VersionMismatch("unsupported format_version " + std::to_string(version));

  Model model;
  r.expect("mode");
  const std::string mode = r.next("mode value");
  if (mode == "linear-explicit")
    model.mode = ModelMode::linear_explicit;
  else if (mode == "kernel-expansion")
    model.mode = ModelMode::kernel_expansion;
  else
    throw CorruptField("unknown mode '" + mode + "'");

  r.expect("kernel");
  const std::string kind = r.next("kernel kind");
  if (kind == "linear") {
    model.kernel = KernelSpec::linear();
  } else if (kind == "poly") {
    const long long degree = r.integer("poly degree");
    const double offset = r.number("poly offset");
    model.kernel = KernelSpec::polynomial(static_cast<int>(degree), offset);
  } else if (kind == "rbf") {
    model.kernel = KernelSpec::rbf(r.number("rbf gamma"));
  } else {
    throw CorruptField("unknown kernel '" + kind + "'");
  }

  r.expect("m");
  model.input_dim = static_cast<std::size_t>(r.integer("m"));
  r.expect("z");
  model.output_dim = static_cast<std::size_t>(r.integer("z"));
  r.expect("b");
  model.b = r.number("b");

  const std::size_t m = model.input_dim;
  const std::size_t z = model.output_dim;
  r.expect("inv_xxt");
  {
    Vector entries(m * m);
    for (double& v : entries) v = r.number("inv_xxt entry");
    model.inv_xxt = Matrix(m, m, std::move(entries));
  }
  if (model.mode == ModelMode::linear_explicit) {
    r.expect("w");
    Vector entries(m * z);
    for (double& v : entries) v = r.number("w entry");
    model.w = Matrix(m, z, std::move(entries));
    r.expect("w0");
    model.w0.resize(m);
    for (double& v : model.w0) v = r.number("w0 entry");
  }

  r.expect("supports");
  const long long count = r.integer("support count");
  if (count < 0) throw CorruptField("negative support count");
  for (long long s = 0; s < count; ++s) {
    r.expect("sv");
    SupportVector sv;
    sv.index = static_cast<std::size_t>(r.integer("support index"));
    sv.d = static_cast<int>(r.integer("support label"));
    if (sv.d != 1 && sv.d != -1) throw CorruptField("support label must be -1 or 1");
    sv.alpha = r.number("support alpha");
    if (!(sv.alpha > 0.0)) throw CorruptField("support alpha must be positive");
    sv.x.resize(m);
    for (double& v : sv.x) v = r.number("support x entry");
    sv.y.resize(z);
    for (double& v : sv.y) v = r.number("support y entry");
    model.supports.push_back(std::move(sv));
  }

  r.expect("meta");
  model.meta.ridge_used = r.number("ridge_used");
  model.meta.qp_objective = r.number("qp_objective");
  const std::string qp_mode = r.next("qp_mode");
  if (qp_mode == "script")
    model.meta.qp_mode = QpMode::script;
  else if (qp_mode == "kkt")
    model.meta.qp_mode = QpMode::kkt;
  else
    throw CorruptField("unknown qp mode '" + qp_mode + "'");
  model.meta.c = r.number("c");
  model.meta.qp_iterations = static_cast<std::size_t>(r.integer("qp_iterations"));
  model.meta.qp_residual = r.number("qp_residual");
  r.expect("end");
  return model;
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return load_model(in);
}

/// Prediction CSV: header "h,label", one row per example, input order.
inline void write_predictions(const Model& model, const FeatureSet& fs,
                              std::ostream& out) {
  out << "h,label\n";
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double h = decide(model, fs.x.col(i), fs.y.col(i));
    out << format_double(h) << "," << (h >= 0.0 ? 1 : -1) << "\n";
  }
}

}  // namespace shm
