// Copyright 2026 The ornn Authors.
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

#include "ornn/serialization.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ornn/error.h"

namespace ornn {
namespace {

constexpr char kStackMagic[5] = {'O', 'R', 'N', 'N', '1'};
constexpr char kCheckpointMagic[4] = {'C', 'K', 'P', 'T'};

void PutU64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

void PutU32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> bytes;
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

void PutF64(std::ostream& out, double v) {
  PutU64(out, std::bit_cast<std::uint64_t>(v));
}

void ReadExact(std::istream& in, char* dst, std::size_t count) {
  in.read(dst, static_cast<std::streamsize>(count));
  if (in.gcount() != static_cast<std::streamsize>(count)) {
    throw FormatError("unexpected end of binary data");
  }
}

std::uint64_t GetU64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  ReadExact(in, reinterpret_cast<char*>(bytes.data()), bytes.size());
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

std::uint32_t GetU32(std::istream& in) {
  std::array<unsigned char, 4> bytes;
  ReadExact(in, reinterpret_cast<char*>(bytes.data()), bytes.size());
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return v;
}

double GetF64(std::istream& in) { return std::bit_cast<double>(GetU64(in)); }

void PutColumnMajor(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) PutF64(out, m(i, j));
  }
}

Eigen::MatrixXd GetColumnMajor(std::istream& in, std::uint64_t rows,
                               std::uint64_t cols) {
  constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 32;
  if (rows > kMaxEntries || cols > kMaxEntries ||
      (rows != 0 && cols > kMaxEntries / rows)) {
    throw FormatError("matrix dimensions are implausible");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = GetF64(in);
  }
  return m;
}

void ExpectMagic(std::istream& in, const char* magic, std::size_t len,
                 const char* what) {
  std::array<char, 8> buf{};
  ReadExact(in, buf.data(), len);
  if (!std::equal(buf.begin(), buf.begin() + len, magic)) {
    throw FormatError(std::string("bad magic bytes for ") + what);
  }
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return in;
}

double ParseNumber(const std::string& token) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used == token.size()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError("not a number: '" + token + "'");
}

std::vector<double> ParseLine(const std::string& line) {
  std::istringstream fields(line);
  std::vector<double> values;
  std::string token;
  while (fields >> token) values.push_back(ParseNumber(token));
  return values;
}

// Whitespace tokenizer that skips '#' comment lines.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  bool Next(std::string& token) {
    while (!(line_ >> token)) {
      std::string raw;
      if (!std::getline(in_, raw)) return false;
      const auto first = raw.find_first_not_of(" \t\r");
      if (first != std::string::npos && raw[first] == '#') raw.clear();
      line_.clear();
      line_.str(raw);
    }
    return true;
  }

  double Number() {
    std::string token;
    if (!Next(token)) throw FormatError("unexpected end of text data");
    return ParseNumber(token);
  }

 private:
  std::istream& in_;
  std::istringstream line_;
};

Eigen::MatrixXd ReadRowMajor(TokenReader& reader, Eigen::Index rows,
                             Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = reader.Number();
  }
  return m;
}

void WriteRowMajor(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << FormatDouble(m(i, j));
    }
    out << '\n';
  }
}

void WriteVectorLine(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    out << FormatDouble(v[i]);
  }
  out << '\n';
}

void PutTensor(std::ostream& out, const std::string& name,
               const Eigen::MatrixXd& m) {
  PutU32(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  PutU64(out, static_cast<std::uint64_t>(m.rows()));
  PutU64(out, static_cast<std::uint64_t>(m.cols()));
  PutColumnMajor(out, m);
}

Eigen::MatrixXd AsColumn(const Eigen::ArrayXd& a) { return a.matrix(); }

}  // namespace

void WriteStack(std::ostream& out, const ReflectionStack& stack) {
  out.write(kStackMagic, sizeof(kStackMagic));
  PutU64(out, static_cast<std::uint64_t>(stack.n()));
  PutU64(out, static_cast<std::uint64_t>(stack.m()));
  PutF64(out, stack.u1());
  PutColumnMajor(out, stack.u());
  if (!out) throw FormatError("WriteStack: stream failure");
}

ReflectionStack ReadStack(std::istream& in) {
  ExpectMagic(in, kStackMagic, sizeof(kStackMagic), "stack record");
  const std::uint64_t n = GetU64(in);
  const std::uint64_t m = GetU64(in);
  const double u1 = GetF64(in);
  if (n < 1 || m < 1 || m > n || n > (1u << 20)) {
    throw FormatError("stack record has invalid n=" + std::to_string(n) +
                      ", m=" + std::to_string(m));
  }
  const int cols = ReflectionStack::StoredColumns(static_cast<int>(n),
                                                  static_cast<int>(m));
  Eigen::MatrixXd u = GetColumnMajor(in, n, static_cast<std::uint64_t>(cols));
  return ReflectionStack(static_cast<int>(m), std::move(u), u1);
}

void SaveStack(const std::string& path, const ReflectionStack& stack) {
  std::ofstream out = OpenOut(path);
  WriteStack(out, stack);
}

ReflectionStack LoadStack(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadStack(in);
}

void WriteMatrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out.write(kStackMagic, sizeof(kStackMagic));
  PutU64(out, static_cast<std::uint64_t>(m.rows()));
  PutU64(out, 0);
  PutF64(out, 0.0);
  PutU64(out, static_cast<std::uint64_t>(m.cols()));
  PutColumnMajor(out, m);
  if (!out) throw FormatError("WriteMatrix: stream failure");
}

Eigen::MatrixXd ReadMatrix(std::istream& in) {
  ExpectMagic(in, kStackMagic, sizeof(kStackMagic), "matrix record");
  const std::uint64_t rows = GetU64(in);
  if (GetU64(in) != 0) throw FormatError("record is a stack, not a matrix");
  GetF64(in);
  const std::uint64_t cols = GetU64(in);
  return GetColumnMajor(in, rows, cols);
}

void WriteTextMatrix(std::ostream& out, const Eigen::MatrixXd& m) {
  WriteRowMajor(out, m);
}

Eigen::MatrixXd ReadTextMatrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row = ParseLine(line);
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("ragged text matrix");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void SaveTextMatrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out = OpenOut(path);
  WriteTextMatrix(out, m);
}

Eigen::MatrixXd LoadTextMatrix(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadTextMatrix(in);
}

void WriteTextComplexVector(std::ostream& out, const Eigen::VectorXcd& z) {
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (i > 0) out << ' ';
    out << FormatDouble(z[i].real()) << ' ' << FormatDouble(z[i].imag());
  }
  out << '\n';
}

Eigen::VectorXcd ParseTextComplexVector(const std::string& line) {
  const std::vector<double> values = ParseLine(line);
  if (values.size() % 2 != 0) {
    throw FormatError("complex vector needs an even number of values");
  }
  Eigen::VectorXcd z(values.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z[i] = {values[2 * i], values[2 * i + 1]};
  }
  return z;
}

void WriteReferenceCases(std::ostream& out,
                         const std::vector<ReferenceCase>& cases) {
  for (const ReferenceCase& c : cases) {
    out << "# case\n" << c.u.rows() << ' ' << c.u.cols() << '\n';
    WriteRowMajor(out, c.u);
    WriteVectorLine(out, c.h);
    WriteVectorLine(out, c.grad_c);
    WriteVectorLine(out, c.c);
    WriteVectorLine(out, c.g);
    WriteRowMajor(out, c.du);
  }
}

std::vector<ReferenceCase> ReadReferenceCases(std::istream& in) {
  TokenReader reader(in);
  std::vector<ReferenceCase> cases;
  std::string token;
  while (reader.Next(token)) {
    const double n_value = ParseNumber(token);
    const double m_value = reader.Number();
    const auto n = static_cast<Eigen::Index>(n_value);
    const auto m = static_cast<Eigen::Index>(m_value);
    if (n < 1 || m < 0 || static_cast<double>(n) != n_value ||
        static_cast<double>(m) != m_value || n > 100000 || m > n) {
      throw FormatError("reference case has invalid n, m");
    }
    ReferenceCase c;
    c.u = ReadRowMajor(reader, n, m);
    c.h = ReadRowMajor(reader, n, 1);
    c.grad_c = ReadRowMajor(reader, n, 1);
    c.c = ReadRowMajor(reader, n, 1);
    c.g = ReadRowMajor(reader, n, 1);
    c.du = ReadRowMajor(reader, n, m);
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<ReferenceCase> LoadReferenceCases(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadReferenceCases(in);
}

void WriteCheckpoint(std::ostream& out, const OrnnParams& params,
                     const AdamState& adam) {
  CheckShapes(params);
  WriteStack(out, params.stack());
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  PutU32(out, kCheckpointVersion);
  PutU64(out, static_cast<std::uint64_t>(params.input_dim));
  PutU64(out, static_cast<std::uint64_t>(params.output_dim));
  PutU32(out, static_cast<std::uint32_t>(params.activation));
  PutU64(out, static_cast<std::uint64_t>(adam.step));

  const auto& names = AdamState::TensorNames();
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors = {
      {"V", params.v},
      {"Y", params.y},
      {"hidden_bias", params.hidden_bias},
      {"output_bias", params.output_bias},
      {"modrelu_bias", params.modrelu_bias}};
  for (std::size_t i = 0; i < adam.moments.size() && i < names.size(); ++i) {
    tensors.emplace_back("adam.first." + names[i],
                         AsColumn(adam.moments[i].first));
    tensors.emplace_back("adam.second." + names[i],
                         AsColumn(adam.moments[i].second));
  }
  PutU32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, m] : tensors) PutTensor(out, name, m);
  if (!out) throw FormatError("WriteCheckpoint: stream failure");
}

Checkpoint ReadCheckpoint(std::istream& in) {
  const ReflectionStack stack = ReadStack(in);
  ExpectMagic(in, kCheckpointMagic, sizeof(kCheckpointMagic), "checkpoint");
  const std::uint32_t version = GetU32(in);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " +
                      std::to_string(version));
  }
  Checkpoint ckpt;
  OrnnParams& p = ckpt.params;
  p.n = stack.n();
  p.m = stack.m();
  p.u = stack.u();
  p.u1 = stack.u1();
  p.input_dim = static_cast<int>(GetU64(in));
  p.output_dim = static_cast<int>(GetU64(in));
  const std::uint32_t activation = GetU32(in);
  if (activation > static_cast<std::uint32_t>(Activation::kIdentity)) {
    throw FormatError("checkpoint has an unknown activation code");
  }
  p.activation = static_cast<Activation>(activation);
  ckpt.adam.step = static_cast<std::int64_t>(GetU64(in));

  const auto& names = AdamState::TensorNames();
  ckpt.adam.moments.resize(names.size());
  const std::uint32_t count = GetU32(in);
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::uint32_t len = GetU32(in);
    if (len > 256) throw FormatError("checkpoint tensor name too long");
    std::string name(len, '\0');
    ReadExact(in, name.data(), len);
    const std::uint64_t rows = GetU64(in);
    const std::uint64_t cols = GetU64(in);
    Eigen::MatrixXd m = GetColumnMajor(in, rows, cols);
    if (name == "V") {
      p.v = std::move(m);
    } else if (name == "Y") {
      p.y = std::move(m);
    } else if (name == "hidden_bias") {
      p.hidden_bias = m.reshaped();
    } else if (name == "output_bias") {
      p.output_bias = m.reshaped();
    } else if (name == "modrelu_bias") {
      p.modrelu_bias = m.reshaped();
    } else {
      bool matched = false;
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (name == "adam.first." + names[i]) {
          ckpt.adam.moments[i].first = m.reshaped().array();
          matched = true;
        } else if (name == "adam.second." + names[i]) {
          ckpt.adam.moments[i].second = m.reshaped().array();
          matched = true;
        }
      }
      if (!matched) throw FormatError("unknown checkpoint tensor '" + name + "'");
    }
  }
  CheckShapes(p);
  return ckpt;
}

void SaveCheckpoint(const std::string& path, const OrnnParams& params,
                    const AdamState& adam) {
  std::ofstream out = OpenOut(path);
  WriteCheckpoint(out, params, adam);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadCheckpoint(in);
}

}  // namespace ornn
