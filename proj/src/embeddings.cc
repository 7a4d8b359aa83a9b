// Copyright 2026 The framelstm Authors.
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

#include "framelstm/embeddings.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "framelstm/random.h"

namespace framelstm {

EmbeddingError::EmbeddingError(int line, const std::string &message)
    : std::runtime_error(line > 0 ? "embeddings line " + std::to_string(line) +
                                        ": " + message
                                  : message),
      line_(line) {}

namespace {

Eigen::VectorXd DefaultUnk(int dim) {
  Rng rng(0);
  Eigen::VectorXd unk(dim);
  for (int i = 0; i < dim; ++i) unk[i] = UniformReal(rng, -0.05, 0.05);
  return unk;
}

std::vector<std::string_view> Fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r')) {
      ++pos;
    }
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' &&
           line[pos] != '\r') {
      ++pos;
    }
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

bool ParseInt(std::string_view s, long long *out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseDouble(std::string_view s, double *out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

EmbeddingTable::EmbeddingTable(int dim) : dim_(dim), unk_(DefaultUnk(dim)) {}

bool EmbeddingTable::Add(const std::string &token,
                         const Eigen::VectorXd &vector) {
  if (vector.size() != dim_) {
    throw std::invalid_argument("embedding for '" + token + "' has length " +
                                std::to_string(vector.size()) + ", expected " +
                                std::to_string(dim_));
  }
  if (index_.count(token)) return false;
  index_.emplace(token, tokens_.size());
  tokens_.push_back(token);
  vectors_.push_back(vector);
  return true;
}

bool EmbeddingTable::Contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

std::optional<std::size_t> EmbeddingTable::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  it = index_.find(Lower(token));
  if (it != index_.end()) return it->second;
  return std::nullopt;
}

const Eigen::VectorXd &EmbeddingTable::Lookup(std::string_view token) const {
  auto i = Find(token);
  return i ? vectors_[*i] : unk_;
}

void EmbeddingTable::set_vector(std::size_t i, const Eigen::VectorXd &vector) {
  if (vector.size() != dim_) {
    throw std::invalid_argument("embedding vector has wrong length");
  }
  vectors_.at(i) = vector;
}

void EmbeddingTable::set_unk(const Eigen::VectorXd &unk) {
  if (unk.size() != dim_) {
    throw std::invalid_argument("unknown vector has wrong length");
  }
  unk_ = unk;
}

EmbeddingTable LoadEmbeddings(std::istream &in,
                              std::optional<int> expected_dim) {
  std::optional<EmbeddingTable> table;
  if (expected_dim) table.emplace(*expected_dim);
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = Fields(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      long long unused;
      if (fields.size() == 2 && ParseInt(fields[1], &unused)) continue;
    }
    const int dim = static_cast<int>(fields.size()) - 1;
    if (!table) {
      if (dim < 1) throw EmbeddingError(line_no, "no vector components");
      table.emplace(dim);
    }
    if (dim != table->dim()) {
      throw EmbeddingError(line_no, "expected " + std::to_string(table->dim()) +
                                        " components, found " +
                                        std::to_string(dim));
    }
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
      if (!ParseDouble(fields[i + 1], &v[i])) {
        throw EmbeddingError(line_no, "non-numeric component '" +
                                          std::string(fields[i + 1]) + "'");
      }
    }
    table->Add(std::string(fields[0]), v);
  }
  if (!table) table.emplace(expected_dim.value_or(0));
  return std::move(*table);
}

EmbeddingTable ReadEmbeddingsFile(const std::string &path,
                                  std::optional<int> expected_dim) {
  std::ifstream in(path);
  if (!in) throw EmbeddingError(0, "cannot open embeddings file " + path);
  return LoadEmbeddings(in, expected_dim);
}

void WriteEmbeddings(std::ostream &out, const EmbeddingTable &table) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.tokens()[i];
    const auto &v = table.vector(i);
    for (int j = 0; j < v.size(); ++j) out << ' ' << v[j];
    out << '\n';
  }
}

EmbeddingTable HashedEmbeddings(std::span<const std::string> tokens, int dim,
                                uint64_t seed) {
  EmbeddingTable table(dim);
  for (const auto &token : tokens) {
    if (table.Contains(token)) continue;
    Rng rng(MixSeed(seed, token));
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = UniformReal(rng, -0.5, 0.5);
    table.Add(token, v);
  }
  return table;
}

Eigen::MatrixXd EmbedSentence(const EmbeddingTable &table,
                              std::span<const std::string> tokens) {
  Eigen::MatrixXd out(tokens.size(), table.dim());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.row(i) = table.Lookup(tokens[i]).transpose();
  }
  return out;
}

}  // namespace framelstm
