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

#ifndef FRAMELSTM_EMBEDDINGS_H_
#define FRAMELSTM_EMBEDDINGS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace framelstm {

class EmbeddingError : public std::runtime_error {
 public:
  EmbeddingError(int line, const std::string &message);
  int line() const { return line_; }

 private:
  int line_;
};

// Token -> dense vector map with a shared unknown vector. Lookup is total.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dim = 0);

  int dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool trainable() const { return trainable_; }
  void set_trainable(bool trainable) { trainable_ = trainable; }

  // Returns false (and keeps the old vector) if the token is already present.
  bool Add(const std::string &token, const Eigen::VectorXd &vector);
  bool Contains(std::string_view token) const;

  // Exact match, then lowercase match, then the unknown vector.
  const Eigen::VectorXd &Lookup(std::string_view token) const;
  // Index of the vector Lookup would return; nullopt for the unknown vector.
  std::optional<std::size_t> Find(std::string_view token) const;

  const Eigen::VectorXd &unk() const { return unk_; }
  void set_unk(const Eigen::VectorXd &unk);

  // Insertion order.
  const std::vector<std::string> &tokens() const { return tokens_; }
  const Eigen::VectorXd &vector(std::size_t i) const { return vectors_[i]; }
  void set_vector(std::size_t i, const Eigen::VectorXd &vector);

 private:
  int dim_;
  bool trainable_ = false;
  std::vector<std::string> tokens_;
  std::vector<Eigen::VectorXd> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
  Eigen::VectorXd unk_;
};

// Reads "<token> <f1> ... <fdim>" lines. A first line of exactly two fields
// whose second field is an integer is taken as a "count dim" header and
// skipped. The unknown vector is uniform in [-0.05, 0.05] from seed 0.
EmbeddingTable LoadEmbeddings(std::istream &in,
                              std::optional<int> expected_dim = std::nullopt);
EmbeddingTable ReadEmbeddingsFile(
    const std::string &path, std::optional<int> expected_dim = std::nullopt);

// Writes the table in the text format LoadEmbeddings reads.
void WriteEmbeddings(std::ostream &out, const EmbeddingTable &table);

// Deterministic stand-in for pre-trained vectors: each token's vector is
// uniform in [-0.5, 0.5] from a seed derived from (seed, token).
EmbeddingTable HashedEmbeddings(std::span<const std::string> tokens, int dim,
                                uint64_t seed);

// Row i is Lookup(tokens[i]).
Eigen::MatrixXd EmbedSentence(const EmbeddingTable &table,
                              std::span<const std::string> tokens);

}  // namespace framelstm

#endif  // FRAMELSTM_EMBEDDINGS_H_
