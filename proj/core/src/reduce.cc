// Copyright 2026 The Phonetraits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phonetraits/reduce.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "phonetraits/linalg.h"

namespace phonetraits {

std::string_view MethodName(ReductionMethod method) {
  switch (method) {
    case ReductionMethod::kBig5: return "big5";
    case ReductionMethod::kPca: return "pca";
    case ReductionMethod::kIca: return "ica";
    case ReductionMethod::kFa: return "fa";
    case ReductionMethod::kSdr: return "sdr";
  }
  return "unknown";
}

std::optional<ReductionMethod> ParseMethod(std::string_view name) {
  for (auto m : {ReductionMethod::kBig5, ReductionMethod::kPca, ReductionMethod::kIca,
                 ReductionMethod::kFa, ReductionMethod::kSdr})
    if (MethodName(m) == name) return m;
  return std::nullopt;
}

Eigen::MatrixXd Project(const Eigen::MatrixXd& answers, const Eigen::MatrixXd& rows) {
  if (answers.cols() != rows.cols())
    throw InvalidArgument("answers have " + std::to_string(answers.cols()) +
                          " columns, basis expects " + std::to_string(rows.cols()));
  return answers * rows.transpose();
}

Eigen::MatrixXd Project(const Eigen::MatrixXd& answers, const ProjectionBasis& basis) {
  if (answers.cols() != basis.rows.cols())
    throw InvalidArgument("answers have " + std::to_string(answers.cols()) +
                          " columns, basis expects " + std::to_string(basis.rows.cols()));
  Standardizer s{basis.center, basis.scale};
  return Project(s.Apply(answers), basis.rows);
}

ProjectionBasis Big5Basis(const ScoringKey& key) {
  ProjectionBasis basis;
  basis.method = ReductionMethod::kBig5;
  basis.rows.resize(kNumTraits, kNumQuestions);
  for (int t = 0; t < kNumTraits; ++t) {
    for (int q = 0; q < kNumQuestions; ++q)
      basis.rows(t, q) = key.reverse_coded[q] ? -key.weights(t, q) : key.weights(t, q);
    basis.rows.row(t).normalize();
    basis.component_names.push_back(key.trait_names[t]);
  }
  basis.center = Eigen::VectorXd::Zero(kNumQuestions);
  basis.scale = Eigen::VectorXd::Ones(kNumQuestions);
  basis.diagnostics.resize(kNumTraits);
  return basis;
}

PcaResult PcaFit(const Eigen::MatrixXd& answers, int k, bool standardize) {
  if (answers.rows() < 2) throw InvalidArgument("PCA needs at least two rows");
  PcaResult result;
  ProjectionBasis& basis = result.basis;
  basis.method = ReductionMethod::kPca;
  Standardizer s = Standardizer::Fit(answers);
  if (!standardize) s.scale.setOnes();
  basis.center = s.center;
  basis.scale = s.scale;
  const Eigen::MatrixXd z = s.Apply(answers);
  const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(z.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::Index d = cov.rows();
  result.explained_variance = eig.eigenvalues().reverse();
  result.total_variance = cov.trace();
  const double top = std::max(result.explained_variance(0), 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    if (result.explained_variance(i) > 1e-10 * std::max(top, 1e-300)) ++rank;
  int kept = std::min<int>(k, rank);
  if (kept < k) {
    basis.warnings.push_back("data rank " + std::to_string(rank) + " < " +
                             std::to_string(k) + "; returning fewer components");
  }
  basis.rows.resize(kept, d);
  for (int c = 0; c < kept; ++c) {
    basis.rows.row(c) = eig.eigenvectors().col(d - 1 - c).transpose();
    basis.component_names.push_back("pc" + std::to_string(c + 1));
    basis.diagnostics.push_back(
        {{"explained_variance", result.explained_variance(c)},
         {"explained_ratio", result.explained_variance(c) / result.total_variance}});
  }
  ApplySignConvention(basis.rows);
  return result;
}

void WriteBasis(const ProjectionBasis& basis, std::ostream& out) {
  out << std::setprecision(17);
  out << "# method=" << MethodName(basis.method) << '\n';
  out << "# k=" << basis.components() << '\n';
  for (const auto& w : basis.warnings) out << "# warning=" << w << '\n';
  for (int c = 0; c < basis.components(); ++c) {
    if (c >= static_cast<int>(basis.diagnostics.size())) break;
    out << "# diagnostics " << basis.component_names[c];
    for (const auto& [key, value] : basis.diagnostics[c]) out << ' ' << key << '=' << value;
    out << '\n';
  }
  out << "row,name";
  for (Eigen::Index q = 0; q < basis.rows.cols(); ++q) out << ",q" << q + 1;
  out << '\n';
  auto write_vector = [&](const char* kind, const Eigen::VectorXd& v) {
    out << kind << ',';
    for (Eigen::Index q = 0; q < v.size(); ++q) out << ',' << v(q);
    out << '\n';
  };
  write_vector("center", basis.center);
  write_vector("scale", basis.scale);
  for (int c = 0; c < basis.components(); ++c) {
    out << "component," << basis.component_names[c];
    for (Eigen::Index q = 0; q < basis.rows.cols(); ++q) out << ',' << basis.rows(c, q);
    out << '\n';
  }
}

void WriteBasis(const ProjectionBasis& basis, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  WriteBasis(basis, out);
}

ProjectionBasis ReadBasis(std::istream& in) {
  ProjectionBasis basis;
  std::string line;
  std::vector<std::vector<double>> rows;
  bool has_method = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# method=", 0) == 0) {
      auto m = ParseMethod(line.substr(9));
      if (!m) throw IoError("unknown basis method: " + line.substr(9));
      basis.method = *m;
      has_method = true;
      continue;
    }
    if (line.rfind("# diagnostics ", 0) == 0) {
      std::stringstream ss(line.substr(14));
      std::string name, kv;
      ss >> name;
      std::map<std::string, double> diag;
      while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq != std::string::npos) diag[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      }
      basis.diagnostics.push_back(std::move(diag));
      continue;
    }
    if (line.rfind("# warning=", 0) == 0) {
      basis.warnings.push_back(line.substr(10));
      continue;
    }
    if (line[0] == '#' || line.rfind("row,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string kind, name, field;
    std::getline(ss, kind, ',');
    std::getline(ss, name, ',');
    std::vector<double> values;
    while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
    if (kind == "center") {
      basis.center = v;
    } else if (kind == "scale") {
      basis.scale = v;
    } else if (kind == "component") {
      basis.component_names.push_back(name);
      rows.push_back(std::move(values));
    } else {
      throw IoError("unknown basis row kind: " + kind);
    }
  }
  if (!has_method) throw IoError("basis file lacks a method line");
  if (rows.empty()) throw IoError("basis file has no components");
  basis.rows.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (rows[c].size() != rows.front().size()) throw IoError("ragged basis rows");
    for (std::size_t q = 0; q < rows[c].size(); ++q) basis.rows(c, q) = rows[c][q];
  }
  if (basis.center.size() != basis.rows.cols() || basis.scale.size() != basis.rows.cols())
    throw IoError("basis center/scale rows missing or mis-sized");
  basis.diagnostics.resize(rows.size());
  return basis;
}

ProjectionBasis ReadBasis(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open basis file " + path.string());
  return ReadBasis(in);
}

}  // namespace phonetraits
