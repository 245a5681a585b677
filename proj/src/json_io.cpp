#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tvsdp/problem.hpp"

namespace tvsdp {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return Matrix(0, 0);
  const auto cols = j.at(0).size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw std::invalid_argument("instance JSON: ragged matrix");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j.at(i).at(k).get<double>();
  }
  return m;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  return v;
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

std::string problem_to_json(const TVProblem& p) {
  json j;
  j["format"] = "tvsdp-instance";
  j["version"] = 1;
  j["n"] = p.dim();
  j["m"] = p.num_constraints();
  j["T"] = p.horizon();
  switch (p.kind()) {
    case ProblemKind::maxcut:
      j["kind"] = "maxcut";
      j["seed"] = p.seed();
      j["density"] = p.density();
      break;
    case ProblemKind::synthetic:
      j["kind"] = "synthetic";
      j["seed"] = p.seed();
      j["r"] = p.known_rank();
      break;
    case ProblemKind::explicit_affine: {
      j["kind"] = "explicit";
      j["C0"] = matrix_to_json(p.objective_base());
      j["C1"] = matrix_to_json(p.objective_rate());
      json a = json::array();
      for (int i = 0; i < p.num_constraints(); ++i) a.push_back(matrix_to_json(p.constraints().mat(i)));
      j["A"] = std::move(a);
      j["b0"] = vector_to_json(p.rhs_base());
      j["b1"] = vector_to_json(p.rhs_rate());
      break;
    }
  }
  return j.dump(2) + "\n";
}

TVProblem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON: parse error: ") + e.what());
  }
  try {
    if (j.value("format", "") != "tvsdp-instance")
      throw std::invalid_argument("instance JSON: missing or unknown format tag");
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const double horizon = j.at("T").get<double>();

    const auto finish = [&](TVProblem p) {
      if (p.dim() != n || p.num_constraints() != m || p.horizon() != horizon)
        throw std::invalid_argument("instance JSON: header dimensions do not match the instance data");
      return p;
    };
    if (kind == "maxcut")
      return finish(make_maxcut(n, j.at("density").get<double>(), j.at("seed").get<std::uint64_t>()));
    if (kind == "synthetic")
      return finish(make_synthetic(n, j.at("r").get<int>(), m, j.at("seed").get<std::uint64_t>()));
    if (kind == "explicit") {
      std::vector<Matrix> a_mats;
      for (const auto& a : j.at("A")) a_mats.push_back(matrix_from_json(a));
      return finish(TVProblem::explicit_affine(
          matrix_from_json(j.at("C0")), matrix_from_json(j.at("C1")), std::move(a_mats),
          vector_from_json(j.at("b0")), vector_from_json(j.at("b1")), horizon));
    }
    throw std::invalid_argument("instance JSON: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON: ") + e.what());
  }
}

void write_problem(const TVProblem& problem, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << problem_to_json(problem);
  if (!out) throw std::runtime_error("write failed: " + path);
}

TVProblem read_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return problem_from_json(buf.str());
}

}  // namespace tvsdp
