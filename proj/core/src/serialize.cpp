#include "bvarx/serialize.hpp"

#include <json.hpp>

#include "bvarx/errors.hpp"

namespace bvarx {
namespace {

using nlohmann::json;
constexpr const char* kModule = "serialize";

json matrix_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw DataError(DataFault::BadShape, kModule, "matrix data length does not match its dimensions");
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = data[k++].get<double>();
  return m;
}

template <typename Fn>
auto guarded(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw DataError(DataFault::Other, kModule, "malformed " + what + " JSON: " + e.what());
  }
}

}  // namespace

std::string hyper_to_json(const SzHyper& h) {
  json j{{"p", h.p},           {"lambda0", h.lambda0}, {"lambda1", h.lambda1}, {"lambda3", h.lambda3},
         {"lambda4", h.lambda4}, {"lambda5", h.lambda5}, {"mu5", h.mu5},         {"mu6", h.mu6},
         {"prior_family", to_string(h.family)}};
  return j.dump(2) + "\n";
}

SzHyper hyper_from_json(const std::string& text) {
  return guarded("hyperparameter", [&] {
    json j = json::parse(text);
    if (j.contains("hyper")) j = j.at("hyper");
    SzHyper h;
    h.p = j.at("p").get<int>();
    h.lambda0 = j.at("lambda0").get<double>();
    h.lambda1 = j.at("lambda1").get<double>();
    h.lambda3 = j.at("lambda3").get<double>();
    h.lambda4 = j.at("lambda4").get<double>();
    h.lambda5 = j.at("lambda5").get<double>();
    h.mu5 = j.at("mu5").get<double>();
    h.mu6 = j.at("mu6").get<double>();
    if (j.contains("prior_family")) h.family = parse_prior_family(j.at("prior_family").get<std::string>());
    h.validate();
    return h;
  });
}

std::string posterior_to_json(const MniwPosterior& post) {
  json j{{"b_bar", matrix_json(post.b_bar)},
         {"omega_bar", matrix_json(post.omega_bar)},
         {"omega_bar_precision", matrix_json(post.omega_bar_precision)},
         {"psi_bar", matrix_json(post.psi_bar)},
         {"nu_bar", post.nu_bar},
         {"t_eff", post.t_eff}};
  return j.dump(2) + "\n";
}

MniwPosterior posterior_from_json(const std::string& text) {
  return guarded("posterior", [&] {
    const json j = json::parse(text);
    MniwPosterior post;
    post.b_bar = matrix_from(j.at("b_bar"));
    post.omega_bar = matrix_from(j.at("omega_bar"));
    post.omega_bar_precision = matrix_from(j.at("omega_bar_precision"));
    post.psi_bar = matrix_from(j.at("psi_bar"));
    post.nu_bar = j.at("nu_bar").get<double>();
    post.t_eff = j.at("t_eff").get<Eigen::Index>();
    return post;
  });
}

std::string draws_to_json(const std::vector<ParamDraw>& draws) {
  json arr = json::array();
  for (const auto& d : draws) {
    json phi = json::array();
    for (const auto& block : d.phi) phi.push_back(matrix_json(block));
    arr.push_back({{"mu", matrix_json(d.mu)},
                   {"phi", std::move(phi)},
                   {"gamma", matrix_json(d.gamma)},
                   {"sigma", matrix_json(d.sigma)},
                   {"stable", d.stable},
                   {"spectral_radius", d.spectral_radius}});
  }
  return arr.dump() + "\n";
}

std::vector<ParamDraw> draws_from_json(const std::string& text) {
  return guarded("draws", [&] {
    const json arr = json::parse(text);
    std::vector<ParamDraw> out;
    for (const auto& j : arr) {
      ParamDraw d;
      d.mu = matrix_from(j.at("mu"));
      for (const auto& block : j.at("phi")) d.phi.push_back(matrix_from(block));
      d.gamma = matrix_from(j.at("gamma"));
      d.sigma = matrix_from(j.at("sigma"));
      d.stable = j.at("stable").get<bool>();
      d.spectral_radius = j.at("spectral_radius").get<double>();
      out.push_back(std::move(d));
    }
    return out;
  });
}

}  // namespace bvarx
