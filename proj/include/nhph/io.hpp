#ifndef NHPH_IO_HPP
#define NHPH_IO_HPP

// Serialization: JSON documents for states, projectors, spectra,
// entanglement data and iTEBD checkpoints, plus locale-free CSV
// formatting at full double precision.  Every emitted file carries a
// metadata block (toolkit version, config echo, tolerances) and no
// timestamps, so identical runs produce identical bytes.

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nhph/exact_diag.hpp"
#include "nhph/itebd.hpp"
#include "nhph/linalg.hpp"
#include "nhph/mps.hpp"
#include "nhph/parent_ham.hpp"
#include "nhph/version.hpp"

namespace nhph {

using Json = nlohmann::json;

// 17 significant digits, "." decimal point, no locale.
inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// "re+imj" / "re-imj" complex rendering used by the lambda-expansion CSV.
inline std::string format_complex_j(const Complex& z) {
  std::string out = format_real(z.real());
  out += z.imag() < 0.0 ? "-" : "+";
  out += format_real(std::abs(z.imag()));
  out += "j";
  return out;
}

inline Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const Json& j) {
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

inline Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const Json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) throw LinalgError("matrix_from_json: empty matrix");
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j.at(static_cast<size_t>(r))
                                      .at(static_cast<size_t>(c)));
  return m;
}

inline Json metadata_json(const Json& config, const Json& tolerances) {
  return Json{{"version", kVersion},
              {"config", config},
              {"tolerances", tolerances}};
}

inline Json mps_to_json(const UniformMPS& state,
                        const std::vector<std::string>& labels = {}) {
  Json tensor = Json::array();
  for (const CMatrix& t : state.tensor) tensor.push_back(matrix_to_json(t));
  Json j{{"d", state.d}, {"D", state.D}, {"tensor", std::move(tensor)}};
  j["labels"] = labels;
  return j;
}

inline UniformMPS mps_from_json(const Json& j) {
  UniformMPS s;
  s.d = j.at("d").get<int>();
  s.D = j.at("D").get<int>();
  for (const Json& t : j.at("tensor")) s.tensor.push_back(matrix_from_json(t));
  if (static_cast<int>(s.tensor.size()) != s.d)
    throw LinalgError("mps_from_json: tensor count disagrees with d");
  return s;
}

inline Json projector_to_json(const LocalProjector& p) {
  Json j{{"k", p.k},
         {"d", detail::physical_dim(p)},
         {"matrix", matrix_to_json(p.matrix)}};
  if (p.mu)
    j["mu"] = *p.mu;
  else
    j["mu"] = nullptr;
  return j;
}

inline LocalProjector projector_from_json(const Json& j) {
  LocalProjector p;
  p.k = j.at("k").get<int>();
  p.matrix = matrix_from_json(j.at("matrix"));
  if (!j.at("mu").is_null()) p.mu = j.at("mu").get<double>();
  return p;
}

inline Json spectrum_to_json(const SpectrumReport& rep,
                             std::optional<double> mu, int n, int k,
                             Boundary::Kind boundary) {
  Json evs = Json::array();
  for (const Complex& e : rep.eigenvalues) evs.push_back(complex_to_json(e));
  Json j{{"n", n},
         {"k", k},
         {"boundary",
          boundary == Boundary::Kind::Periodic ? "periodic" : "open"},
         {"eigenvalues", std::move(evs)},
         {"ground",
          Json{{"energy", complex_to_json(rep.ground_energy)},
               {"degeneracy", rep.degeneracy}}},
         {"gap", rep.gap}};
  if (mu)
    j["mu"] = *mu;
  else
    j["mu"] = nullptr;
  return j;
}

inline Json entanglement_to_json(double mu, const RVector& weights) {
  Json w = Json::array();
  for (Eigen::Index i = 0; i < weights.size(); ++i) w.push_back(weights[i]);
  return Json{{"mu", mu},
              {"weights", std::move(w)},
              {"convention", "squared-schmidt"}};
}

inline Json checkpoint_to_json(const UnitCellState& st,
                               const ConvergenceTrace& trace,
                               size_t history_tail = 200) {
  Json sites = Json::array();
  for (const auto& site : st.site_tensors) {
    Json phys = Json::array();
    for (const CMatrix& t : site) phys.push_back(matrix_to_json(t));
    sites.push_back(std::move(phys));
  }
  Json weights = Json::array();
  for (const RVector& w : st.schmidt_weights) {
    Json v = Json::array();
    for (Eigen::Index i = 0; i < w.size(); ++i) v.push_back(w[i]);
    weights.push_back(std::move(v));
  }
  Json tail = Json::array();
  const size_t start = trace.e_history.size() > history_tail
                           ? trace.e_history.size() - history_tail
                           : 0;
  for (size_t i = start; i < trace.e_history.size(); ++i)
    tail.push_back(trace.e_history[i]);
  return Json{{"k", st.k},
              {"D_max", st.D_max},
              {"dtau", trace.dtau},
              {"step", trace.steps},
              {"seed", trace.seed},
              {"converged", trace.converged},
              {"site_tensors", std::move(sites)},
              {"schmidt_weights", std::move(weights)},
              {"e_history", std::move(tail)}};
}

inline std::pair<UnitCellState, ConvergenceTrace> checkpoint_from_json(
    const Json& j) {
  UnitCellState st;
  st.k = j.at("k").get<int>();
  st.D_max = j.at("D_max").get<int>();
  for (const Json& site : j.at("site_tensors")) {
    std::vector<CMatrix> phys;
    for (const Json& t : site) phys.push_back(matrix_from_json(t));
    st.site_tensors.push_back(std::move(phys));
  }
  for (const Json& w : j.at("schmidt_weights")) {
    RVector v(static_cast<Eigen::Index>(w.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = w.at(static_cast<size_t>(i)).get<double>();
    st.schmidt_weights.push_back(std::move(v));
  }
  ConvergenceTrace trace;
  trace.dtau = j.at("dtau").get<double>();
  trace.steps = j.at("step").get<long>();
  trace.seed = j.at("seed").get<unsigned long long>();
  trace.converged = j.at("converged").get<bool>();
  for (const Json& e : j.at("e_history"))
    trace.e_history.push_back(e.get<double>());
  return {std::move(st), std::move(trace)};
}

inline std::string csv_metadata_header(const Json& config,
                                       const Json& tolerances) {
  std::string out;
  out += "# version: " + std::string(kVersion) + "\n";
  out += "# config: " + config.dump() + "\n";
  out += "# tolerances: " + tolerances.dump() + "\n";
  return out;
}

// 9x9 "re+imj" table with the metadata block in leading comment lines.
inline std::string lambda_expansion_csv(const CMatrix& coeff,
                                        const Json& config,
                                        const Json& tolerances) {
  std::string out = csv_metadata_header(config, tolerances);
  for (Eigen::Index r = 0; r < coeff.rows(); ++r) {
    for (Eigen::Index c = 0; c < coeff.cols(); ++c) {
      if (c > 0) out += ",";
      out += format_complex_j(coeff(r, c));
    }
    out += "\n";
  }
  return out;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw LinalgError("write_text_file: cannot open " + path);
  f << content;
  if (!f) throw LinalgError("write_text_file: write failed for " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw LinalgError("read_text_file: cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());
  return content;
}

}  // namespace nhph

#endif  // NHPH_IO_HPP
