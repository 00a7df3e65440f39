#include "mcqual/catalog.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcqual/errors.hpp"

namespace mcqual {

namespace {

Eigen::VectorXd to_vector(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Eigen::VectorXd parse_array8(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 8) {
    throw FormatError("config: \"" + key + "\" must be an array of 8 numbers");
  }
  Eigen::VectorXd v(8);
  for (int i = 0; i < 8; ++i) {
    if (!j[i].is_number()) {
      throw FormatError("config: \"" + key +
                        "\" must be an array of 8 numbers");
    }
    v[i] = j[i].get<double>();
  }
  return v;
}

}  // namespace

CatalogConfig CatalogConfig::defaults() {
  CatalogConfig cfg;
  cfg.eight_schools_y = to_vector({28, 8, -3, 7, -1, 1, 18, 12});
  cfg.eight_schools_sigma = to_vector({15, 10, 16, 11, 9, 11, 10, 18});
  cfg.mixture_offset = 5.0;
  return cfg;
}

CatalogConfig CatalogConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config file " + path + " is not valid JSON: " +
                      e.what());
  }
  if (!j.is_object()) {
    throw FormatError("config file " + path + " must hold a JSON object");
  }
  CatalogConfig cfg = defaults();
  for (const auto& [key, value] : j.items()) {
    if (key == "eight_schools_y") {
      cfg.eight_schools_y = parse_array8(value, key);
    } else if (key == "eight_schools_sigma") {
      cfg.eight_schools_sigma = parse_array8(value, key);
    } else if (key == "mixture_offset") {
      if (!value.is_number()) {
        throw FormatError("config: \"mixture_offset\" must be a number");
      }
      cfg.mixture_offset = value.get<double>();
    } else {
      throw FormatError("config: unknown key \"" + key + "\"");
    }
  }
  return cfg;
}

std::vector<TargetPtr> catalog(const CatalogConfig& cfg) {
  std::vector<TargetPtr> out;
  out.reserve(15);

  const Interval normal_box{-10.0, 10.0};
  const Interval mixture_box{-100.0, 100.0};

  out.push_back(make_normal_1d("Normal-1D", 0.0, 1.0, normal_box));

  for (int k : {2, 3, 10, 100}) {
    out.push_back(make_gaussian("Normal-" + std::to_string(k) +
                                    "D-Uncorrelated",
                                Eigen::VectorXd::Zero(k), 0.0, normal_box));
  }
  for (int k : {2, 10, 100}) {
    out.push_back(make_gaussian("Normal-" + std::to_string(k) +
                                    "D-WeaklyCorrelated",
                                Eigen::VectorXd::Zero(k), 0.2, normal_box));
  }
  for (int k : {2, 10, 100}) {
    out.push_back(make_gaussian("Normal-" + std::to_string(k) +
                                    "D-StronglyCorrelated",
                                Eigen::VectorXd::Zero(k), 0.9, normal_box));
  }

  for (int k : {3, 10}) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
    std::vector<Eigen::VectorXd> means = {cfg.mixture_offset * ones,
                                          -cfg.mixture_offset * ones};
    out.push_back(make_mixture("Mixture-" + std::to_string(k) +
                                   "D-StronglyCorrelated",
                               {0.25, 0.75}, std::move(means), 0.9,
                               mixture_box));
  }

  out.push_back(make_cauchy_1d("Cauchy-1D", 0.0, 1.0, {-20.0, 20.0}));
  out.push_back(make_eight_schools("Eight-Schools", cfg.eight_schools_y,
                                   cfg.eight_schools_sigma));
  return out;
}

TargetPtr find_target(const std::string& name, const CatalogConfig& cfg) {
  const std::vector<TargetPtr> all = catalog(cfg);
  for (const TargetPtr& t : all) {
    if (t->name() == name) return t;
  }
  std::ostringstream msg;
  msg << "unknown target \"" << name << "\"; available:";
  for (const TargetPtr& t : all) msg << " " << t->name();
  throw NotFoundError(msg.str());
}

}  // namespace mcqual
