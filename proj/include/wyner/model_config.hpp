#pragma once

// JSON model specifications, as consumed by the CLI:
//   {"family": "gaussian", "var_x": 1, "var_y": 1, "cov_xy": 0.5}
//   {"family": "gaussian", "rho": 0.5}                (unit variances)
//   {"family": "agc",  "rho_hat": 0.5, "sigma_a": 1}
//   {"family": "agc4", "rho_hat": 0.5, "sigma_a": 1, "r": 0.9}
//   {"family": "agc",  "rho_hat": 0.5, "atoms": [[a, b, w], ...]}
//   {"family": "laplace", "rho_l": 0.5}

#include <json.hpp>

#include <stdexcept>
#include <string>

#include "wyner/models.hpp"

namespace wyner {

inline BivariateModel model_from_json(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "gaussian") {
        if (j.contains("rho"))
            return GaussianPair{Covariance2{1.0, 1.0, j.at("rho").get<double>()}};
        return GaussianPair{Covariance2{j.at("var_x").get<double>(),
                                        j.at("var_y").get<double>(),
                                        j.at("cov_xy").get<double>()}};
    }
    if (family == "agc") {
        const double rho_hat = j.at("rho_hat").get<double>();
        if (j.contains("atoms")) {
            std::vector<DiscreteAtom> atoms;
            for (const auto& a : j.at("atoms"))
                atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>(),
                                 a.at(2).get<double>()});
            return AdditiveGaussianChannelModel{Correlation(rho_hat),
                                                DiscretePair(std::move(atoms))};
        }
        return make_example1(rho_hat, j.at("sigma_a").get<double>());
    }
    if (family == "agc4")
        return make_example2(j.at("rho_hat").get<double>(),
                             j.at("sigma_a").get<double>(), j.at("r").get<double>());
    if (family == "laplace")
        return BivariateLaplace{j.at("rho_l").get<double>()};
    throw std::invalid_argument("model_from_json: unknown family '" + family + "'");
}

inline BivariateModel model_from_json_string(const std::string& text) {
    return model_from_json(nlohmann::json::parse(text));
}

}  // namespace wyner
